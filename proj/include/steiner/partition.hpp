#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "steiner/errors.hpp"

namespace steiner {

/// Subset of the terminal set, encoded over terminal indices 0..r-1.
using TermSet = std::uint32_t;

inline int set_size(TermSet s) { return __builtin_popcount(s); }
inline TermSet full_set(int r) { return r >= 32 ? ~TermSet(0) : (TermSet(1) << r) - 1; }

/// Partition of the terminal set in canonical block form: each block is a
/// bitmask, blocks are ordered by their smallest element, so structurally
/// equal values encode equal set-partitions.  Valid as an ordered map key.
struct Partition {
    std::vector<TermSet> blocks;

    int rank() const { return (int)blocks.size(); }

    bool operator==(const Partition& o) const { return blocks == o.blocks; }
    bool operator<(const Partition& o) const { return blocks < o.blocks; }
};

/// Singletons partition (maximal rank).
Partition finest(int r);
/// Single-block partition {R} (rank 1).
Partition coarsest(int r);

/// Canonicalizes a block list; throws UsageError if the blocks do not
/// partition {0..r-1}.
Partition make_partition(int r, std::vector<TermSet> blocks);

/// Builds a partition from an element->block-id coloring.
Partition partition_from_assignment(const std::vector<int>& color);

int rank(const Partition& p);

/// True iff each block of `fine` is contained in some block of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

bool crosses(const Partition& a, const Partition& b);

/// Coarsest common refinement: nonempty pairwise block intersections.
Partition meet(const Partition& a, const Partition& b);

/// Finest common coarsening: connected components of the union of any two
/// graphs inducing the operands (computed by union-find on co-membership).
Partition join(const Partition& a, const Partition& b);

/// Merges all blocks of `p` that intersect `s`.
Partition merge(const Partition& p, TermSet s);

/// Number of blocks touched by `k`, minus one (zero for empty `k`).
int rank_contribution(TermSet k, const Partition& p);

/// Bell-number cap guard for full enumeration (Bell(9) = 21147).
inline constexpr int kDefaultPartitionCap = 9;

/// Visits every partition of {0..r-1} exactly once, in restricted-growth
/// string order (deterministic; fixes LP row order).  Throws UsageError when
/// r exceeds the cap, instructing the caller to lower the terminal count.
void enumerate_partitions(int r, const std::function<void(const Partition&)>& visit,
                          int cap = kDefaultPartitionCap);

std::vector<Partition> all_partitions(int r, int cap = kDefaultPartitionCap);

/// Both sides of the partition uncrossing relations for a pair (a, b) and a
/// terminal set k:
///   rank identity   r(a)[r(b)-1] + [r(a)-1]  ==  [r(a^b)-1] + sum_i [r(m(b, a_i))-1]
///   rc inequality   r(a)*rc_k(b) + rc_k(a)   >=  rc_k(a^b)  + sum_i rc_k(m(b, a_i))
/// where a_i ranges over the blocks of a and ^ is the meet.
struct UncrossReport {
    long rank_lhs = 0, rank_rhs = 0;
    long rc_lhs = 0, rc_rhs = 0;
    bool rank_identity_holds() const { return rank_lhs == rank_rhs; }
    long rc_slack() const { return rc_lhs - rc_rhs; }
    bool holds() const { return rank_identity_holds() && rc_slack() >= 0; }
};

UncrossReport check_uncrossing(const Partition& a, const Partition& b, TermSet k);

/// Textual literal like "{0,2|1|3,4}" over terminal indices.
std::string partition_str(const Partition& p);
Partition partition_parse(int r, const std::string& text);

} // namespace steiner
