#pragma once

#include "steiner/components.hpp"
#include "steiner/lp.hpp"
#include "steiner/partition.hpp"

namespace steiner {

/// Partition relaxation: one column per enumerated full component, one >=
/// row per partition of rank >= 2 (the single-block partition's row is the
/// vacuous 0 >= 0 and is omitted).  Row i corresponds to partitions[i].
struct BuiltPartitionLp {
    LinearProgram<Rat> lp;
    std::vector<Partition> partitions;
    bool bounded = false;  // true when the hyperedge-count equality row is present
};

/// Subtour relaxation: row 0 is the rank equality, row 1+i the subset
/// constraint for subsets[i] (proper subsets with at least two elements;
/// smaller ones are vacuous and omitted).
struct BuiltSubtourLp {
    LinearProgram<Rat> lp;
    std::vector<TermSet> subsets;
};

/// Directed hypergraph relaxation: one column per (component, head terminal)
/// pair, one row per valid terminal set (nonempty, root-free).
struct BuiltDirectedLp {
    LinearProgram<Rat> lp;
    std::vector<TermSet> valid_sets;                 // per row
    std::vector<std::pair<int, int>> col_component;  // per column: (family index, head)
    int root_index = 0;
};

/// Bidirected cut relaxation on the given graph (normally the pre-closure
/// instance, whose optimum is invariant under metric closure): two arc
/// columns per edge, one row per vertex set containing a terminal but not
/// the root.
struct BuiltBidirectedLp {
    LinearProgram<Rat> lp;
    std::vector<std::uint32_t> valid_sets;        // vertex-set mask per row
    std::vector<std::pair<int, int>> arcs;        // per column: (tail, head)
};

inline constexpr int kDefaultPartitionLpCap = 8;
inline constexpr int kDefaultBidirectedCap = 14;

BuiltPartitionLp build_partition_lp(const ComponentFamily& fam, int cap = kDefaultPartitionLpCap);
BuiltPartitionLp build_bounded_partition_lp(const ComponentFamily& fam,
                                            int cap = kDefaultPartitionLpCap);
BuiltSubtourLp build_subtour_lp(const ComponentFamily& fam);
BuiltDirectedLp build_directed_hyper_lp(const ComponentFamily& fam);
BuiltBidirectedLp build_bidirected_lp(const Instance& inst, int cap = kDefaultBidirectedCap);

/// Left-hand side of the partition row for an arbitrary partition.
Rat partition_row_activity(const ComponentFamily& fam, const std::vector<Rat>& x,
                           const Partition& p);

} // namespace steiner
