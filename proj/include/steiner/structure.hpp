#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "steiner/builders.hpp"

namespace steiner {

/// Partitions whose constraint holds with equality at x (the single-block
/// partition, whose row is vacuous, is never included).
std::vector<Partition> tight_partitions(const ComponentFamily& fam, const std::vector<Rat>& x,
                                        const BuiltPartitionLp& built);

/// Residual r(pi)-1 - sum_K x_K rc_K^pi; zero means tight.
Rat partition_residual(const ComponentFamily& fam, const std::vector<Rat>& x, const Partition& p);

struct ClosureCheck {
    int crossing_pairs = 0;
    std::vector<std::pair<Partition, Partition>> violations;  // meet or join not tight
    bool closed() const { return violations.empty(); }
};

/// For every crossing pair in the tight family, checks that meet and join
/// are tight as well.  A violation falsifies the implementation.
ClosureCheck verify_meet_join_closure(const ComponentFamily& fam, const std::vector<Rat>& x,
                                      const std::vector<Partition>& tight);

struct ChainReport {
    std::vector<Partition> chain;  // maximal chain in tight(x) minus the single block
    int support_size = 0;
    int chain_system_rank = 0;
    bool unique = false;    // chain equations determine x on its support
    bool sparse = false;    // support <= |R|-1
};

/// Builds an inclusion-wise maximal refinement chain inside the tight family
/// and verifies that its equations pin the solution down.
ChainReport extract_chain_and_verify(const ComponentFamily& fam, const std::vector<Rat>& x,
                                     const std::vector<Partition>& tight);

/// Mass transfer x_K -> x_{K'} for K' a one-element-smaller subset of K.
/// Components of size one act as placeholders and absorb mass silently.
/// Throws UsageError when delta is out of range or K' is not as required.
std::vector<Rat> shrink(const ComponentFamily& fam, const std::vector<Rat>& x, TermSet k,
                        TermSet k_sub, const Rat& delta);

/// Nonnegative dual over valid terminal sets (for the directed hypergraph
/// dual) or vertex sets (for the bidirected dual), with its objective value.
struct SetDual {
    std::map<std::uint32_t, Rat> z;
    Rat value() const {
        Rat s(0);
        for (const auto& [u, v] : z) s += v;
        return s;
    }
};

bool is_laminar(const SetDual& z);

/// Checks z row-by-row against the directed hypergraph dual constraints.
void verify_directed_dual(const ComponentFamily& fam, int root_index, const SetDual& z);

/// Repeated uncrossing of crossing support pairs (delta = min of the two
/// values, mass moved to union and intersection): feasibility and objective
/// are preserved, the support becomes laminar.  Terminates because all values
/// stay on the lattice (1/M)Z of the input and sum z_U |U|^2 strictly grows.
SetDual laminarize_dual(const ComponentFamily& fam, int root_index, SetDual z);

struct LiftedDual {
    SetDual z;          // over vertex sets of the pre-closure instance
    Rat value;
    int steiner_processed = 0;
};

/// Lifts a laminar directed-hypergraph dual into a bidirected-cut dual of
/// equal value on a quasibipartite instance.  Processes Steiner vertices in
/// increasing index order; at each one solves the exact transfer feasibility
/// system and moves dual from U to U + {v}.  The projection onto terminal
/// sets is invariant throughout.  Failure of the transfer solve on a
/// quasibipartite instance falsifies the implementation and throws.
LiftedDual lift_dual(const Instance& pre, const Instance& closed, const ComponentFamily& fam,
                     const SetDual& laminar_z);

/// Substitution check of a vertex-set dual against the bidirected arc
/// constraints of `pre`; returns the dual objective.
Rat verify_bidirected_dual(const Instance& pre, const SetDual& z);

} // namespace steiner
