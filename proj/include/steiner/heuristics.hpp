#pragma once

#include <optional>
#include <vector>

#include "steiner/components.hpp"
#include "steiner/instance.hpp"
#include "steiner/partition.hpp"

namespace steiner {

/// Assignment of nonnegative values to partitions of the terminal set,
/// a candidate solution of the partition dual.
struct PartitionDual {
    std::vector<std::pair<Partition, Quad>> entries;

    Quad objective() const {
        Quad s(0);
        for (const auto& [p, y] : entries) s += Quad(p.rank() - 1) * y;
        return s;
    }
    Quad row_load(TermSet k) const {
        Quad s(0);
        for (const auto& [p, y] : entries) s += Quad(rank_contribution(k, p)) * y;
        return s;
    }
};

struct IterationRecord {
    int index = 0;              // position in the scan
    TermSet component = 0;
    Quad mtst_before, mtst_after;
    Quad drop, gain;
    Rat loss_cost;              // loss-contracting runs only
};

struct HeuristicTrace {
    std::string algorithm;
    std::vector<IterationRecord> steps;
    std::vector<TermSet> contracted;

    Quad reduced_mtst_initial;   // mtst of the input under the governing costs
    Quad final_tree_reduced;     // governing cost of the final terminal tree
    Rat final_tree_base;         // base cost of the final terminal tree
    std::vector<int> final_tree_edges;  // root-instance edge ids
    std::vector<int> algo_tree_edges;   // root-instance edge ids of the output
    Rat algo_cost;               // base cost the guarantee is stated for

    // gain of every component before the scan and after each contraction,
    // recorded when requested; outer index 0 is the initial tree.
    std::vector<std::vector<Quad>> gain_series;
};

struct ScanOrder {
    bool shuffle = false;
    std::uint64_t seed = 0;
};

/// Single scan over the family under costs with terminal-terminal edges
/// divided by sqrt(2); contracts the terminal set of every component whose
/// gain is positive, exactly decided in Q[sqrt(2)].  When `opt_partition_lp`
/// is given, asserts the (2*sqrt(2)-1) guarantee against it.
HeuristicTrace one_pass_reduced(const Instance& closed, const ComponentFamily& fam,
                                const ScanOrder& order = {},
                                const std::optional<Rat>& opt_partition_lp = std::nullopt,
                                bool record_gain_series = false);

/// Single scan contracting only loss(K) when gain exceeds (alpha-1)*loss(K);
/// zero-loss components are skipped (contracting nothing cannot help).
/// Asserts the per-step exchange inequality, the end-state threshold
/// condition for every component, and with `opt_partition_lp` the
/// (alpha^2+3)/(2*alpha) guarantee (sqrt(3) at the default alpha).
HeuristicTrace loss_contracting(const Instance& closed, const ComponentFamily& fam,
                                const Quad& alpha, const ScanOrder& order = {},
                                const std::optional<Rat>& opt_partition_lp = std::nullopt,
                                bool record_gain_series = false);

struct RatioGreedyResult {
    std::vector<int> picked;        // family indices in pick order
    std::vector<Quad> theta;        // C_L/(|L|-1) per pick, nondecreasing
    PartitionDual dual;             // y on the partitions the run passed through
    std::vector<int> tree_edges;    // union of picked witnesses
    Rat tree_cost;                  // sum of picked component costs
};

/// Greedy minimum-ratio hyper-spanning tree for uniformly quasibipartite
/// instances, with the scaled dual certificate: (60/73)*y is verified
/// feasible row by row, which certifies tree_cost <= 73/60 * the partition
/// LP optimum.  Refuses instances that are not uniformly quasibipartite.
RatioGreedyResult ratio_greedy(const Instance& pre, const Instance& closed,
                               const ComponentFamily& fam,
                               const std::optional<Rat>& opt_partition_lp = std::nullopt);

struct KruskalDualResult {
    PartitionDual dual;           // over partitions of the root terminal set
    Tree tree;                    // mtst of the given instance
    bool feasible = true;         // all component rows within cost
    std::vector<std::pair<TermSet, Quad>> violations;  // component, load - cost
};

/// Terminal-spanning-tree dual: runs Kruskal over the current terminal
/// classes and assigns each traversed partition the duration it was current.
/// The dual objective equals the tree cost; every component row load equals
/// drop(K) exactly (asserted), so the dual is feasible iff the tree is
/// gainless.  `vertex_map` maps root-instance vertices to `inst` vertices
/// (identity when inst is the root instance itself).
KruskalDualResult kruskal_dual(const Instance& inst, const CostFunction& cost,
                               const ComponentFamily& fam, const std::vector<int>& vertex_map);

/// Largest value of (k-1+H(k-1))/k over 2 <= k <= limit, with its argmax.
std::pair<Rat, int> ratio_greedy_worst_constant(int limit = 64);

} // namespace steiner
