#pragma once

#include <optional>
#include <vector>

#include "steiner/instance.hpp"
#include "steiner/partition.hpp"

namespace steiner {

/// Maps between terminal indices 0..r-1 and vertex ids of one instance.
struct TerminalIndex {
    std::vector<int> vertex_of;  // terminal index -> vertex
    std::vector<int> index_of;   // vertex -> terminal index, -1 for Steiner

    int r() const { return (int)vertex_of.size(); }
    TermSet mask_of_vertices(const std::vector<int>& vs) const;
    std::vector<int> vertices_of_mask(TermSet s) const;
};

TerminalIndex terminal_index(const Instance& inst);

/// A terminal subset K together with its cheapest witness tree: leaves are
/// exactly the terminals of K (each of degree one), internal vertices are
/// Steiner.  Infeasible subsets are never materialized.
struct FullComponent {
    TermSet terms = 0;
    std::vector<int> edge_ids;  // witness edges in the root instance, ascending
    Rat cost;                   // witness cost under the base costs

    int size() const { return set_size(terms); }
};

/// Cheapest witness-edge subset leaving every Steiner vertex of the witness
/// connected to a terminal; never connects two terminals.
struct LossSet {
    std::vector<int> edge_ids;
    Rat cost;
};

struct ComponentFamily {
    const Instance* inst = nullptr;  // root (metric-closed) instance
    TerminalIndex terms;
    std::vector<FullComponent> comps;  // colex order of the terminal masks

    const FullComponent* find(TermSet k) const;
};

inline constexpr int kDefaultComponentCap = 10;

/// Minimum-cost full component spanning exactly the terminals of `k`.
/// Subset dynamic program over (Steiner vertex, attached terminal subset);
/// terminals enter only as pendant leaves, so the leaf condition holds by
/// construction.  Ties break to fewest edges, then the lexicographically
/// smallest sorted edge list.  Empty result when no Steiner vertex can serve
/// |K| >= 3 (impossible after metric closure only when there are no Steiner
/// vertices at all).
std::optional<FullComponent> min_full_component(const Instance& closed, const TerminalIndex& ti,
                                                TermSet k);

/// All full components with 2 <= |K| <= max_size (0 means |R|), colex order.
ComponentFamily enumerate_full_components(const Instance& closed, int max_size = 0,
                                          int cap = kDefaultComponentCap);

LossSet loss(const Instance& closed, const FullComponent& fc);

/// Witness cost under an arbitrary cost function.
Quad component_cost(const Instance& closed, const CostFunction& cost, const FullComponent& fc);

/// drop_T(K) = cost(T) - mtst(inst with K's terminal classes merged).
/// `tree` must be mtst(inst, cost); `k_vertices` are vertices of `inst`.
Quad drop_value(const Instance& inst, const CostFunction& cost, const Tree& tree,
                const std::vector<int>& k_vertices);

/// gain_T(K) = drop_T(K) - cost(K), all under `cost`.
Quad gain_value(const Instance& inst, const CostFunction& cost, const Tree& tree,
                const Instance& closed, const FullComponent& fc,
                const std::vector<int>& vertex_map);

struct GainlessReport {
    bool gainless = true;
    TermSet worst = 0;   // argmax component (meaningful when any gain computed)
    Quad worst_gain;     // max gain over the family
};

/// True iff every component of the family has nonpositive gain against
/// mtst(inst, cost); reports the worst offender.
GainlessReport is_gainless(const Instance& closed, const CostFunction& cost,
                           const ComponentFamily& family);

/// Verifies the witness structure: tree, terminals of K of degree exactly 1,
/// internal vertices Steiner, cost matches.  Throws InvariantViolation.
void validate_witness(const Instance& closed, const TerminalIndex& ti, const FullComponent& fc);

} // namespace steiner
