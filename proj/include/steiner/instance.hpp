#pragma once

#include <string>
#include <vector>

#include "steiner/quadratic.hpp"
#include "steiner/rational.hpp"

namespace steiner {

struct Edge {
    int u = -1, v = -1;
    Rat cost;      // base cost (original cost function c)
    int orig_id = -1;  // index of the ancestor edge in the root instance
};

/// Undirected weighted graph with a distinguished terminal set and root.
/// Instances are immutable after construction; contraction and closure
/// return new instances.  Vertex `label` carries the smallest original
/// vertex index of the merged class, which fixes every tie-break rule.
struct Instance {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<bool> terminal;
    std::vector<int> label;
    int root = -1;

    int num_terminals() const {
        int k = 0;
        for (bool t : terminal) k += t;
        return k;
    }
    std::vector<int> terminals() const {
        std::vector<int> r;
        for (int v = 0; v < n; ++v)
            if (terminal[v]) r.push_back(v);
        return r;
    }
    bool is_steiner(int v) const { return !terminal[v]; }
};

/// Exact per-edge costs, indexed by root-instance edge id so the same
/// function can be evaluated on any graph contracted from that root.
/// An empty value table means the base costs.
struct CostFunction {
    std::vector<Quad> values;
    std::string tag = "c";

    Quad operator()(const Instance& inst, int edge_index) const {
        const Edge& e = inst.edges.at(edge_index);
        if (values.empty()) return Quad(e.cost);
        return values.at(e.orig_id);
    }
};

struct Tree {
    std::vector<int> edge_ids;  // indices into the owning instance's edge list
    Quad cost;
};

enum class InstanceClass { General, Quasibipartite, UniformlyQuasibipartite };

std::string to_string(InstanceClass c);

/// Structural validation of the Instance invariants; throws UsageError.
void validate(const Instance& inst);

/// All-pairs shortest path distances (exact).  Unreachable pairs throw.
std::vector<std::vector<Rat>> shortest_paths(const Instance& inst);

/// Complete graph on the same vertex set whose costs are shortest-path
/// distances; idempotent.  Throws UsageError("instance not connected") on
/// disconnected input.
Instance metric_closure(const Instance& inst);

/// Classification on the given (pre-closure) graph: quasibipartite means no
/// edge joins two Steiner vertices; uniformly quasibipartite additionally
/// requires all edges at each Steiner vertex to share one cost.
InstanceClass classify(const Instance& inst);

/// Minimum spanning tree of the terminal-induced subgraph, Kruskal with the
/// fixed tie-break (cost, smaller endpoint label, larger endpoint label).
/// Throws UsageError if the terminals are not connected.
Tree mtst(const Instance& inst, const CostFunction& cost);

/// Terminal-terminal edge ids in the deterministic Kruskal order.
std::vector<int> terminal_edge_order(const Instance& inst, const CostFunction& cost);

struct Contraction {
    Instance inst;
    std::vector<int> vertex_map;  // old vertex -> new vertex
};

/// Contracts the given edges: endpoints merge, parallel classes keep the
/// cheapest edge under `cost`, self-loops vanish.  A merged vertex is a
/// terminal iff any member was; the root follows its class.
Contraction contract_edges(const Instance& inst, const CostFunction& cost,
                           const std::vector<int>& edge_ids);

/// Merges the listed vertices into a single class (used to contract a full
/// component's terminal set), same bookkeeping as contract_edges.
Contraction contract_vertices(const Instance& inst, const CostFunction& cost,
                              const std::vector<int>& vertices);

/// Merges each listed vertex pair (endpoints of edges that may live in an
/// ancestor graph), same bookkeeping as contract_edges.
Contraction contract_pairs(const Instance& inst, const CostFunction& cost,
                           const std::vector<std::pair<int, int>>& pairs);

/// Cost function with every terminal-terminal edge divided by `divisor`
/// (> 1) and all other edges unchanged.
CostFunction reduce_terminal_costs(const Instance& inst, const Quad& divisor);

} // namespace steiner
