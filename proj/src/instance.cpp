#include "steiner/instance.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace steiner {

std::string to_string(InstanceClass c) {
    switch (c) {
        case InstanceClass::General: return "general";
        case InstanceClass::Quasibipartite: return "quasibipartite";
        case InstanceClass::UniformlyQuasibipartite: return "uniformly_quasibipartite";
    }
    return "?";
}

void validate(const Instance& inst) {
    if (inst.n <= 0) throw UsageError("instance has no vertices");
    if ((int)inst.terminal.size() != inst.n || (int)inst.label.size() != inst.n)
        throw UsageError("instance arrays inconsistent with vertex count");
    if (inst.root < 0 || inst.root >= inst.n || !inst.terminal[inst.root])
        throw UsageError("root must be a terminal");
    if (inst.num_terminals() == 0) throw UsageError("terminal set is empty");
    for (const Edge& e : inst.edges) {
        if (e.u < 0 || e.u >= inst.n || e.v < 0 || e.v >= inst.n || e.u == e.v)
            throw UsageError("edge endpoints out of range");
        if (e.cost < 0) throw UsageError("negative edge cost");
    }
}

std::vector<std::vector<Rat>> shortest_paths(const Instance& inst) {
    const Rat none(-1);
    std::vector<std::vector<Rat>> d(inst.n, std::vector<Rat>(inst.n, none));
    for (int v = 0; v < inst.n; ++v) d[v][v] = 0;
    for (const Edge& e : inst.edges) {
        if (d[e.u][e.v] < 0 || e.cost < d[e.u][e.v]) d[e.u][e.v] = d[e.v][e.u] = e.cost;
    }
    for (int k = 0; k < inst.n; ++k)
        for (int i = 0; i < inst.n; ++i) {
            if (d[i][k] < 0) continue;
            for (int j = 0; j < inst.n; ++j) {
                if (d[k][j] < 0) continue;
                Rat through = d[i][k] + d[k][j];
                if (d[i][j] < 0 || through < d[i][j]) d[i][j] = d[j][i] = through;
            }
        }
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j)
            if (d[i][j] < 0) throw UsageError("instance not connected");
    return d;
}

Instance metric_closure(const Instance& inst) {
    validate(inst);
    auto d = shortest_paths(inst);
    Instance out;
    out.n = inst.n;
    out.terminal = inst.terminal;
    out.label = inst.label;
    out.root = inst.root;
    for (int u = 0; u < inst.n; ++u)
        for (int v = u + 1; v < inst.n; ++v) {
            Edge e;
            e.u = u;
            e.v = v;
            e.cost = d[u][v];
            e.orig_id = (int)out.edges.size();
            out.edges.push_back(e);
        }
    return out;
}

InstanceClass classify(const Instance& inst) {
    bool uniform = true;
    std::vector<Rat> steiner_cost(inst.n, Rat(-1));
    for (const Edge& e : inst.edges) {
        if (inst.is_steiner(e.u) && inst.is_steiner(e.v)) return InstanceClass::General;
        for (int v : {e.u, e.v}) {
            if (!inst.is_steiner(v)) continue;
            if (steiner_cost[v] < 0)
                steiner_cost[v] = e.cost;
            else if (steiner_cost[v] != e.cost)
                uniform = false;
        }
    }
    return uniform ? InstanceClass::UniformlyQuasibipartite : InstanceClass::Quasibipartite;
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);  // keep the smaller index as representative
        parent[b] = a;
        return true;
    }
};

// Deterministic edge order: (cost, smaller endpoint label, larger endpoint label).
struct EdgeKey {
    Quad cost;
    int lo, hi;
    bool operator<(const EdgeKey& o) const {
        if (cost != o.cost) return cost < o.cost;
        if (lo != o.lo) return lo < o.lo;
        return hi < o.hi;
    }
};

EdgeKey edge_key(const Instance& inst, const CostFunction& cost, int ei) {
    const Edge& e = inst.edges[ei];
    return EdgeKey{cost(inst, ei), std::min(inst.label[e.u], inst.label[e.v]),
                   std::max(inst.label[e.u], inst.label[e.v])};
}

Contraction rebuild(const Instance& inst, const CostFunction& cost, Dsu& dsu) {
    // New vertex ids follow the old index order of class representatives.
    std::vector<int> vmap(inst.n, -1);
    Instance out;
    for (int v = 0; v < inst.n; ++v)
        if (dsu.find(v) == v) vmap[v] = out.n++;
    for (int v = 0; v < inst.n; ++v) vmap[v] = vmap[dsu.find(v)];

    out.terminal.assign(out.n, false);
    out.label.assign(out.n, -1);
    for (int v = 0; v < inst.n; ++v) {
        int w = vmap[v];
        if (inst.terminal[v]) out.terminal[w] = true;
        if (out.label[w] < 0 || inst.label[v] < out.label[w]) out.label[w] = inst.label[v];
    }
    out.root = vmap[inst.root];

    // One representative edge per parallel class, cheapest under `cost`.
    std::map<std::pair<int, int>, int> best;
    for (int ei = 0; ei < (int)inst.edges.size(); ++ei) {
        int a = vmap[inst.edges[ei].u], b = vmap[inst.edges[ei].v];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        auto [it, fresh] = best.emplace(std::make_pair(a, b), ei);
        if (!fresh && edge_key(inst, cost, ei) < edge_key(inst, cost, it->second))
            it->second = ei;
    }
    for (auto& [key, ei] : best) {
        Edge e = inst.edges[ei];
        e.u = key.first;
        e.v = key.second;
        out.edges.push_back(e);
    }
    return Contraction{std::move(out), std::move(vmap)};
}

} // namespace

std::vector<int> terminal_edge_order(const Instance& inst, const CostFunction& cost) {
    std::vector<int> order;
    for (int ei = 0; ei < (int)inst.edges.size(); ++ei) {
        const Edge& e = inst.edges[ei];
        if (inst.terminal[e.u] && inst.terminal[e.v]) order.push_back(ei);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return edge_key(inst, cost, a) < edge_key(inst, cost, b);
    });
    return order;
}

Tree mtst(const Instance& inst, const CostFunction& cost) {
    std::vector<int> order = terminal_edge_order(inst, cost);
    Dsu dsu(inst.n);
    Tree t;
    t.cost = Quad(0);
    int picked = 0, need = inst.num_terminals() - 1;
    for (int ei : order) {
        if (picked == need) break;
        if (dsu.join(inst.edges[ei].u, inst.edges[ei].v)) {
            t.edge_ids.push_back(ei);
            t.cost += cost(inst, ei);
            ++picked;
        }
    }
    if (picked != need) throw UsageError("terminal subgraph is not connected");
    return t;
}

Contraction contract_edges(const Instance& inst, const CostFunction& cost,
                           const std::vector<int>& edge_ids) {
    Dsu dsu(inst.n);
    for (int ei : edge_ids) {
        if (ei < 0 || ei >= (int)inst.edges.size()) throw UsageError("edge to contract does not exist");
        dsu.join(inst.edges[ei].u, inst.edges[ei].v);
    }
    return rebuild(inst, cost, dsu);
}

Contraction contract_vertices(const Instance& inst, const CostFunction& cost,
                              const std::vector<int>& vertices) {
    Dsu dsu(inst.n);
    for (size_t i = 1; i < vertices.size(); ++i) dsu.join(vertices[0], vertices[i]);
    return rebuild(inst, cost, dsu);
}

Contraction contract_pairs(const Instance& inst, const CostFunction& cost,
                           const std::vector<std::pair<int, int>>& pairs) {
    Dsu dsu(inst.n);
    for (auto [a, b] : pairs) dsu.join(a, b);
    return rebuild(inst, cost, dsu);
}

CostFunction reduce_terminal_costs(const Instance& inst, const Quad& divisor) {
    if (!(divisor > Quad(1))) throw UsageError("cost divisor must exceed 1");
    CostFunction cf;
    cf.tag = "c/(" + divisor.str() + ")";
    cf.values.reserve(inst.edges.size());
    for (int ei = 0; ei < (int)inst.edges.size(); ++ei) {
        const Edge& e = inst.edges[ei];
        if (e.orig_id != ei)
            throw UsageError("reduced costs must be built on a root instance");
        Quad base(e.cost);
        cf.values.push_back(inst.terminal[e.u] && inst.terminal[e.v] ? base / divisor : base);
    }
    return cf;
}

} // namespace steiner
