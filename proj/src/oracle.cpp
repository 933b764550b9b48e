#include "steiner/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "steiner/components.hpp"

namespace steiner {

namespace {

struct Wit {
    bool ok = false;
    Rat cost;
    std::vector<int> edges;
};

bool wit_less(const Wit& a, const Wit& b) {
    if (a.ok != b.ok) return a.ok;
    if (!a.ok) return false;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    return a.edges < b.edges;
}

Wit wit_join(const Wit& a, const Wit& b, int extra_edge, const Rat& extra_cost) {
    Wit w;
    if (!a.ok || !b.ok) return w;
    w.ok = true;
    w.cost = a.cost + b.cost;
    w.edges.resize(a.edges.size() + b.edges.size());
    std::merge(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(), w.edges.begin());
    if (extra_edge >= 0) {
        w.cost += extra_cost;
        w.edges.insert(std::upper_bound(w.edges.begin(), w.edges.end(), extra_edge), extra_edge);
    }
    return w;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

Tree exact_steiner_tree(const Instance& closed, int max_r, int max_v) {
    TerminalIndex ti = terminal_index(closed);
    int r = ti.r(), n = closed.n;
    if (r > max_r || n > max_v)
        throw UsageError("exact Steiner tree capped at " + std::to_string(max_r) +
                         " terminals / " + std::to_string(max_v) + " vertices");
    if (r <= 1) return Tree{{}, Quad(0)};

    std::vector<std::vector<int>> eid(n, std::vector<int>(n, -1));
    for (int i = 0; i < (int)closed.edges.size(); ++i) {
        eid[closed.edges[i].u][closed.edges[i].v] = i;
        eid[closed.edges[i].v][closed.edges[i].u] = i;
    }
    auto edge = [&](int u, int v) {
        if (eid[u][v] < 0) throw UsageError("instance is not metrically closed");
        return eid[u][v];
    };

    // dp[s][v]: cheapest tree containing terminal set s and vertex v.
    int goal_terminal = ti.vertex_of[r - 1];
    TermSet universe = full_set(r - 1);  // last terminal is folded into the answer query
    std::vector<std::vector<Wit>> dp(universe + 1, std::vector<Wit>(n));
    std::vector<Wit> ndp(n);
    for (TermSet s = 1; s <= universe; ++s) {
        int pop = set_size(s);
        for (int v = 0; v < n; ++v) {
            Wit best;
            if (pop == 1) {
                int t = ti.vertex_of[__builtin_ctz(s)];
                best.ok = true;
                if (t == v) {
                    best.cost = 0;
                } else {
                    int e = edge(v, t);
                    best.cost = closed.edges[e].cost;
                    best.edges = {e};
                }
            } else {
                TermSet low = s & (-s);
                for (TermSet a = (s - 1) & s; a; a = (a - 1) & s) {
                    if (!(a & low) || a == s) continue;
                    Wit cand = wit_join(dp[a][v], dp[s & ~a][v], -1, Rat(0));
                    if (wit_less(cand, best)) best = std::move(cand);
                }
            }
            ndp[v] = std::move(best);
        }
        for (int v = 0; v < n; ++v) {
            Wit best = ndp[v];
            for (int w = 0; w < n; ++w) {
                if (w == v || !ndp[w].ok) continue;
                int e = edge(v, w);
                Wit cand = wit_join(ndp[w], Wit{true, Rat(0), {}}, e, closed.edges[e].cost);
                if (wit_less(cand, best)) best = std::move(cand);
            }
            dp[s][v] = std::move(best);
        }
    }
    Wit best = dp[universe][goal_terminal];
    if (!best.ok) throw UsageError("instance not connected");
    Tree t;
    t.edge_ids = best.edges;
    t.cost = Quad(best.cost);
    return t;
}

std::vector<std::vector<int>> full_component_decomposition(const Instance& closed,
                                                           const std::vector<int>& edge_ids) {
    // Split at internal terminals: two tree edges belong to the same full
    // component iff they are connected through Steiner vertices only.
    std::vector<int> comp((int)edge_ids.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return comp[v] == v ? v : comp[v] = find(comp[v]);
    };
    for (size_t i = 0; i < edge_ids.size(); ++i)
        for (size_t j = i + 1; j < edge_ids.size(); ++j) {
            const Edge &a = closed.edges[edge_ids[i]], &b = closed.edges[edge_ids[j]];
            for (int shared : {a.u, a.v}) {
                if (shared != b.u && shared != b.v) continue;
                if (!closed.terminal[shared]) comp[find(i)] = find(j);
            }
        }
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of_root((int)edge_ids.size(), -1);
    for (size_t i = 0; i < edge_ids.size(); ++i) {
        int root = find((int)i);
        if (group_of_root[root] < 0) {
            group_of_root[root] = (int)groups.size();
            groups.emplace_back();
        }
        groups[group_of_root[root]].push_back(edge_ids[i]);
    }
    return groups;
}

Instance random_instance(const RandomSpec& spec) {
    if (spec.num_terminals < 1 || spec.num_terminals > spec.num_vertices)
        throw UsageError("terminal count out of range");
    if (spec.cost_min < 0 || spec.cost_max < spec.cost_min)
        throw UsageError("bad cost range");
    std::uint64_t state = spec.seed * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull;
    auto rnd = [&](std::uint64_t bound) { return bound ? splitmix64(state) % bound : 0; };

    Instance g;
    g.n = spec.num_vertices;
    g.terminal.assign(g.n, false);
    g.label.resize(g.n);
    std::iota(g.label.begin(), g.label.end(), 0);

    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = g.n - 1; i > 0; --i) std::swap(order[i], order[rnd(i + 1)]);
    for (int i = 0; i < spec.num_terminals; ++i) g.terminal[order[i]] = true;
    for (int v = 0; v < g.n; ++v)
        if (g.terminal[v]) {
            g.root = v;
            break;
        }

    bool forbid_ss = spec.cls != InstanceClass::General;
    std::vector<Rat> steiner_cost(g.n, Rat(0));
    if (spec.cls == InstanceClass::UniformlyQuasibipartite)
        for (int v = 0; v < g.n; ++v)
            if (!g.terminal[v])
                steiner_cost[v] = Rat((long)(spec.cost_min + rnd(spec.cost_max - spec.cost_min + 1)));
    auto edge_cost = [&](int u, int v) {
        if (spec.cls == InstanceClass::UniformlyQuasibipartite) {
            if (!g.terminal[u]) return steiner_cost[u];
            if (!g.terminal[v]) return steiner_cost[v];
        }
        return Rat((long)(spec.cost_min + rnd(spec.cost_max - spec.cost_min + 1)));
    };
    auto add_edge = [&](int u, int v) {
        Edge e;
        e.u = u;
        e.v = v;
        e.cost = edge_cost(u, v);
        e.orig_id = (int)g.edges.size();
        g.edges.push_back(e);
    };

    // Random spanning tree in a vertex order that starts from a terminal;
    // Steiner vertices attach to terminals when Steiner-Steiner edges are
    // forbidden.
    std::vector<int> grow(g.n);
    std::iota(grow.begin(), grow.end(), 0);
    for (int i = g.n - 1; i > 0; --i) std::swap(grow[i], grow[rnd(i + 1)]);
    for (int i = 0; i < g.n; ++i)
        if (g.terminal[grow[i]]) {
            std::swap(grow[0], grow[i]);
            break;
        }
    for (int i = 1; i < g.n; ++i) {
        int v = grow[i];
        std::vector<int> anchors;
        for (int j = 0; j < i; ++j) {
            int u = grow[j];
            if (forbid_ss && !g.terminal[v] && !g.terminal[u]) continue;
            anchors.push_back(u);
        }
        if (anchors.empty()) throw UsageError("cannot grow a connected instance of this class");
        add_edge(anchors[rnd(anchors.size())], v);
    }
    // Extra edges with probability 1/2 per admissible pair.
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) {
            if (forbid_ss && !g.terminal[u] && !g.terminal[v]) continue;
            bool present = false;
            for (const Edge& e : g.edges)
                present |= (e.u == u && e.v == v) || (e.u == v && e.v == u);
            if (!present && rnd(2) == 0) add_edge(u, v);
        }
    validate(g);
    return g;
}

} // namespace steiner
