#include "steiner/components.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace steiner {

TerminalIndex terminal_index(const Instance& inst) {
    TerminalIndex ti;
    ti.index_of.assign(inst.n, -1);
    for (int v = 0; v < inst.n; ++v)
        if (inst.terminal[v]) {
            ti.index_of[v] = (int)ti.vertex_of.size();
            ti.vertex_of.push_back(v);
        }
    return ti;
}

TermSet TerminalIndex::mask_of_vertices(const std::vector<int>& vs) const {
    TermSet s = 0;
    for (int v : vs) {
        if (v < 0 || v >= (int)index_of.size() || index_of[v] < 0)
            throw UsageError("vertex is not a terminal");
        s |= TermSet(1) << index_of[v];
    }
    return s;
}

std::vector<int> TerminalIndex::vertices_of_mask(TermSet s) const {
    std::vector<int> vs;
    for (TermSet b = s; b; b &= b - 1) vs.push_back(vertex_of.at(__builtin_ctz(b)));
    return vs;
}

const FullComponent* ComponentFamily::find(TermSet k) const {
    for (const FullComponent& fc : comps)
        if (fc.terms == k) return &fc;
    return nullptr;
}

namespace {

// DP value: witness edge set with exact cost.  Order: feasibility, cost,
// edge count, lexicographic edge list; the last two fix the witness tie-break.
struct Wit {
    bool ok = false;
    Rat cost;
    std::vector<int> edges;  // ascending edge ids
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

struct ClosureView {
    const Instance* inst;
    std::vector<std::vector<int>> eid;  // vertex x vertex -> edge id (-1 off-diagonal gaps)

    explicit ClosureView(const Instance& g) : inst(&g) {
        eid.assign(g.n, std::vector<int>(g.n, -1));
        for (int i = 0; i < (int)g.edges.size(); ++i) {
            eid[g.edges[i].u][g.edges[i].v] = i;
            eid[g.edges[i].v][g.edges[i].u] = i;
        }
    }
    int edge(int u, int v) const {
        int e = eid[u][v];
        if (e < 0) throw UsageError("instance is not metrically closed");
        return e;
    }
    const Rat& dist(int u, int v) const { return inst->edges[edge(u, v)].cost; }
};

// Rebuilds a DP winner into a guaranteed tree: duplicate edges (possible only
// with zero-cost edges) are removed by re-spanning, dangling zero-cost Steiner
// leaves pruned.  Cost must be unchanged, otherwise the DP is wrong.
Wit normalize_witness(const Instance& g, Wit w, const std::vector<int>& k_vertices) {
    std::sort(w.edges.begin(), w.edges.end());
    w.edges.erase(std::unique(w.edges.begin(), w.edges.end()), w.edges.end());
    std::vector<char> needed(g.n, 0);
    for (int v : k_vertices) needed[v] = 1;

    // Minimum spanning forest of the (deduplicated) witness edges.
    std::vector<int> order = w.edges;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Edge &ea = g.edges[a], &eb = g.edges[b];
        auto ka = std::tuple(ea.cost, std::min(ea.u, ea.v), std::max(ea.u, ea.v));
        auto kb = std::tuple(eb.cost, std::min(eb.u, eb.v), std::max(eb.u, eb.v));
        return ka < kb;
    });
    std::vector<int> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    std::vector<int> kept;
    for (int ei : order) {
        int a = find(g.edges[ei].u), b = find(g.edges[ei].v);
        if (a != b) {
            parent[a] = b;
            kept.push_back(ei);
        }
    }
    // Prune Steiner leaves repeatedly.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> deg(g.n, 0);
        for (int ei : kept) {
            ++deg[g.edges[ei].u];
            ++deg[g.edges[ei].v];
        }
        std::vector<int> next;
        for (int ei : kept) {
            const Edge& e = g.edges[ei];
            bool dangling = (deg[e.u] == 1 && !needed[e.u]) || (deg[e.v] == 1 && !needed[e.v]);
            if (dangling)
                changed = true;
            else
                next.push_back(ei);
        }
        kept.swap(next);
    }
    Wit out;
    out.ok = true;
    out.cost = 0;
    std::sort(kept.begin(), kept.end());
    out.edges = std::move(kept);
    for (int ei : out.edges) out.cost += g.edges[ei].cost;
    if (out.cost != w.cost && out.cost > w.cost)
        throw InvariantViolation("witness normalization increased cost");
    return out;
}

} // namespace

void validate_witness(const Instance& closed, const TerminalIndex& ti, const FullComponent& fc) {
    std::vector<int> deg(closed.n, 0);
    std::vector<int> verts;
    Rat total = 0;
    for (int ei : fc.edge_ids) {
        const Edge& e = closed.edges.at(ei);
        ++deg[e.u];
        ++deg[e.v];
        verts.push_back(e.u);
        verts.push_back(e.v);
        total += e.cost;
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (total != fc.cost) throw InvariantViolation("witness cost mismatch");
    if (fc.edge_ids.size() + 1 != verts.size())
        throw InvariantViolation("witness is not a tree");
    // Connectivity of a |V|-1 edge graph follows if every vertex has degree>0
    // and the edge set is acyclic; check via union-find.
    std::vector<int> parent(closed.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (int ei : fc.edge_ids) {
        int a = find(closed.edges[ei].u), b = find(closed.edges[ei].v);
        if (a == b) throw InvariantViolation("witness contains a cycle");
        parent[a] = b;
    }
    for (int v : verts) {
        bool in_k = closed.terminal[v] && (fc.terms >> ti.index_of[v]) & 1;
        if (in_k && deg[v] != 1)
            throw InvariantViolation("witness terminal is not a leaf");
        if (!in_k && closed.terminal[v])
            throw InvariantViolation("witness passes through a terminal outside K");
        if (!in_k && deg[v] < 2)
            throw InvariantViolation("witness has a dangling Steiner vertex");
    }
}

std::optional<FullComponent> min_full_component(const Instance& closed, const TerminalIndex& ti,
                                                TermSet k) {
    if (set_size(k) < 2) throw UsageError("full components need at least two terminals");
    if ((k & full_set(ti.r())) != k) throw UsageError("terminal subset out of range");
    ComponentFamily fam = enumerate_full_components(closed, 0, kDefaultComponentCap);
    const FullComponent* fc = fam.find(k);
    if (!fc) return std::nullopt;
    return *fc;
}

ComponentFamily enumerate_full_components(const Instance& closed, int max_size, int cap) {
    ComponentFamily fam;
    fam.inst = &closed;
    fam.terms = terminal_index(closed);
    int r = fam.terms.r();
    if (r > cap)
        throw UsageError("component enumeration capped at " + std::to_string(cap) +
                         " terminals; lower the terminal count");
    if (max_size <= 0 || max_size > r) max_size = r;
    ClosureView cv(closed);

    std::vector<int> steiner;
    for (int v = 0; v < closed.n; ++v)
        if (closed.is_steiner(v)) steiner.push_back(v);
    int m = (int)steiner.size();
    TermSet full = full_set(r);

    // ndp: tree whose top vertex steiner[i] is internal (or the pendant edge
    // for singletons); dp: ndp plus a connecting path entering from above.
    std::vector<std::vector<Wit>> ndp(m), dp(m);
    for (int i = 0; i < m; ++i) {
        ndp[i].assign(full + 1, Wit{});
        dp[i].assign(full + 1, Wit{});
    }
    for (TermSet s = 1; s <= full && m > 0; ++s) {
        int pop = set_size(s);
        for (int i = 0; i < m; ++i) {
            Wit best;
            if (pop == 1) {
                int t = fam.terms.vertex_of[__builtin_ctz(s)];
                best.ok = true;
                int e = cv.edge(steiner[i], t);
                best.cost = closed.edges[e].cost;
                best.edges = {e};
            } else {
                TermSet low = s & (-s);
                for (TermSet a = (s - 1) & s; a; a = (a - 1) & s) {
                    if (!(a & low)) continue;  // canonical halves
                    if (a == s) continue;
                    Wit cand = wit_join(dp[i][a], dp[i][s & ~a], -1, Rat(0));
                    if (wit_less(cand, best)) best = std::move(cand);
                }
            }
            ndp[i][s] = std::move(best);
        }
        for (int i = 0; i < m; ++i) {
            Wit best = ndp[i][s];
            for (int j = 0; j < m; ++j) {
                if (j == i || !ndp[j][s].ok) continue;
                int e = cv.edge(steiner[i], steiner[j]);
                Wit cand = wit_join(ndp[j][s], Wit{true, Rat(0), {}}, e, closed.edges[e].cost);
                if (wit_less(cand, best)) best = std::move(cand);
            }
            dp[i][s] = std::move(best);
        }
    }

    for (TermSet k = 3; k <= full; ++k) {  // ascending mask value = colex order
        int pop = set_size(k);
        if (pop < 2 || pop > max_size) continue;
        Wit best;
        if (pop == 2) {
            int t1 = fam.terms.vertex_of[__builtin_ctz(k)];
            int t2 = fam.terms.vertex_of[31 - __builtin_clz(k)];
            int e = cv.edge(t1, t2);
            best.ok = true;
            best.cost = closed.edges[e].cost;
            best.edges = {e};
        } else {
            for (int i = 0; i < m; ++i)
                if (wit_less(ndp[i][k], best)) best = ndp[i][k];
            if (!best.ok) continue;  // no Steiner vertex can serve K
            best = normalize_witness(closed, best, fam.terms.vertices_of_mask(k));
        }
        FullComponent fc;
        fc.terms = k;
        fc.cost = best.cost;
        fc.edge_ids = std::move(best.edges);
        validate_witness(closed, fam.terms, fc);
        fam.comps.push_back(std::move(fc));
    }
    return fam;
}

LossSet loss(const Instance& closed, const FullComponent& fc) {
    // Contract all terminals of the witness into one super node; the minimum
    // spanning tree of what remains is the cheapest edge set hooking every
    // Steiner vertex of the witness to the terminal set.
    std::vector<int> order = fc.edge_ids;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Edge &ea = closed.edges[a], &eb = closed.edges[b];
        auto ka = std::tuple(ea.cost, std::min(ea.u, ea.v), std::max(ea.u, ea.v));
        auto kb = std::tuple(eb.cost, std::min(eb.u, eb.v), std::max(eb.u, eb.v));
        return ka < kb;
    });
    std::vector<int> parent(closed.n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    int super = closed.n;
    auto cls = [&](int v) { return closed.terminal[v] ? super : v; };
    LossSet ls;
    ls.cost = 0;
    for (int ei : order) {
        int a = find(cls(closed.edges[ei].u)), b = find(cls(closed.edges[ei].v));
        if (a == b) continue;
        parent[a] = b;
        ls.edge_ids.push_back(ei);
        ls.cost += closed.edges[ei].cost;
    }
    std::sort(ls.edge_ids.begin(), ls.edge_ids.end());
    if (Rat(2) * ls.cost > fc.cost)
        throw InvariantViolation("loss exceeds half the component cost");
    return ls;
}

Quad component_cost(const Instance& closed, const CostFunction& cost, const FullComponent& fc) {
    Quad total(0);
    for (int ei : fc.edge_ids) total += cost(closed, ei);
    return total;
}

Quad drop_value(const Instance& inst, const CostFunction& cost, const Tree& tree,
                const std::vector<int>& k_vertices) {
    std::vector<int> ks = k_vertices;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.size() <= 1) return Quad(0);
    Contraction c = contract_vertices(inst, cost, ks);
    return tree.cost - mtst(c.inst, cost).cost;
}

Quad gain_value(const Instance& inst, const CostFunction& cost, const Tree& tree,
                const Instance& closed, const FullComponent& fc,
                const std::vector<int>& vertex_map) {
    TerminalIndex ti = terminal_index(closed);
    std::vector<int> ks;
    for (int v : ti.vertices_of_mask(fc.terms)) ks.push_back(vertex_map.at(v));
    return drop_value(inst, cost, tree, ks) - component_cost(closed, cost, fc);
}

GainlessReport is_gainless(const Instance& closed, const CostFunction& cost,
                           const ComponentFamily& family) {
    GainlessReport rep;
    Tree t = mtst(closed, cost);
    bool first = true;
    for (const FullComponent& fc : family.comps) {
        Quad g = drop_value(closed, cost, t, family.terms.vertices_of_mask(fc.terms)) -
                 component_cost(closed, cost, fc);
        if (first || g > rep.worst_gain) {
            rep.worst_gain = g;
            rep.worst = fc.terms;
            first = false;
        }
    }
    rep.gainless = first || rep.worst_gain.sign() <= 0;
    return rep;
}

} // namespace steiner
