#include "steiner/heuristics.hpp"

#include <algorithm>
#include <numeric>

namespace steiner {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<int> scan_indices(int n, const ScanOrder& order) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (order.shuffle) {
        std::uint64_t s = order.seed;
        for (int i = n - 1; i > 0; --i)
            std::swap(idx[i], idx[splitmix64(s) % (std::uint64_t)(i + 1)]);
    }
    return idx;
}

std::vector<int> identity_map(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    return m;
}

void compose(std::vector<int>& vmap, const std::vector<int>& step) {
    for (int& v : vmap) v = step[v];
}

std::vector<int> root_edge_ids(const Instance& inst, const std::vector<int>& edge_ids) {
    std::vector<int> out;
    for (int ei : edge_ids) out.push_back(inst.edges.at(ei).orig_id);
    std::sort(out.begin(), out.end());
    return out;
}

Rat base_cost_of(const Instance& root, const std::vector<int>& root_ids) {
    Rat s(0);
    for (int ei : root_ids) s += root.edges.at(ei).cost;
    return s;
}

void assert_spans_terminals(const Instance& root, const std::vector<int>& root_ids,
                            const char* who) {
    std::vector<int> parent(root.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (int ei : root_ids) parent[find(root.edges[ei].u)] = find(root.edges[ei].v);
    int cls = -1;
    for (int v = 0; v < root.n; ++v) {
        if (!root.terminal[v]) continue;
        if (cls < 0) cls = find(v);
        if (find(v) != cls)
            throw InvariantViolation(std::string(who) + " output does not connect the terminals");
    }
}

std::vector<Quad> all_gains(const Instance& cur, const CostFunction& cf, const Tree& t,
                            const Instance& closed, const ComponentFamily& fam,
                            const std::vector<int>& vmap) {
    std::vector<Quad> g;
    g.reserve(fam.comps.size());
    for (const FullComponent& fc : fam.comps)
        g.push_back(gain_value(cur, cf, t, closed, fc, vmap));
    return g;
}

std::vector<int> merged_edge_union(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

} // namespace

HeuristicTrace one_pass_reduced(const Instance& closed, const ComponentFamily& fam,
                                const ScanOrder& order, const std::optional<Rat>& opt_partition_lp,
                                bool record_gain_series) {
    HeuristicTrace tr;
    tr.algorithm = "one-pass";
    CostFunction cf = reduce_terminal_costs(closed, Quad::sqrt_of(2));

    Instance cur = closed;
    std::vector<int> vmap = identity_map(closed.n);
    Tree t = mtst(cur, cf);
    tr.reduced_mtst_initial = t.cost;
    if (record_gain_series) tr.gain_series.push_back(all_gains(cur, cf, t, closed, fam, vmap));

    for (int idx : scan_indices((int)fam.comps.size(), order)) {
        const FullComponent& fc = fam.comps[idx];
        Quad gain = gain_value(cur, cf, t, closed, fc, vmap);
        if (gain.sign() <= 0) continue;
        IterationRecord rec;
        rec.index = (int)tr.steps.size() + 1;
        rec.component = fc.terms;
        rec.gain = gain;
        rec.drop = gain + component_cost(closed, cf, fc);
        rec.mtst_before = t.cost;
        std::vector<int> ks;
        for (int v : fam.terms.vertices_of_mask(fc.terms)) ks.push_back(vmap[v]);
        Contraction c = contract_vertices(cur, cf, ks);
        cur = std::move(c.inst);
        compose(vmap, c.vertex_map);
        t = mtst(cur, cf);
        rec.mtst_after = t.cost;
        tr.steps.push_back(rec);
        tr.contracted.push_back(fc.terms);
        if (record_gain_series)
            tr.gain_series.push_back(all_gains(cur, cf, t, closed, fam, vmap));
    }

    tr.final_tree_reduced = t.cost;
    tr.final_tree_edges = root_edge_ids(cur, t.edge_ids);
    tr.final_tree_base = base_cost_of(closed, tr.final_tree_edges);
    tr.algo_tree_edges = tr.final_tree_edges;
    tr.algo_cost = tr.final_tree_base;
    for (TermSet k : tr.contracted) {
        const FullComponent* fc = fam.find(k);
        tr.algo_tree_edges = merged_edge_union(tr.algo_tree_edges, fc->edge_ids);
        tr.algo_cost += fc->cost;
    }
    assert_spans_terminals(closed, tr.algo_tree_edges, "one-pass");

    Quad drop_sum(0);
    for (const IterationRecord& r : tr.steps) drop_sum += r.drop;
    if (drop_sum != tr.reduced_mtst_initial - tr.final_tree_reduced)
        throw InvariantViolation("drop additivity fails along the one-pass trace");

    // Bound chain on the final graph: the terminal-tree dual must be feasible
    // there (every component ended up gainless), which certifies that the
    // reduced cost of T_f is at most the partition optimum; and base costs
    // exceed reduced ones by at most the sqrt(2) factor edge by edge.
    KruskalDualResult kd = kruskal_dual(cur, cf, fam, vmap);
    if (!kd.feasible)
        throw InvariantViolation("one-pass terminated with a positive-gain component");
    if (kd.tree.cost != tr.final_tree_reduced)
        throw InvariantViolation("terminal-tree dual disagrees with the final tree");
    if (Quad(tr.final_tree_base) > Quad::sqrt_of(2) * tr.final_tree_reduced)
        throw InvariantViolation("final tree base cost exceeds sqrt(2) times its reduced cost");

    if (opt_partition_lp) {
        if (tr.final_tree_reduced > Quad(*opt_partition_lp))
            throw InvariantViolation("reduced final tree exceeds the LP optimum");
        Quad bound = (Quad(2) * Quad::sqrt_of(2) - Quad(1)) * Quad(*opt_partition_lp);
        if (Quad(tr.algo_cost) > bound)
            throw InvariantViolation("one-pass output exceeds (2*sqrt(2)-1) times the LP optimum");
    }
    return tr;
}

HeuristicTrace loss_contracting(const Instance& closed, const ComponentFamily& fam,
                                const Quad& alpha, const ScanOrder& order,
                                const std::optional<Rat>& opt_partition_lp,
                                bool record_gain_series) {
    if (!(alpha > Quad(1))) throw UsageError("loss contraction needs alpha > 1");
    HeuristicTrace tr;
    tr.algorithm = "loss-contract";
    CostFunction base;  // evolving class costs realized through contraction

    std::vector<LossSet> losses;
    losses.reserve(fam.comps.size());
    for (const FullComponent& fc : fam.comps) losses.push_back(loss(closed, fc));

    Instance cur = closed;
    std::vector<int> vmap = identity_map(closed.n);
    Tree t = mtst(cur, base);
    tr.reduced_mtst_initial = t.cost;
    if (record_gain_series) tr.gain_series.push_back(all_gains(cur, base, t, closed, fam, vmap));

    Rat loss_total(0);
    for (int idx : scan_indices((int)fam.comps.size(), order)) {
        const FullComponent& fc = fam.comps[idx];
        const LossSet& ls = losses[idx];
        if (ls.edge_ids.empty()) continue;  // nothing to contract
        Quad gain = gain_value(cur, base, t, closed, fc, vmap);
        if (!(gain > (alpha - Quad(1)) * Quad(ls.cost))) continue;

        IterationRecord rec;
        rec.index = (int)tr.steps.size() + 1;
        rec.component = fc.terms;
        rec.gain = gain;
        rec.drop = gain + Quad(fc.cost);
        rec.loss_cost = ls.cost;
        rec.mtst_before = t.cost;
        std::vector<std::pair<int, int>> pairs;
        for (int ei : ls.edge_ids)
            pairs.emplace_back(vmap[closed.edges[ei].u], vmap[closed.edges[ei].v]);
        Contraction c = contract_pairs(cur, base, pairs);
        cur = std::move(c.inst);
        compose(vmap, c.vertex_map);
        t = mtst(cur, base);
        rec.mtst_after = t.cost;
        // Exchange bound: contracting loss(K) saves at least gain + loss.
        if (rec.mtst_before - rec.mtst_after < gain + Quad(ls.cost))
            throw InvariantViolation("loss-contraction exchange inequality fails");
        tr.steps.push_back(rec);
        tr.contracted.push_back(fc.terms);
        loss_total += ls.cost;
        if (record_gain_series)
            tr.gain_series.push_back(all_gains(cur, base, t, closed, fam, vmap));
    }

    // End state: no component may clear its threshold against the final tree.
    for (int j = 0; j < (int)fam.comps.size(); ++j) {
        Quad g = gain_value(cur, base, t, closed, fam.comps[j], vmap);
        if (g > (alpha - Quad(1)) * Quad(losses[j].cost))
            throw InvariantViolation("loss-contraction terminated with a triggering component");
    }

    tr.final_tree_reduced = t.cost;
    tr.final_tree_edges = root_edge_ids(cur, t.edge_ids);
    tr.final_tree_base = t.cost.as_rational();
    tr.algo_tree_edges = tr.final_tree_edges;
    tr.algo_cost = tr.final_tree_base + loss_total;
    for (size_t i = 0; i < tr.contracted.size(); ++i) {
        const FullComponent* fc = fam.find(tr.contracted[i]);
        int idx = (int)(fc - fam.comps.data());
        tr.algo_tree_edges = merged_edge_union(tr.algo_tree_edges, losses[idx].edge_ids);
    }
    assert_spans_terminals(closed, tr.algo_tree_edges, "loss-contract");

    if (opt_partition_lp) {
        Quad opt(*opt_partition_lp);
        if (Quad(tr.final_tree_base) > (Quad(1) + alpha) / Quad(2) * opt)
            throw InvariantViolation("final terminal tree exceeds (1+alpha)/2 times the optimum");
        Quad factor = (alpha * alpha + Quad(3)) / (Quad(2) * alpha);
        if (Quad(tr.algo_cost) > factor * opt)
            throw InvariantViolation("loss-contraction output exceeds its guarantee");
    }
    return tr;
}

RatioGreedyResult ratio_greedy(const Instance& pre, const Instance& closed,
                               const ComponentFamily& fam,
                               const std::optional<Rat>& opt_partition_lp) {
    if (classify(pre) != InstanceClass::UniformlyQuasibipartite)
        throw UsageError("ratio greedy requires a uniformly quasibipartite instance");
    if (fam.inst != &closed) throw UsageError("component family built on a different instance");
    int r = fam.terms.r();
    RatioGreedyResult out;

    std::vector<int> color(r);
    std::iota(color.begin(), color.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return color[v] == v ? v : color[v] = find(color[v]);
    };
    auto touched = [&](TermSet k) {
        std::vector<int> roots;
        for (TermSet b = k; b; b &= b - 1) roots.push_back(find(__builtin_ctz(b)));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        return roots;
    };
    auto snapshot = [&]() {
        std::vector<int> c(r);
        for (int i = 0; i < r; ++i) c[i] = find(i);
        return partition_from_assignment(c);
    };

    int classes = r;
    std::vector<Partition> pis{snapshot()};
    std::vector<Rat> thetas{Rat(0)};  // theta(0) = 0
    while (classes > 1) {
        int best = -1;
        Rat best_ratio;
        for (int j = 0; j < (int)fam.comps.size(); ++j) {
            const FullComponent& fc = fam.comps[j];
            if ((int)touched(fc.terms).size() != fc.size()) continue;  // would close a hypercycle
            Rat ratio = fc.cost / Rat(fc.size() - 1);
            if (best < 0 || ratio < best_ratio) {
                best = j;
                best_ratio = ratio;
            }
        }
        if (best < 0) throw InvariantViolation("greedy ran out of acyclic components");
        const FullComponent& fc = fam.comps[best];
        if (!thetas.empty() && best_ratio < thetas.back())
            throw InvariantViolation("greedy ratio sequence decreased");
        out.picked.push_back(best);
        out.theta.emplace_back(best_ratio);
        thetas.push_back(best_ratio);
        auto roots = touched(fc.terms);
        for (size_t i = 1; i < roots.size(); ++i) color[find(roots[i])] = find(roots[0]);
        classes -= (int)roots.size() - 1;
        pis.push_back(snapshot());
        out.tree_edges = merged_edge_union(out.tree_edges, fc.edge_ids);
        out.tree_cost += fc.cost;
    }

    // y on the partition current before pick i+1, worth theta(i+1) - theta(i).
    for (size_t i = 0; i + 1 < thetas.size(); ++i) {
        Rat dur = thetas[i + 1] - thetas[i];
        if (dur != 0) out.dual.entries.emplace_back(pis[i], Quad(dur));
    }
    if (out.dual.objective() != Quad(out.tree_cost))
        throw InvariantViolation("greedy dual objective does not telescope to the tree cost");
    for (const FullComponent& fc : fam.comps) {
        Quad load = out.dual.row_load(fc.terms);
        if (Quad(60) * load > Quad(73) * Quad(fc.cost))
            throw InvariantViolation("scaled greedy dual is infeasible on a component row");
        // Refined row bound for uniform stars (and bare edges): the load stays
        // under cost * (k-1+H(k-1))/k, the quantity whose maximum is 73/60.
        bool uniform_star = true;
        if (fc.edge_ids.size() > 1) {
            int center = -1;
            const Edge& first = closed.edges[fc.edge_ids[0]];
            for (int cand : {first.u, first.v}) {
                bool common = closed.is_steiner(cand);
                for (int ei : fc.edge_ids)
                    common &= closed.edges[ei].u == cand || closed.edges[ei].v == cand;
                if (common) center = cand;
            }
            uniform_star = center >= 0;
            for (int ei : fc.edge_ids)
                uniform_star &= closed.edges[ei].cost == closed.edges[fc.edge_ids[0]].cost;
        }
        if (uniform_star) {
            int k = fc.size();
            Rat harmonic(0);
            for (int j = 1; j < k; ++j) harmonic += Rat(1, j);
            Quad bound = Quad(fc.cost) * Quad((Rat(k - 1) + harmonic) / Rat(k));
            if (load > bound)
                throw InvariantViolation("greedy dual exceeds the harmonic row bound on a star");
        }
    }
    if (opt_partition_lp && Rat(60) * out.tree_cost > Rat(73) * *opt_partition_lp)
        throw InvariantViolation("greedy tree exceeds 73/60 times the LP optimum");
    return out;
}

KruskalDualResult kruskal_dual(const Instance& inst, const CostFunction& cost,
                               const ComponentFamily& fam, const std::vector<int>& vertex_map) {
    int r = fam.terms.r();
    KruskalDualResult out;

    // Footprints: original terminal indices absorbed by each current vertex.
    std::vector<TermSet> footprint(inst.n, 0);
    for (int t = 0; t < r; ++t) footprint[vertex_map.at(fam.terms.vertex_of[t])] |= TermSet(1) << t;

    std::vector<int> parent(inst.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    auto lifted = [&]() {
        std::vector<TermSet> blocks(inst.n, 0);
        for (int v = 0; v < inst.n; ++v)
            if (footprint[v]) blocks[find(v)] |= footprint[v];
        std::vector<TermSet> nonempty;
        for (TermSet b : blocks)
            if (b) nonempty.push_back(b);
        return make_partition(r, std::move(nonempty));
    };

    Quad t_prev(0);
    int classes = inst.num_terminals();
    for (int ei : terminal_edge_order(inst, cost)) {
        if (classes == 1) break;
        int a = find(inst.edges[ei].u), b = find(inst.edges[ei].v);
        if (a == b) continue;
        Quad c = cost(inst, ei);
        if (c > t_prev) {
            out.dual.entries.emplace_back(lifted(), c - t_prev);
            t_prev = c;
        }
        parent[a] = b;
        --classes;
        out.tree.edge_ids.push_back(ei);
        out.tree.cost += c;
    }
    if (classes != 1) throw UsageError("terminal subgraph is not connected");

    if (out.dual.objective() != out.tree.cost)
        throw InvariantViolation("Kruskal dual objective differs from the tree cost");

    for (const FullComponent& fc : fam.comps) {
        Quad load = out.dual.row_load(fc.terms);
        std::vector<int> ks;
        for (int v : fam.terms.vertices_of_mask(fc.terms)) ks.push_back(vertex_map.at(v));
        Quad dropped = drop_value(inst, cost, out.tree, ks);
        if (load != dropped)
            throw InvariantViolation("Kruskal dual row load differs from drop on component " +
                                     std::to_string(fc.terms));
        Quad ck = component_cost(*fam.inst, cost, fc);
        if (load > ck) {
            out.feasible = false;
            out.violations.emplace_back(fc.terms, load - ck);
        }
    }
    return out;
}

std::pair<Rat, int> ratio_greedy_worst_constant(int limit) {
    Rat best(-1);
    int arg = 0;
    Rat harmonic(0);
    for (int k = 2; k <= limit; ++k) {
        harmonic += Rat(1, k - 1);  // H(k-1) after the update
        Rat value = (Rat(k - 1) + harmonic) / Rat(k);
        if (value > best) {
            best = value;
            arg = k;
        }
    }
    return {best, arg};
}

} // namespace steiner
