#include "steiner/report.hpp"

#include <json.hpp>

namespace steiner {

using nlohmann::json;

std::optional<Rat> InstanceReport::gap_p() const {
    if (!opt_integral || !opt_p || *opt_p == 0) return std::nullopt;
    return *opt_integral / *opt_p;
}

std::optional<Rat> InstanceReport::gap_b() const {
    if (!opt_integral || !opt_b || *opt_b == 0) return std::nullopt;
    return *opt_integral / *opt_b;
}

InstanceReport verify_instance(const Instance& pre, const VerifyOptions& opt,
                               const std::string& name) {
    InstanceReport rep;
    rep.name = name;
    validate(pre);
    rep.cls = classify(pre);
    Instance closed = metric_closure(pre);
    rep.num_vertices = closed.n;
    rep.num_terminals = closed.num_terminals();

    auto fail = [&](const std::string& what) { rep.failures.push_back(what); };
    auto guard = [&](const std::string& what, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            fail(what + ": " + e.what());
        }
    };

    ComponentFamily fam = enumerate_full_components(closed);
    rep.num_components = (int)fam.comps.size();
    CostFunction base;
    rep.mtst_cost = mtst(closed, base).cost.as_rational();

    // Hypergraphic relaxations and the basic-solution structure of (P).
    BuiltPartitionLp plp = build_partition_lp(fam, opt.partition_cap);
    LpSolution<Rat> psol = solve_exact(plp.lp);
    rep.opt_p = psol.objective;
    rep.support_p = (int)psol.support.size();
    rep.sparsity_ok = rep.support_p <= rep.num_terminals - 1;
    if (!rep.sparsity_ok) fail("basic solution of the partition LP has dense support");

    std::vector<Partition> tight = tight_partitions(fam, psol.primal, plp);
    ClosureCheck cc = verify_meet_join_closure(fam, psol.primal, tight);
    rep.tight_closure_ok = cc.closed();
    if (!rep.tight_closure_ok) fail("tight partitions not closed under meet/join");
    ChainReport chain = extract_chain_and_verify(fam, psol.primal, tight);
    rep.chain_unique = chain.unique && chain.sparse;
    if (!rep.chain_unique) fail("maximal tight chain does not pin the basic solution");

    guard("bounded partition LP", [&] {
        BuiltPartitionLp p2 = build_bounded_partition_lp(fam, opt.partition_cap);
        LpSolution<Rat> sol = solve_exact(p2.lp, false);
        rep.opt_p2 = sol.objective;
        // Any point of the bounded polytope must satisfy the unbounded one.
        for (size_t i = 0; i + 1 < p2.lp.rows.size(); ++i) {
            if (p2.lp.row_activity(p2.lp.rows[i], sol.primal) < p2.lp.rows[i].rhs)
                throw InvariantViolation("bounded optimum violates a partition row");
        }
    });
    guard("subtour LP", [&] {
        BuiltSubtourLp s = build_subtour_lp(fam);
        rep.opt_s = solve_exact(s.lp, false).objective;
    });
    guard("directed hypergraph LP", [&] {
        BuiltDirectedLp d = build_directed_hyper_lp(fam);
        LpSolution<Rat> dsol = solve_exact(d.lp, false);
        rep.opt_d = dsol.objective;

        // Directed dual -> laminar -> (on quasibipartite instances) lifted.
        SetDual z;
        for (int i = 0; i < (int)d.valid_sets.size(); ++i)
            if (dsol.dual[i] != 0) z.z[d.valid_sets[i]] += dsol.dual[i];
        verify_directed_dual(fam, d.root_index, z);
        SetDual lam = laminarize_dual(fam, d.root_index, z);
        if (lam.value() != dsol.objective)
            throw InvariantViolation("laminarization changed the dual value");
        if (rep.cls != InstanceClass::General) {
            LiftedDual lifted = lift_dual(pre, closed, fam, lam);
            rep.lift_value = lifted.value;
            rep.lift_ok = lifted.value == dsol.objective;
            if (!rep.lift_ok) throw InvariantViolation("lifted dual value drifted");
        }
    });
    if (opt.solve_bidirected)
        guard("bidirected cut LP", [&] {
            BuiltBidirectedLp b = build_bidirected_lp(pre, opt.bidirected_cap);
            rep.opt_b = solve_exact(b.lp, false).objective;
        });

    rep.hyper_equal = rep.opt_p && rep.opt_p2 && rep.opt_s && rep.opt_d &&
                      *rep.opt_p == *rep.opt_p2 && *rep.opt_p == *rep.opt_s &&
                      *rep.opt_p == *rep.opt_d;
    if (!rep.hyper_equal) fail("hypergraphic relaxations disagree");
    if (rep.opt_b && rep.opt_d) {
        rep.ordering_ok = *rep.opt_d >= *rep.opt_b;
        if (!rep.ordering_ok) fail("directed hypergraph LP fell below the bidirected LP");
        rep.qb_equal = rep.cls == InstanceClass::General || *rep.opt_d == *rep.opt_b;
        if (!rep.qb_equal) fail("quasibipartite instance with unequal bidirected optimum");
        if (rep.cls != InstanceClass::General && rep.lift_value && rep.opt_b &&
            *rep.lift_value != *rep.opt_b)
            fail("lifted dual value differs from the bidirected optimum");
    }

    // Terminal-spanning-tree dual and the gainless criterion.
    guard("Kruskal dual", [&] {
        GainlessReport gl = is_gainless(closed, base, fam);
        rep.gainless = gl.gainless;
        std::vector<int> id(closed.n);
        for (int v = 0; v < closed.n; ++v) id[v] = v;
        KruskalDualResult kd = kruskal_dual(closed, base, fam, id);
        rep.kruskal_feasible = kd.feasible;
        rep.gainless_matches_kruskal = kd.feasible == gl.gainless;
        if (!rep.gainless_matches_kruskal)
            throw InvariantViolation("gainlessness and dual feasibility disagree");
        if (gl.gainless && rep.opt_p) {
            rep.gainless_lp_equals_mtst = *rep.opt_p == rep.mtst_cost;
            if (!rep.gainless_lp_equals_mtst)
                throw InvariantViolation("gainless instance with LP below the terminal tree");
        }
    });

    if (rep.opt_p) {
        Quad m(rep.mtst_cost), p(*rep.opt_p);
        rep.sandwich_ok = m >= p && m <= Quad(2) * p;
        if (!rep.sandwich_ok) fail("terminal tree escapes [OPT(P), 2 OPT(P)]");
    }

    if (opt.run_heuristics && rep.opt_p)
        guard("heuristics", [&] {
            HeuristicTrace op = one_pass_reduced(closed, fam, {}, rep.opt_p);
            rep.one_pass_cost = op.algo_cost;
            HeuristicTrace lc = loss_contracting(closed, fam, Quad::sqrt_of(3), {}, rep.opt_p);
            rep.loss_contract_cost = lc.algo_cost;
            if (rep.cls == InstanceClass::UniformlyQuasibipartite) {
                RatioGreedyResult rg = ratio_greedy(pre, closed, fam, rep.opt_p);
                rep.ratio_greedy_cost = rg.tree_cost;
            }
        });

    if (opt.run_exact_oracle)
        guard("exact oracle", [&] {
            Tree best = exact_steiner_tree(closed);
            rep.opt_integral = best.cost.as_rational();
            bool ok = true;
            if (rep.opt_p) {
                Quad oi(*rep.opt_integral), p(*rep.opt_p);
                ok = oi >= p && oi <= Quad::sqrt_of(3) * p;
            }
            // The decomposition of the optimum is a feasible point of the
            // bounded partition LP.
            auto groups = full_component_decomposition(closed, best.edge_ids);
            std::vector<Rat> x(fam.comps.size(), Rat(0));
            TerminalIndex ti = terminal_index(closed);
            int hyperedge_weight = 0;
            for (const auto& g : groups) {
                TermSet k = 0;
                for (int ei : g)
                    for (int v : {closed.edges[ei].u, closed.edges[ei].v})
                        if (closed.terminal[v]) k |= TermSet(1) << ti.index_of[v];
                const FullComponent* fc = fam.find(k);
                if (!fc) throw InvariantViolation("decomposition component missing from family");
                x[fc - fam.comps.data()] += 1;
                hyperedge_weight += set_size(k) - 1;
            }
            if (hyperedge_weight != rep.num_terminals - 1)
                throw InvariantViolation("decomposition is not a hyper-spanning tree");
            for (const Partition& p : plp.partitions)
                if (partition_row_activity(fam, x, p) < Rat(p.rank() - 1))
                    throw InvariantViolation("decomposition violates a partition row");
            rep.oracle_ok = ok;
            if (!ok) throw InvariantViolation("integral optimum escapes [OPT(P), sqrt3 OPT(P)]");
        });

    if (opt.check_root_independence && opt.solve_bidirected)
        guard("root independence probe", [&] {
            for (int v = 0; v < pre.n; ++v) {
                if (!pre.terminal[v] || v == pre.root) continue;
                Instance alt = pre;
                alt.root = v;
                Rat val = solve_exact(build_bidirected_lp(alt, opt.bidirected_cap).lp, false)
                              .objective;
                if (rep.opt_b && val != *rep.opt_b)
                    rep.notes.push_back("bidirected optimum moved under root " +
                                        std::to_string(v) + " (inconclusive observation)");
            }
        });
    return rep;
}

namespace {

json opt_str(const std::optional<Rat>& v) {
    if (!v) return nullptr;
    return rat_str(*v);
}

} // namespace

std::string report_json(const InstanceReport& rep) {
    json j;
    j["name"] = rep.name;
    j["class"] = to_string(rep.cls);
    j["vertices"] = rep.num_vertices;
    j["terminals"] = rep.num_terminals;
    j["components"] = rep.num_components;
    j["mtst"] = rat_str(rep.mtst_cost);
    j["opt"] = {{"P", opt_str(rep.opt_p)},   {"P2", opt_str(rep.opt_p2)},
                {"S", opt_str(rep.opt_s)},   {"D", opt_str(rep.opt_d)},
                {"B", opt_str(rep.opt_b)},   {"integral", opt_str(rep.opt_integral)},
                {"lifted_dual", opt_str(rep.lift_value)}};
    j["support_P"] = rep.support_p;
    j["verdicts"] = {{"hyper_equal", rep.hyper_equal},
                     {"ordering", rep.ordering_ok},
                     {"quasibipartite_equal", rep.qb_equal},
                     {"lift", rep.lift_ok},
                     {"sparsity", rep.sparsity_ok},
                     {"chain_unique", rep.chain_unique},
                     {"tight_closure", rep.tight_closure_ok},
                     {"gainless", rep.gainless},
                     {"kruskal_feasible", rep.kruskal_feasible},
                     {"gainless_matches_kruskal", rep.gainless_matches_kruskal},
                     {"gainless_lp_equals_mtst", rep.gainless_lp_equals_mtst},
                     {"sandwich", rep.sandwich_ok},
                     {"oracle", rep.oracle_ok}};
    j["heuristics"] = {{"one_pass", opt_str(rep.one_pass_cost)},
                       {"loss_contract", opt_str(rep.loss_contract_cost)},
                       {"ratio_greedy", opt_str(rep.ratio_greedy_cost)}};
    if (auto g = rep.gap_p()) j["gap_P"] = rat_str(*g);
    if (auto g = rep.gap_b()) j["gap_B"] = rat_str(*g);
    j["failures"] = rep.failures;
    j["notes"] = rep.notes;
    j["ok"] = rep.ok();
    return j.dump(2);
}

std::string trace_jsonl(const HeuristicTrace& tr) {
    std::string out;
    for (const IterationRecord& r : tr.steps) {
        json j;
        j["iteration"] = r.index;
        j["component"] = r.component;
        j["gain"] = r.gain.str();
        j["drop"] = r.drop.str();
        j["mtst_before"] = r.mtst_before.str();
        j["mtst_after"] = r.mtst_after.str();
        if (tr.algorithm == "loss-contract") j["loss"] = rat_str(r.loss_cost);
        out += j.dump() + "\n";
    }
    json fin;
    fin["algorithm"] = tr.algorithm;
    fin["final_tree_reduced"] = tr.final_tree_reduced.str();
    fin["final_tree_base"] = rat_str(tr.final_tree_base);
    fin["algo_cost"] = rat_str(tr.algo_cost);
    fin["contractions"] = tr.steps.size();
    out += fin.dump() + "\n";
    return out;
}

std::string ratio_greedy_json(const RatioGreedyResult& rg) {
    json j;
    j["picks"] = rg.picked.size();
    j["tree_cost"] = rat_str(rg.tree_cost);
    json dual = json::array();
    for (const auto& [p, y] : rg.dual.entries)
        dual.push_back({{"partition", partition_str(p)}, {"y", y.str()}});
    j["dual"] = dual;
    return j.dump(2);
}

} // namespace steiner
