#include "steiner/structure.hpp"

#include <algorithm>

namespace steiner {

Rat partition_residual(const ComponentFamily& fam, const std::vector<Rat>& x, const Partition& p) {
    return Rat(p.rank() - 1) - partition_row_activity(fam, x, p);
}

std::vector<Partition> tight_partitions(const ComponentFamily& fam, const std::vector<Rat>& x,
                                        const BuiltPartitionLp& built) {
    std::vector<Partition> tight;
    for (const Partition& p : built.partitions)
        if (partition_residual(fam, x, p) == 0) tight.push_back(p);
    return tight;
}

ClosureCheck verify_meet_join_closure(const ComponentFamily& fam, const std::vector<Rat>& x,
                                      const std::vector<Partition>& tight) {
    ClosureCheck out;
    for (size_t i = 0; i < tight.size(); ++i)
        for (size_t j = i + 1; j < tight.size(); ++j) {
            if (!crosses(tight[i], tight[j])) continue;
            ++out.crossing_pairs;
            Partition mt = meet(tight[i], tight[j]);
            Partition jn = join(tight[i], tight[j]);
            if (partition_residual(fam, x, mt) != 0 ||
                (jn.rank() >= 2 && partition_residual(fam, x, jn) != 0))
                out.violations.emplace_back(tight[i], tight[j]);
        }
    return out;
}

ChainReport extract_chain_and_verify(const ComponentFamily& fam, const std::vector<Rat>& x,
                                     const std::vector<Partition>& tight) {
    ChainReport rep;
    std::vector<Partition> candidates;
    for (const Partition& p : tight)
        if (p.rank() >= 2) candidates.push_back(p);
    std::sort(candidates.begin(), candidates.end(), [](const Partition& a, const Partition& b) {
        if (a.rank() != b.rank()) return a.rank() > b.rank();
        return a.blocks < b.blocks;
    });
    for (const Partition& p : candidates) {
        bool comparable = true;
        for (const Partition& q : rep.chain)
            if (crosses(p, q)) {
                comparable = false;
                break;
            }
        if (comparable) rep.chain.push_back(p);
    }

    std::vector<int> support;
    for (int j = 0; j < (int)x.size(); ++j)
        if (x[j] != 0) support.push_back(j);
    rep.support_size = (int)support.size();

    lp_detail::Echelon<Rat> ech((int)support.size());
    for (const Partition& p : rep.chain) {
        std::vector<Rat> row;
        row.reserve(support.size());
        for (int j : support) row.emplace_back(rank_contribution(fam.comps[j].terms, p));
        ech.add(std::move(row), 0);
    }
    rep.chain_system_rank = ech.rank();
    rep.unique = rep.chain_system_rank == rep.support_size;
    rep.sparse = rep.support_size <= fam.terms.r() - 1;
    return rep;
}

std::vector<Rat> shrink(const ComponentFamily& fam, const std::vector<Rat>& x, TermSet k,
                        TermSet k_sub, const Rat& delta) {
    if ((k_sub & ~k) || set_size(k_sub) != set_size(k) - 1)
        throw UsageError("shrink target must drop exactly one terminal of K");
    const FullComponent* from = fam.find(k);
    if (!from) throw UsageError("shrink source component not in the family");
    int from_idx = (int)(from - fam.comps.data());
    if (delta <= 0 || delta > x[from_idx]) throw UsageError("shrink amount out of range");
    std::vector<Rat> out = x;
    out[from_idx] -= delta;
    if (set_size(k_sub) >= 2) {
        const FullComponent* to = fam.find(k_sub);
        if (!to) throw UsageError("shrink target component not in the family");
        out[to - fam.comps.data()] += delta;
    }
    // |K'| = 1: singleton placeholders carry no cost and no constraints.
    return out;
}

bool is_laminar(const SetDual& z) {
    std::vector<std::uint32_t> sets;
    for (const auto& [u, v] : z.z)
        if (v != 0) sets.push_back(u);
    for (size_t i = 0; i < sets.size(); ++i)
        for (size_t j = i + 1; j < sets.size(); ++j) {
            std::uint32_t a = sets[i], b = sets[j], c = a & b;
            if (c != 0 && c != a && c != b) return false;
        }
    return true;
}

void verify_directed_dual(const ComponentFamily& fam, int root_index, const SetDual& z) {
    TermSet root_bit = TermSet(1) << root_index;
    for (const auto& [u, v] : z.z) {
        if (v < 0) throw InvariantViolation("negative dual value");
        if (v == 0) continue;
        if (u == 0 || (u & root_bit)) throw InvariantViolation("dual supported on an invalid set");
    }
    for (const FullComponent& fc : fam.comps) {
        for (TermSet b = fc.terms; b; b &= b - 1) {
            int head = __builtin_ctz(b);
            Rat load(0);
            for (const auto& [u, v] : z.z)
                if ((u & fc.terms) && !((u >> head) & 1)) load += v;
            if (load > fc.cost)
                throw InvariantViolation("directed dual overloads component row");
        }
    }
}

SetDual laminarize_dual(const ComponentFamily& fam, int root_index, SetDual z) {
    auto positive_sets = [&]() {
        std::vector<std::uint32_t> s;
        for (const auto& [u, v] : z.z)
            if (v > 0) s.push_back(u);
        return s;
    };
    while (true) {
        std::vector<std::uint32_t> sets = positive_sets();
        bool found = false;
        for (size_t i = 0; i < sets.size() && !found; ++i)
            for (size_t j = i + 1; j < sets.size() && !found; ++j) {
                std::uint32_t a = sets[i], b = sets[j], both = a & b;
                if (both == 0 || both == a || both == b) continue;
                Rat delta = std::min(z.z[a], z.z[b]);
                z.z[a] -= delta;
                z.z[b] -= delta;
                z.z[both] += delta;
                z.z[a | b] += delta;
                found = true;
            }
        if (!found) break;
    }
    for (auto it = z.z.begin(); it != z.z.end();)
        it = it->second == 0 ? z.z.erase(it) : std::next(it);
    verify_directed_dual(fam, root_index, z);
    if (!is_laminar(z)) throw InvariantViolation("uncrossing left a crossing pair");
    return z;
}

namespace {

std::vector<std::vector<int>> adjacency(const Instance& inst) {
    std::vector<std::vector<int>> adj(inst.n);
    for (const Edge& e : inst.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

Rat edge_base_cost(const Instance& inst, int u, int v) {
    const Rat* best = nullptr;
    for (const Edge& e : inst.edges)
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u))
            if (!best || e.cost < *best) best = &e.cost;
    if (!best) throw UsageError("no such edge");
    return *best;
}

} // namespace

LiftedDual lift_dual(const Instance& pre, const Instance& closed, const ComponentFamily& fam,
                     const SetDual& laminar_z) {
    if (classify(pre) == InstanceClass::General)
        throw UsageError("dual lifting requires a quasibipartite instance");
    if (!is_laminar(laminar_z)) throw UsageError("dual lifting requires a laminar input");
    if (fam.inst != &closed) throw UsageError("component family built on a different instance");
    if (pre.n > 31) throw UsageError("dual lifting capped at 31 vertices");
    TerminalIndex ti = terminal_index(closed);

    // Rebase terminal-index masks to vertex masks of the pre-closure graph.
    LiftedDual out;
    out.value = laminar_z.value();
    for (const auto& [u, val] : laminar_z.z) {
        if (val == 0) continue;
        std::uint32_t vm = 0;
        for (TermSet b = u; b; b &= b - 1) vm |= 1u << ti.vertex_of[__builtin_ctz(b)];
        out.z.z[vm] += val;
    }
    std::uint32_t term_mask = 0;
    for (int v = 0; v < pre.n; ++v)
        if (pre.terminal[v]) term_mask |= 1u << v;

    // Projection snapshot: total mass per terminal footprint must not move.
    std::map<std::uint32_t, Rat> projection;
    for (const auto& [u, val] : out.z.z) projection[u & term_mask] += val;

    auto adj = adjacency(pre);
    for (int v = 0; v < pre.n; ++v) {
        if (pre.terminal[v]) continue;
        std::uint32_t vbit = 1u << v;
        std::uint32_t gamma = 0;
        for (int u : adj[v]) gamma |= 1u << u;

        std::vector<std::uint32_t> sets;
        std::vector<Rat> zval;
        for (const auto& [u, val] : out.z.z)
            if (val > 0 && (u & gamma)) {
                sets.push_back(u);
                zval.push_back(val);
            }
        if (sets.empty()) {
            ++out.steiner_processed;
            continue;
        }

        // Transfer amounts x_U, one per affected set:
        //   x_U <= z_U;  residual load on arc (u,v) fits;  new load on (v,u) fits.
        LinearProgram<Rat> sys;
        sys.sense = Sense::Min;
        for (size_t i = 0; i < sets.size(); ++i) sys.add_col("t" + std::to_string(i), Rat(1));
        for (size_t i = 0; i < sets.size(); ++i)
            sys.add_row("cap" + std::to_string(i), {{(int)i, Rat(1)}}, Rel::Le, zval[i]);
        for (int u : adj[v]) {
            Rat cuv = edge_base_cost(pre, u, v);
            Rat load_u(0);
            std::vector<std::pair<int, Rat>> into, outof;
            for (size_t i = 0; i < sets.size(); ++i) {
                if ((sets[i] >> u) & 1) {
                    load_u += zval[i];
                    into.emplace_back((int)i, Rat(1));
                } else {
                    outof.emplace_back((int)i, Rat(1));
                }
            }
            // sum_{U containing u} (z_U - x_U) <= c_uv
            sys.add_row("drain" + std::to_string(u), std::move(into), Rel::Ge, Rat(load_u - cuv));
            // sum_{U not containing u} x_U <= c_uv
            sys.add_row("fill" + std::to_string(u), std::move(outof), Rel::Le, cuv);
        }
        LpSolution<Rat> sol;
        try {
            sol = solve_exact(sys, false);
        } catch (const LpInfeasible&) {
            throw InvariantViolation("dual lifting transfer system infeasible at Steiner vertex " +
                                     std::to_string(v));
        }
        for (size_t i = 0; i < sets.size(); ++i) {
            if (sol.primal[i] == 0) continue;
            out.z.z[sets[i]] -= sol.primal[i];
            out.z.z[sets[i] | vbit] += sol.primal[i];
        }
        for (auto it = out.z.z.begin(); it != out.z.z.end();)
            it = it->second == 0 ? out.z.z.erase(it) : std::next(it);

        std::map<std::uint32_t, Rat> now;
        for (const auto& [u, val] : out.z.z) now[u & term_mask] += val;
        if (now != projection)
            throw InvariantViolation("lifting broke the terminal projection invariant");
        ++out.steiner_processed;
    }
    if (verify_bidirected_dual(pre, out.z) != out.value)
        throw InvariantViolation("lifted dual changed objective value");
    return out;
}

Rat verify_bidirected_dual(const Instance& pre, const SetDual& z) {
    std::uint32_t root_bit = 1u << pre.root;
    std::uint32_t term_mask = 0;
    for (int v = 0; v < pre.n; ++v)
        if (pre.terminal[v]) term_mask |= 1u << v;
    for (const auto& [u, val] : z.z) {
        if (val < 0) throw InvariantViolation("negative dual value");
        if (val == 0) continue;
        if ((u & root_bit) || !(u & term_mask))
            throw InvariantViolation("bidirected dual supported on an invalid vertex set");
    }
    for (const Edge& e : pre.edges) {
        for (auto [tail, head] : {std::pair(e.u, e.v), std::pair(e.v, e.u)}) {
            Rat load(0);
            for (const auto& [u, val] : z.z)
                if (((u >> tail) & 1) && !((u >> head) & 1)) load += val;
            if (load > e.cost)
                throw InvariantViolation("bidirected dual overloads arc (" + std::to_string(tail) +
                                         "," + std::to_string(head) + ")");
        }
    }
    return z.value();
}

} // namespace steiner
