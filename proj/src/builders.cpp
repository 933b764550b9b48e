#include "steiner/builders.hpp"

namespace steiner {

namespace {

std::string comp_name(const FullComponent& fc) {
    std::string s = "x{";
    bool first = true;
    for (TermSet b = fc.terms; b; b &= b - 1) {
        if (!first) s += ',';
        s += std::to_string(__builtin_ctz(b));
        first = false;
    }
    return s + "}";
}

std::string set_name(TermSet s) {
    std::string out = "{";
    bool first = true;
    for (TermSet b = s; b; b &= b - 1) {
        if (!first) out += ',';
        out += std::to_string(__builtin_ctz(b));
        first = false;
    }
    return out + "}";
}

} // namespace

BuiltPartitionLp build_partition_lp(const ComponentFamily& fam, int cap) {
    int r = fam.terms.r();
    if (r > cap)
        throw UsageError("partition LP capped at " + std::to_string(cap) +
                         " terminals; lower the terminal count");
    BuiltPartitionLp out;
    LinearProgram<Rat>& lp = out.lp;
    lp.sense = Sense::Min;
    for (const FullComponent& fc : fam.comps) lp.add_col(comp_name(fc), fc.cost);
    enumerate_partitions(r, [&](const Partition& p) {
        if (p.rank() < 2) return;
        std::vector<std::pair<int, Rat>> terms;
        for (int j = 0; j < (int)fam.comps.size(); ++j) {
            int rc = rank_contribution(fam.comps[j].terms, p);
            if (rc) terms.emplace_back(j, Rat(rc));
        }
        lp.add_row("pi" + partition_str(p), std::move(terms), Rel::Ge, Rat(p.rank() - 1));
        out.partitions.push_back(p);
    }, cap + 1);
    return out;
}

BuiltPartitionLp build_bounded_partition_lp(const ComponentFamily& fam, int cap) {
    BuiltPartitionLp out = build_partition_lp(fam, cap);
    int r = fam.terms.r();
    std::vector<std::pair<int, Rat>> terms;
    for (int j = 0; j < (int)fam.comps.size(); ++j)
        terms.emplace_back(j, Rat(fam.comps[j].size() - 1));
    out.lp.add_row("hyperedge-count", std::move(terms), Rel::Eq, Rat(r - 1));
    out.bounded = true;
    return out;
}

BuiltSubtourLp build_subtour_lp(const ComponentFamily& fam) {
    int r = fam.terms.r();
    BuiltSubtourLp out;
    LinearProgram<Rat>& lp = out.lp;
    lp.sense = Sense::Min;
    for (const FullComponent& fc : fam.comps) lp.add_col(comp_name(fc), fc.cost);

    std::vector<std::pair<int, Rat>> rank_terms;
    for (int j = 0; j < (int)fam.comps.size(); ++j)
        rank_terms.emplace_back(j, Rat(fam.comps[j].size() - 1));
    lp.add_row("rank", std::move(rank_terms), Rel::Eq, Rat(r - 1));

    TermSet full = full_set(r);
    for (TermSet s = 1; s < full; ++s) {  // proper subsets
        if (set_size(s) < 2) continue;    // rho(S) = 0 rows are vacuous
        std::vector<std::pair<int, Rat>> terms;
        for (int j = 0; j < (int)fam.comps.size(); ++j) {
            int inter = set_size(fam.comps[j].terms & s);
            if (inter >= 2) terms.emplace_back(j, Rat(inter - 1));
        }
        lp.add_row("sub" + set_name(s), std::move(terms), Rel::Le, Rat(set_size(s) - 1));
        out.subsets.push_back(s);
    }
    return out;
}

BuiltDirectedLp build_directed_hyper_lp(const ComponentFamily& fam) {
    int r = fam.terms.r();
    BuiltDirectedLp out;
    out.root_index = fam.terms.index_of.at(fam.inst->root);
    if (out.root_index < 0) throw UsageError("root is not a terminal");
    LinearProgram<Rat>& lp = out.lp;
    lp.sense = Sense::Min;
    for (int j = 0; j < (int)fam.comps.size(); ++j) {
        const FullComponent& fc = fam.comps[j];
        for (TermSet b = fc.terms; b; b &= b - 1) {
            int head = __builtin_ctz(b);
            out.col_component.emplace_back(j, head);
            lp.add_col(comp_name(fc) + "^" + std::to_string(head), fc.cost);
        }
    }
    TermSet full = full_set(r);
    TermSet root_bit = TermSet(1) << out.root_index;
    for (TermSet u = 1; u <= full; ++u) {
        if (u & root_bit) continue;
        std::vector<std::pair<int, Rat>> terms;
        for (int c = 0; c < (int)out.col_component.size(); ++c) {
            auto [j, head] = out.col_component[c];
            TermSet k = fam.comps[j].terms;
            bool leaves_u = (k & u) && !((u >> head) & 1);
            if (leaves_u) terms.emplace_back(c, Rat(1));
        }
        lp.add_row("cut" + set_name(u), std::move(terms), Rel::Ge, Rat(1));
        out.valid_sets.push_back(u);
    }
    return out;
}

BuiltBidirectedLp build_bidirected_lp(const Instance& inst, int cap) {
    if (inst.n > cap)
        throw UsageError("bidirected cut LP capped at " + std::to_string(cap) +
                         " vertices; lower the vertex count");
    BuiltBidirectedLp out;
    LinearProgram<Rat>& lp = out.lp;
    lp.sense = Sense::Min;
    for (const Edge& e : inst.edges) {
        out.arcs.emplace_back(e.u, e.v);
        lp.add_col("a(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")", e.cost);
        out.arcs.emplace_back(e.v, e.u);
        lp.add_col("a(" + std::to_string(e.v) + "," + std::to_string(e.u) + ")", e.cost);
    }
    std::uint32_t full = inst.n >= 32 ? ~0u : (1u << inst.n) - 1;
    std::uint32_t root_bit = 1u << inst.root;
    std::uint32_t term_mask = 0;
    for (int v = 0; v < inst.n; ++v)
        if (inst.terminal[v]) term_mask |= 1u << v;
    for (std::uint32_t u = 1; u <= full; ++u) {
        if ((u & root_bit) || !(u & term_mask)) continue;
        std::vector<std::pair<int, Rat>> terms;
        for (int c = 0; c < (int)out.arcs.size(); ++c) {
            auto [tail, head] = out.arcs[c];
            if (((u >> tail) & 1) && !((u >> head) & 1)) terms.emplace_back(c, Rat(1));
        }
        lp.add_row("cutV" + std::to_string(u), std::move(terms), Rel::Ge, Rat(1));
        out.valid_sets.push_back(u);
    }
    return out;
}

Rat partition_row_activity(const ComponentFamily& fam, const std::vector<Rat>& x,
                           const Partition& p) {
    Rat s(0);
    for (int j = 0; j < (int)fam.comps.size(); ++j) {
        int rc = rank_contribution(fam.comps[j].terms, p);
        if (rc && x[j] != 0) s += Rat(rc) * x[j];
    }
    return s;
}

} // namespace steiner
