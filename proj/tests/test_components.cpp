#include <doctest.h>

#include "oracles.hpp"

using namespace steiner;
using namespace oracle_test;

namespace {
Instance closed_star(int k = 3) { return metric_closure(star_instance(k)); }
} // namespace

TEST_CASE("family sizes: all subsets of at least two terminals") {
    CHECK(enumerate_full_components(closed_star(3)).comps.size() == 4);
    CHECK(enumerate_full_components(metric_closure(star_instance(4))).comps.size() == 11);
    // colex order of the terminal masks
    ComponentFamily fam = enumerate_full_components(closed_star(3));
    std::vector<TermSet> masks;
    for (auto& fc : fam.comps) masks.push_back(fc.terms);
    CHECK(masks == std::vector<TermSet>{0b011, 0b101, 0b110, 0b111});
    SUBCASE("max_size restricts the family") {
        CHECK(enumerate_full_components(closed_star(4), 2).comps.size() == 6);
    }
}

TEST_CASE("minimum witnesses on the star") {
    Instance closed = closed_star(3);
    ComponentFamily fam = enumerate_full_components(closed);
    const FullComponent* triple = fam.find(0b111);
    REQUIRE(triple);
    CHECK(triple->cost == Rat(3));
    CHECK(triple->edge_ids.size() == 3);  // the three spokes
    CHECK(*brute_full_component(closed, {0, 1, 2}) == Rat(3));

    const FullComponent* pair = fam.find(0b011);
    REQUIRE(pair);
    CHECK(pair->cost == Rat(2));
    // tie against the two-spoke path broken toward the single direct edge
    CHECK(pair->edge_ids.size() == 1);
    CHECK(*brute_full_component(closed, {0, 1}) == Rat(2));
}

TEST_CASE("witnesses match brute force on random instances") {
    for (int i = 0; i < 8; ++i) {
        RandomSpec spec;
        spec.seed = 900 + i;
        spec.num_vertices = 5;
        spec.num_terminals = 3;
        spec.cls = i % 2 ? InstanceClass::General : InstanceClass::Quasibipartite;
        Instance closed = metric_closure(random_instance(spec));
        ComponentFamily fam = enumerate_full_components(closed);
        TerminalIndex ti = terminal_index(closed);
        for (const FullComponent& fc : fam.comps) {
            auto brute = brute_full_component(closed, ti.vertices_of_mask(fc.terms));
            REQUIRE(brute.has_value());
            CHECK(fc.cost == *brute);
        }
    }
}

TEST_CASE("no terminal subset is infeasible after metric closure") {
    Instance closed = metric_closure(star_instance(4));
    ComponentFamily fam = enumerate_full_components(closed);
    CHECK(fam.comps.size() == 11);  // every K materialized
}

TEST_CASE("loss of the star components") {
    Instance closed = closed_star(3);
    ComponentFamily fam = enumerate_full_components(closed);
    SUBCASE("pairs have empty loss") {
        LossSet ls = loss(closed, *fam.find(0b011));
        CHECK(ls.edge_ids.empty());
        CHECK(ls.cost == Rat(0));
    }
    SUBCASE("the triple loses one spoke") {
        const FullComponent* triple = fam.find(0b111);
        LossSet ls = loss(closed, *triple);
        CHECK(ls.cost == Rat(1));
        CHECK(ls.edge_ids.size() == 1);
        CHECK(ls.cost == brute_loss(closed, *triple));
        CHECK(Rat(2) * ls.cost <= triple->cost);
    }
}

TEST_CASE("loss with unequal spokes picks the cheapest and stays below half") {
    std::vector<std::tuple<int, int, long, long>> edges{{0, 3, 1, 1}, {1, 3, 2, 1}, {2, 3, 3, 1}};
    Instance closed = metric_closure(make_instance(4, edges, {0, 1, 2}));
    ComponentFamily fam = enumerate_full_components(closed);
    const FullComponent* triple = fam.find(0b111);
    REQUIRE(triple);
    CHECK(triple->cost == Rat(6));
    LossSet ls = loss(closed, *triple);
    CHECK(ls.cost == Rat(1));
    CHECK(ls.cost == brute_loss(closed, *triple));
}

TEST_CASE("loss never exceeds half the component cost on random instances") {
    for (int i = 0; i < 10; ++i) {
        RandomSpec spec;
        spec.seed = 1500 + i;
        spec.num_vertices = 6 + i % 3;
        spec.num_terminals = 3 + i % 3;
        Instance closed = metric_closure(random_instance(spec));
        for (const FullComponent& fc : enumerate_full_components(closed).comps) {
            LossSet ls = loss(closed, fc);  // throws if the bound fails
            CHECK(Rat(2) * ls.cost <= fc.cost);
        }
    }
}

TEST_CASE("drop and gain on the star") {
    Instance closed = closed_star(3);
    ComponentFamily fam = enumerate_full_components(closed);
    const FullComponent& triple = *fam.find(0b111);
    CostFunction base;
    Tree t = mtst(closed, base);
    std::vector<int> id(closed.n);
    std::iota(id.begin(), id.end(), 0);

    SUBCASE("under the original costs: drop 4, gain 1") {
        CHECK(drop_value(closed, base, t, {0, 1, 2}) == Quad(4));
        CHECK(gain_value(closed, base, t, closed, triple, id) == Quad(1));
    }
    SUBCASE("under costs divided by sqrt(2): drop 2*sqrt(2), gain below zero") {
        CostFunction cf = reduce_terminal_costs(closed, Quad::sqrt_of(2));
        Tree tr = mtst(closed, cf);
        Quad d = drop_value(closed, cf, tr, {0, 1, 2});
        CHECK(d == Quad(2) * Quad::sqrt_of(2));
        Quad g = gain_value(closed, cf, tr, closed, triple, id);
        CHECK(g == Quad(2) * Quad::sqrt_of(2) - Quad(3));
        CHECK(g.sign() < 0);
    }
    SUBCASE("contracting a tree edge's endpoints saves exactly that edge") {
        const FullComponent& pair = *fam.find(0b011);
        Quad d = drop_value(closed, base, t, {0, 1});
        CHECK(d == Quad(2));
        CHECK(gain_value(closed, base, t, closed, pair, id) == Quad(0));
    }
}

TEST_CASE("gainless classification of the three worked cost functions") {
    Instance closed = closed_star(3);
    ComponentFamily fam = enumerate_full_components(closed);
    SUBCASE("original star costs are not gainless; the triple is the offender") {
        GainlessReport rep = is_gainless(closed, CostFunction{}, fam);
        CHECK(!rep.gainless);
        CHECK(rep.worst == 0b111);
        CHECK(rep.worst_gain == Quad(1));
    }
    SUBCASE("costs divided by sqrt(2) are gainless") {
        CostFunction cf = reduce_terminal_costs(closed, Quad::sqrt_of(2));
        CHECK(is_gainless(closed, cf, fam).gainless);
    }
    SUBCASE("instances without Steiner vertices are always gainless") {
        Instance flat = metric_closure(make_instance(
            3, {{0, 1, 1, 1}, {1, 2, 2, 1}, {0, 2, 2, 1}}, {0, 1, 2}));
        ComponentFamily f2 = enumerate_full_components(flat);
        CHECK(is_gainless(flat, CostFunction{}, f2).gainless);
    }
}

TEST_CASE("witness validation rejects broken structures") {
    Instance closed = closed_star(3);
    TerminalIndex ti = terminal_index(closed);
    FullComponent bad;
    bad.terms = 0b111;
    bad.cost = Rat(4);
    // path through a terminal: 0-1 and 1-2 (terminal 1 internal)
    for (int ei = 0; ei < (int)closed.edges.size(); ++ei) {
        const Edge& e = closed.edges[ei];
        if ((e.u == 0 && e.v == 1) || (e.u == 1 && e.v == 2)) bad.edge_ids.push_back(ei);
    }
    CHECK_THROWS_AS(validate_witness(closed, ti, bad), InvariantViolation);
}
