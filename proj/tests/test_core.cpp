#include <doctest.h>

#include "oracles.hpp"
#include "steiner/io.hpp"

#include <sstream>

using namespace steiner;
using namespace oracle_test;

TEST_CASE("metric closure of a path adds the shortcut") {
    Instance path = make_instance(3, {{0, 1, 1, 1}, {1, 2, 1, 1}}, {0, 2});
    Instance closed = metric_closure(path);
    CHECK(closed.edges.size() == 3);
    auto d = shortest_paths(closed);
    CHECK(d[0][2] == Rat(2));
    CHECK(d[0][1] == Rat(1));
}

TEST_CASE("metric closure is idempotent and cost-monotone") {
    Instance star = star_instance(3);
    Instance c1 = metric_closure(star);
    Instance c2 = metric_closure(c1);
    REQUIRE(c1.edges.size() == c2.edges.size());
    for (size_t i = 0; i < c1.edges.size(); ++i) CHECK(c1.edges[i].cost == c2.edges[i].cost);
    auto pre = shortest_paths(star);
    for (const Edge& e : c1.edges) CHECK(e.cost <= pre[e.u][e.v]);
}

TEST_CASE("star closure has terminal-terminal distance two") {
    Instance closed = metric_closure(star_instance(3));
    auto d = shortest_paths(closed);
    CHECK(d[0][1] == Rat(2));
    CHECK(d[0][2] == Rat(2));
    CHECK(d[1][2] == Rat(2));
}

TEST_CASE("disconnected input is rejected") {
    Instance g = make_instance(4, {{0, 1, 1, 1}}, {0, 2});
    CHECK_THROWS_WITH_AS(metric_closure(g), doctest::Contains("not connected"), UsageError);
}

TEST_CASE("instance classification") {
    CHECK(classify(star_instance(3)) == InstanceClass::UniformlyQuasibipartite);
    // two adjacent Steiner vertices
    Instance ss = make_instance(4, {{0, 2, 1, 1}, {2, 3, 1, 1}, {3, 1, 1, 1}}, {0, 1});
    CHECK(classify(ss) == InstanceClass::General);
    // Steiner center with unequal spokes
    Instance uneven =
        make_instance(4, {{0, 3, 1, 1}, {1, 3, 1, 1}, {2, 3, 2, 1}}, {0, 1, 2});
    CHECK(classify(uneven) == InstanceClass::Quasibipartite);
}

TEST_CASE("mtst matches spanning-tree enumeration") {
    Instance closed = metric_closure(star_instance(3));
    Tree t = mtst(closed, CostFunction{});
    CHECK(t.cost == Quad(4));
    CHECK(t.cost.as_rational() == *brute_mtst(closed));

    SUBCASE("two terminals take the single edge") {
        Instance two = make_instance(2, {{0, 1, 5, 2}}, {0, 1});
        CHECK(mtst(two, CostFunction{}).cost == Quad(Rat(5, 2)));
    }
    SUBCASE("unit path of four terminals") {
        Instance p = metric_closure(make_instance(
            4, {{0, 1, 1, 1}, {1, 2, 1, 1}, {2, 3, 1, 1}}, {0, 1, 2, 3}));
        Tree pt = mtst(p, CostFunction{});
        CHECK(pt.cost == Quad(3));
        CHECK(pt.cost.as_rational() == *brute_mtst(p));
    }
}

TEST_CASE("mtst on random instances agrees with enumeration") {
    for (int i = 0; i < 12; ++i) {
        RandomSpec spec;
        spec.seed = 400 + i;
        spec.num_vertices = 5 + i % 3;
        spec.num_terminals = 2 + i % 4;
        Instance closed = metric_closure(random_instance(spec));
        CHECK(mtst(closed, CostFunction{}).cost.as_rational() == *brute_mtst(closed));
    }
}

TEST_CASE("contraction merges classes and keeps cheapest parallels") {
    Instance closed = metric_closure(star_instance(3));
    SUBCASE("contracting all terminals leaves one terminal and mtst zero") {
        Contraction c = contract_vertices(closed, CostFunction{}, {0, 1, 2});
        CHECK(c.inst.num_terminals() == 1);
        CHECK(mtst(c.inst, CostFunction{}).cost == Quad(0));
    }
    SUBCASE("contracting nothing is the identity") {
        Contraction c = contract_vertices(closed, CostFunction{}, {0});
        CHECK(c.inst.n == closed.n);
        CHECK(c.inst.edges.size() == closed.edges.size());
    }
    SUBCASE("loss-edge contraction merges a Steiner vertex into a terminal class") {
        ComponentFamily fam = enumerate_full_components(closed);
        const FullComponent* triple = fam.find(0b111);
        REQUIRE(triple);
        LossSet ls = loss(closed, *triple);
        REQUIRE(ls.edge_ids.size() == 1);
        Contraction c = contract_edges(closed, CostFunction{}, ls.edge_ids);
        CHECK(c.inst.num_terminals() == closed.num_terminals());  // Steiner absorbed
        CHECK(c.inst.n == closed.n - 1);
    }
    SUBCASE("terminal count drops by the rank contribution") {
        Contraction c = contract_vertices(closed, CostFunction{}, {0, 1});
        CHECK(c.inst.num_terminals() == closed.num_terminals() - 1);
    }
    SUBCASE("root follows its merged class") {
        Contraction c = contract_vertices(closed, CostFunction{}, {closed.root, 1});
        CHECK(c.inst.terminal[c.inst.root]);
        CHECK(c.vertex_map[closed.root] == c.inst.root);
    }
}

TEST_CASE("reduced costs scale exactly the terminal-terminal edges") {
    Instance closed = metric_closure(star_instance(3));
    CostFunction cf = reduce_terminal_costs(closed, Quad::sqrt_of(2));
    for (int ei = 0; ei < (int)closed.edges.size(); ++ei) {
        const Edge& e = closed.edges[ei];
        if (closed.terminal[e.u] && closed.terminal[e.v])
            CHECK(cf(closed, ei) == Quad(e.cost) / Quad::sqrt_of(2));
        else
            CHECK(cf(closed, ei) == Quad(e.cost));
    }
    // cost 2 between terminals becomes sqrt(2)
    CHECK(cf(closed, 0) * cf(closed, 0) == Quad(2));

    SUBCASE("divisor (1+sqrt3)/2 on a terminal edge of cost 2") {
        Quad div = (Quad(1) + Quad::sqrt_of(3)) / Quad(2);
        CostFunction cg = reduce_terminal_costs(closed, div);
        CHECK(cg(closed, 0) == Quad(4) / (Quad(1) + Quad::sqrt_of(3)));
    }
    SUBCASE("divisor must exceed one") {
        CHECK_THROWS_AS(reduce_terminal_costs(closed, Quad(1)), UsageError);
    }
}

TEST_CASE("instance round-trips through the text format") {
    Instance star = star_instance(3);
    std::string text = format_instance(star);
    std::istringstream in(text);
    Instance back = parse_instance(in);
    CHECK(back.n == star.n);
    CHECK(back.root == star.root);
    CHECK(back.edges.size() == star.edges.size());
    CHECK(format_instance(back) == text);
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream bad("steiner 3 1 2\ne 0 7 1\nterminals 0 1\n");
    CHECK_THROWS_WITH_AS(parse_instance(bad, "f"), doctest::Contains("f:2"), UsageError);
    std::istringstream dup("steiner 3 1 2\ne 0 1 1\nterminals 0 0\n");
    CHECK_THROWS_WITH_AS(parse_instance(dup, "f"), doctest::Contains("twice"), UsageError);
}
