#include <doctest.h>

#include "oracles.hpp"
#include "steiner/builders.hpp"
#include "steiner/heuristics.hpp"

using namespace steiner;
using namespace oracle_test;

namespace {

struct Setup {
    Instance pre, closed;
    ComponentFamily fam;
    Rat opt_p;
};

Setup setup(const Instance& pre) {
    Setup s;
    s.pre = pre;
    s.closed = metric_closure(pre);
    s.fam = enumerate_full_components(s.closed);
    s.opt_p = solve_exact(build_partition_lp(s.fam).lp, false).objective;
    return s;
}

std::vector<int> identity(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_CASE("greedy worst-case constant is 73/60, attained at five terminals") {
    auto [value, arg] = ratio_greedy_worst_constant(64);
    CHECK(value == Rat(73, 60));
    CHECK(arg == 5);
    // exact evaluation for every k: (k-1+H(k-1))/k never exceeds 73/60
    Rat h(0);
    for (int k = 2; k <= 64; ++k) {
        h += Rat(1, k - 1);
        CHECK((Rat(k - 1) + h) / Rat(k) <= Rat(73, 60));
    }
}

TEST_CASE("ratio greedy on the star picks the triple") {
    Setup s = setup(star_instance(3));
    RatioGreedyResult rg = ratio_greedy(s.pre, s.closed, s.fam, s.opt_p);
    REQUIRE(rg.picked.size() == 1);
    CHECK(s.fam.comps[rg.picked[0]].terms == 0b111);
    CHECK(rg.tree_cost == Rat(3));
    CHECK(rg.theta[0] == Quad(Rat(3, 2)));  // beats the pair ratio 2
    CHECK(rg.dual.objective() == Quad(3));
}

TEST_CASE("ratio greedy with two terminals returns the edge and its trivial dual") {
    Setup s = setup(make_instance(2, {{0, 1, 5, 1}}, {0, 1}));
    RatioGreedyResult rg = ratio_greedy(s.pre, s.closed, s.fam, s.opt_p);
    CHECK(rg.tree_cost == Rat(5));
    REQUIRE(rg.dual.entries.size() == 1);
    CHECK(rg.dual.entries[0].first == finest(2));
    CHECK(rg.dual.entries[0].second == Quad(5));
    CHECK(Rat(60) * rg.tree_cost <= Rat(73) * s.opt_p);
}

TEST_CASE("ratio greedy refuses non-uniform instances") {
    Setup s = setup(make_instance(4, {{0, 3, 1, 1}, {1, 3, 1, 1}, {2, 3, 2, 1}}, {0, 1, 2}));
    CHECK_THROWS_AS(ratio_greedy(s.pre, s.closed, s.fam, s.opt_p), UsageError);
}

TEST_CASE("ratio greedy certificate on random uniform instances") {
    for (int i = 0; i < 10; ++i) {
        RandomSpec spec;
        spec.seed = 7100 + i;
        spec.num_vertices = 5 + i % 5;
        spec.num_terminals = 2 + i % 5;
        spec.cls = InstanceClass::UniformlyQuasibipartite;
        Setup s = setup(random_instance(spec));
        RatioGreedyResult rg = ratio_greedy(s.pre, s.closed, s.fam, s.opt_p);
        CHECK(Rat(60) * rg.tree_cost <= Rat(73) * s.opt_p);
        for (size_t k = 1; k < rg.theta.size(); ++k) CHECK(rg.theta[k - 1] <= rg.theta[k]);
    }
}

TEST_CASE("one-pass leaves the star alone") {
    Setup s = setup(star_instance(3));
    HeuristicTrace tr = one_pass_reduced(s.closed, s.fam, {}, s.opt_p);
    CHECK(tr.steps.empty());  // gain 2*sqrt(2)-3 < 0
    CHECK(tr.algo_cost == Rat(4));
    // 4 <= (2*sqrt(2)-1)*3 since 6*sqrt(2) >= 7
    CHECK(Quad(tr.algo_cost) <= (Quad(2) * Quad::sqrt_of(2) - Quad(1)) * Quad(3));
}

TEST_CASE("one-pass contracts a component once the star is wide enough") {
    // For a uniform k-spoke star the reduced gain is positive iff
    // sqrt(2)(k-1) > k, i.e. k >= 4; scaling all costs never changes that.
    Setup s3 = setup(star_instance(3, 1, 10));
    CHECK(one_pass_reduced(s3.closed, s3.fam, {}, s3.opt_p).steps.empty());

    Setup s = setup(star_instance(4, 1, 10));
    HeuristicTrace tr = one_pass_reduced(s.closed, s.fam, {}, s.opt_p, true);
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].component == 0b1111);
    CHECK(tr.steps[0].gain.sign() > 0);
    CHECK(tr.algo_cost == Rat(2, 5));
    SUBCASE("per-component gains never increase along the run") {
        for (size_t step = 1; step < tr.gain_series.size(); ++step)
            for (size_t j = 0; j < tr.gain_series[step].size(); ++j)
                CHECK(tr.gain_series[step][j] <= tr.gain_series[step - 1][j]);
    }
}

TEST_CASE("one-pass without Steiner vertices returns the terminal tree") {
    Setup s = setup(make_instance(3, {{0, 1, 1, 1}, {1, 2, 2, 1}, {0, 2, 2, 1}}, {0, 1, 2}));
    HeuristicTrace tr = one_pass_reduced(s.closed, s.fam, {}, s.opt_p);
    CHECK(tr.steps.empty());
    CHECK(tr.algo_cost == Rat(3));
    CHECK(tr.algo_cost == s.opt_p);
}

TEST_CASE("one-pass guarantee across scan orders") {
    for (int i = 0; i < 6; ++i) {
        RandomSpec spec;
        spec.seed = 7300 + i;
        spec.num_vertices = 6 + i % 4;
        spec.num_terminals = 3 + i % 4;
        spec.cls = static_cast<InstanceClass>(i % 3);
        Setup s = setup(random_instance(spec));
        for (std::uint64_t run = 0; run < 5; ++run) {
            ScanOrder order;
            order.shuffle = run > 0;
            order.seed = run;
            HeuristicTrace tr = one_pass_reduced(s.closed, s.fam, order, s.opt_p, true);
            for (size_t step = 1; step < tr.gain_series.size(); ++step)
                for (size_t j = 0; j < tr.gain_series[step].size(); ++j)
                    CHECK(tr.gain_series[step][j] <= tr.gain_series[step - 1][j]);
        }
    }
}

TEST_CASE("loss contraction on the star fires and lands on the optimum") {
    Setup s = setup(star_instance(3));
    // gain 1 exceeds (sqrt(3)-1)*loss = sqrt(3)-1 because 2 > sqrt(3)
    HeuristicTrace tr = loss_contracting(s.closed, s.fam, Quad::sqrt_of(3), {}, s.opt_p);
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].component == 0b111);
    CHECK(tr.steps[0].loss_cost == Rat(1));
    CHECK(tr.algo_cost == Rat(3));
    CHECK(Quad(tr.algo_cost) <= Quad::sqrt_of(3) * Quad(s.opt_p));
}

TEST_CASE("loss contraction skips zero-loss components") {
    // only pairs exist: nothing to contract, output is the terminal tree
    Setup s = setup(make_instance(3, {{0, 1, 1, 1}, {1, 2, 2, 1}, {0, 2, 2, 1}}, {0, 1, 2}));
    HeuristicTrace tr = loss_contracting(s.closed, s.fam, Quad::sqrt_of(3), {}, s.opt_p);
    CHECK(tr.steps.empty());
    CHECK(tr.algo_cost == Rat(3));
}

TEST_CASE("an unreachable threshold reduces the run to the terminal tree") {
    Setup s = setup(star_instance(3));
    HeuristicTrace tr = loss_contracting(s.closed, s.fam, Quad(1000), {}, std::nullopt);
    CHECK(tr.steps.empty());
    CHECK(tr.algo_cost == Rat(4));
    CHECK(Quad(tr.algo_cost) <= Quad(2) * Quad(s.opt_p));
}

TEST_CASE("rational alpha is accepted and asserted at its own factor") {
    Setup s = setup(star_instance(3));
    HeuristicTrace tr = loss_contracting(s.closed, s.fam, Quad(Rat(2)), {}, s.opt_p);
    // factor (alpha^2+3)/(2 alpha) = 7/4
    CHECK(Quad(tr.algo_cost) <= Quad(Rat(7, 4)) * Quad(s.opt_p));
}

TEST_CASE("Kruskal dual on the star under both cost functions") {
    Setup s = setup(star_instance(3));
    std::vector<int> id = identity(s.closed.n);
    SUBCASE("original costs: the triple row is violated by exactly the gain") {
        KruskalDualResult kd = kruskal_dual(s.closed, CostFunction{}, s.fam, id);
        CHECK(!kd.feasible);
        REQUIRE(kd.violations.size() == 1);
        CHECK(kd.violations[0].first == 0b111);
        CHECK(kd.violations[0].second == Quad(1));  // load 4 vs cost 3
        CHECK(kd.dual.objective() == Quad(4));
    }
    SUBCASE("costs divided by sqrt(2): feasible, so the LP meets the tree") {
        CostFunction cf = reduce_terminal_costs(s.closed, Quad::sqrt_of(2));
        KruskalDualResult kd = kruskal_dual(s.closed, cf, s.fam, id);
        CHECK(kd.feasible);
        CHECK(kd.dual.objective() == Quad(2) * Quad::sqrt_of(2));
        // cross-check: the partition LP with reduced component costs agrees
        LinearProgram<Quad> lp;
        for (const FullComponent& fc : s.fam.comps)
            lp.add_col("x", component_cost(s.closed, cf, fc));
        BuiltPartitionLp shape = build_partition_lp(s.fam);
        for (size_t i = 0; i < shape.partitions.size(); ++i) {
            std::vector<std::pair<int, Quad>> terms;
            for (int j = 0; j < (int)s.fam.comps.size(); ++j) {
                int rc = rank_contribution(s.fam.comps[j].terms, shape.partitions[i]);
                if (rc) terms.emplace_back(j, Quad(rc));
            }
            lp.add_row("pi", std::move(terms), Rel::Ge, Quad(shape.partitions[i].rank() - 1));
        }
        CHECK(solve_exact(lp, false).objective == Quad(2) * Quad::sqrt_of(2));
    }
    SUBCASE("no Steiner vertices: always feasible, LP equals the tree") {
        Setup flat =
            setup(make_instance(3, {{0, 1, 1, 1}, {1, 2, 2, 1}, {0, 2, 2, 1}}, {0, 1, 2}));
        KruskalDualResult kd =
            kruskal_dual(flat.closed, CostFunction{}, flat.fam, identity(flat.closed.n));
        CHECK(kd.feasible);
        CHECK(kd.dual.objective() == Quad(flat.opt_p));
    }
}

TEST_CASE("Kruskal dual handles equal-cost merges with pruned zero durations") {
    Setup s = setup(make_instance(4, {{0, 1, 1, 1}, {1, 2, 1, 1}, {2, 3, 1, 1}}, {0, 1, 2, 3}));
    KruskalDualResult kd = kruskal_dual(s.closed, CostFunction{}, s.fam, identity(s.closed.n));
    REQUIRE(kd.dual.entries.size() == 1);  // all merges happen at cost one
    CHECK(kd.dual.entries[0].first == finest(4));
    CHECK(kd.dual.entries[0].second == Quad(1));
    CHECK(kd.dual.objective() == Quad(3));
    CHECK(kd.feasible);
}

TEST_CASE("guarantees hold for every scan order, outputs may differ") {
    for (int i = 0; i < 4; ++i) {
        RandomSpec spec;
        spec.seed = 7500 + i;
        spec.num_vertices = 7 + i % 3;
        spec.num_terminals = 4 + i % 2;
        spec.cls = static_cast<InstanceClass>(i % 3);
        Setup s = setup(random_instance(spec));
        for (std::uint64_t run = 0; run < 5; ++run) {
            ScanOrder order{run > 0, run};
            // both runs assert their bounds internally against opt_p
            one_pass_reduced(s.closed, s.fam, order, s.opt_p);
            HeuristicTrace lc =
                loss_contracting(s.closed, s.fam, Quad::sqrt_of(3), order, s.opt_p, true);
            for (size_t step = 1; step < lc.gain_series.size(); ++step)
                for (size_t j = 0; j < lc.gain_series[step].size(); ++j)
                    CHECK(lc.gain_series[step][j] <= lc.gain_series[step - 1][j]);
        }
    }
}

TEST_CASE("drop additivity along one-pass runs") {
    for (int i = 0; i < 5; ++i) {
        RandomSpec spec;
        spec.seed = 7700 + i;
        spec.num_vertices = 7;
        spec.num_terminals = 4;
        Setup s = setup(random_instance(spec));
        HeuristicTrace tr = one_pass_reduced(s.closed, s.fam, {}, s.opt_p);
        Quad total(0);
        for (const auto& step : tr.steps) total += step.drop;
        CHECK(total == tr.reduced_mtst_initial - tr.final_tree_reduced);
    }
}
