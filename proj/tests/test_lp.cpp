#include <doctest.h>

#include "oracles.hpp"
#include "steiner/structure.hpp"

#include <filesystem>
#include <fstream>

using namespace steiner;
using namespace oracle_test;

namespace {

struct Setup {
    Instance pre, closed;
    ComponentFamily fam;
};

Setup setup(const Instance& pre) {
    Setup s;
    s.pre = pre;
    s.closed = metric_closure(pre);
    s.fam = enumerate_full_components(s.closed);
    return s;
}

std::vector<int> identity(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_CASE("one-variable program solves by hand") {
    LinearProgram<Rat> lp;
    lp.add_col("x", Rat(1));
    lp.add_row("r", {{0, Rat(1)}}, Rel::Ge, Rat(1));
    LpSolution<Rat> s = solve_exact(lp);
    CHECK(s.primal[0] == Rat(1));
    CHECK(s.objective == Rat(1));
    CHECK(s.dual[0] == Rat(1));
}

TEST_CASE("builder shapes") {
    Setup s = setup(star_instance(3));
    SUBCASE("partition relaxation: four rows, four columns") {
        BuiltPartitionLp b = build_partition_lp(s.fam);
        CHECK(b.lp.num_rows() == 4);  // Bell(3) - 1
        CHECK(b.lp.num_cols() == 4);
        CHECK(b.partitions.size() == 4);
    }
    SUBCASE("two terminals force the single pair column") {
        Setup two = setup(make_instance(2, {{0, 1, 3, 1}}, {0, 1}));
        BuiltPartitionLp b = build_partition_lp(two.fam);
        CHECK(b.lp.num_rows() == 1);
        CHECK(b.lp.num_cols() == 1);
        LpSolution<Rat> sol = solve_exact(b.lp);
        CHECK(sol.primal[0] == Rat(1));
        BuiltPartitionLp b2 = build_bounded_partition_lp(two.fam);
        CHECK(solve_exact(b2.lp, false).primal[0] == Rat(1));
    }
    SUBCASE("subtour relaxation: rank equality plus the three pair rows") {
        BuiltSubtourLp b = build_subtour_lp(s.fam);
        CHECK(b.lp.num_rows() == 4);
        CHECK(b.subsets.size() == 3);
    }
    SUBCASE("directed relaxation: three valid sets, one column per head") {
        BuiltDirectedLp b = build_directed_hyper_lp(s.fam);
        CHECK(b.valid_sets.size() == 3);  // subsets avoiding the root
        CHECK(b.lp.num_cols() == 3 * 2 + 3);
    }
    SUBCASE("directed relaxation with two terminals: a single row") {
        Setup two = setup(make_instance(2, {{0, 1, 3, 1}, {0, 1, 4, 1}}, {0, 1}));
        BuiltDirectedLp b = build_directed_hyper_lp(two.fam);
        CHECK(b.lp.num_rows() == 1);
        LpSolution<Rat> sol = solve_exact(b.lp, false);
        CHECK(sol.objective == Rat(3));  // covered by the root-headed column
    }
    SUBCASE("bidirected relaxation respects its cap") {
        CHECK_THROWS_AS(build_bidirected_lp(s.pre, 3), UsageError);
        BuiltBidirectedLp b = build_bidirected_lp(s.pre);
        CHECK(b.lp.num_cols() == 2 * (int)s.pre.edges.size());
    }
}

TEST_CASE("all five relaxations meet at three on the star") {
    Setup s = setup(star_instance(3));
    LpSolution<Rat> p = solve_exact(build_partition_lp(s.fam).lp);
    CHECK(p.objective == Rat(3));
    CHECK(p.support.size() == 1);
    CHECK(s.fam.comps[p.support[0]].terms == 0b111);
    CHECK(solve_exact(build_bounded_partition_lp(s.fam).lp, false).objective == Rat(3));
    CHECK(solve_exact(build_subtour_lp(s.fam).lp, false).objective == Rat(3));
    CHECK(solve_exact(build_directed_hyper_lp(s.fam).lp, false).objective == Rat(3));
    CHECK(solve_exact(build_bidirected_lp(s.pre).lp, false).objective == Rat(3));
}

TEST_CASE("edmonds exactness with no Steiner vertices") {
    Setup s = setup(make_instance(2, {{0, 1, 7, 2}}, {0, 1}));
    CHECK(solve_exact(build_bidirected_lp(s.pre).lp, false).objective == Rat(7, 2));
}

TEST_CASE("hypergraphic relaxations agree on random instances") {
    for (int i = 0; i < 8; ++i) {
        RandomSpec spec;
        spec.seed = 4200 + i;
        spec.num_vertices = 6 + i % 4;
        spec.num_terminals = 3 + i % 3;
        spec.cls = static_cast<InstanceClass>(i % 3);
        Setup s = setup(random_instance(spec));
        Rat p = solve_exact(build_partition_lp(s.fam).lp, false).objective;
        CHECK(solve_exact(build_bounded_partition_lp(s.fam).lp, false).objective == p);
        CHECK(solve_exact(build_subtour_lp(s.fam).lp, false).objective == p);
        CHECK(solve_exact(build_directed_hyper_lp(s.fam).lp, false).objective == p);
    }
}

TEST_CASE("bounded-partition and subtour share their feasible region") {
    // optimize random objectives over each polytope, cross-substitute
    Setup s = setup(random_instance({.seed = 77, .num_vertices = 7, .num_terminals = 4}));
    BuiltPartitionLp p2 = build_bounded_partition_lp(s.fam);
    BuiltSubtourLp sub = build_subtour_lp(s.fam);
    std::uint64_t state = 99;
    auto next = [&]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return (long)((state >> 33) % 41) - 20;
    };
    for (int trial = 0; trial < 6; ++trial) {
        LinearProgram<Rat> a = p2.lp, b = sub.lp;
        for (int j = 0; j < a.num_cols(); ++j) a.obj[j] = b.obj[j] = Rat(next());
        // both polytopes are bounded: the equality row caps the total mass
        for (auto* lp : {&a, &b}) {
            LpSolution<Rat> v = solve_exact(*lp);
            for (const auto& other : {p2.lp, sub.lp})
                for (const auto& row : other.rows) {
                    Rat act = other.row_activity(row, v.primal);
                    if (row.rel == Rel::Ge) CHECK(act >= row.rhs);
                    if (row.rel == Rel::Le) CHECK(act <= row.rhs);
                    if (row.rel == Rel::Eq) CHECK(act == row.rhs);
                }
        }
    }
}

TEST_CASE("basic solutions are sparse and pinned by a tight chain") {
    for (int i = 0; i < 6; ++i) {
        RandomSpec spec;
        spec.seed = 5100 + i;
        spec.num_vertices = 6 + i % 4;
        spec.num_terminals = 3 + i % 4;
        Setup s = setup(random_instance(spec));
        BuiltPartitionLp b = build_partition_lp(s.fam);
        LpSolution<Rat> sol = solve_exact(b.lp);
        CHECK((int)sol.support.size() <= s.fam.terms.r() - 1);
        std::vector<Partition> tight = tight_partitions(s.fam, sol.primal, b);
        CHECK(verify_meet_join_closure(s.fam, sol.primal, tight).closed());
        ChainReport chain = extract_chain_and_verify(s.fam, sol.primal, tight);
        CHECK(chain.unique);
        CHECK(chain.sparse);
        for (size_t k = 1; k < chain.chain.size(); ++k)
            CHECK(refines(chain.chain[k - 1], chain.chain[k]));  // finest first
    }
}

TEST_CASE("two terminals: the chain is the singleton partition pair") {
    Setup s = setup(make_instance(2, {{0, 1, 1, 1}}, {0, 1}));
    BuiltPartitionLp b = build_partition_lp(s.fam);
    LpSolution<Rat> sol = solve_exact(b.lp);
    std::vector<Partition> tight = tight_partitions(s.fam, sol.primal, b);
    ChainReport chain = extract_chain_and_verify(s.fam, sol.primal, tight);
    CHECK(chain.chain.size() == 1);
    CHECK(chain.chain[0] == finest(2));
    CHECK(chain.support_size == 1);
    CHECK(chain.unique);
}

TEST_CASE("shrinking moves mass down the subset order") {
    Setup s = setup(star_instance(3));
    BuiltPartitionLp b = build_partition_lp(s.fam);
    LpSolution<Rat> sol = solve_exact(b.lp);
    TermSet k = 0b111;
    SUBCASE("full shrink zeroes the source") {
        auto x = shrink(s.fam, sol.primal, k, 0b011, sol.primal[3]);
        CHECK(x[3] == Rat(0));
        CHECK(x[0] == sol.primal[0] + sol.primal[3]);
    }
    SUBCASE("zero or oversized amounts are rejected") {
        CHECK_THROWS_AS(shrink(s.fam, sol.primal, k, 0b011, Rat(0)), UsageError);
        CHECK_THROWS_AS(shrink(s.fam, sol.primal, k, 0b011, sol.primal[3] + 1), UsageError);
        CHECK_THROWS_AS(shrink(s.fam, sol.primal, k, 0b001, Rat(1, 2)), UsageError);
    }
}

TEST_CASE("repeated shrinking reaches the bounded polytope") {
    // Feasible for the unbounded relaxation but overweight; shrinking drives
    // the hyperedge count to |R|-1 while preserving feasibility.
    Setup s = setup(star_instance(3));
    BuiltPartitionLp bp = build_partition_lp(s.fam);
    std::vector<Rat> x(s.fam.comps.size(), Rat(0));
    x[3] = Rat(1);               // the triple
    x[0] = x[1] = Rat(1, 2);     // extra mass on two pairs
    auto weight = [&]() {
        Rat w(0);
        for (size_t j = 0; j < x.size(); ++j) w += Rat(s.fam.comps[j].size() - 1) * x[j];
        return w;
    };
    REQUIRE(weight() == Rat(3));
    int guard = 0;
    while (weight() > Rat(s.fam.terms.r() - 1) && guard++ < 32) {
        // Find shrinkable mass: here any positive pair can shed to a singleton.
        bool done = false;
        for (size_t j = 0; j < x.size() && !done; ++j) {
            if (x[j] == 0 || s.fam.comps[j].size() != 2) continue;
            TermSet low = s.fam.comps[j].terms & (-s.fam.comps[j].terms);
            std::vector<Rat> cand = shrink(s.fam, x, s.fam.comps[j].terms, low, x[j]);
            bool feasible = true;
            for (const Partition& p : bp.partitions)
                feasible &= partition_row_activity(s.fam, cand, p) >= Rat(p.rank() - 1);
            if (feasible) {
                x = cand;
                done = true;
            }
        }
        if (!done) break;
    }
    CHECK(weight() == Rat(s.fam.terms.r() - 1));
    for (const Partition& p : bp.partitions)
        CHECK(partition_row_activity(s.fam, x, p) >= Rat(p.rank() - 1));
}

TEST_CASE("laminarization by hand") {
    Setup s = setup(star_instance(3));
    int root_index = 0;
    SUBCASE("already laminar input is unchanged") {
        SetDual z;  // nested sets {1} and {1,2}, values within every row budget
        z.z[0b010] = Rat(1);
        z.z[0b110] = Rat(1);
        SetDual out = laminarize_dual(s.fam, root_index, z);
        CHECK(out.z == z.z);
    }
    SUBCASE("one crossing pair uncrosses in a single step") {
        Setup s4 = setup(star_instance(4));
        SetDual w;
        w.z[0b0110] = Rat(1);
        w.z[0b1100] = Rat(1);
        SetDual out = laminarize_dual(s4.fam, 0, w);
        CHECK(is_laminar(out));
        CHECK(out.value() == Rat(2));
        CHECK(out.z.at(0b0100) == Rat(1));
        CHECK(out.z.at(0b1110) == Rat(1));
    }
}

TEST_CASE("laminarized optimal duals keep their value on random instances") {
    for (int i = 0; i < 6; ++i) {
        RandomSpec spec;
        spec.seed = 6200 + i;
        spec.num_vertices = 6 + i % 3;
        spec.num_terminals = 3 + i % 3;
        spec.cls = InstanceClass::Quasibipartite;
        Setup s = setup(random_instance(spec));
        BuiltDirectedLp d = build_directed_hyper_lp(s.fam);
        LpSolution<Rat> sol = solve_exact(d.lp, false);
        SetDual z;
        for (int r = 0; r < (int)d.valid_sets.size(); ++r)
            if (sol.dual[r] != 0) z.z[d.valid_sets[r]] += sol.dual[r];
        SetDual lam = laminarize_dual(s.fam, d.root_index, z);
        CHECK(is_laminar(lam));
        CHECK(lam.value() == sol.objective);
    }
}

TEST_CASE("dual lifting") {
    SUBCASE("no Steiner vertices: lifting is the identity") {
        Setup s = setup(make_instance(3, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 1}}, {0, 1, 2}));
        BuiltDirectedLp d = build_directed_hyper_lp(s.fam);
        LpSolution<Rat> sol = solve_exact(d.lp, false);
        SetDual z;
        for (int r = 0; r < (int)d.valid_sets.size(); ++r)
            if (sol.dual[r] != 0) z.z[d.valid_sets[r]] += sol.dual[r];
        SetDual lam = laminarize_dual(s.fam, d.root_index, z);
        LiftedDual lifted = lift_dual(s.pre, s.closed, s.fam, lam);
        CHECK(lifted.value == sol.objective);
        CHECK(lifted.steiner_processed == 0);
    }
    SUBCASE("star: lifting around the single Steiner center reaches value three") {
        Setup s = setup(star_instance(3));
        BuiltDirectedLp d = build_directed_hyper_lp(s.fam);
        LpSolution<Rat> sol = solve_exact(d.lp, false);
        REQUIRE(sol.objective == Rat(3));
        SetDual z;
        for (int r = 0; r < (int)d.valid_sets.size(); ++r)
            if (sol.dual[r] != 0) z.z[d.valid_sets[r]] += sol.dual[r];
        LiftedDual lifted = lift_dual(s.pre, s.closed, s.fam, laminarize_dual(s.fam, d.root_index, z));
        CHECK(lifted.value == Rat(3));
        CHECK(verify_bidirected_dual(s.pre, lifted.z) == Rat(3));
        CHECK(solve_exact(build_bidirected_lp(s.pre).lp, false).objective == Rat(3));
    }
    SUBCASE("non-quasibipartite instances are refused") {
        Setup s = setup(make_instance(4, {{0, 2, 1, 1}, {2, 3, 1, 1}, {3, 1, 1, 1}}, {0, 1}));
        CHECK_THROWS_AS(lift_dual(s.pre, s.closed, s.fam, SetDual{}), UsageError);
    }
}

TEST_CASE("bidirected optimum is invariant under metric closure") {
    for (int i = 0; i < 4; ++i) {
        RandomSpec spec;
        spec.seed = 6400 + i;
        spec.num_vertices = 6;
        spec.num_terminals = 3;
        Instance pre = random_instance(spec);
        Rat on_pre = solve_exact(build_bidirected_lp(pre).lp, false).objective;
        Rat on_closed = solve_exact(build_bidirected_lp(metric_closure(pre)).lp, false).objective;
        CHECK(on_pre == on_closed);
    }
}

TEST_CASE("LP dumps flag lossy decimals") {
    LinearProgram<Rat> lp;
    lp.add_col("x", Rat(1, 3));
    lp.add_row("r", {{0, Rat(1)}}, Rel::Ge, Rat(1));
    std::string path =
        (std::filesystem::temp_directory_path() / "steinerlp-lossy-test.lp").string();
    dump_lp(lp, path);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first.find("exact: no") != std::string::npos);
    std::filesystem::remove(path);
}
