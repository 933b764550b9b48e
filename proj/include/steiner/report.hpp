#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steiner/builders.hpp"
#include "steiner/heuristics.hpp"
#include "steiner/oracle.hpp"
#include "steiner/structure.hpp"

namespace steiner {

struct VerifyOptions {
    bool solve_bidirected = true;
    bool run_heuristics = true;
    bool run_exact_oracle = true;
    bool check_root_independence = false;  // observation only, never a failure
    int partition_cap = kDefaultPartitionLpCap;
    int bidirected_cap = kDefaultBidirectedCap;
};

/// Everything the invariant suite knows about one instance.  `failures`
/// lists every falsified invariant; an empty list means the instance passed.
struct InstanceReport {
    std::string name;
    InstanceClass cls = InstanceClass::General;
    int num_vertices = 0, num_terminals = 0, num_components = 0;

    Rat mtst_cost;
    std::optional<Rat> opt_p, opt_p2, opt_s, opt_d, opt_b;
    std::optional<Rat> lift_value;
    std::optional<Rat> opt_integral;

    int support_p = 0;
    bool sparsity_ok = false;
    bool chain_unique = false;
    bool tight_closure_ok = false;
    bool hyper_equal = false;          // P = P' = S = D
    bool ordering_ok = false;          // D >= B
    bool qb_equal = false;             // D = B on quasibipartite instances
    bool lift_ok = false;
    bool gainless = false;
    bool kruskal_feasible = false;
    bool gainless_matches_kruskal = false;
    bool gainless_lp_equals_mtst = true;   // vacuous unless gainless
    std::optional<Rat> one_pass_cost, loss_contract_cost, ratio_greedy_cost;
    bool sandwich_ok = false;          // mtst >= OPT(P), mtst <= 2 OPT(P)
    bool oracle_ok = false;            // OPT >= OPT(P), OPT <= sqrt3 OPT(P), decomposition feasible

    std::vector<std::string> failures;
    std::vector<std::string> notes;

    bool ok() const { return failures.empty(); }
    std::optional<Rat> gap_p() const;  // OPT_integral / OPT(P)
    std::optional<Rat> gap_b() const;  // OPT_integral / OPT(B)
};

/// Runs the full invariant suite on one (pre-closure) instance.
InstanceReport verify_instance(const Instance& pre, const VerifyOptions& opt = {},
                               const std::string& name = "instance");

/// JSON rendering with every value as an exact fraction string.
std::string report_json(const InstanceReport& rep);

/// Heuristic trace rendering, one JSON object per line.
std::string trace_jsonl(const HeuristicTrace& tr);
std::string ratio_greedy_json(const RatioGreedyResult& rg);

} // namespace steiner
