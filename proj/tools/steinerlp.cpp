// Command-line driver: solve the relaxations, run the invariant suite, run
// the certified heuristics, generate corpora, and report integrality gaps.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "steiner/io.hpp"
#include "steiner/report.hpp"

namespace fs = std::filesystem;
using namespace steiner;
using nlohmann::json;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write " + out_path);
    out << text;
}

std::vector<std::string> collect_instances(const std::vector<std::string>& paths,
                                           const std::string& corpus) {
    std::vector<std::string> files = paths;
    if (!corpus.empty()) {
        for (const auto& entry : fs::recursive_directory_iterator(corpus))
            if (entry.is_regular_file() && entry.path().extension() == ".stp")
                files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
    }
    if (files.empty()) throw UsageError("no instance files given");
    return files;
}

InstanceClass parse_class(const std::string& text) {
    if (text == "general") return InstanceClass::General;
    if (text == "quasibipartite") return InstanceClass::Quasibipartite;
    if (text == "uniform" || text == "uniformly_quasibipartite")
        return InstanceClass::UniformlyQuasibipartite;
    throw UsageError("unknown instance class '" + text + "'");
}

// One worker thread per instance slot; results land at their input index so
// reports merge in deterministic instance order regardless of scheduling.
std::vector<InstanceReport> verify_many(const std::vector<std::string>& files,
                                        const VerifyOptions& opt, int jobs) {
    std::vector<InstanceReport> reports(files.size());
    if (jobs <= 0) jobs = (int)std::thread::hardware_concurrency();
    jobs = std::max(1, std::min<int>(jobs, (int)files.size()));
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (size_t i = next++; i < files.size(); i = next++) {
                try {
                    reports[i] = verify_instance(load_instance(files[i]), opt, files[i]);
                } catch (const Error& e) {
                    reports[i].name = files[i];
                    reports[i].failures.push_back(e.what());
                }
            }
        });
    for (auto& t : pool) t.join();
    return reports;
}

std::string csv_summary(const std::vector<InstanceReport>& reports) {
    std::string out =
        "instance,class,vertices,terminals,mtst,opt_P,opt_B,opt_integral,gap_P,gap_B,"
        "one_pass,loss_contract,ok\n";
    auto cell = [](const std::optional<Rat>& v) { return v ? rat_str(*v) : std::string(); };
    for (const InstanceReport& r : reports) {
        out += r.name + ',' + to_string(r.cls) + ',' + std::to_string(r.num_vertices) + ',' +
               std::to_string(r.num_terminals) + ',' + rat_str(r.mtst_cost) + ',' +
               cell(r.opt_p) + ',' + cell(r.opt_b) + ',' + cell(r.opt_integral) + ',' +
               cell(r.gap_p()) + ',' + cell(r.gap_b()) + ',' + cell(r.one_pass_cost) + ',' +
               cell(r.loss_contract_cost) + ',' + (r.ok() ? "1" : "0") + '\n';
    }
    return out;
}

struct SolveArgs {
    std::vector<std::string> files;
    std::vector<std::string> lp;
    std::string out;
    std::string dump_dir;
    int max_r = kDefaultPartitionLpCap;
    int max_v = kDefaultBidirectedCap;
};

int run_solve(const SolveArgs& a) {
    json out = json::array();
    for (const std::string& path : a.files) {
        Instance pre = load_instance(path);
        Instance closed = metric_closure(pre);
        ComponentFamily fam = enumerate_full_components(closed);
        json j;
        j["instance"] = path;
        j["class"] = to_string(classify(pre));
        auto want = [&](const char* tag) {
            if (a.lp.empty()) return true;
            for (const std::string& t : a.lp)
                if (t == "all" || t == tag) return true;
            return false;
        };
        auto dump = [&](const LinearProgram<Rat>& lp, const std::string& tag) {
            if (a.dump_dir.empty()) return;
            fs::create_directories(a.dump_dir);
            dump_lp(lp, (fs::path(a.dump_dir) /
                         (fs::path(path).stem().string() + "." + tag + ".lp")).string());
        };
        if (want("P")) {
            BuiltPartitionLp b = build_partition_lp(fam, a.max_r);
            LpSolution<Rat> s = solve_exact(b.lp);
            j["P"] = {{"value", rat_str(s.objective)}, {"support", s.support.size()}};
            dump(b.lp, "P");
        }
        if (want("P2")) {
            BuiltPartitionLp b = build_bounded_partition_lp(fam, a.max_r);
            j["P2"] = {{"value", rat_str(solve_exact(b.lp, false).objective)}};
            dump(b.lp, "P2");
        }
        if (want("S")) {
            BuiltSubtourLp b = build_subtour_lp(fam);
            j["S"] = {{"value", rat_str(solve_exact(b.lp, false).objective)}};
            dump(b.lp, "S");
        }
        if (want("D")) {
            BuiltDirectedLp b = build_directed_hyper_lp(fam);
            j["D"] = {{"value", rat_str(solve_exact(b.lp, false).objective)}};
            dump(b.lp, "D");
        }
        if (want("B")) {
            BuiltBidirectedLp b = build_bidirected_lp(pre, a.max_v);
            j["B"] = {{"value", rat_str(solve_exact(b.lp, false).objective)}};
            dump(b.lp, "B");
        }
        out.push_back(std::move(j));
    }
    write_output(a.out, out.dump(2));
    return 0;
}

struct VerifyArgs {
    std::vector<std::string> files;
    std::string corpus;
    std::string out;
    std::string csv;
    bool no_bidirected = false;
    bool no_oracle = false;
    bool no_heuristics = false;
    bool root_check = false;
    int jobs = 0;
    int max_r = kDefaultPartitionLpCap;
    int max_v = kDefaultBidirectedCap;
};

int run_verify(const VerifyArgs& a) {
    VerifyOptions opt;
    opt.solve_bidirected = !a.no_bidirected;
    opt.run_exact_oracle = !a.no_oracle;
    opt.run_heuristics = !a.no_heuristics;
    opt.check_root_independence = a.root_check;
    opt.partition_cap = a.max_r;
    opt.bidirected_cap = a.max_v;
    std::vector<InstanceReport> reports =
        verify_many(collect_instances(a.files, a.corpus), opt, a.jobs);
    json out = json::array();
    bool all_ok = true;
    for (const InstanceReport& rep : reports) {
        all_ok &= rep.ok();
        out.push_back(json::parse(report_json(rep)));
        std::cerr << (rep.ok() ? "ok   " : "FAIL ") << rep.name << "\n";
    }
    write_output(a.out, out.dump(2));
    if (!a.csv.empty()) write_output(a.csv, csv_summary(reports));
    return all_ok ? 0 : kExitInvariant;
}

int run_components(const std::vector<std::string>& files, const std::string& out_path) {
    std::string out;
    for (const std::string& path : files) {
        Instance closed = metric_closure(load_instance(path));
        ComponentFamily fam = enumerate_full_components(closed);
        for (const FullComponent& fc : fam.comps) {
            out += "K={";
            bool first = true;
            for (TermSet b = fc.terms; b; b &= b - 1) {
                if (!first) out += ',';
                out += std::to_string(fam.terms.vertex_of[__builtin_ctz(b)]);
                first = false;
            }
            out += "} cost=" + rat_str(fc.cost) + " witness=[";
            for (size_t i = 0; i < fc.edge_ids.size(); ++i) {
                const Edge& e = closed.edges[fc.edge_ids[i]];
                out += (i ? "," : "") + ("(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
            }
            out += "] loss=" + rat_str(loss(closed, fc).cost) + "\n";
        }
    }
    write_output(out_path, out);
    return 0;
}

struct HeuristicArgs {
    std::vector<std::string> files;
    std::string alg = "one-pass";
    std::string alpha = "sqrt3";
    std::string scan = "colex";
    std::uint64_t seed = 0;
    std::string out;
};

int run_heuristic(const HeuristicArgs& a) {
    std::string out_text;
    for (const std::string& path : a.files) {
        Instance pre = load_instance(path);
        Instance closed = metric_closure(pre);
        ComponentFamily fam = enumerate_full_components(closed);
        Rat opt_p = solve_exact(build_partition_lp(fam).lp, false).objective;
        ScanOrder order;
        order.shuffle = a.scan == "shuffle";
        order.seed = a.seed;
        if (a.scan != "shuffle" && a.scan != "colex")
            throw UsageError("scan order must be colex or shuffle");
        if (a.alg == "one-pass") {
            out_text += trace_jsonl(one_pass_reduced(closed, fam, order, opt_p));
        } else if (a.alg == "loss-contract") {
            out_text += trace_jsonl(
                loss_contracting(closed, fam, quad_parse(a.alpha), order, opt_p));
        } else if (a.alg == "ratio-greedy") {
            out_text += ratio_greedy_json(ratio_greedy(pre, closed, fam, opt_p)) + "\n";
        } else {
            throw UsageError("unknown algorithm '" + a.alg + "'");
        }
    }
    write_output(a.out, out_text);
    return 0;
}

struct GenArgs {
    std::uint64_t seed = 1;
    int count = 1;
    int num_v = 8;
    int num_r = 4;
    long cost_min = 1, cost_max = 20;
    std::string cls = "general";
    std::string out = "corpus";
};

int run_gen(const GenArgs& a) {
    RandomSpec spec;
    spec.num_vertices = a.num_v;
    spec.num_terminals = a.num_r;
    spec.cost_min = a.cost_min;
    spec.cost_max = a.cost_max;
    spec.cls = parse_class(a.cls);
    fs::path dir = fs::path(a.out) / a.cls;
    fs::create_directories(dir);
    for (int i = 0; i < a.count; ++i) {
        spec.seed = a.seed + (std::uint64_t)i;
        save_instance(random_instance(spec),
                      (dir / (std::to_string(spec.seed) + ".stp")).string());
    }
    std::cout << "wrote " << a.count << " instance(s) under " << dir.string() << "\n";
    return 0;
}

struct GapArgs {
    std::vector<std::string> files;
    std::string corpus;
    std::string out;
    std::string csv;
    int jobs = 0;
    int max_v = kDefaultBidirectedCap;
};

int run_gap(const GapArgs& a) {
    VerifyOptions opt;
    opt.bidirected_cap = a.max_v;
    std::vector<InstanceReport> reports =
        verify_many(collect_instances(a.files, a.corpus), opt, a.jobs);
    json out = json::array();
    bool all_ok = true;
    std::optional<Rat> max_gap_b;
    std::vector<std::string> strict;
    for (const InstanceReport& rep : reports) {
        const std::string& path = rep.name;
        all_ok &= rep.ok();
        json j;
        j["instance"] = path;
        j["opt_integral"] = rep.opt_integral ? json(rat_str(*rep.opt_integral)) : json(nullptr);
        j["opt_P"] = rep.opt_p ? json(rat_str(*rep.opt_p)) : json(nullptr);
        j["opt_B"] = rep.opt_b ? json(rat_str(*rep.opt_b)) : json(nullptr);
        if (auto g = rep.gap_p()) j["gap_P"] = rat_str(*g);
        if (auto g = rep.gap_b()) {
            j["gap_B"] = rat_str(*g);
            if (!max_gap_b || *g > *max_gap_b) max_gap_b = *g;
        }
        if (rep.opt_d && rep.opt_b && *rep.opt_d > *rep.opt_b) strict.push_back(path);
        j["heuristics"] = {{"one_pass", rep.one_pass_cost ? json(rat_str(*rep.one_pass_cost))
                                                          : json(nullptr)},
                           {"loss_contract", rep.loss_contract_cost
                                                 ? json(rat_str(*rep.loss_contract_cost))
                                                 : json(nullptr)}};
        j["ok"] = rep.ok();
        out.push_back(std::move(j));
    }
    json summary;
    summary["max_observed_gap_B"] = max_gap_b ? json(rat_str(*max_gap_b)) : json(nullptr);
    summary["known_lower_bound_gap_B"] = "8/7";
    summary["instances_with_D_above_B"] = strict;
    out.push_back(std::move(summary));
    write_output(a.out, out.dump(2));
    if (!a.csv.empty()) write_output(a.csv, csv_summary(reports));
    return all_ok ? 0 : kExitInvariant;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-rational toolkit for Steiner tree LP relaxations"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "build and solve relaxations on instances");
    solve->add_option("files", sa.files, "instance files")->required();
    solve->add_option("--lp", sa.lp, "any of P, P2, S, D, B, or all (repeatable)")
        ->check(CLI::IsMember({"P", "P2", "S", "D", "B", "all"}));
    solve->add_option("--out", sa.out, "output path (default stdout)");
    solve->add_option("--dump-lp", sa.dump_dir, "write LP-format dumps into this directory");
    solve->add_option("--max-r", sa.max_r, "partition LP terminal cap");
    solve->add_option("--max-v", sa.max_v, "bidirected LP vertex cap");

    std::vector<std::string> comp_files;
    std::string comp_out;
    auto* comps = app.add_subcommand("components", "dump the full component family");
    comps->add_option("files", comp_files, "instance files")->required();
    comps->add_option("--out", comp_out, "output path (default stdout)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the full invariant suite");
    verify->add_option("files", va.files, "instance files");
    verify->add_option("--corpus", va.corpus, "directory of .stp files");
    verify->add_option("--out", va.out, "output path (default stdout)");
    verify->add_flag("--no-bidirected", va.no_bidirected, "skip the bidirected LP");
    verify->add_flag("--no-oracle", va.no_oracle, "skip the exact Steiner tree");
    verify->add_flag("--no-heuristics", va.no_heuristics, "skip heuristic runs");
    verify->add_flag("--root-check", va.root_check, "probe root independence of the bidirected LP");
    verify->add_option("--csv", va.csv, "also write a one-row-per-instance CSV summary");
    verify->add_option("--jobs", va.jobs, "worker threads for corpora (default: hardware)");
    verify->add_option("--max-r", va.max_r, "partition LP terminal cap");
    verify->add_option("--max-v", va.max_v, "bidirected LP vertex cap");

    HeuristicArgs ha;
    auto* heur = app.add_subcommand("heuristic", "run a certified approximation algorithm");
    heur->add_option("files", ha.files, "instance files")->required();
    heur->add_option("--alg", ha.alg, "ratio-greedy, one-pass or loss-contract")
        ->check(CLI::IsMember({"ratio-greedy", "one-pass", "loss-contract"}));
    heur->add_option("--alpha", ha.alpha, "loss-contract threshold: p/q or sqrt3");
    heur->add_option("--scan-order", ha.scan, "colex or shuffle");
    heur->add_option("--seed", ha.seed, "shuffle seed");
    heur->add_option("--out", ha.out, "output path (default stdout)");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a seeded corpus");
    gen->add_option("--seed", ga.seed, "base seed")->required();
    gen->add_option("--count", ga.count, "number of instances");
    gen->add_option("--max-v", ga.num_v, "vertices per instance");
    gen->add_option("--max-r", ga.num_r, "terminals per instance");
    gen->add_option("--cost-min", ga.cost_min, "minimum integer edge cost");
    gen->add_option("--cost-max", ga.cost_max, "maximum integer edge cost");
    gen->add_option("--class", ga.cls, "general, quasibipartite or uniform");
    gen->add_option("--out", ga.out, "corpus directory");

    GapArgs gp;
    auto* gap = app.add_subcommand("gap", "integrality gap reports");
    gap->add_option("files", gp.files, "instance files");
    gap->add_option("--corpus", gp.corpus, "directory of .stp files");
    gap->add_option("--out", gp.out, "output path (default stdout)");
    gap->add_option("--csv", gp.csv, "also write a one-row-per-instance CSV summary");
    gap->add_option("--jobs", gp.jobs, "worker threads for corpora (default: hardware)");
    gap->add_option("--max-v", gp.max_v, "bidirected LP vertex cap");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return run_solve(sa);
        if (comps->parsed()) return run_components(comp_files, comp_out);
        if (verify->parsed()) return run_verify(va);
        if (heur->parsed()) return run_heuristic(ha);
        if (gen->parsed()) return run_gen(ga);
        if (gap->parsed()) return run_gap(gp);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitUsage;
}
