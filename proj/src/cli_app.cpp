#include "ncbcast/cli_app.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

namespace ncbcast {

namespace {

struct CommonOpts {
    double lambda = -1.0;
    double rho = -1.0;
    double mu = 0.5;
    std::uint64_t slots = 100000;
    std::uint64_t seed = 1;
    std::string out = "ncbcast";
    std::string format = "json";
    std::string assert_level = "monitor";
    bool no_drain = false;
    std::uint64_t warmup = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool slots_required) {
    cmd->add_option("--lambda", o.lambda, "arrival probability per slot");
    cmd->add_option("--rho", o.rho, "load factor lambda/mu (alternative to --lambda)");
    cmd->add_option("--mu", o.mu, "delivery probability per receiver per slot")
        ->check(CLI::Range(0.0, 1.0));
    auto* slots = cmd->add_option("--slots", o.slots, "arrival-phase slots");
    if (slots_required) slots->required();
    cmd->add_option("--out", o.out, "output file prefix");
    cmd->add_option("--format", o.format, "stats report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--assert-level", o.assert_level, "invariant checking level")
        ->check(CLI::IsMember({"off", "monitor", "strict"}));
    cmd->add_flag("--no-drain", o.no_drain, "stop at the last arrival slot without draining");
    cmd->add_option("--warmup", o.warmup, "exclude slots/arrivals up to this slot from stats");
}

AssertLevel parse_level(const std::string& s) {
    if (s == "off") return AssertLevel::Off;
    if (s == "strict") return AssertLevel::Strict;
    return AssertLevel::Monitor;
}

// Exactly one of lambda/rho must be set; the other is derived through mu.
void resolve_load(CommonOpts& o) {
    bool has_lambda = o.lambda >= 0.0;
    bool has_rho = o.rho >= 0.0;
    if (has_lambda == has_rho) {
        throw CLI::ValidationError("exactly one of --lambda and --rho is required");
    }
    if (has_rho) {
        o.lambda = o.rho * o.mu;
    } else {
        o.rho = o.mu > 0.0 ? o.lambda / o.mu : 0.0;
    }
    if (o.rho >= 1.0) {
        std::cerr << "warning: rho = " << format_double(o.rho)
                  << " >= 1, queue is unstable\n";
    }
}

SimConfig make_config(const CommonOpts& o) {
    SimConfig cfg;
    cfg.lambda = o.lambda;
    cfg.mu = o.mu;
    cfg.slots = o.slots;
    cfg.seed = o.seed;
    cfg.drain = !o.no_drain;
    cfg.warmup = o.warmup;
    cfg.assert_level = parse_level(o.assert_level);
    return cfg;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    body(os);
}

int cmd_run(const CommonOpts& o, const std::string& mode) {
    SimConfig cfg = make_config(o);
    cfg.mode = mode == "arq" ? SimMode::SingleRxArq : SimMode::ThreeRxCoded;

    RunResult result = run(cfg);
    StatsReport stats;
    if (!result.packets.empty()) {
        stats = summarize(result);
    } else {
        stats.slots_run = result.slots_run;
        stats.receivers = cfg.mode == SimMode::SingleRxArq ? 1 : 3;
    }

    write_file(o.out + "_trace.csv", [&](std::ostream& os) { write_trace_csv(os, result); });
    write_file(o.out + "_packets.csv",
               [&](std::ostream& os) { write_packets_csv(os, result); });
    if (o.format == "json") {
        write_file(o.out + "_report.json",
                   [&](std::ostream& os) { os << report_json(result, stats); });
    } else {
        write_file(o.out + "_report.csv",
                   [&](std::ostream& os) { os << report_csv(result, stats); });
    }

    std::cout << "slots=" << result.slots_run << " packets=" << result.packets.size()
              << " mean_delay_avg=" << format_double(stats.mean_delay_avg)
              << " mean_queue=" << format_double(stats.mean_queue)
              << " hard_violations=" << result.violations.hard_total()
              << " conjecture_both_mixed=" << result.violations.conjecture_both_mixed << "\n";
    return 0;
}

StatsReport default_point_runner(double rho, std::uint64_t seed, const SweepSpec& spec) {
    SimConfig cfg;
    cfg.lambda = rho * spec.mu;
    cfg.mu = spec.mu;
    cfg.slots = spec.slots;
    cfg.seed = seed;
    cfg.drain = spec.drain;
    cfg.warmup = spec.warmup;
    cfg.assert_level = spec.assert_level;
    cfg.record_trace = false;
    return summarize(run(cfg));
}

int cmd_sweep(const CommonOpts& o, SweepSpec spec) {
    spec.mu = o.mu;
    spec.slots = o.slots;
    spec.drain = !o.no_drain;
    spec.warmup = o.warmup;
    spec.assert_level = parse_level(o.assert_level);

    SweepOutcome outcome = run_sweep(spec);
    write_file(o.out + "_sweep.csv",
               [&](std::ostream& os) { write_sweep_csv(os, outcome.rows, outcome.slope); });

    for (const auto& p : outcome.points) {
        std::cout << "rho=" << format_double(p.rho) << " x=" << format_double(p.x)
                  << " mean_delay_avg=" << format_double(p.delay) << "\n";
    }
    std::cout << "slope=" << format_double(outcome.slope) << "\n";
    return 0;
}

int cmd_validate(const CommonOpts& o, const std::vector<std::uint64_t>& seeds) {
    SimConfig base = make_config(o);
    base.assert_level = AssertLevel::Strict;  // hard invariants always fatal here
    base.record_trace = false;

    std::cout << "seed,slots_run,innovation,support_bound,two_undecoded,leader_decode,"
                 "seen_rank,engine_fatal,conjecture_both_mixed,status\n";
    ViolationCounters total;
    std::uint64_t engine_fatal_total = 0;
    bool failed = false;
    for (std::uint64_t seed : seeds) {
        SimConfig cfg = base;
        cfg.seed = seed;
        ViolationCounters c;
        std::uint64_t slots_run = 0;
        std::uint64_t engine_fatal = 0;
        std::string status = "ok";
        try {
            RunResult r = run(cfg);
            c = r.violations;
            slots_run = r.slots_run;
        } catch (const InvariantViolation& e) {
            c = e.counters;
            slots_run = e.slot;
            status = "invariant_failure";
            failed = true;
        } catch (const CodingError& e) {
            engine_fatal = 1;
            status = "engine_fatal";
            failed = true;
            std::cerr << "seed " << seed << ": " << e.what() << "\n";
        }
        std::cout << seed << ',' << slots_run << ',' << c.innovation << ',' << c.support_bound
                  << ',' << c.two_undecoded << ',' << c.leader_decode << ',' << c.seen_rank
                  << ',' << engine_fatal << ',' << c.conjecture_both_mixed << ',' << status
                  << "\n";
        total.innovation += c.innovation;
        total.support_bound += c.support_bound;
        total.two_undecoded += c.two_undecoded;
        total.leader_decode += c.leader_decode;
        total.seen_rank += c.seen_rank;
        total.conjecture_both_mixed += c.conjecture_both_mixed;
        engine_fatal_total += engine_fatal;
        if (c.hard_total() > 0) failed = true;
    }
    std::cout << "total,-," << total.innovation << ',' << total.support_bound << ','
              << total.two_undecoded << ',' << total.leader_decode << ',' << total.seen_rank
              << ',' << engine_fatal_total << ',' << total.conjecture_both_mixed << ','
              << (failed ? "fail" : "ok") << "\n";
    return failed ? 1 : 0;
}

}  // namespace

SweepOutcome run_sweep(const SweepSpec& spec,
                       const std::function<StatsReport(double, std::uint64_t)>& runner) {
    if (spec.rhos.empty()) throw std::invalid_argument("sweep: no rho values");
    if (spec.seeds.empty()) throw std::invalid_argument("sweep: no seeds");

    struct Task {
        double rho;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    std::vector<double> rhos = spec.rhos;
    std::sort(rhos.begin(), rhos.end());
    rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
    std::vector<std::uint64_t> seeds = spec.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (double rho : rhos) {
        for (std::uint64_t seed : seeds) tasks.push_back({rho, seed});
    }

    auto point = [&](double rho, std::uint64_t seed) {
        if (runner) return runner(rho, seed);
        return default_point_runner(rho, seed, spec);
    };

    std::vector<SweepRow> rows(tasks.size());
    unsigned jobs = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                SweepRow row;
                row.rho = tasks[i].rho;
                row.lambda = tasks[i].rho * spec.mu;
                row.mu = spec.mu;
                row.x = 1.0 / (1.0 - tasks[i].rho);
                row.slots = spec.slots;
                row.seed = tasks[i].seed;
                row.stats = point(tasks[i].rho, tasks[i].seed);
                rows[i] = std::move(row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w) workers.emplace_back(work);
        for (auto& t : workers) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    SweepOutcome outcome;
    outcome.rows = std::move(rows);
    for (double rho : rhos) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : outcome.rows) {
            if (row.rho == rho) {
                sum += row.stats.mean_delay_avg;
                ++n;
            }
        }
        outcome.points.push_back({rho, 1.0 / (1.0 - rho), sum / static_cast<double>(n)});
    }
    outcome.slope = loglog_slope(outcome.points);
    return outcome;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Feedback-adaptive network-coded broadcast simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string run_mode = "coded";
    CLI::App* crun = app.add_subcommand("run", "run one simulation and write trace/packet CSVs");
    add_common(crun, run_opts, true);
    crun->add_option("--seed", run_opts.seed, "RNG seed")->envname("NC_BCAST_SEED");
    crun->add_option("--mode", run_mode, "coded (3 receivers) or arq (single-receiver baseline)")
        ->check(CLI::IsMember({"coded", "arq"}));

    CommonOpts sweep_opts;
    SweepSpec sweep_spec;
    CLI::App* csweep = app.add_subcommand("sweep", "run a rho sweep and fit the delay scaling");
    add_common(csweep, sweep_opts, true);
    csweep->add_option("--rhos", sweep_spec.rhos, "rho values of the sweep")->required();
    csweep->add_option("--seeds", sweep_spec.seeds, "seeds averaged per rho point")
        ->envname("NC_BCAST_SEED");
    csweep->add_option("--jobs", sweep_spec.jobs, "max concurrent points (0 = all cores)");

    CommonOpts val_opts;
    std::vector<std::uint64_t> val_seeds{1, 2, 3, 4, 5};
    CLI::App* cval = app.add_subcommand("validate", "strict invariant checking across seeds");
    add_common(cval, val_opts, false);
    cval->add_option("--seeds", val_seeds, "seeds to validate")->envname("NC_BCAST_SEED");

    try {
        app.parse(argc, argv);
        if (crun->parsed()) {
            resolve_load(run_opts);
            return cmd_run(run_opts, run_mode);
        }
        if (csweep->parsed()) {
            if (sweep_opts.lambda >= 0.0 || sweep_opts.rho >= 0.0) {
                throw CLI::ValidationError("sweep takes --rhos, not --lambda/--rho");
            }
            return cmd_sweep(sweep_opts, sweep_spec);
        }
        resolve_load(val_opts);
        return cmd_validate(val_opts, val_seeds);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 1;
    } catch (const CodingError& e) {
        std::cerr << "coding engine failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ncbcast
