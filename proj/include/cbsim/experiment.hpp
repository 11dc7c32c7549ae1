#pragma once
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cbsim/batched.hpp"
#include "cbsim/collab.hpp"
#include "cbsim/events.hpp"
#include "cbsim/hard_family.hpp"
#include "cbsim/likelihood.hpp"
#include "cbsim/projection.hpp"
#include "cbsim/regret.hpp"

namespace cbsim {

// Trial-level worker pool. Each index is processed exactly once and workers
// write only to their own slot, so results are independent of scheduling.
template <class F>
inline void parallel_for(long long n, int threads, F&& f) {
    threads = std::max(1, threads);
    if (threads == 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (int w = 0; w < threads; ++w)
        workers.emplace_back([&] {
            for (long long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    for (auto& t : workers) t.join();
}

// Uniform-random arm choice for n steps; the choice stream is disjoint from
// the reward streams.
inline Transcript uniform_play(const Instance& instance, long long n, const StreamKey& key) {
    Transcript t;
    t.entries.reserve(static_cast<std::size_t>(n));
    RngStream choice = key.aux_stream(1);
    std::vector<RngStream> rewards;
    for (std::size_t a = 0; a < instance.size(); ++a) rewards.push_back(key.arm_stream(a));
    for (long long i = 0; i < n; ++i) {
        const auto a = static_cast<std::uint32_t>(choice.next_below(instance.size()));
        t.append(a, sample_reward(instance.arms[a], rewards[a]));
    }
    return t;
}

// 17 significant digits round-trips doubles exactly.
inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

enum class ExperimentKind { batched, collab_reduction, no_comm_baseline, tradeoff_sweep, lb_checks };

inline ExperimentKind experiment_kind_from(const std::string& s) {
    if (s == "batched") return ExperimentKind::batched;
    if (s == "collab-reduction") return ExperimentKind::collab_reduction;
    if (s == "no-comm-baseline") return ExperimentKind::no_comm_baseline;
    if (s == "tradeoff-sweep") return ExperimentKind::tradeoff_sweep;
    if (s == "lb-checks") return ExperimentKind::lb_checks;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::batched: return "batched";
        case ExperimentKind::collab_reduction: return "collab-reduction";
        case ExperimentKind::no_comm_baseline: return "no-comm-baseline";
        case ExperimentKind::tradeoff_sweep: return "tradeoff-sweep";
        case ExperimentKind::lb_checks: return "lb-checks";
    }
    return "?";
}

struct InstanceSpec {
    std::vector<double> means;  // explicit means, or
    bool use_hard = false;      // a level of the hard family
    int hard_level = 1;
    int hard_sigma = +1;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::batched;
    InstanceSpec instance;
    int K = 1;
    long long T = 1;
    double lambda_grid = 2.0;
    std::vector<int> R_grid;
    BudgetMode budget_mode = BudgetMode::global_cap;
    long long trials = 1;
    std::uint64_t master_seed = 1;
    double confidence = 0.99;
    int threads = 1;
    std::string out_dir = "out";
    // hard-family / lower-bound check parameters
    long long family_K = 4;
    long long family_T = 16384;
    double beta = 4.0;
    double eps = 0.1;
    double lambda_lb = 1e-6;
    long long mc_transcripts = 100000;
    int sim_runs = 100;  // simulated collab runs per R in lb-checks

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (kind == ExperimentKind::tradeoff_sweep && R_grid.empty())
            throw std::invalid_argument("tradeoff-sweep needs a nonempty R_grid");
        if (!instance.use_hard && instance.means.empty() && kind != ExperimentKind::lb_checks)
            throw std::invalid_argument("exactly one instance spec required");
    }
};

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig c;
    c.kind = experiment_kind_from(j.at("experiment").get<std::string>());
    if (j.contains("instance")) {
        const auto& ji = j["instance"];
        if (ji.contains("means")) {
            c.instance.means = ji["means"].get<std::vector<double>>();
        } else if (ji.contains("hard_level")) {
            c.instance.use_hard = true;
            c.instance.hard_level = ji["hard_level"].get<int>();
            c.instance.hard_sigma = ji.value("sigma", +1);
        }
    }
    c.K = j.value("K", 1);
    c.T = j.value("T", static_cast<long long>(1));
    c.lambda_grid = j.value("lambda_grid", 2.0);
    if (j.contains("R_grid")) c.R_grid = j["R_grid"].get<std::vector<int>>();
    if (j.value("budget_mode", std::string("global-cap")) == "per-arm-grid")
        c.budget_mode = BudgetMode::per_arm_grid;
    c.trials = j.value("trials", static_cast<long long>(1));
    c.master_seed = j.value("master_seed", static_cast<std::uint64_t>(1));
    c.confidence = j.value("confidence", 0.99);
    c.threads = j.value("threads", 1);
    c.out_dir = j.value("out", std::string("out"));
    if (j.contains("family")) {
        const auto& jf = j["family"];
        c.family_K = jf.value("K", static_cast<long long>(4));
        c.family_T = jf.value("T", static_cast<long long>(16384));
        c.beta = jf.value("beta", 4.0);
        c.eps = jf.value("eps", 0.1);
        c.lambda_lb = jf.value("lambda_lb", 1e-6);
    }
    c.mc_transcripts = j.value("mc_transcripts", static_cast<long long>(100000));
    c.sim_runs = j.value("sim_runs", 100);
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    nlohmann::json j;
    in >> j;
    return parse_config(j);
}

inline Instance resolve_instance(const ExperimentConfig& c) {
    if (c.instance.use_hard) {
        HardFamily fam = make_hard_family(c.family_K, c.family_T, c.beta, c.eps, c.lambda_lb);
        return fam.input(c.instance.hard_level, c.instance.hard_sigma);
    }
    return Instance::bernoulli(c.instance.means, "explicit");
}

struct TrialRecord {
    long long trial = 0;
    std::string instance_label;
    int R = 0;  // 0 when not part of an R sweep
    double lambda = 0.0;
    double regret = 0.0;
    int rounds_used = 0;
    int comm_steps = 0;
    bool star_eliminated = false;
    bool e2_pass = true;
    bool elim_sched_pass = true;
    bool reduction_exact = true;
};

struct SweepRow {
    int R = 0;
    double lambda_grid = 0.0;
    double mean_regret = 0.0;
    double halfwidth = 0.0;
    double mean_rounds = 0.0;
    int max_rounds = 0;
    double analytic_regret_bound = 0.0;
    int analytic_round_bound = 0;
    long long star_elim_count = 0;
    long long trials = 0;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ExperimentResult {
    std::vector<TrialRecord> trial_records;
    std::vector<SweepRow> sweep_rows;
    std::vector<CheckResult> assertions;
    bool ok() const {
        for (const auto& a : assertions)
            if (!a.pass) return false;
        return true;
    }
};

namespace detail_csv {

inline void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& rows) {
    std::ofstream out(path, std::ios::binary);
    out << "trial,instance,R,lambda_grid,regret,rounds_used,comm_steps,"
           "star_eliminated,e2_pass,elim_sched_pass,reduction_exact\n";
    for (const auto& r : rows)
        out << r.trial << ',' << r.instance_label << ',' << r.R << ',' << fmt_num(r.lambda)
            << ',' << fmt_num(r.regret) << ',' << r.rounds_used << ',' << r.comm_steps << ','
            << int(r.star_eliminated) << ',' << int(r.e2_pass) << ',' << int(r.elim_sched_pass)
            << ',' << int(r.reduction_exact) << '\n';
}

inline void write_aggregate_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    out << "R,lambda_grid,mean_regret,halfwidth,mean_rounds,max_rounds,"
           "analytic_regret_bound,analytic_round_bound,star_elim_count,trials\n";
    for (const auto& r : rows)
        out << r.R << ',' << fmt_num(r.lambda_grid) << ',' << fmt_num(r.mean_regret) << ','
            << fmt_num(r.halfwidth) << ',' << fmt_num(r.mean_rounds) << ',' << r.max_rounds
            << ',' << fmt_num(r.analytic_regret_bound) << ',' << r.analytic_round_bound << ','
            << r.star_elim_count << ',' << r.trials << '\n';
}

} // namespace detail_csv

inline SweepRow aggregate_rows(const std::vector<TrialRecord>& records, int R, double lambda,
                               const Instance& instance, const BatchConfig& bc,
                               double confidence) {
    SweepRow row;
    row.R = R;
    row.lambda_grid = lambda;
    row.trials = static_cast<long long>(records.size());
    double sum = 0.0, rounds = 0.0, max_regret_range = 0.0;
    for (const auto& r : records) {
        sum += r.regret;
        rounds += r.rounds_used;
        row.max_rounds = std::max(row.max_rounds, r.rounds_used);
        row.star_elim_count += r.star_eliminated ? 1 : 0;
    }
    row.mean_regret = sum / static_cast<double>(records.size());
    row.mean_rounds = rounds / static_cast<double>(records.size());
    double max_gap = 0.0;
    for (double g : instance.gaps) max_gap = std::max(max_gap, g);
    max_regret_range = max_gap * static_cast<double>(bc.horizon_T);
    row.halfwidth = hoeffding_halfwidth(max_regret_range, records.size(), confidence);
    row.analytic_regret_bound = analytic_regret_bound(instance, bc);
    row.analytic_round_bound = analytic_round_bound(instance, bc);
    return row;
}

// ---- lower-bound verification suite -----------------------------------

inline std::vector<CheckResult> lb_check_suite(const ExperimentConfig& config) {
    std::vector<CheckResult> checks;
    const HardFamily fam =
        make_hard_family(config.family_K, config.family_T, config.beta, config.eps,
                         config.lambda_lb);

    // Per-step log-ratio bound, exhaustively over levels, ordered pairs and
    // (arm, outcome) cells.
    {
        CheckResult c{"step-llr-bound", true, ""};
        const int lmax = std::min(fam.L, 6);
        for (int ell = 1; ell <= lmax && c.pass; ++ell) {
            const double bound = 5.0 / std::pow(fam.beta, ell);
            const auto members = fam.suffix_members(ell);
            for (const auto& [la, sa] : members) {
                for (const auto& [lb, sb] : members) {
                    const Instance& A = fam.input(la, sa);
                    const Instance& B = fam.input(lb, sb);
                    for (int arm = 0; arm < 2; ++arm)
                        for (double o : {0.0, 1.0}) {
                            const double step = std::log(A.arms[arm].prob_of(o)) -
                                                std::log(B.arms[arm].prob_of(o));
                            if (std::abs(step) > bound) {
                                c.pass = false;
                                std::ostringstream w;
                                w << "l=" << ell << " A=" << A.label << " B=" << B.label
                                  << " arm=" << arm + 1 << " o=" << o << " |step|="
                                  << std::abs(step) << " > " << bound;
                                c.detail = w.str();
                            }
                        }
                }
            }
        }
        if (c.pass) c.detail = "all cells within 5/beta^l";
        checks.push_back(c);
    }

    // Conditional drift bound over all (A, B, I) triples, closed form.
    {
        CheckResult c{"drift-bound", true, ""};
        const int lmax = std::min(fam.L, 6);
        for (int ell = 1; ell <= lmax && c.pass; ++ell) {
            const auto members = fam.suffix_members(ell);
            for (const auto& [la, sa] : members)
                for (const auto& [lb, sb] : members)
                    for (const auto& [li, si] : members) {
                        const auto report =
                            drift_bound_check(fam.input(la, sa), fam.input(lb, sb),
                                              fam.input(li, si), ell, fam.beta);
                        if (!report.all_ok) {
                            c.pass = false;
                            std::ostringstream w;
                            w << "l=" << ell << " A=" << fam.input(la, sa).label
                              << " B=" << fam.input(lb, sb).label
                              << " I=" << fam.input(li, si).label;
                            c.detail = w.str();
                        }
                    }
        }
        if (c.pass) c.detail = "all triples within 11/beta^{2l}";
        checks.push_back(c);
    }

    // Round-ratio pigeonhole + partition + projection budget over simulated collaborative runs.
    {
        CheckResult fact{"round-ratio-partition", true, ""};
        CheckResult budget{"projection-budget", true, ""};
        const std::vector<int> r_values = config.R_grid.empty()
                                              ? std::vector<int>{2, 3, 4, 6, 8}
                                              : config.R_grid;
        const Instance inst = fam.input(1, +1);
        long long checked = 0, budget_checked = 0;
        for (int R : r_values) {
            const double lambda = std::max(
                2.0, std::pow(static_cast<double>(config.K) * static_cast<double>(config.T),
                              1.0 / R));
            for (int trial = 0; trial < config.sim_runs; ++trial) {
                CollabConfig cc;
                cc.K = config.K;
                cc.horizon_T = config.T;
                cc.rounds_R = R;
                cc.inner.lambda_grid = lambda;
                cc.inner.budget_mode = config.budget_mode;
                StreamKey key{config.master_seed, static_cast<std::uint64_t>(checked), 0};
                const CollabRun run = reduce_batched_to_collab(inst, cc, key);
                ++checked;

                const auto cert = round_ratio_certificate(run);
                if (!cert.meets_threshold) {
                    fact.pass = false;
                    fact.detail = "ratio below (KT)^{1/R} at R=" + std::to_string(R);
                }
                // partition: exactly one first round reaches the threshold
                const auto report = round_index_report(run, fam, R);
                if (report.r < 1 || report.r > run.rounds()) {
                    fact.pass = false;
                    fact.detail = "no F_r round found";
                }

                // Projection budget at every level whose window is hit and
                // whose zeta slice survives rounding.
                if (!fam.degenerate()) {
                    for (int ell = 1; ell <= fam.L; ++ell) {
                        if (!tau_for_level(run, fam, ell).second) continue;
                        for (int k = 0; k < run.K; ++k) {
                            const auto proj = project_transcript(run, k, ell, fam, R);
                            if (proj.zeta_collapsed) continue;
                            const long long t_tau_prev =
                                proj.tau == 1 ? 0 : run.round_boundaries[proj.tau - 2];
                            const double cap =
                                static_cast<double>(run.K) * static_cast<double>(t_tau_prev) +
                                zeta_of(fam, ell, R);
                            ++budget_checked;
                            if (static_cast<double>(proj.proj.size()) > cap + 1e-9) {
                                budget.pass = false;
                                budget.detail = "projection length exceeds K t_{tau-1} + zeta";
                            }
                        }
                    }
                }
            }
        }
        fact.detail = fact.pass ? std::to_string(checked) + " runs partitioned" : fact.detail;
        if (budget.pass)
            budget.detail = std::to_string(budget_checked) + " projections within budget";
        checks.push_back(fact);
        checks.push_back(budget);
    }

    // Event-E Monte Carlo at the maximal qualifying transcript length.
    {
        CheckResult c{"event-E-monte-carlo", true, ""};
        if (fam.degenerate()) {
            c.detail = "degenerate family (L <= 1), vacuous";
        } else {
            const long long n = max_qualifying_length(fam);
            const Instance& play = fam.input(fam.L, +1);
            const long long M = config.mc_transcripts;
            std::vector<std::uint8_t> failed(static_cast<std::size_t>(M), 0);
            parallel_for(M, config.threads, [&](long long i) {
                StreamKey key{config.master_seed ^ 0xE4E1ULL, static_cast<std::uint64_t>(i), 0};
                const Transcript t = uniform_play(play, n, key);
                failed[static_cast<std::size_t>(i)] = event_E_check(fam, t).pass ? 0 : 1;
            });
            long long fails = 0;
            for (auto f : failed) fails += f;
            const double freq = static_cast<double>(fails) / static_cast<double>(M);

            const double log_L = std::log2(static_cast<double>(fam.L));
            double azuma_sum = 0.0;
            for (int ell = 1; ell <= fam.L; ++ell) {
                if (fam.lambda_lb * std::pow(fam.beta, 2 * ell) / log_L <
                    static_cast<double>(n))
                    continue;
                const double pairs =
                    static_cast<double>(fam.suffix_members(ell).size());
                azuma_sum += pairs * (pairs - 1.0) *
                             std::exp(-fam.eps * fam.eps * std::pow(fam.beta, 2 * ell) /
                                      (200.0 * static_cast<double>(n)));
            }
            const double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(M));
            c.pass = freq <= azuma_sum + slack;
            std::ostringstream w;
            w << "n=" << n << " freq=" << freq << " azuma=" << azuma_sum
              << " slack=" << slack;
            c.detail = w.str();
        }
        checks.push_back(c);
    }

    return checks;
}

// ---- experiment driver -------------------------------------------------

inline ExperimentResult run_experiment_in_memory(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;

    auto run_batched_set = [&](const Instance& inst, const BatchConfig& bc, int R_tag,
                               std::vector<TrialRecord>& out) {
        out.resize(static_cast<std::size_t>(config.trials));
        parallel_for(config.trials, config.threads, [&](long long trial) {
            StreamKey key{config.master_seed, static_cast<std::uint64_t>(trial), 0};
            const BatchRun run = run_batched_mab(inst, bc, key);
            TrialRecord rec;
            rec.trial = trial;
            rec.instance_label = inst.label.empty() ? "explicit" : inst.label;
            rec.R = R_tag;
            rec.lambda = bc.lambda_grid;
            rec.regret = run.total_regret;
            rec.rounds_used = run.rounds_used;
            rec.star_eliminated = run.star_eliminated;
            rec.e2_pass = e2_holds(inst, run, bc);
            rec.elim_sched_pass = elimination_schedule_holds(inst, run, bc);
            out[static_cast<std::size_t>(trial)] = rec;
        });
    };

    switch (config.kind) {
        case ExperimentKind::batched: {
            const Instance inst = resolve_instance(config);
            BatchConfig bc{config.lambda_grid, config.T, config.budget_mode, false};
            run_batched_set(inst, bc, 0, result.trial_records);
            result.sweep_rows.push_back(aggregate_rows(result.trial_records, 0,
                                                       config.lambda_grid, inst, bc,
                                                       config.confidence));
            const auto& row = result.sweep_rows.back();
            const int unconditional = ceil_log(config.lambda_grid,
                                               static_cast<double>(config.T));
            bool rounds_ok = true, cond_rounds_ok = true, elim_sched_ok = true;
            for (const auto& r : result.trial_records) {
                rounds_ok = rounds_ok && r.rounds_used <= unconditional;
                if (r.e2_pass) {
                    cond_rounds_ok = cond_rounds_ok && r.rounds_used <= row.analytic_round_bound;
                    elim_sched_ok = elim_sched_ok && r.elim_sched_pass;
                }
            }
            result.assertions.push_back(
                {"regret-bound",
                 !std::isfinite(row.analytic_regret_bound) ||
                     row.mean_regret <= row.analytic_regret_bound + row.halfwidth,
                 "mean " + fmt_num(row.mean_regret) + " vs bound " +
                     fmt_num(row.analytic_regret_bound)});
            result.assertions.push_back({"round-bound-unconditional", rounds_ok,
                                         "max rounds " + std::to_string(row.max_rounds)});
            result.assertions.push_back({"round-bound-e2", cond_rounds_ok,
                                         "bound " + std::to_string(row.analytic_round_bound)});
            result.assertions.push_back({"elimination-schedule", elim_sched_ok, ""});
            break;
        }
        case ExperimentKind::collab_reduction: {
            const Instance inst = resolve_instance(config);
            result.trial_records.resize(static_cast<std::size_t>(config.trials));
            bool all_exact = true;
            parallel_for(config.trials, config.threads, [&](long long trial) {
                CollabConfig cc;
                cc.K = config.K;
                cc.horizon_T = config.T;
                cc.inner.lambda_grid = config.lambda_grid;
                cc.inner.budget_mode = config.budget_mode;
                StreamKey key{config.master_seed, static_cast<std::uint64_t>(trial), 0};
                const CollabRun run = reduce_batched_to_collab(inst, cc, key);

                BatchConfig oracle = cc.inner;
                oracle.horizon_T = static_cast<long long>(config.K) * config.T;
                const BatchRun batched = run_batched_mab(inst, oracle, key);

                TrialRecord rec;
                rec.trial = trial;
                rec.instance_label = inst.label.empty() ? "explicit" : inst.label;
                rec.lambda = config.lambda_grid;
                rec.regret = run.total_regret;
                rec.rounds_used = run.rounds();
                rec.comm_steps = run.comm_steps;
                rec.reduction_exact = run.pulls_per_arm_total == batched.pulls_per_arm &&
                                 run.total_regret == batched.total_regret;
                result.trial_records[static_cast<std::size_t>(trial)] = rec;
            });
            for (const auto& r : result.trial_records) all_exact = all_exact && r.reduction_exact;
            result.assertions.push_back({"reduction-exactness", all_exact, ""});
            break;
        }
        case ExperimentKind::no_comm_baseline: {
            const Instance inst = resolve_instance(config);
            result.trial_records.resize(static_cast<std::size_t>(config.trials));
            parallel_for(config.trials, config.threads, [&](long long trial) {
                CollabConfig cc;
                cc.K = config.K;
                cc.horizon_T = config.T;
                cc.inner.lambda_grid = config.lambda_grid;
                cc.inner.budget_mode = config.budget_mode;
                StreamKey key{config.master_seed, static_cast<std::uint64_t>(trial), 0};
                const CollabRun run = run_no_comm_baseline(inst, cc, key);
                TrialRecord rec;
                rec.trial = trial;
                rec.instance_label = inst.label.empty() ? "explicit" : inst.label;
                rec.lambda = config.lambda_grid;
                rec.regret = run.total_regret;
                rec.rounds_used = run.rounds();
                rec.comm_steps = run.comm_steps;
                result.trial_records[static_cast<std::size_t>(trial)] = rec;
            });
            bool no_comm = true;
            for (const auto& r : result.trial_records) no_comm = no_comm && r.comm_steps == 0;
            result.assertions.push_back({"baseline-no-communication", no_comm, ""});
            break;
        }
        case ExperimentKind::tradeoff_sweep: {
            const Instance inst = resolve_instance(config);
            const double KT = static_cast<double>(config.K) * static_cast<double>(config.T);
            for (int R : config.R_grid) {
                const double lambda = std::max(2.0, std::pow(KT, 1.0 / R));
                BatchConfig bc{lambda, static_cast<long long>(config.K) * config.T,
                               config.budget_mode, false};
                std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
                parallel_for(config.trials, config.threads, [&](long long trial) {
                    CollabConfig cc;
                    cc.K = config.K;
                    cc.horizon_T = config.T;
                    cc.rounds_R = R;
                    cc.inner.lambda_grid = lambda;
                    cc.inner.budget_mode = config.budget_mode;
                    StreamKey key{config.master_seed, static_cast<std::uint64_t>(trial), 0};
                    const CollabRun run = reduce_batched_to_collab(inst, cc, key);
                    TrialRecord rec;
                    rec.trial = trial;
                    rec.instance_label = inst.label.empty() ? "explicit" : inst.label;
                    rec.R = R;
                    rec.lambda = lambda;
                    rec.regret = run.total_regret;
                    rec.rounds_used = run.rounds();
                    rec.comm_steps = run.comm_steps;
                    rec.star_eliminated = run.batched.star_eliminated;
                    records[static_cast<std::size_t>(trial)] = rec;
                });
                SweepRow row =
                    aggregate_rows(records, R, lambda, inst, bc, config.confidence);
                result.sweep_rows.push_back(row);
                result.assertions.push_back(
                    {"sweep-regret-bound-R" + std::to_string(R),
                     !std::isfinite(row.analytic_regret_bound) ||
                         row.mean_regret <= row.analytic_regret_bound + row.halfwidth,
                     "mean " + fmt_num(row.mean_regret)});
                result.trial_records.insert(result.trial_records.end(), records.begin(),
                                            records.end());
            }
            break;
        }
        case ExperimentKind::lb_checks: {
            result.assertions = lb_check_suite(config);
            break;
        }
    }
    return result;
}

inline int run_experiment(const ExperimentConfig& config) {
    const ExperimentResult result = run_experiment_in_memory(config);
    std::filesystem::create_directories(config.out_dir);
    detail_csv::write_trials_csv(config.out_dir + "/trials.csv", result.trial_records);
    detail_csv::write_aggregate_csv(config.out_dir + "/aggregate.csv", result.sweep_rows);

    std::ofstream summary(config.out_dir + "/summary.txt", std::ios::binary);
    summary << "experiment: " << to_string(config.kind) << "\n";
    summary << "seed: " << config.master_seed << "  trials: " << config.trials
            << "  threads: " << config.threads << "\n";
    summary << "confidence halfwidths: Hoeffding on [0, max-possible-regret] per trial at "
            << fmt_num(config.confidence) << "\n";
    for (const auto& row : result.sweep_rows)
        summary << "R=" << row.R << " lambda=" << fmt_num(row.lambda_grid) << " mean_regret="
                << fmt_num(row.mean_regret) << " +/- " << fmt_num(row.halfwidth)
                << " mean_rounds=" << fmt_num(row.mean_rounds) << " max_rounds="
                << row.max_rounds << " star_elim=" << row.star_elim_count << "\n";
    for (const auto& a : result.assertions)
        summary << (a.pass ? "[PASS] " : "[FAIL] ") << a.name
                << (a.detail.empty() ? "" : ": " + a.detail) << "\n";
    return result.ok() ? 0 : 1;
}

} // namespace cbsim
