#include "sparseclass/cli_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sparseclass/exact.hpp"
#include "sparseclass/sampling.hpp"

namespace sparseclass {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kLn10 = 2.302585092994045684;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, int line_no) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config line " + std::to_string(line_no) + ": expected a boolean, got '" +
                      value + "'");
}

std::uint64_t parse_u64(const std::string& value, int line_no) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": expected a nonnegative integer, got '" + value + "'");
    }
}

double parse_double(const std::string& value, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line_no) + ": expected a number, got '" +
                          value + "'");
    }
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json config_echo(const SweepConfig& cfg) {
    ordered_json j;
    j["classifier"] = to_string(cfg.classifier);
    j["epsilon"] = cfg.epsilon;
    j["c_bar"] = cfg.c_bar;
    j["trials"] = cfg.trials_per_point;
    j["confidence"] = cfg.confidence_level;
    j["seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["require_sparse"] = cfg.require_sparse;
    j["require_consistency"] = cfg.require_consistency;
    j["allow_class_violation"] = cfg.allow_class_violation;
    ordered_json grid = ordered_json::array();
    for (const GridPoint& gp : cfg.grid) grid.push_back({gp.m, gp.N, gp.n});
    j["grid"] = grid;
    return j;
}

// Writes manifest.json and returns the manifest object so other outputs
// can embed it.
ordered_json write_manifest(const std::string& out_dir, const std::string& command,
                            const ordered_json& echo, std::uint64_t master_seed,
                            const std::string& start_time,
                            const std::vector<std::string>& outputs) {
    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["command"] = command;
    manifest["config"] = echo;
    manifest["master_seed"] = master_seed;
    manifest["start_time"] = start_time;
    manifest["end_time"] = iso_timestamp();
    manifest["outputs"] = outputs;
    std::ofstream out(std::filesystem::path(out_dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
    return manifest;
}

void ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) {
        throw ConfigError("this subcommand writes files; pass --out DIR");
    }
    std::filesystem::create_directories(out_dir);
}

void write_points_csv(const std::string& path, std::uint64_t master_seed,
                      const std::vector<SweepPoint>& points) {
    std::ofstream out(path);
    out << "# manifest=manifest.json master_seed=" << master_seed << "\n";
    out << "m,N,n,r,trials,errors_h0,errors_h1,p_hat,ci_low,ci_high,censored\n";
    for (const SweepPoint& p : points) {
        const ErrorEstimate& e = p.estimate;
        out << p.grid.m << ',' << p.grid.N << ',' << p.grid.n << ',' << fmt(p.r) << ',' << e.trials
            << ',' << e.errors_h0 << ',' << e.errors_h1 << ',' << fmt(e.p_hat) << ','
            << fmt(e.ci_low) << ',' << fmt(e.ci_high) << ',' << (e.censored() ? 1 : 0) << "\n";
    }
}

ordered_json point_json(const SweepPoint& p) {
    const ErrorEstimate& e = p.estimate;
    ordered_json j;
    j["m"] = p.grid.m;
    j["N"] = p.grid.N;
    j["n"] = p.grid.n;
    j["r"] = p.r;
    j["trials"] = e.trials;
    j["errors_h0"] = e.errors_h0;
    j["errors_h1"] = e.errors_h1;
    j["p_hat"] = e.p_hat;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["censored"] = e.censored();
    return j;
}

SweepConfig apply_overrides(SweepConfig cfg, const CliOverrides& overrides) {
    if (overrides.seed) cfg.master_seed = *overrides.seed;
    if (overrides.confidence) cfg.confidence_level = *overrides.confidence;
    cfg.threads = resolve_threads(overrides.threads, cfg.threads);
    return cfg;
}

std::uint32_t checked_alphabet(std::uint64_t m) {
    if (m == 0 || m > (1ull << 31)) {
        throw ConfigError("alphabet size must lie in [1, 2^31]");
    }
    return static_cast<std::uint32_t>(m);
}

double display_log(double natural_log, bool log10) {
    return log10 ? natural_log / kLn10 : natural_log;
}

const char* log_key(bool log10, const char* natural_name, const char* log10_name) {
    return log10 ? log10_name : natural_name;
}

}  // namespace

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    SweepConfig cfg;
    cfg.threads = 0;  // auto unless set
    bool have_epsilon = false;
    bool have_trials = false;
    bool have_c_bar = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
        }

        if (key == "classifier") {
            try {
                cfg.classifier = classifier_from_string(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
            }
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double(value, line_no);
            have_epsilon = true;
        } else if (key == "c_bar") {
            cfg.c_bar = parse_double(value, line_no);
            have_c_bar = true;
        } else if (key == "trials") {
            cfg.trials_per_point = parse_u64(value, line_no);
            have_trials = true;
        } else if (key == "confidence") {
            cfg.confidence_level = parse_double(value, line_no);
        } else if (key == "seed") {
            cfg.master_seed = parse_u64(value, line_no);
        } else if (key == "threads") {
            cfg.threads = static_cast<unsigned>(parse_u64(value, line_no));
        } else if (key == "require_sparse") {
            cfg.require_sparse = parse_bool(value, line_no);
        } else if (key == "require_consistency") {
            cfg.require_consistency = parse_bool(value, line_no);
        } else if (key == "allow_class_violation") {
            cfg.allow_class_violation = parse_bool(value, line_no);
        } else if (key == "grid") {
            std::istringstream fields(value);
            GridPoint gp;
            if (!(fields >> gp.m >> gp.N >> gp.n)) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": grid expects 'm N n', got '" + value + "'");
            }
            std::string excess;
            if (fields >> excess) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": grid expects exactly three integers");
            }
            cfg.grid.push_back(gp);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
    }

    if (cfg.grid.empty()) throw ConfigError("config: at least one 'grid = m N n' line is required");
    if (!have_epsilon) throw ConfigError("config: 'epsilon' is required");
    if (!have_trials) throw ConfigError("config: 'trials' is required");
    if (!have_c_bar) cfg.c_bar = 1.0 + cfg.epsilon;  // saturates the canonical pair
    return cfg;
}

unsigned resolve_threads(const std::optional<unsigned>& flag, unsigned config_value) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SPARSECLASS_THREADS")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw ConfigError(std::string("SPARSECLASS_THREADS is not an integer: ") + env);
        }
    }
    return config_value;
}

int cmd_simulate(const std::string& config_path, const CliOverrides& overrides) {
    const std::string start = iso_timestamp();
    const SweepConfig cfg = apply_overrides(load_sweep_config(config_path), overrides);
    ensure_out_dir(overrides.out_dir);

    const std::vector<SweepPoint> points = run_sweep_points(cfg);

    const std::filesystem::path dir(overrides.out_dir);
    write_points_csv((dir / "simulate.csv").string(), cfg.master_seed, points);

    const ordered_json manifest = write_manifest(overrides.out_dir, "simulate", config_echo(cfg),
                                                 cfg.master_seed, start,
                                                 {"simulate.csv", "simulate.json"});
    ordered_json summary;
    summary["manifest"] = manifest;
    summary["rows"] = ordered_json::array();
    for (const SweepPoint& p : points) summary["rows"].push_back(point_json(p));
    std::ofstream json_out(dir / "simulate.json");
    json_out << summary.dump(2) << "\n";

    for (const SweepPoint& p : points) {
        std::cout << "m=" << p.grid.m << " N=" << p.grid.N << " n=" << p.grid.n << " r=" << fmt(p.r)
                  << " p_hat=" << fmt(p.estimate.p_hat) << " ci=[" << fmt(p.estimate.ci_low) << ","
                  << fmt(p.estimate.ci_high) << "]" << (p.estimate.censored() ? " censored" : "")
                  << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const CliOverrides& overrides) {
    const std::string start = iso_timestamp();
    const SweepConfig cfg = apply_overrides(load_sweep_config(config_path), overrides);
    ensure_out_dir(overrides.out_dir);

    const std::vector<SweepPoint> points = run_sweep_points(cfg);
    const ExponentFit fit = fit_exponent(points);  // throws on degeneracy -> exit 3 in main

    const std::filesystem::path dir(overrides.out_dir);
    write_points_csv((dir / "sweep_points.csv").string(), cfg.master_seed, points);

    {
        std::ofstream plot(dir / "sweep_plot.dat");
        plot << "# manifest=manifest.json master_seed=" << cfg.master_seed << "\n";
        plot << "# r  minus_log" << (overrides.log10 ? "10" : "") << "_p_hat\n";
        for (const FitPoint& p : fit.points) {
            plot << fmt(p.r) << ' ' << fmt(display_log(p.minus_log_pe, overrides.log10)) << "\n";
        }
    }

    const ordered_json manifest =
        write_manifest(overrides.out_dir, "sweep", config_echo(cfg), cfg.master_seed, start,
                       {"sweep_points.csv", "sweep_fit.json", "sweep_plot.dat"});
    ordered_json report;
    report["manifest"] = manifest;
    report["slope"] = fit.slope;
    report["intercept"] = fit.intercept;
    report["r_squared"] = fit.r_squared;
    report["points"] = ordered_json::array();
    for (const FitPoint& p : fit.points) {
        ordered_json j;
        j["m"] = p.grid.m;
        j["N"] = p.grid.N;
        j["n"] = p.grid.n;
        j["r"] = p.r;
        j["minus_log_pe"] = p.minus_log_pe;
        j["minus_log_pe_low"] = p.minus_log_pe_low;
        j["minus_log_pe_high"] =
            std::isinf(p.minus_log_pe_high) ? ordered_json() : ordered_json(p.minus_log_pe_high);
        report["points"].push_back(j);
    }
    report["censored"] = ordered_json::array();
    for (const SweepPoint& p : fit.censored) report["censored"].push_back(point_json(p));
    std::ofstream json_out(dir / "sweep_fit.json");
    json_out << report.dump(2) << "\n";

    std::cout << "J_hat=" << fmt(fit.slope) << "\n";
    std::cout << "intercept=" << fmt(fit.intercept) << "\n";
    std::cout << "r_squared=" << fmt(fit.r_squared) << "\n";
    std::cout << "points=" << fit.points.size() << "\n";
    std::cout << "censored=" << fit.censored.size() << "\n";
    return kExitOk;
}

namespace {

void emit_report(const std::string& command, const std::vector<std::pair<std::string, std::string>>& rows,
                 const CliOverrides& overrides, std::uint64_t seed, const std::string& start) {
    for (const auto& [key, value] : rows) std::cout << key << '=' << value << "\n";
    if (!overrides.out_dir.empty()) {
        std::filesystem::create_directories(overrides.out_dir);
        ordered_json echo;
        for (const auto& [key, value] : rows) echo[key] = value;
        const ordered_json manifest =
            write_manifest(overrides.out_dir, command, echo, seed, start, {command + ".json"});
        ordered_json out;
        out["manifest"] = manifest;
        out["report"] = echo;
        std::ofstream json_out(std::filesystem::path(overrides.out_dir) / (command + ".json"));
        json_out << out.dump(2) << "\n";
    }
}

}  // namespace

int cmd_exact(const ExactArgs& args, const CliOverrides& overrides) {
    const std::string start = iso_timestamp();
    const bool l10 = overrides.log10;
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("which", args.which);

    if (args.which == "distinct") {
        if (!args.dist_path.empty()) {
            const Distribution dist = load_distribution(args.dist_path);
            const LogProb dp = prob_all_distinct(dist, args.N);
            rows.emplace_back("m", std::to_string(dist.m()));
            rows.emplace_back("N", std::to_string(args.N));
            rows.emplace_back(log_key(l10, "log_p", "log10_p"), fmt(display_log(dp.value, l10)));
        } else {
            if (args.m == 0) throw ConfigError("exact distinct: --m is required");
            const LogProb closed = prob_all_distinct_uniform(args.m, args.N);
            const LogProb dp = prob_all_distinct(uniform(checked_alphabet(args.m)), args.N);
            rows.emplace_back("m", std::to_string(args.m));
            rows.emplace_back("N", std::to_string(args.N));
            rows.emplace_back(log_key(l10, "log_p", "log10_p"), fmt(display_log(closed.value, l10)));
            rows.emplace_back(log_key(l10, "log_p_dp", "log10_p_dp"), fmt(display_log(dp.value, l10)));
        }
    } else if (args.which == "A") {
        if (args.m == 0 || args.N == 0) throw ConfigError("exact A: --m and --N are required");
        if (!(args.epsilon > 0.0 && args.epsilon < 1.0)) {
            throw ConfigError("exact A: --epsilon in (0,1) is required");
        }
        const std::uint32_t m32 = checked_alphabet(args.m);
        const Distribution u = uniform(m32);
        const Distribution q = bi_uniform(canonical_bi_uniform_spec(m32, args.epsilon));
        const LogProb px = prob_all_distinct(u, args.N);
        const LogProb py = prob_all_distinct(q, args.N);
        const LogProb pa = prob_event_A(u, q, args.N);
        const double rate = lemma_A_rate(args.epsilon, args.N, args.m);
        rows.emplace_back("m", std::to_string(args.m));
        rows.emplace_back("N", std::to_string(args.N));
        rows.emplace_back("epsilon", fmt(args.epsilon));
        rows.emplace_back(log_key(l10, "log_p_x", "log10_p_x"), fmt(display_log(px.value, l10)));
        rows.emplace_back(log_key(l10, "log_p_y", "log10_p_y"), fmt(display_log(py.value, l10)));
        rows.emplace_back(log_key(l10, "log_p_A", "log10_p_A"), fmt(display_log(pa.value, l10)));
        rows.emplace_back(log_key(l10, "lemma_rate", "lemma_rate_log10"),
                          fmt(display_log(rate, l10)));
        rows.emplace_back("rel_diff", fmt(std::abs(pa.value - rate) / std::abs(rate)));
    } else if (args.which == "B") {
        if (args.m == 0 || args.n == 0) throw ConfigError("exact B: --m and --n are required");
        if (args.s > args.m) throw ConfigError("exact B: --s cannot exceed --m");
        const std::uint32_t m32 = checked_alphabet(args.m);
        const LogProb closed = prob_event_B_uniform(args.m, args.s, args.n);
        // Cross-check with the DP over the reduced uniform alphabet.
        Histogram ax(m32);
        for (std::uint64_t j = 0; j < args.s; ++j) ax.add(static_cast<std::uint32_t>(j), 1);
        const Histogram ay(m32);
        const LogProb dp = prob_event_B_given_xy(ax, ay, uniform(m32), args.n);
        rows.emplace_back("m", std::to_string(args.m));
        rows.emplace_back("s", std::to_string(args.s));
        rows.emplace_back("n", std::to_string(args.n));
        rows.emplace_back(log_key(l10, "log_p", "log10_p"), fmt(display_log(closed.value, l10)));
        rows.emplace_back(log_key(l10, "log_p_dp", "log10_p_dp"), fmt(display_log(dp.value, l10)));
    } else if (args.which == "Cn") {
        if (args.m == 0 || args.N == 0 || args.n == 0) {
            throw ConfigError("exact Cn: --m, --N and --n are required");
        }
        const CnReport report = prob_C_n(args.m, args.N, args.n);
        rows.emplace_back("m", std::to_string(args.m));
        rows.emplace_back("N", std::to_string(args.N));
        rows.emplace_back("n", std::to_string(args.n));
        rows.emplace_back("k", std::to_string(report.k));
        rows.emplace_back(log_key(l10, "log_p", "log10_p"),
                          fmt(display_log(report.exact.value, l10)));
        rows.emplace_back(log_key(l10, "asymptote", "asymptote_log10"),
                          fmt(display_log(report.asymptote, l10)));
    } else {
        throw ConfigError("exact: --which must be one of A, B, Cn, distinct");
    }

    emit_report("exact", rows, overrides, 0, start);
    return kExitOk;
}

int cmd_bounds(const BoundsArgs& args, const CliOverrides& overrides) {
    const std::string start = iso_timestamp();
    if (args.m == 0 || args.N == 0 || args.n == 0) {
        throw ConfigError("bounds: --m, --N and --n are required");
    }
    const std::uint32_t m32 = checked_alphabet(args.m);
    const double j_lower = achievability_exponent(args.epsilon, args.c_bar);

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("epsilon", fmt(args.epsilon));
    rows.emplace_back("c_bar", fmt(args.c_bar));
    rows.emplace_back("m", std::to_string(args.m));
    rows.emplace_back("N", std::to_string(args.N));
    rows.emplace_back("n", std::to_string(args.n));
    rows.emplace_back("J_lower", fmt(j_lower));

    // The quadratic bound needs concrete distributions; the default mu is
    // the bi-uniform pairing, which only exists for epsilon in (0, 1).
    std::optional<Distribution> mu;
    if (!args.mu_path.empty()) {
        mu = load_distribution(args.mu_path);
    } else if (args.epsilon > 0.0 && args.epsilon < 1.0) {
        mu = bi_uniform(canonical_bi_uniform_spec(m32, args.epsilon));
    }
    if (mu) {
        const Distribution pi =
            args.pi_path.empty() ? uniform(m32) : load_distribution(args.pi_path);
        Distribution nu = pi;
        if (!args.nu_path.empty()) {
            nu = load_distribution(args.nu_path);
        } else if (args.nu_choice == "mu") {
            nu = *mu;
        } else if (args.nu_choice == "uniform") {
            nu = uniform(m32);
        } else if (args.nu_choice != "pi") {
            throw ConfigError("bounds: --nu must be pi, mu or uniform");
        }

        const double gamma_star = chernoff_optimal_gamma(pi, *mu, nu);
        double gamma = gamma_star;
        if (args.gamma != "optimize") {
            try {
                std::size_t pos = 0;
                gamma = std::stod(args.gamma, &pos);
                if (pos != args.gamma.size()) throw std::invalid_argument(args.gamma);
            } catch (const std::exception&) {
                throw ConfigError("bounds: --gamma must be a number or 'optimize'");
            }
        }

        const BoundReport report = chernoff_lambda_bound(pi, *mu, nu, gamma, args.N, args.n);
        rows.emplace_back("gamma", fmt(report.gamma));
        rows.emplace_back("gamma_star", fmt(gamma_star));
        rows.emplace_back("scale", fmt(report.scale));
        rows.emplace_back("linear_coefficient", fmt(report.linear_coefficient));
        rows.emplace_back("quadratic_coefficient", fmt(report.quadratic_coefficient));
        rows.emplace_back("linear_term", fmt(report.linear_term));
        rows.emplace_back("quadratic_term", fmt(report.quadratic_term));
        rows.emplace_back("main_term", fmt(report.main_term));
        rows.emplace_back("note", report.dropped_remainder_note);
    } else {
        rows.emplace_back("note",
                          "quadratic bound skipped: default mu is bi-uniform, which needs "
                          "epsilon in (0, 1); pass --mu FILE to evaluate it");
    }
    emit_report("bounds", rows, overrides, 0, start);
    return kExitOk;
}

int cmd_counterexample(const CounterexampleArgs& args, const CliOverrides& overrides) {
    const std::string start = iso_timestamp();
    const std::uint64_t seed = overrides.seed.value_or(0);
    const double confidence = overrides.confidence.value_or(0.95);
    const unsigned threads = resolve_threads(overrides.threads, 0);
    const bool l10 = overrides.log10;

    const ConditionalFalseAlarmResult result = conditional_false_alarm_experiment(
        args.m, args.N, args.n, args.epsilon, args.trials, seed, confidence, threads);

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("m", std::to_string(args.m));
    rows.emplace_back("N", std::to_string(args.N));
    rows.emplace_back("n", std::to_string(args.n));
    rows.emplace_back("epsilon", fmt(args.epsilon));
    rows.emplace_back("trials", std::to_string(result.trials));
    rows.emplace_back("k", std::to_string(result.k));
    rows.emplace_back("conditional_errors", std::to_string(result.conditional_errors));
    rows.emplace_back("p_cond", fmt(result.p_cond));
    rows.emplace_back("ci_low", fmt(result.ci_low));
    rows.emplace_back("ci_high", fmt(result.ci_high));
    rows.emplace_back(log_key(l10, "log_prob_cn", "log10_prob_cn"),
                      fmt(display_log(result.log_prob_cn, l10)));
    rows.emplace_back(log_key(l10, "asymptote", "asymptote_log10"),
                      fmt(display_log(result.asymptote, l10)));
    rows.emplace_back(log_key(l10, "implied_log_pe_bound", "implied_log10_pe_bound"),
                      fmt(display_log(result.implied_log_pe_bound, l10)));
    emit_report("counterexample", rows, overrides, seed, start);
    return kExitOk;
}

}  // namespace sparseclass
