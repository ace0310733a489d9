// Experiment runner: dispatches simulations and verification suites, emits
// CSV/JSON artifacts and plot-ready tables.
//
// Exit codes: 0 success/PASS, 1 verification FAIL, 2 usage or config error,
// 3 resource fault.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lesieve/gwp.hpp"
#include "lesieve/io.hpp"
#include "lesieve/pointproc.hpp"
#include "lesieve/sieve.hpp"
#include "lesieve/theorems.hpp"

namespace {

using nlohmann::json;
using namespace lesieve;

// ---------------------------------------------------------------------------
// shared option plumbing
// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replicas;
    unsigned threads = 0;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--seed", opts.seed, "master seed (64-bit)");
    cmd->add_option("--replicas", opts.replicas, "replica count override");
    cmd->add_option("--threads", opts.threads, "worker thread cap (0 = all cores)");
    cmd->add_option("--out", opts.out_path, "output artifact path");
}

// Loads the config file (if any), checks every key against `allowed`, then
// applies the flag overrides so flags win over file values.
json load_config(const CommonOpts& opts, const std::set<std::string>& allowed) {
    json cfg = json::object();
    if (!opts.config_path.empty()) {
        cfg = read_json_file(opts.config_path);
        if (!cfg.is_object()) throw ValidationError("config root must be a JSON object");
        for (auto it = cfg.begin(); it != cfg.end(); ++it)
            if (!allowed.count(it.key()))
                throw ValidationError("config: unknown key \"" + it.key() + "\"");
    }
    if (opts.seed) cfg["seed"] = *opts.seed;
    if (opts.replicas) cfg["replicas"] = *opts.replicas;
    if (!opts.out_path.empty()) cfg["out"] = opts.out_path;
    return cfg;
}

std::uint64_t require_u64(const json& cfg, const std::string& key) {
    if (!cfg.contains(key))
        throw ValidationError("config: missing required field \"" + key + "\"");
    return cfg.at(key).get<std::uint64_t>();
}

IncrementLaw require_law(const json& cfg) {
    if (!cfg.contains("law"))
        throw ValidationError("config: missing required field \"law\"");
    return IncrementLaw::from_json(cfg.at("law"));
}

// Entropy seed for simulate runs without --seed; recorded in the artifact.
std::uint64_t resolve_seed(const json& cfg, bool& drawn) {
    if (cfg.contains("seed")) {
        drawn = false;
        return cfg.at("seed").get<std::uint64_t>();
    }
    drawn = true;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string out_or(const json& cfg, const std::string& fallback) {
    return cfg.value("out", fallback);
}

void print_summary(const std::string& label, std::vector<double> values) {
    if (values.empty()) return;
    std::sort(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    auto quant = [&](double q) {
        std::size_t i = static_cast<std::size_t>(q * (values.size() - 1));
        return values[i];
    };
    std::cout << label << ": n=" << values.size() << " mean=" << format_double(mean)
              << " q05=" << format_double(quant(0.05))
              << " median=" << format_double(quant(0.5))
              << " q95=" << format_double(quant(0.95)) << "\n";
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate_sieve(const CommonOpts& opts) {
    json cfg = load_config(opts, {"law", "m", "rounds", "replicas", "seed", "out"});
    IncrementLaw law = require_law(cfg);
    std::uint64_t m = require_u64(cfg, "m");
    std::uint64_t rounds = require_u64(cfg, "rounds");
    std::uint64_t replicas = cfg.value("replicas", std::uint64_t(100));
    bool drawn = false;
    std::uint64_t seed = resolve_seed(cfg, drawn);

    CsvWriter csv(out_or(cfg, "sieve.csv"), {"replica_id", "n", "trajectory", "T_M"},
                  "seed=" + std::to_string(seed) + (drawn ? " (entropy)" : ""));
    std::vector<double> final_counts;
    final_counts.reserve(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) {
        SieveState state = make_initial_state(m);
        std::string packed = std::to_string(m);
        bool extinct_at = false;
        std::uint64_t extinction = 0;
        // keep sieving past `rounds` (same substream layout) until extinction,
        // so T(M) in the row is coupled with the reported trajectory
        for (std::uint64_t round = 1; state.survivor_count() > 0 || round <= rounds;
             ++round) {
            if (round > 1000000) throw ResourceError("sieve: extinction round cap exceeded");
            if (state.survivor_count() > 0) {
                WalkPath walk(law, RandomStream::derive(seed, {r, round}));
                state = sieve_round(state, walk);
                if (state.survivor_count() == 0 && !extinct_at) {
                    extinct_at = true;
                    extinction = round;
                }
            }
            if (round <= rounds) packed += ';' + std::to_string(state.survivor_count());
            if (law.is_degenerate() && round >= rounds) break;
            if (extinct_at && round >= rounds) break;
        }
        csv.row({std::to_string(r), std::to_string(rounds), packed,
                 law.is_degenerate() ? "inf" : std::to_string(extinction)});
        final_counts.push_back(static_cast<double>(state.survivor_count()));
    }
    csv.close();
    print_summary("survivors after " + std::to_string(rounds) + " rounds", final_counts);
    return 0;
}

int cmd_simulate_gwp(const CommonOpts& opts) {
    json cfg = load_config(opts, {"law", "n", "replicas", "seed", "out", "log_domain"});
    IncrementLaw law = require_law(cfg);
    std::uint64_t n = require_u64(cfg, "n");
    std::uint64_t replicas = cfg.value("replicas", std::uint64_t(100));
    bool drawn = false;
    std::uint64_t seed = resolve_seed(cfg, drawn);
    bool log_domain = cfg.value("log_domain", !law.has_finite_mean());

    CsvWriter csv(out_or(cfg, "gwp.csv"),
                  {"replica_id", "n", log_domain ? "log_Z_n" : "Z_n", "normalized"},
                  "seed=" + std::to_string(seed) + (drawn ? " (entropy)" : ""));
    std::vector<double> normalized;
    normalized.reserve(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) {
        RandomStream rng = RandomStream::derive(seed, {r});
        if (log_domain) {
            double alpha = law.tail_alpha().value_or(0.0);
            if (law.kind() != LawKind::Sibuya)
                throw ValidationError(
                    "simulate gwp: log_domain route requires a Sibuya law");
            double norm = log_normalized_sibuya(alpha, n, rng);
            double log_z = norm / std::pow(alpha, static_cast<double>(n));
            csv.row({std::to_string(r), std::to_string(n), format_double(log_z),
                     format_double(norm)});
            normalized.push_back(norm);
        } else {
            GWTrajectory traj = gw_run_exact(law, n, rng);
            double z = static_cast<double>(static_cast<std::uint64_t>(traj.sizes.back()));
            double norm = z * std::pow(law.mean(), -static_cast<double>(n));
            csv.row({std::to_string(r), std::to_string(n), format_double(z),
                     format_double(norm)});
            normalized.push_back(norm);
        }
    }
    csv.close();
    print_summary("normalized generation size", normalized);
    return 0;
}

int cmd_simulate_points(const CommonOpts& opts) {
    json cfg = load_config(
        opts, {"generator", "law", "alpha", "profile", "k_points", "seed", "out"});
    if (!cfg.contains("generator"))
        throw ValidationError("config: missing required field \"generator\"");
    std::string gen = cfg.at("generator").get<std::string>();
    std::uint64_t k_points = cfg.value("k_points", std::uint64_t(1000));
    bool drawn = false;
    std::uint64_t seed = resolve_seed(cfg, drawn);

    SelfSimilarProfile profile;
    if (cfg.contains("profile")) {
        const json& p = cfg.at("profile");
        std::string kind = p.value("kind", "identity");
        if (kind == "identity") profile.kind = ProfileKind::Identity;
        else if (kind == "power_law") profile.kind = ProfileKind::PowerLaw;
        else if (kind == "piecewise_random") profile.kind = ProfileKind::PiecewiseRandom;
        else throw ValidationError("config: unknown profile kind \"" + kind + "\"");
        profile.beta = p.value("beta", 1.0);
        profile.scale_factor = p.value("scale_factor", 2.0);
    }

    PointPattern pattern;
    if (gen == "stable_finite") {
        pattern = make_stable_finite_mean(require_law(cfg), profile, k_points, seed);
    } else if (gen == "stable_heavy") {
        double alpha = cfg.value("alpha", 0.5);
        pattern = make_stable_infinite_mean(alpha, profile, k_points, seed);
    } else {
        std::vector<std::uint64_t> idx(k_points);
        for (std::uint64_t i = 0; i < k_points; ++i) idx[i] = i + 1;
        RandomStream rng = RandomStream::derive(seed, {0});
        if (gen == "poisson") {
            pattern.points = PoissonProcessSampler().points_at(idx, rng);
        } else if (gen == "exp_maxima") {
            pattern.points = ExpMaximaSampler().points_at(idx, rng);
        } else if (gen == "z_sum") {
            pattern.points = ZSumSampler(require_law(cfg)).points_at(idx, rng);
        } else {
            throw ValidationError("config: unknown generator \"" + gen +
                                  "\"; expected poisson, exp_maxima, z_sum, "
                                  "stable_finite or stable_heavy");
        }
    }

    CsvWriter csv(out_or(cfg, "points.csv"), {"index", "point"},
                  "seed=" + std::to_string(seed) + (drawn ? " (entropy)" : ""));
    for (std::size_t i = 0; i < pattern.points.size(); ++i)
        csv.row({std::to_string(i + 1), format_double(pattern.points[i])});
    csv.close();
    print_summary("points", pattern.points);
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const CommonOpts& opts, const std::string& id) {
    json cfg = load_config(opts, {"seed", "replicas", "threads", "out", "law"});
    if (!cfg.contains("seed"))
        throw ValidationError("verify: --seed is required (reproducibility mandate)");
    std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    unsigned threads = opts.threads ? opts.threads : cfg.value("threads", 0u);

    json overrides = json::object();
    if (cfg.contains("law")) overrides["law"] = cfg.at("law");
    if (cfg.contains("replicas")) overrides["replicas"] = cfg.at("replicas");

    json doc;
    bool pass = false;
    if (id == "all") {
        doc = run_all_theorems(seed, threads);
        pass = doc.at("all_pass").get<bool>();
        for (const auto& rep : doc.at("reports"))
            std::cout << rep.at("verdict").get<std::string>() << " "
                      << rep.at("name").get<std::string>() << "\n";
    } else {
        TestReport report = run_theorem(id, seed, threads, overrides);
        doc = report.to_json();
        pass = report.pass;
        for (const auto& s : report.statistics)
            std::cout << (s.pass() ? "  ok " : "  BAD ") << s.label << " = "
                      << format_double(s.value) << (s.direction < 0 ? " < " : " > ")
                      << format_double(s.threshold) << "\n";
        std::cout << (pass ? "PASS " : "FAIL ") << report.name << "\n";
    }
    write_text_file(out_or(cfg, "report.json"), doc.dump(2) + "\n");
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int cmd_table_sieve_figure(const CommonOpts& opts) {
    json cfg = load_config(opts, {"law", "m", "rounds", "seed", "out"});
    IncrementLaw law = cfg.contains("law") ? require_law(cfg) : IncrementLaw::geometric(0.5);
    std::uint64_t m = require_u64(cfg, "m");
    std::uint64_t rounds = require_u64(cfg, "rounds");
    bool drawn = false;
    std::uint64_t seed = resolve_seed(cfg, drawn);

    SieveState state = run_sieve(m, law, rounds, seed);
    CsvWriter csv(out_or(cfg, "sieve_figure.csv"), {"player", "round", "alive"},
                  "seed=" + std::to_string(seed) + (drawn ? " (entropy)" : ""));
    for (std::uint64_t player = 1; player <= m; ++player) {
        std::uint32_t gone = state.elimination_round[player - 1];
        for (std::uint64_t round = 1; round <= rounds; ++round) {
            bool alive = gone == 0 || round < gone;
            csv.row({std::to_string(player), std::to_string(round), alive ? "1" : "0"});
        }
    }
    csv.close();
    std::cout << "alive after " << rounds << " rounds: " << state.survivor_count() << "\n";
    return 0;
}

// Sample values either from a CSV artifact (column "point" or "value", or a
// single column) or by iid draws from an inline law descriptor.
std::vector<double> table_sample(const json& cfg, std::uint64_t seed) {
    std::vector<double> values;
    if (cfg.contains("sample")) {
        std::ifstream in(cfg.at("sample").get<std::string>());
        if (!in)
            throw ValidationError("cannot open sample artifact: " +
                                  cfg.at("sample").get<std::string>());
        std::string line;
        int value_col = -1;
        bool header_seen = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (!header_seen) {
                header_seen = true;
                for (std::size_t i = 0; i < cells.size(); ++i)
                    if (cells[i] == "point" || cells[i] == "value")
                        value_col = static_cast<int>(i);
                if (value_col < 0 && cells.size() == 1) value_col = 0;
                if (value_col < 0)
                    throw ValidationError("sample artifact: no point/value column");
                continue;
            }
            if (static_cast<std::size_t>(value_col) < cells.size())
                values.push_back(std::stod(cells[value_col]));
        }
    } else if (cfg.contains("law")) {
        IncrementLaw law = IncrementLaw::from_json(cfg.at("law"));
        std::uint64_t replicas = cfg.value("replicas", std::uint64_t(10000));
        RandomStream rng = RandomStream::derive(seed, {0});
        values.reserve(replicas);
        for (std::uint64_t r = 0; r < replicas; ++r)
            values.push_back(static_cast<double>(law.sample(rng)));
    } else {
        throw ValidationError("table: provide a \"sample\" artifact or an inline \"law\"");
    }
    if (values.empty()) throw ValidationError("table: empty sample");
    return values;
}

double target_cdf_eval(const std::string& target, double x) {
    if (target == "exp1") return x > 0.0 ? -std::expm1(-x) : 0.0;
    throw ValidationError("table: unknown target \"" + target + "\" (expected exp1)");
}

int cmd_table_cdf(const CommonOpts& opts) {
    json cfg = load_config(opts, {"sample", "law", "replicas", "target", "x_min", "x_max",
                                  "step", "seed", "out"});
    bool drawn = false;
    std::uint64_t seed = resolve_seed(cfg, drawn);
    double x_min = cfg.value("x_min", 0.0);
    double x_max = cfg.value("x_max", 5.0);
    double step = cfg.value("step", 0.05);
    if (!(step > 0.0) || !(x_max >= x_min))
        throw ValidationError("table cdf: need step > 0 and x_max >= x_min");
    std::string target = cfg.value("target", "exp1");

    std::vector<double> values = table_sample(cfg, seed);
    std::sort(values.begin(), values.end());

    CsvWriter csv(out_or(cfg, "cdf.csv"), {"x", "empirical_cdf", "target_cdf"});
    const double n = static_cast<double>(values.size());
    for (std::uint64_t i = 0;; ++i) {
        double x = x_min + step * static_cast<double>(i);
        if (x > x_max + 1e-12) break;
        auto it = std::upper_bound(values.begin(), values.end(), x);
        double ecdf = static_cast<double>(it - values.begin()) / n;
        csv.row({format_double(x), format_double(ecdf),
                 format_double(target_cdf_eval(target, x))});
    }
    csv.close();
    return 0;
}

int cmd_table_qq(const CommonOpts& opts) {
    json cfg = load_config(opts, {"sample", "law", "replicas", "target", "seed", "out"});
    bool drawn = false;
    std::uint64_t seed = resolve_seed(cfg, drawn);
    std::string target = cfg.value("target", "exp1");
    if (target != "exp1")
        throw ValidationError("table: unknown target \"" + target + "\" (expected exp1)");

    std::vector<double> values = table_sample(cfg, seed);
    std::sort(values.begin(), values.end());

    CsvWriter csv(out_or(cfg, "qq.csv"), {"q", "sample_quantile", "target_quantile"});
    for (int i = 1; i <= 99; ++i) {
        double q = static_cast<double>(i) / 100.0;
        std::size_t idx = static_cast<std::size_t>(q * (values.size() - 1));
        csv.row({format_double(q), format_double(values[idx]),
                 format_double(-std::log1p(-q))});
    }
    csv.close();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leader-election sieve simulator and verifier"};
    app.require_subcommand(1);

    CommonOpts sieve_opts, gwp_opts, points_opts, verify_opts, fig_opts, cdf_opts, qq_opts;
    std::string verify_id;

    CLI::App* simulate = app.add_subcommand("simulate", "run a simulation, emit CSV");
    simulate->require_subcommand(1);
    add_common(simulate->add_subcommand("sieve", "survivor-count trajectories"), sieve_opts);
    add_common(simulate->add_subcommand("gwp", "branching generation sizes"), gwp_opts);
    add_common(simulate->add_subcommand("points", "point patterns"), points_opts);

    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("id", verify_id, "suite id or 'all'")->required();
    add_common(verify, verify_opts);

    CLI::App* table = app.add_subcommand("table", "emit plot-ready tables");
    table->require_subcommand(1);
    add_common(table->add_subcommand("sieve-figure", "player-round alive grid"), fig_opts);
    add_common(table->add_subcommand("cdf", "empirical vs target cdf grid"), cdf_opts);
    add_common(table->add_subcommand("qq", "quantile-quantile grid"), qq_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            if (simulate->get_subcommand("sieve")->parsed()) return cmd_simulate_sieve(sieve_opts);
            if (simulate->get_subcommand("gwp")->parsed()) return cmd_simulate_gwp(gwp_opts);
            return cmd_simulate_points(points_opts);
        }
        if (verify->parsed()) return cmd_verify(verify_opts, verify_id);
        if (table->get_subcommand("sieve-figure")->parsed())
            return cmd_table_sieve_figure(fig_opts);
        if (table->get_subcommand("cdf")->parsed()) return cmd_table_cdf(cdf_opts);
        return cmd_table_qq(qq_opts);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
