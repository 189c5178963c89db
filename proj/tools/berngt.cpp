#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "berngt/exact.hpp"
#include "berngt/experiments.hpp"
#include "berngt/io.hpp"
#include "berngt/oracle.hpp"
#include "berngt/rates.hpp"
#include "berngt/runconfig.hpp"

namespace {

using namespace berngt;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInvariant = 3;

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::filesystem::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("BERNGT_OUT_DIR"); env && *env) return env;
    return ".";
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

uint64_t pick_seed(const CLI::Option* seed_opt, uint64_t seed_flag) {
    if (seed_opt->count() > 0) return seed_flag;
    std::random_device rd;
    const uint64_t seed = (static_cast<uint64_t>(rd()) << 32) | rd();
    std::cout << "master_seed " << seed << "  (pass --seed " << seed << " to replay)\n";
    return seed;
}

std::vector<Algorithm> parse_decoders(const std::vector<std::string>& names) {
    std::vector<Algorithm> out;
    for (const std::string& name : names) {
        if (name == "comp") out.push_back(Algorithm::comp);
        else if (name == "dd") out.push_back(Algorithm::dd);
        else if (name == "scomp") out.push_back(Algorithm::scomp);
        else if (name == "sss") out.push_back(Algorithm::sss);
        else throw ValidationFailure("unknown decoder: " + name);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t pos = csv.find(',', start);
        const std::string part = csv.substr(start, pos - start);
        if (!part.empty()) out.push_back(std::stoi(part));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

void print_rate_line(const std::string& name, double value, const char* unit,
                     std::optional<double> nu = std::nullopt) {
    std::cout << "  " << name;
    for (std::size_t i = name.size(); i < 16; ++i) std::cout << ' ';
    std::cout << format_sig6(value) << ' ' << unit;
    if (nu.has_value()) std::cout << "   (nu = " << format_sig6(*nu) << ")";
    std::cout << '\n';
}

// ---------------------------------------------------------------- rates --

struct RatesArgs {
    double theta = -1.0;
    int n = 0;
    int k = 0;
    double p = 0.0;
    double nu = 0.0;
    bool has_theta = false, has_nk = false, has_p = false, has_nu = false;
    std::string out;
};

int cmd_rates(const RatesArgs& args) {
    std::vector<std::array<std::string, 3>> csv_rows;
    auto emit = [&](const std::string& name, double value, std::optional<double> nu) {
        csv_rows.push_back({name, format_sig6(value), nu ? format_sig6(*nu) : std::string()});
    };

    if (args.has_theta) {
        const RateBound cap = capacity(args.theta);
        const RateBound comp = comp_max_rate(args.theta);
        const RateBound dd = dd_rate(args.theta);
        std::cout << "rates at theta = " << format_sig6(args.theta) << "\n";
        print_rate_line("counting_bound", 1.0, "bits/test");
        print_rate_line("capacity", cap.value, "bits/test", cap.optimal_nu);
        print_rate_line("dd_rate", dd.value, "bits/test");
        print_rate_line("comp_rate", comp.value, "bits/test");
        std::cout << "  theta_star      " << format_sig6(theta_star()) << "\n";
        emit("counting_bound", 1.0, std::nullopt);
        emit("capacity", cap.value, cap.optimal_nu);
        emit("dd_rate", dd.value, std::nullopt);
        emit("comp_rate", comp.value, std::nullopt);
    }
    if (args.has_nk) {
        const int n = args.n, k = args.k;
        if (k < 1 || k >= n) throw ValidationFailure("rates: need 1 <= k < n");
        const RateBound ts = t_star(n, k);
        const RateBound tc = t_comp(n, k);
        const double theta = ProblemScale::theta_of(n, k);
        double p = args.has_p ? args.p
                              : nu_to_p(args.has_nu ? args.nu : ts.optimal_nu.value_or(1.0), k);
        std::cout << "thresholds for n = " << n << ", k = " << k
                  << "  (theta = " << format_sig6(theta) << ", p = " << format_sig6(p) << ")\n";
        print_rate_line("log2_binom", log_binom(n, k), "bits");
        print_rate_line("t_star", ts.value, "tests", ts.optimal_nu);
        print_rate_line("t_comp", tc.value, "tests");
        const RateBound tt = t_typ(n, k, p);
        print_rate_line("t_typ", tt.value, "tests");
        emit("log2_binom", log_binom(n, k), std::nullopt);
        emit("t_star", ts.value, ts.optimal_nu);
        emit("t_comp", tc.value, std::nullopt);
        emit("t_typ", tt.value, std::nullopt);
        if (k >= 2) {
            const RateBound tsss = t_sss(n, k);
            print_rate_line("t_sss", tsss.value, "tests", tsss.optimal_nu);
            emit("t_sss", tsss.value, tsss.optimal_nu);
        }
        print_rate_line("rate_at_t_comp", rate(n, k, static_cast<int>(std::ceil(tc.value))),
                        "bits/test");
    }
    if (!args.has_theta && !args.has_nk)
        throw ValidationFailure("rates: pass --theta or both --n and --k");

    if (!args.out.empty()) {
        std::ofstream out = open_output(args.out);
        const std::vector<std::string> header = {"quantity", "value", "nu"};
        write_csv_row(out, header);
        for (const auto& row : csv_rows) {
            const std::vector<std::string> fields(row.begin(), row.end());
            write_csv_row(out, fields);
        }
        std::cout << "wrote " << args.out << "\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------- simulate --

struct SimulateArgs {
    std::string config_path;
    int n = 0, k = -1, trials = 0, threads = 0;
    double p = -1.0, nu = -1.0, delta = -1.0, level = 0.5;
    std::string t_grid_csv;
    std::vector<std::string> decoder_names;
    uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    std::string out_dir_flag;
    std::string format = "csv,json";
    bool dump_records = false;
    // sweep-mode extras
    bool sweep_mode = false;
    int t_points = 10;
    std::string reference = "comp";
};

ExperimentConfig build_config(SimulateArgs& args, RunConfigFile& file) {
    if (!args.config_path.empty()) file = RunConfigFile::load(args.config_path);

    // Flags override file entries, then the merged map drives everything.
    auto override_int = [&](const char* key, int v, int unset) {
        if (v != unset) file.set(key, std::to_string(v));
    };
    if (args.n > 0) file.set("n", std::to_string(args.n));
    override_int("k", args.k, -1);
    override_int("trials", args.trials, 0);
    override_int("threads", args.threads, 0);
    if (args.p >= 0.0) file.set("p", format_full(args.p));
    if (args.nu >= 0.0) file.set("nu", format_full(args.nu));
    if (args.delta >= 0.0) file.set("delta", format_full(args.delta));
    if (!args.t_grid_csv.empty()) file.set("t_grid", args.t_grid_csv);
    if (!args.decoder_names.empty()) {
        std::string joined;
        for (const auto& d : args.decoder_names) {
            if (!joined.empty()) joined += ',';
            joined += d;
        }
        file.set("decoders", joined);
    }
    if (args.seed_opt && args.seed_opt->count() > 0) file.set("seed", std::to_string(args.seed));

    std::vector<std::string> problems;
    for (const std::string& key : file.unknown_keys()) problems.push_back("unknown key: " + key);

    ExperimentConfig config;
    try {
        if (file.has("n")) config.n = std::stoi(file.get("n"));
        if (file.has("k")) config.k = std::stoi(file.get("k"));
        if (file.has("trials")) config.trials = std::stoi(file.get("trials"));
        if (file.has("threads")) config.threads = std::stoi(file.get("threads"));
        if (file.has("delta")) config.delta = std::stod(file.get("delta"));
        if (file.has("sss_node_budget"))
            config.sss_node_budget = std::stoull(file.get("sss_node_budget"));
        if (file.has("nu")) {
            config.nu = std::stod(file.get("nu"));
            if (config.k >= 1 && *config.nu > 0.0) config.p = nu_to_p(*config.nu, config.k);
        }
        if (file.has("p")) config.p = std::stod(file.get("p"));
        if (file.has("t_grid")) config.t_grid = parse_int_list(file.get("t_grid"));
        if (file.has("decoders")) {
            std::vector<std::string> names;
            std::string joined = file.get("decoders");
            std::size_t start = 0;
            while (start <= joined.size()) {
                const std::size_t pos = joined.find(',', start);
                const std::string part = joined.substr(start, pos - start);
                if (!part.empty()) names.push_back(part);
                if (pos == std::string::npos) break;
                start = pos + 1;
            }
            config.decoders = parse_decoders(names);
        }
        if (file.has("seed")) config.master_seed = std::stoull(file.get("seed"));
    } catch (const std::exception& e) {
        problems.push_back(std::string("config value parse error: ") + e.what());
    }
    if (config.threads <= 0) config.threads = 1;
    if (!file.has("seed")) {
        config.master_seed = pick_seed(args.seed_opt, args.seed);
        file.set("seed", std::to_string(config.master_seed));
    }
    if (!file.has("p") && !file.has("nu") && config.k >= 1) {
        // Default density: nu = 1, one expected defective per test.
        config.nu = 1.0;
        config.p = nu_to_p(1.0, config.k);
        file.set("nu", "1");
    }

    if (args.sweep_mode && config.t_grid.empty()) {
        if (config.n >= 2 && config.k >= 1) {
            const double ref = args.reference == "star" && config.k >= 1 && config.k < config.n
                                   ? t_star(config.n, config.k).value
                                   : t_comp(config.n, config.k).value;
            const double delta = config.delta > 0.0 ? config.delta : 0.5;
            const double lo = (1.0 - delta) * ref;
            const double hi = (1.0 + delta) * ref;
            const int points = std::max(2, args.t_points);
            int prev = -1;
            for (int i = 0; i < points; ++i) {
                int T = static_cast<int>(std::lround(lo + (hi - lo) * i / (points - 1)));
                if (T <= prev) T = prev + 1;
                config.t_grid.push_back(T);
                prev = T;
            }
            std::string joined;
            for (int T : config.t_grid) {
                if (!joined.empty()) joined += ',';
                joined += std::to_string(T);
            }
            file.set("t_grid", joined);
        }
    }

    for (const std::string& err : config.validate()) problems.push_back(err);
    if (!problems.empty()) {
        std::string all = "invalid configuration:";
        for (const std::string& p : problems) all += "\n  - " + p;
        throw ValidationFailure(all);
    }
    return config;
}

int cmd_simulate(SimulateArgs& args) {
    RunConfigFile file;
    const ExperimentConfig config = build_config(args, file);

    const std::filesystem::path dir = output_dir(args.out_dir_flag);
    std::filesystem::create_directories(dir);

    const bool want_csv = args.format.find("csv") != std::string::npos;
    const bool want_json = args.format.find("json") != std::string::npos;

    SuccessCurve curve;
    curve.config = config;
    std::vector<TrialRecord> records;
    std::ofstream records_out;
    if (args.dump_records) records_out = open_output(dir / "records.jsonl");
    for (int T : config.t_grid) {
        curve.points.push_back(
            estimate_success(config, T, args.dump_records ? &records : nullptr));
        if (args.dump_records) write_trial_records_jsonl(records_out, records);
    }

    std::vector<std::string> outputs;
    if (want_csv) {
        const auto path = dir / "curve.csv";
        std::ofstream out = open_output(path);
        write_curve_csv(out, curve);
        outputs.push_back(path.string());
    }
    if (want_json) {
        const auto path = dir / "curve.json";
        std::ofstream out = open_output(path);
        out << curve_json(curve) << '\n';
        outputs.push_back(path.string());
    }
    if (args.dump_records) outputs.push_back((dir / "records.jsonl").string());

    RunManifest manifest = RunManifest::make(file.hash(), config.master_seed, outputs);
    {
        std::ofstream out = open_output(dir / "manifest.json");
        out << manifest.to_json() << '\n';
    }

    std::cout << "n=" << config.n << " k=" << config.k << " p=" << format_sig6(config.p)
              << " trials=" << config.trials << " seed=" << config.master_seed << "\n";
    for (const CurvePoint& pt : curve.points) {
        std::cout << "  T=" << pt.T;
        for (const DecoderPointStats& s : pt.stats)
            std::cout << "  " << to_string(s.algorithm) << "=" << format_sig6(s.rate());
        std::cout << "\n";
    }
    for (Algorithm a : config.decoders) {
        const auto cross = estimate_threshold(curve, a, args.level);
        if (cross)
            std::cout << to_string(a) << " crosses " << format_sig6(args.level) << " near T = "
                      << format_sig6(cross->T_cross) << "  (bracket " << cross->T_lo << ".."
                      << cross->T_hi << ")\n";
        else
            std::cout << to_string(a) << " never reaches " << format_sig6(args.level)
                      << " on this grid\n";
    }
    for (const std::string& path : outputs) std::cout << "wrote " << path << "\n";
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- figure1 --

int cmd_figure1(double theta_min, double theta_max, int points, const std::string& out_path) {
    if (!(theta_min > 0.0 && theta_max < 1.0 && theta_min <= theta_max))
        throw ValidationFailure("figure1: need 0 < theta-min <= theta-max < 1");
    if (points < 2) throw ValidationFailure("figure1: need at least 2 grid points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            theta_min + (theta_max - theta_min) * i / (points - 1);
    const auto rows = figure1_data(grid);
    if (out_path.empty() || out_path == "-") {
        write_figure_csv(std::cout, rows);
    } else {
        std::ofstream out = open_output(out_path);
        write_figure_csv(out, rows);
        std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
    }
    return kExitOk;
}

// --------------------------------------------------------- oracle-check --

struct OracleCheckArgs {
    int max_n = 12;
    int max_k = 3;
    int seeds = 1000;
    std::vector<double> ps = {0.1, 0.3, 0.5};
    uint64_t seed = 20260810;
};

int cmd_oracle_check(const OracleCheckArgs& args) {
    if (args.max_n > EnumerationCaps{}.max_n_unrestricted)
        throw ValidationFailure("oracle-check: --max-n above enumeration cap");

    long comp_checked = 0, sss_checked = 0, sandwich_checked = 0, union_bound_events = 0;
    long sandwich_premises = 0;

    for (int i = 0; i < args.seeds; ++i) {
        const uint64_t inst = derive_seed(args.seed, SeedPurpose::instance, static_cast<uint64_t>(i));
        Xoshiro256StarStar rng(inst);
        const int n = 4 + static_cast<int>(rng.next_below(static_cast<uint64_t>(args.max_n - 3)));
        const int k = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(
                              std::min(args.max_k, n) )));
        const double p = args.ps[static_cast<std::size_t>(rng.next_below(args.ps.size()))];
        const int T = 2 + static_cast<int>(rng.next_below(static_cast<uint64_t>(2 * n)));

        const auto design = generate_design(n, T, p, rng.next());
        const auto truth = sample_defective_set(n, k, rng.next());
        const auto y = run_tests(design, truth);

        const auto family = enumerate_satisfying(design, y);
        const auto comp = comp_decode(design, y);
        const auto sss = sss_decode(design, y);

        // COMP must be the unique largest satisfying set.
        const DefectiveSet* largest = nullptr;
        std::size_t max_size = 0;
        int ties = 0;
        for (const DefectiveSet& s : family.sets) {
            if (s.items.size() > max_size || largest == nullptr) {
                max_size = s.items.size();
                largest = &s;
                ties = 1;
            } else if (s.items.size() == max_size) {
                ++ties;
            }
        }
        if (!largest || ties != 1 || !(comp.estimate == *largest)) {
            std::cerr << "FAIL comp-maximality at seed index " << i << "\n";
            return kExitInvariant;
        }
        ++comp_checked;

        std::size_t min_size = family.sets.front().items.size();
        for (const DefectiveSet& s : family.sets) min_size = std::min(min_size, s.items.size());
        if (static_cast<std::size_t>(sss.result.size()) != min_size) {
            std::cerr << "FAIL sss-minimality at seed index " << i << "\n";
            return kExitInvariant;
        }
        ++sss_checked;

        const auto report = verify_sandwich_argument(design, y, k);
        if (!report.holds) {
            std::cerr << "FAIL sandwich implication at seed index " << i << "\n";
            return kExitInvariant;
        }
        ++sandwich_checked;
        if (report.premise) ++sandwich_premises;
        if (report.premise && report.size_k_count >= 2) ++union_bound_events;
    }

    std::cout << "oracle-check passed over " << args.seeds << " instances\n"
              << "  comp-maximality      " << comp_checked << "\n"
              << "  sss-minimality       " << sss_checked << "\n"
              << "  sandwich-implication " << sandwich_checked << " (premise held "
              << sandwich_premises << ", all with >= 2 size-k sets: " << union_bound_events
              << ")\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bernoulli group testing: rate formulas, decoders, and Monte Carlo sweeps"};
    app.require_subcommand(1);

    RatesArgs rates_args;
    auto* rates_cmd = app.add_subcommand("rates", "evaluate capacity, rate and threshold formulas");
    auto* theta_opt = rates_cmd->add_option("--theta", rates_args.theta, "sparsity parameter in [0,1)");
    auto* n_opt = rates_cmd->add_option("--n", rates_args.n, "item count");
    auto* k_opt = rates_cmd->add_option("--k", rates_args.k, "defective count");
    auto* p_opt = rates_cmd->add_option("--p", rates_args.p, "Bernoulli parameter for t_typ");
    auto* nu_opt = rates_cmd->add_option("--nu", rates_args.nu, "density parameter for t_typ");
    rates_cmd->add_option("--out", rates_args.out, "also write the table as CSV");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo success curve over a T grid");
    auto* sweep_cmd = app.add_subcommand("sweep", "simulate with an automatic T grid around a threshold");
    for (auto* cmd : {sim_cmd, sweep_cmd}) {
        cmd->add_option("--config", sim_args.config_path, "key=value config file");
        cmd->add_option("--n", sim_args.n, "item count");
        cmd->add_option("--k", sim_args.k, "defective count");
        cmd->add_option("--p", sim_args.p, "Bernoulli parameter");
        cmd->add_option("--nu", sim_args.nu, "density parameter (p = 1 - e^(-nu/k))");
        cmd->add_option("--tests,--t-grid", sim_args.t_grid_csv, "comma-separated T grid");
        cmd->add_option("--trials", sim_args.trials, "trials per grid point");
        cmd->add_option("--decoder", sim_args.decoder_names, "decoder (repeatable): comp dd scomp sss");
        sim_args.seed_opt = cmd->add_option("--seed", sim_args.seed, "master seed");
        cmd->add_option("--threads", sim_args.threads, "worker thread cap");
        cmd->add_option("--out", sim_args.out_dir_flag, "output directory (default . or BERNGT_OUT_DIR)");
        cmd->add_option("--format", sim_args.format, "outputs to write: csv,json");
        cmd->add_option("--level", sim_args.level, "threshold crossing level (default 0.5)");
        cmd->add_flag("--dump-records", sim_args.dump_records, "also write per-trial records.jsonl");
    }
    sweep_cmd->add_option("--delta", sim_args.delta, "grid half-width fraction (default 0.5)");
    sweep_cmd->add_option("--t-points", sim_args.t_points, "grid size (default 10)");
    sweep_cmd->add_option("--reference", sim_args.reference, "threshold reference: comp or star");

    double fig_theta_min = 0.01, fig_theta_max = 0.99;
    int fig_points = 99;
    std::string fig_out;
    auto* fig_cmd = app.add_subcommand("figure1", "rate curves CSV over a theta grid");
    fig_cmd->add_option("--theta-min", fig_theta_min, "grid start (default 0.01)");
    fig_cmd->add_option("--theta-max", fig_theta_max, "grid end (default 0.99)");
    fig_cmd->add_option("--points", fig_points, "grid size (default 99)");
    fig_cmd->add_option("--out", fig_out, "output CSV path ('-' for stdout)");

    OracleCheckArgs oc_args;
    auto* oc_cmd = app.add_subcommand("oracle-check", "brute-force decoder invariants on small instances");
    oc_cmd->add_option("--max-n", oc_args.max_n, "largest item count (default 12)");
    oc_cmd->add_option("--max-k", oc_args.max_k, "largest defective count (default 3)");
    oc_cmd->add_option("--seeds", oc_args.seeds, "instance count (default 1000)");
    oc_cmd->add_option("--p", oc_args.ps, "Bernoulli parameters to rotate through");
    oc_cmd->add_option("--seed", oc_args.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (rates_cmd->parsed()) {
            rates_args.has_theta = theta_opt->count() > 0;
            rates_args.has_nk = n_opt->count() > 0 && k_opt->count() > 0;
            rates_args.has_p = p_opt->count() > 0;
            rates_args.has_nu = nu_opt->count() > 0;
            return cmd_rates(rates_args);
        }
        if (sim_cmd->parsed() || sweep_cmd->parsed()) {
            sim_args.sweep_mode = sweep_cmd->parsed();
            return cmd_simulate(sim_args);
        }
        if (fig_cmd->parsed()) return cmd_figure1(fig_theta_min, fig_theta_max, fig_points, fig_out);
        if (oc_cmd->parsed()) return cmd_oracle_check(oc_args);
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
