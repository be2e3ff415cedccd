// Command-line front end: sweeps, fits and limit-theorem checks.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimome/asymptotics.hpp"
#include "mimome/config.hpp"
#include "mimome/harness.hpp"
#include "mimome/results_io.hpp"

namespace fs = std::filesystem;
using namespace mimome;

namespace {

std::string output_name(const SweepSpec& spec) {
    std::string name = spec.scenario + "_" + std::string(to_string(spec.scheme));
    if (spec.quant_bits) name += "_B" + std::to_string(*spec.quant_bits);
    return name + ".csv";
}

int run_sweep_command(const fs::path& config, const fs::path& out_dir, std::optional<std::uint64_t> seed,
                      int threads) {
    auto specs = parse_config(config);
    fs::create_directories(out_dir);
    const int workers = threads > 0 ? threads : default_worker_count();
    for (SweepSpec& spec : specs) {
        if (seed) spec.master_seed = *seed;
        const std::string label = output_name(spec);
        const SweepResult result = run_sweep(spec, workers, [&](const SweepPoint& p) {
            std::cerr << label << ": M=" << p.m << " trials=" << p.trials << " resamples=" << p.resamples
                      << " cost=" << format_number(p.cost.mean) << '\n';
        });
        const RunManifest m = emit_results(result, out_dir / label);
        std::cout << m.csv_path.string() << '\n' << m.manifest_path.string() << '\n';
    }
    return 0;
}

int users_from_manifest(const fs::path& csv) {
    const fs::path manifest = manifest_path_for(csv);
    if (!fs::exists(manifest)) return 1;
    const auto specs = parse_config(manifest);
    return specs.empty() ? 1 : specs.front().base.K;
}

int run_fit_command(const fs::path& csv, const std::string& model_name, std::optional<double> anchor,
                    std::optional<int> users, std::optional<std::string> column) {
    const FitModel model = fit_model_from_string(model_name);
    const CsvTable table = read_csv(csv);
    const std::vector<double> ms = table.numeric_column("M");
    FitResult fit;
    if (is_growth_model(model)) {
        const int k = users ? *users : users_from_manifest(csv);
        fit = fit_growth(ms, table.numeric_column(column.value_or("r_sum_noeve_mean")), k, model);
    } else {
        if (ms.empty()) throw FitError("CSV has no rows");
        fit = fit_cost_anchor(ms, table.numeric_column(column.value_or("cost_mean")), model,
                              anchor.value_or(ms.back()));
    }
    const bool growth = is_growth_model(model);
    std::cout << "model: " << to_string(fit.model) << '\n'
              << (growth ? "R0: " : "eps0: ") << format_number(fit.level) << '\n';
    if (fit.slope) std::cout << "T: " << format_number(*fit.slope) << '\n';
    std::cout << "residual_rms: " << format_number(fit.residual_rms) << '\n'
              << "r_squared: " << format_number(fit.r_squared) << '\n';
    return 0;
}

int run_gumbel_command(int m, int trials, std::uint64_t seed) {
    const GumbelCheck g = gumbel_check(m, trials, seed);
    std::cout << "m: " << g.m << '\n'
              << "trials: " << g.trials << '\n'
              << "ks_statistic: " << format_number(g.ks_statistic) << '\n'
              << "sample_mean_max: " << format_number(g.sample_mean_max) << '\n'
              << "harmonic_number: " << format_number(harmonic_number(static_cast<std::uint64_t>(m))) << '\n'
              << "sample_mean_shifted: " << format_number(g.sample_mean_shifted) << '\n';
    return 0;
}

int run_clt_command(int m, int trials, std::uint64_t seed) {
    const auto s = clt_samples(m, trials, seed);
    double var = 0.0;
    for (const cdouble& x : s) var += std::norm(x);
    var /= static_cast<double>(s.size());
    std::cout << "m: " << m << '\n'
              << "trials: " << trials << '\n'
              << "ks_statistic: " << format_number(clt_check(m, trials, seed)) << '\n'
              << "second_moment: " << format_number(var) << '\n';
    return 0;
}

int run_single_command(const fs::path& config, int m, std::optional<std::uint64_t> seed, std::uint64_t trial,
                       std::size_t index) {
    const auto specs = parse_config(config);
    if (index >= specs.size()) throw ConfigError("config yields only " + std::to_string(specs.size()) + " sweeps");
    const SweepSpec& spec = specs[index];
    const SystemConfig cfg = spec.config_for(m);
    cfg.validate();
    const std::uint64_t s = seed.value_or(spec.master_seed);
    const TrialOutcome out = run_trial(cfg, spec.scheme, spec.quant_bits, s, trial);
    std::cout << rate_report_text(out.report, m, s);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo secrecy-rate simulator for TAS and hybrid analog-digital massive MIMO"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    auto* sweep = app.add_subcommand("sweep", "run the sweeps described by a config or manifest");
    sweep->add_option("config", config_path, "YAML config or emitted manifest")->required()->check(CLI::ExistingFile);
    sweep->add_option("-o,--out", out_dir, "output directory");
    sweep->add_option("--seed", seed, "override the master seed");
    sweep->add_option("--threads", threads, "worker threads (default: SIM_THREADS or hardware)");

    std::string csv_path;
    std::string model;
    std::optional<double> anchor;
    std::optional<int> users;
    std::optional<std::string> column;
    auto* fit = app.add_subcommand("fit", "fit a growth or cost model to a sweep CSV");
    fit->add_option("csv", csv_path)->required()->check(CLI::ExistingFile);
    fit->add_option("--model", model, "loglog_growth | log_growth | loglog_cost | log_cost")->required();
    fit->add_option("--anchor", anchor, "anchor M0 for cost models (default: largest M)");
    fit->add_option("--users", users, "K for growth models (default: from manifest, else 1)");
    fit->add_option("--column", column, "CSV column to fit");

    int m = 0;
    int trials = 0;
    std::uint64_t check_seed = 1;
    auto* gumbel = app.add_subcommand("gumbel", "extreme-value check of max |h|^2 - ln m");
    gumbel->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    gumbel->add_option("--trials", trials)->required();
    gumbel->add_option("--seed", check_seed);

    auto* clt = app.add_subcommand("clt", "CLT check of the cross-user interference term");
    clt->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    clt->add_option("--trials", trials)->required();
    clt->add_option("--seed", check_seed);

    std::uint64_t trial = 0;
    std::size_t index = 0;
    auto* single = app.add_subcommand("single", "evaluate one realization and print its rate report");
    single->add_option("config", config_path)->required()->check(CLI::ExistingFile);
    single->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    single->add_option("--seed", seed);
    single->add_option("--trial", trial, "trial index (default 0)");
    single->add_option("--index", index, "which sweep of the config to use (default 0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) return run_sweep_command(config_path, out_dir, seed, threads);
        if (*fit) return run_fit_command(csv_path, model, anchor, users, column);
        if (*gumbel) return run_gumbel_command(m, trials, check_seed);
        if (*clt) return run_clt_command(m, trials, check_seed);
        if (*single) return run_single_command(config_path, m, seed, trial, index);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
