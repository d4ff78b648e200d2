#include "hawkes/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <utility>

#include "hawkes/csv.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/experiments.hpp"
#include "hawkes/moment_bounds.hpp"

namespace hawkes {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunContext {
    const RunConfig& config;
    fs::path out_dir;
    std::string hash;
    std::vector<std::string> outputs;
    json details;

    CsvWriter open_csv(const std::string& name) {
        CsvWriter writer(out_dir / name);
        writer.comment("config_hash=" + hash + " seed=" + std::to_string(config.seed));
        outputs.push_back(name);
        return writer;
    }

    void write_plot_script(const std::string& name, const std::vector<std::string>& lines) {
        const fs::path file = out_dir / name;
        std::ofstream out(file);
        if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
        out << "# config_hash=" << hash << " seed=" << config.seed << '\n';
        out << "# gnuplot script; run from this directory: gnuplot " << name << '\n';
        out << "set datafile separator \",\"\n";
        out << "set terminal pngcairo size 1000,700\n";
        for (const std::string& line : lines) out << line << '\n';
        if (!out) throw std::runtime_error("failed writing " + file.string());
        outputs.push_back(name);
    }
};

double effective_t_max(const RunConfig& config) {
    if (config.t_max) return *config.t_max;
    return static_cast<double>(*config.n_steps) * config.delta;
}

std::size_t resolve_n_steps(const RunConfig& config) {
    if (config.n_steps) return *config.n_steps;
    const double ratio = *config.t_max / config.delta;
    const auto n = static_cast<long long>(std::llround(ratio));
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError("run.t_max", "not an integer multiple of delta");
    }
    return static_cast<std::size_t>(n);
}

// Grid columns in a trajectory CSV: t is column 1, then the state in flat
// order, so component (k, j) lands in column flat_index + 2.
int trajectory_column(const NetworkModel& model, int k, int j) {
    return static_cast<int>(model.flat_index(k, j)) + 2;
}

std::vector<std::string> trajectory_plot_lines(const NetworkModel& model,
                                               const std::string& csv_name,
                                               const std::string& png_name) {
    std::vector<std::string> lines;
    lines.push_back("set output \"" + png_name + "\"");
    lines.push_back("set xlabel \"t\"");
    lines.push_back("set ylabel \"state\"");
    lines.push_back("plot \\");
    std::vector<std::string> parts;
    for (int k = 1; k <= 2; ++k) {
        for (int j = 2; j <= model.pop(k).eta + 1; ++j) {
            parts.push_back("  \"" + csv_name + "\" using 1:" +
                            std::to_string(trajectory_column(model, k, j)) +
                            " with lines lc rgb \"grey\" notitle");
        }
    }
    for (int k = 1; k <= 2; ++k) {
        parts.push_back("  \"" + csv_name + "\" using 1:" +
                        std::to_string(trajectory_column(model, k, 1)) +
                        " with lines lc rgb \"black\" title \"x_" + std::to_string(k) + "_1\"");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        lines.push_back(parts[i] + (i + 1 < parts.size() ? ", \\" : ""));
    }
    return lines;
}

void run_pdmp(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    ThinningOptions options;
    options.bound = config.bound;
    options.record_path = true;
    options.record_spikes = true;
    options.sample_delta = config.sample_delta;
    RngStream rng(config.seed, 0);
    const ThinningResult result =
        thinning_simulate(config.model, config.x0, effective_t_max(config), options, rng);

    {
        CsvWriter writer = ctx.open_csv("pdmp_path.csv");
        write_pdmp_path(writer, config.model, result.path);
        writer.close();
    }
    {
        CsvWriter writer = ctx.open_csv("spikes.csv");
        write_spikes(writer, result.spikes);
        writer.close();
    }
    if (config.sample_delta) {
        CsvWriter writer = ctx.open_csv("samples.csv");
        write_samples(writer, config.model, result.sample_times, result.samples);
        writer.close();
    }

    ctx.details["accepted"] = result.stats.accepted;
    ctx.details["rejected"] = result.stats.rejected;
    ctx.details["window_advances"] = result.stats.window_advances;
    ctx.details["rejection_fraction"] = result.stats.rejection_fraction();

    std::vector<std::string> lines;
    lines.push_back("set output \"pdmp_path.png\"");
    lines.push_back("set xlabel \"t\"");
    lines.push_back("set ylabel \"main variables\"");
    const int col1 = static_cast<int>(ctx.config.model.flat_index(1, 1)) + 4;
    const int col2 = static_cast<int>(ctx.config.model.flat_index(2, 1)) + 4;
    lines.push_back("plot \\");
    lines.push_back("  \"pdmp_path.csv\" using 1:" + std::to_string(col1) +
                    " with lines lc rgb \"black\" title \"x_1_1\", \\");
    lines.push_back("  \"pdmp_path.csv\" using 1:" + std::to_string(col2) +
                    " with lines lc rgb \"blue\" title \"x_2_1\"");
    ctx.write_plot_script("plot_pdmp.gp", lines);
}

void run_grid(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    Scheme scheme = config.scheme;
    if (config.mode == RunMode::Ode) {
        switch (scheme) {
            case Scheme::EulerMaruyama:
                throw ConfigError("run.scheme",
                                  "no noise-free Euler variant; use lie-trotter or strang");
            case Scheme::LieTrotter: scheme = Scheme::OdeLieTrotter; break;
            case Scheme::Strang: scheme = Scheme::OdeStrang; break;
            default: break;
        }
    } else if (config.mode == RunMode::Sde && scheme_is_deterministic(scheme)) {
        throw ConfigError("run.scheme", "scheme " + scheme_name(scheme) +
                                            " draws no noise; use mode ode");
    }
    const std::size_t n_steps = resolve_n_steps(config);
    const double noise_scale =
        1.0 / std::sqrt(static_cast<double>(config.model.total_neurons()));
    RngStream rng(config.seed, 0);

    CsvWriter writer = ctx.open_csv("trajectory.csv");
    std::vector<std::string> names = state_column_names(config.model);
    names.insert(names.begin(), "t");
    writer.header(names);
    integrate_streaming(config.model, scheme, config.x0, config.delta, n_steps, noise_scale, rng,
                        [&](std::size_t step, const StateVec& x) {
                            writer.field(static_cast<double>(step) * config.delta);
                            for (const double v : x) writer.field(v);
                            writer.end_row();
                        });
    writer.close();

    ctx.details["scheme"] = scheme_name(scheme);
    ctx.details["n_steps"] = n_steps;

    ctx.write_plot_script("plot_trajectory.gp",
                          trajectory_plot_lines(config.model, "trajectory.csv",
                                                "trajectory.png"));
    std::vector<std::string> phase;
    phase.push_back("set output \"phase.png\"");
    phase.push_back("set xlabel \"x_1_1\"");
    phase.push_back("set ylabel \"x_2_1\"");
    phase.push_back("plot \"trajectory.csv\" using " +
                    std::to_string(trajectory_column(config.model, 1, 1)) + ":" +
                    std::to_string(trajectory_column(config.model, 2, 1)) +
                    " with lines lc rgb \"black\" notitle");
    ctx.write_plot_script("plot_phase.gp", phase);
}

void run_bounds(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    MomentBoundCurve curve;
    try {
        curve = build_moment_bound_curve(config.model, config.x0, config.bounds.t_max,
                                         config.bounds.n_points, config.bounds.delta,
                                         config.bounds.include_l0);
    } catch (const std::invalid_argument& error) {
        throw ConfigError("bounds", error.what());
    }
    {
        CsvWriter writer = ctx.open_csv("bounds.csv");
        write_moment_curve(writer, curve);
        writer.close();
    }

    std::vector<std::string> lines;
    for (int order = 1; order <= 2; ++order) {
        lines.push_back("set output \"bounds_order" + std::to_string(order) + ".png\"");
        lines.push_back("set xlabel \"t\"");
        lines.push_back("set ylabel \"order " + std::to_string(order) + " bounds\"");
        std::vector<std::string> parts;
        for (int k = 1; k <= 2; ++k) {
            for (int j = 1; j <= config.model.pop(k).eta + 1; ++j) {
                const std::string component =
                    "x_" + std::to_string(k) + "_" + std::to_string(j);
                const std::string filter = "strcol(2) eq \"" + component +
                                           "\" && $3 == " + std::to_string(order) +
                                           " && strcol(4) eq \"continuous\"";
                parts.push_back("  \"bounds.csv\" using 1:(" + filter + " ? $5 : 1/0)" +
                                " with lines title \"" + component + " lower\"");
                parts.push_back("  \"bounds.csv\" using 1:(" + filter + " ? $6 : 1/0)" +
                                " with lines title \"" + component + " upper\"");
            }
        }
        lines.push_back("plot \\");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            lines.push_back(parts[i] + (i + 1 < parts.size() ? ", \\" : ""));
        }
    }
    ctx.write_plot_script("plot_bounds.gp", lines);
}

void run_converge(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    RmseTable table;
    try {
        table = rmse_convergence(config.model, config.x0, config.converge.schemes,
                                 config.converge.deltas, config.converge.replicates,
                                 config.converge.t_star, config.converge.ref_delta, config.seed);
    } catch (const std::invalid_argument& error) {
        throw ConfigError("converge", error.what());
    }
    {
        CsvWriter writer = ctx.open_csv("rmse.csv");
        write_rmse_table(writer, table);
        writer.close();
    }
    {
        CsvWriter writer = ctx.open_csv("rmse_fits.csv");
        write_rmse_fits(writer, table);
        writer.close();
    }
    for (const SchemeFit& fit : table.fits) {
        ctx.details["slopes"][scheme_name(fit.scheme)] = fit.fit.slope;
    }

    std::vector<std::string> lines;
    lines.push_back("set output \"rmse.png\"");
    lines.push_back("set logscale xy 10");
    lines.push_back("set xlabel \"delta\"");
    lines.push_back("set ylabel \"RMSE\"");
    lines.push_back("set key left top");
    std::vector<std::string> parts;
    for (const SchemeFit& fit : table.fits) {
        const std::string name = scheme_name(fit.scheme);
        parts.push_back("  \"rmse.csv\" using 1:(strcol(2) eq \"" + name +
                        "\" ? $3 : 1/0) with linespoints title \"" + name + "\"");
    }
    lines.push_back("plot \\");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        lines.push_back(parts[i] + (i + 1 < parts.size() ? ", \\" : ""));
    }
    ctx.write_plot_script("plot_rmse.gp", lines);
}

void run_compare(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    const ComparisonReport report =
        compare_pdmp_diffusion(config.model, config.compare.t_long, config.compare.delta,
                               config.seed);
    {
        CsvWriter writer = ctx.open_csv("comparison.csv");
        write_comparison_summary(writer, report);
        writer.close();
    }
    std::vector<std::string> lines;
    for (const ComparisonVariable& var : report.variables) {
        const std::string base = "density_x_" + std::to_string(var.population) + "_1";
        {
            CsvWriter writer = ctx.open_csv(base + "_pdmp.csv");
            write_density(writer, var.density_pdmp);
            writer.close();
        }
        {
            CsvWriter writer = ctx.open_csv(base + "_diffusion.csv");
            write_density(writer, var.density_diffusion);
            writer.close();
        }
        json entry;
        entry["mean_pdmp"] = var.mean_pdmp;
        entry["mean_diffusion"] = var.mean_diffusion;
        entry["ks_distance"] = var.ks_distance;
        entry["amplitude_pdmp"] = var.amplitude_pdmp;
        ctx.details["x_" + std::to_string(var.population) + "_1"] = std::move(entry);

        lines.push_back("set output \"" + base + ".png\"");
        lines.push_back("set xlabel \"x_" + std::to_string(var.population) + "_1\"");
        lines.push_back("set ylabel \"density\"");
        lines.push_back("plot \\");
        lines.push_back("  \"" + base +
                        "_pdmp.csv\" using 1:2 with lines lc rgb \"black\" title \"pdmp\", \\");
        lines.push_back("  \"" + base +
                        "_diffusion.csv\" using 1:2 with lines dt 2 lc rgb \"red\" title "
                        "\"diffusion\"");
    }
    ctx.write_plot_script("plot_compare.gp", lines);
}

void run_timing(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    const TimingTable table =
        timing_benchmark(config.model, config.timing.n_list, config.timing.bound_kinds,
                         config.timing.t_max, config.timing.repeats, config.seed);
    {
        CsvWriter writer = ctx.open_csv("timing.csv");
        write_timing_table(writer, table);
        writer.close();
    }

    std::vector<std::string> lines;
    lines.push_back("set output \"timing.png\"");
    lines.push_back("set xlabel \"total neurons N\"");
    lines.push_back("set ylabel \"mean seconds\"");
    lines.push_back("set key left top");
    std::vector<std::string> parts;
    for (const BoundKind bound : config.timing.bound_kinds) {
        const std::string name = bound == BoundKind::Local ? "local" : "global";
        parts.push_back("  \"timing.csv\" using 2:(strcol(1) eq \"pdmp\" && strcol(3) eq \"" +
                        name + "\" ? $4 : 1/0) with linespoints title \"pdmp " + name + "\"");
    }
    parts.push_back(
        "  \"timing.csv\" using 2:(strcol(1) eq \"diffusion\" ? $4 : 1/0) with linespoints dt 2 "
        "title \"diffusion\"");
    lines.push_back("plot \\");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        lines.push_back(parts[i] + (i + 1 < parts.size() ? ", \\" : ""));
    }
    ctx.write_plot_script("plot_timing.gp", lines);
}

void run_density(RunContext& ctx) {
    const RunConfig& config = ctx.config;
    const std::size_t n_steps = resolve_n_steps(config);
    const double noise_scale =
        1.0 / std::sqrt(static_cast<double>(config.model.total_neurons()));
    RngStream rng(config.seed, 0);

    const auto kappa = static_cast<std::size_t>(config.model.kappa());
    std::vector<std::vector<double>> series(kappa);
    for (auto& component : series) component.reserve(n_steps + 1);
    integrate_streaming(config.model, config.scheme, config.x0, config.delta, n_steps,
                        noise_scale, rng, [&](std::size_t, const StateVec& x) {
                            for (std::size_t i = 0; i < kappa; ++i) series[i].push_back(x[i]);
                        });

    const auto burn = static_cast<std::size_t>(0.1 * static_cast<double>(n_steps + 1));
    const std::vector<std::string> names = state_column_names(config.model);
    std::vector<std::string> lines;
    lines.push_back("set output \"density.png\"");
    lines.push_back("set xlabel \"x\"");
    lines.push_back("set ylabel \"density\"");
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < kappa; ++i) {
        std::vector<double> samples(series[i].begin() + static_cast<std::ptrdiff_t>(burn),
                                    series[i].end());
        const DensityEstimate estimate = kde(samples, std::nullopt, names[i]);
        const std::string file = "density_" + names[i] + ".csv";
        CsvWriter writer = ctx.open_csv(file);
        write_density(writer, estimate);
        writer.close();
        ctx.details[names[i]]["sample_mean"] = estimate.sample_mean;
        ctx.details[names[i]]["bandwidth"] = estimate.bandwidth;
        parts.push_back("  \"" + file + "\" using 1:2 with lines title \"" + names[i] + "\"");
    }
    ctx.details["scheme"] = scheme_name(config.scheme);
    ctx.details["n_steps"] = n_steps;
    lines.push_back("plot \\");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        lines.push_back(parts[i] + (i + 1 < parts.size() ? ", \\" : ""));
    }
    ctx.write_plot_script("plot_density.gp", lines);
}

}  // namespace

RunReport run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    RunContext ctx{config, fs::path(config.out_dir), config_hash(config), {}, json::object()};
    switch (config.mode) {
        case RunMode::Pdmp: run_pdmp(ctx); break;
        case RunMode::Sde:
        case RunMode::Ode: run_grid(ctx); break;
        case RunMode::Bounds: run_bounds(ctx); break;
        case RunMode::Converge: run_converge(ctx); break;
        case RunMode::Compare: run_compare(ctx); break;
        case RunMode::Timing: run_timing(ctx); break;
        case RunMode::Density: run_density(ctx); break;
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    RunReport report;
    report.out_dir = ctx.out_dir;
    report.outputs = ctx.outputs;
    report.hash = ctx.hash;
    report.wall_seconds = elapsed.count();

    json document;
    document["version"] = kVersion;
    document["mode"] = mode_name(config.mode);
    document["seed"] = config.seed;
    document["config_hash"] = ctx.hash;
    document["wall_seconds"] = report.wall_seconds;
    document["outputs"] = ctx.outputs;
    document["details"] = std::move(ctx.details);
    document["config"] = to_json(config);

    const fs::path report_file = ctx.out_dir / "run_report.json";
    std::ofstream out(report_file);
    if (!out) throw std::runtime_error("cannot open " + report_file.string() + " for writing");
    out << document.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + report_file.string());
    report.outputs.push_back("run_report.json");

    return report;
}

}  // namespace hawkes
