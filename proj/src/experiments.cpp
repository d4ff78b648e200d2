#include "hawkes/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

// Rounds ratio to the nearest integer and insists it is exact to 1e-9
// relative, so grid mismatches surface as errors instead of drift.
std::size_t exact_ratio(double numerator, double denominator, const char* what) {
    const double ratio = numerator / denominator;
    const auto n = static_cast<long long>(std::llround(ratio));
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(numerator) +
                                    " is not an integer multiple of " +
                                    std::to_string(denominator));
    }
    return static_cast<std::size_t>(n);
}

double squared_distance(const StateVec& a, const StateVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

RmseTable rmse_convergence(const NetworkModel& model, const StateVec& x0,
                           const std::vector<Scheme>& schemes, std::vector<double> deltas,
                           int replicates, double t_star, double ref_delta,
                           std::uint64_t seed) {
    if (schemes.empty()) throw std::invalid_argument("rmse_convergence: no schemes");
    if (deltas.size() < 3) {
        throw std::invalid_argument("rmse_convergence: need at least 3 deltas for a slope");
    }
    if (replicates < 1) throw std::invalid_argument("rmse_convergence: replicates must be >= 1");
    if (!(ref_delta > 0.0)) throw std::invalid_argument("rmse_convergence: ref_delta must be > 0");
    std::sort(deltas.begin(), deltas.end());

    const std::size_t n_fine = exact_ratio(t_star, ref_delta, "rmse_convergence: t_star");
    std::vector<std::size_t> fine_per_coarse(deltas.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        fine_per_coarse[d] = exact_ratio(deltas[d], ref_delta, "rmse_convergence: delta");
        if (n_fine % fine_per_coarse[d] != 0) {
            throw std::invalid_argument("rmse_convergence: t_star is not a multiple of delta " +
                                        std::to_string(deltas[d]));
        }
    }

    const double noise_scale = 1.0 / std::sqrt(static_cast<double>(model.total_neurons()));
    const Stepper fine_stepper(model, Scheme::EulerMaruyama, ref_delta, noise_scale);
    std::vector<std::vector<Stepper>> steppers;  // [delta][scheme]
    steppers.reserve(deltas.size());
    for (const double delta : deltas) {
        std::vector<Stepper> row;
        row.reserve(schemes.size());
        for (const Scheme scheme : schemes) row.emplace_back(model, scheme, delta, noise_scale);
        steppers.push_back(std::move(row));
    }

    // squared_errors[d][s][l], reduced in replicate order below.
    std::vector<std::vector<std::vector<double>>> squared_errors(
        deltas.size(), std::vector<std::vector<double>>(
                           schemes.size(), std::vector<double>(static_cast<std::size_t>(replicates))));

    for (int l = 0; l < replicates; ++l) {
        RngStream rng(seed, static_cast<std::uint64_t>(l));
        StateVec fine = x0;
        std::vector<std::vector<StateVec>> coarse(deltas.size(),
                                                  std::vector<StateVec>(schemes.size(), x0));
        std::vector<std::array<double, 2>> acc(deltas.size(), {0.0, 0.0});

        for (std::size_t step = 1; step <= n_fine; ++step) {
            const std::array<double, 2> xi = {rng.normal(), rng.normal()};
            fine_stepper.step_with_noise(fine, xi);
            for (std::size_t d = 0; d < deltas.size(); ++d) {
                acc[d][0] += xi[0];
                acc[d][1] += xi[1];
                if (step % fine_per_coarse[d] == 0) {
                    const double norm = 1.0 / std::sqrt(static_cast<double>(fine_per_coarse[d]));
                    const std::array<double, 2> coarse_xi = {acc[d][0] * norm, acc[d][1] * norm};
                    for (std::size_t s = 0; s < schemes.size(); ++s) {
                        steppers[d][s].step_with_noise(coarse[d][s], coarse_xi);
                    }
                    acc[d] = {0.0, 0.0};
                }
            }
        }
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            for (std::size_t s = 0; s < schemes.size(); ++s) {
                squared_errors[d][s][static_cast<std::size_t>(l)] =
                    squared_distance(fine, coarse[d][s]);
            }
        }
    }

    RmseTable table;
    table.replicates = replicates;
    table.t_star = t_star;
    table.ref_delta = ref_delta;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        std::vector<double> log_delta;
        std::vector<double> log_rmse;
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            const double rmse = std::sqrt(mean(squared_errors[d][s]));
            table.rows.push_back({deltas[d], schemes[s], rmse});
            if (rmse > 0.0) {
                log_delta.push_back(std::log10(deltas[d]));
                log_rmse.push_back(std::log10(rmse));
            }
        }
        SchemeFit fit;
        fit.scheme = schemes[s];
        if (log_delta.size() >= 3) fit.fit = fit_line(log_delta, log_rmse);
        table.fits.push_back(fit);
    }
    return table;
}

ComparisonReport compare_pdmp_diffusion(const NetworkModel& model, double t_long, double delta,
                                        std::uint64_t seed) {
    if (!(t_long >= 1e3)) {
        throw std::invalid_argument("compare_pdmp_diffusion: t_long must be >= 1e3");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("compare_pdmp_diffusion: delta must be > 0");

    const StateVec x0 = model.zero_state();
    const auto n_steps = static_cast<std::size_t>(std::llround(t_long / delta));

    ThinningOptions options;
    options.bound = BoundKind::Local;
    options.record_path = false;
    options.record_spikes = false;
    options.sample_delta = delta;
    RngStream pdmp_rng(seed, 0);
    const ThinningResult run = thinning_simulate(model, x0, t_long, options, pdmp_rng);

    RngStream sde_rng(seed, 1);
    const double noise_scale = 1.0 / std::sqrt(static_cast<double>(model.total_neurons()));
    std::array<std::vector<double>, 2> sde_main;
    integrate_streaming(model, Scheme::Strang, x0, delta, n_steps, noise_scale, sde_rng,
                        [&](std::size_t, const StateVec& x) {
                            sde_main[0].push_back(model.potential(x, 1));
                            sde_main[1].push_back(model.potential(x, 2));
                        });

    ComparisonReport report;
    report.t_long = t_long;
    report.delta = delta;
    report.burn_in_fraction = 0.1;
    report.pdmp_stats = run.stats;

    const std::size_t n_grid = std::min(run.samples.size(), sde_main[0].size());
    const auto burn = static_cast<std::size_t>(0.1 * static_cast<double>(n_grid));
    report.n_samples = n_grid - burn;
    for (int k = 1; k <= 2; ++k) {
        std::vector<double> pdmp_samples;
        std::vector<double> sde_samples;
        pdmp_samples.reserve(n_grid - burn);
        sde_samples.reserve(n_grid - burn);
        for (std::size_t i = burn; i < n_grid; ++i) {
            pdmp_samples.push_back(model.potential(run.samples[i], k));
            sde_samples.push_back(sde_main[static_cast<std::size_t>(k - 1)][i]);
        }
        ComparisonVariable& var = report.variables[static_cast<std::size_t>(k - 1)];
        var.population = k;
        var.mean_pdmp = mean(pdmp_samples);
        var.mean_diffusion = mean(sde_samples);
        var.ks_distance = ks_distance(pdmp_samples, sde_samples);
        var.amplitude_pdmp =
            quantile(pdmp_samples, 0.995) - quantile(pdmp_samples, 0.005);
        const std::string label = "x_" + std::to_string(k) + "_1";
        var.density_pdmp = kde(pdmp_samples, std::nullopt, label + "_pdmp");
        var.density_diffusion = kde(sde_samples, std::nullopt, label + "_diffusion");
    }
    return report;
}

TimingTable timing_benchmark(const NetworkModel& model_template, const std::vector<int>& n_list,
                             const std::vector<BoundKind>& bound_kinds, double t_max,
                             int repeats, std::uint64_t seed) {
    if (repeats < 3) throw std::invalid_argument("timing_benchmark: repeats must be >= 3");
    if (n_list.empty()) throw std::invalid_argument("timing_benchmark: n_list is empty");
    if (bound_kinds.empty()) throw std::invalid_argument("timing_benchmark: no bound kinds");
    if (!(t_max > 0.0)) throw std::invalid_argument("timing_benchmark: t_max must be > 0");

    constexpr double kDiffusionDelta = 0.1;
    using Clock = std::chrono::steady_clock;

    TimingTable table;
    table.t_max = t_max;
    table.repeats = repeats;
    table.diffusion_delta = kDiffusionDelta;

    std::uint64_t stream = 0;
    for (const int n_total : n_list) {
        if (n_total < 2) throw std::invalid_argument("timing_benchmark: n_total must be >= 2");
        PopulationParams pop1 = model_template.pop(1);
        PopulationParams pop2 = model_template.pop(2);
        pop1.n_neurons = std::max(
            1, static_cast<int>(std::lround(pop1.proportion * static_cast<double>(n_total))));
        pop2.n_neurons = std::max(1, n_total - pop1.n_neurons);
        const NetworkModel model(pop1, pop2);
        const StateVec x0 = model.zero_state();

        for (const BoundKind bound : bound_kinds) {
            ThinningOptions options;
            options.bound = bound;
            options.record_path = false;
            options.record_spikes = false;
            std::vector<double> seconds;
            std::vector<double> rejection;
            std::vector<double> spikes;
            for (int r = 0; r < repeats; ++r) {
                RngStream rng(seed, stream++);
                const auto start = Clock::now();
                const ThinningResult run = thinning_simulate(model, x0, t_max, options, rng);
                const std::chrono::duration<double> elapsed = Clock::now() - start;
                seconds.push_back(elapsed.count());
                rejection.push_back(run.stats.rejection_fraction());
                spikes.push_back(static_cast<double>(run.stats.accepted));
            }
            TimingRow row;
            row.method = "pdmp";
            row.n_total = model.total_neurons();
            row.bound = bound;
            row.mean_seconds = mean(seconds);
            row.sd_seconds = seconds.size() > 1 ? std::sqrt(variance(seconds)) : 0.0;
            row.mean_rejection_fraction = mean(rejection);
            row.mean_spikes = mean(spikes);
            table.rows.push_back(row);
        }

        const auto n_steps = static_cast<std::size_t>(std::llround(t_max / kDiffusionDelta));
        const double noise_scale = 1.0 / std::sqrt(static_cast<double>(model.total_neurons()));
        std::vector<double> seconds;
        for (int r = 0; r < repeats; ++r) {
            RngStream rng(seed, stream++);
            StateVec x = x0;
            const Stepper stepper(model, Scheme::Strang, kDiffusionDelta, noise_scale);
            const auto start = Clock::now();
            for (std::size_t i = 0; i < n_steps; ++i) stepper.step(x, rng);
            const std::chrono::duration<double> elapsed = Clock::now() - start;
            seconds.push_back(elapsed.count());
        }
        TimingRow row;
        row.method = "diffusion";
        row.n_total = model.total_neurons();
        row.mean_seconds = mean(seconds);
        row.sd_seconds = seconds.size() > 1 ? std::sqrt(variance(seconds)) : 0.0;
        table.rows.push_back(row);
    }
    return table;
}

std::array<KsResult, 2> time_rescaling_ks(const PdmpPath& path, const NetworkModel& model,
                                          std::size_t min_spikes) {
    std::array<std::size_t, 2> counts = {0, 0};
    for (const PdmpEvent& event : path.events) {
        ++counts[static_cast<std::size_t>(event.population - 1)];
    }
    for (int k = 1; k <= 2; ++k) {
        if (counts[static_cast<std::size_t>(k - 1)] < min_spikes) {
            throw InsufficientDataError(
                "time_rescaling_ks: population " + std::to_string(k) + " has " +
                std::to_string(counts[static_cast<std::size_t>(k - 1)]) + " spikes, needs " +
                std::to_string(min_spikes));
        }
    }

    static const GaussLegendre quad(32);
    std::array<std::vector<double>, 2> increments;
    increments[0].reserve(counts[0]);
    increments[1].reserve(counts[1]);

    std::array<double, 2> since_last_spike = {0.0, 0.0};
    const StateVec* segment_state = &path.x0;
    double segment_start = path.t0;
    for (const PdmpEvent& event : path.events) {
        const double length = event.t - segment_start;
        for (int k = 1; k <= 2; ++k) {
            const double rate_scale = static_cast<double>(model.pop(k).n_neurons);
            const double integral = quad.integrate(0.0, length, [&](double s) {
                const double v = expm_action_component(model, k, 1, s, *segment_state);
                return rate_scale * model.pop(k).rate(v);
            });
            since_last_spike[static_cast<std::size_t>(k - 1)] += integral;
        }
        const auto idx = static_cast<std::size_t>(event.population - 1);
        increments[idx].push_back(since_last_spike[idx]);
        since_last_spike[idx] = 0.0;
        segment_state = &event.state;
        segment_start = event.t;
    }

    return {ks_test_unit_exponential(std::move(increments[0])),
            ks_test_unit_exponential(std::move(increments[1]))};
}

}  // namespace hawkes
