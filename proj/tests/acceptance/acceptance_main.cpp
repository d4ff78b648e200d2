// End-to-end acceptance gate for the toolkit. Each criterion prints one
// [PASS]/[FAIL] line with the measured quantities and its pinned tolerance;
// the process exits nonzero if any criterion fails. Runs in a few minutes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/experiments.hpp"
#include "hawkes/integrators.hpp"
#include "hawkes/model.hpp"
#include "hawkes/moment_bounds.hpp"
#include "hawkes/pdmp.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

using namespace hawkes;

namespace {

// ---------------------------------------------------------------------------
// Reporting

struct Criterion {
    bool pass = true;
    std::ostringstream detail;

    // Records a named comparison; any failed requirement fails the criterion.
    void require(bool ok, const std::string& label) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << "violated: " << label;
        }
    }

    template <class T>
    Criterion& note(const std::string& label, const T& value) {
        if (detail.tellp() > 0) detail << "; ";
        detail << label << "=" << value;
        return *this;
    }
};

int g_failures = 0;

void report(int number, const std::string& title, const Criterion& c) {
    std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title;
    const std::string detail = c.detail.str();
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!c.pass) ++g_failures;
}

void report_error(int number, const std::string& title, const std::string& what) {
    std::cout << "[FAIL] criterion " << number << ": " << title << " (exception: " << what << ")"
              << std::endl;
    ++g_failures;
}

std::string rounded(double value, int digits = 4) {
    std::ostringstream out;
    out.precision(digits);
    out << value;
    return out.str();
}

// ---------------------------------------------------------------------------
// Models

PopulationParams population(int eta, double nu, int sign, int n_neurons, double proportion,
                            RateFunction rate) {
    PopulationParams p;
    p.eta = eta;
    p.nu = nu;
    p.sign = sign;
    p.n_neurons = n_neurons;
    p.proportion = proportion;
    p.rate = rate;
    return p;
}

// The convergence-study network: unit decay, memory orders (3, 2), the
// inhibitory population firing through the steep sigmoid and the excitatory
// one through the shallow sigmoid.
NetworkModel study_model(int n1 = 50, int n2 = 50) {
    return NetworkModel(
        population(3, 1.0, -1, n1, 0.5, RateFunction::exp_sigmoid(10.0, 20.0)),
        population(2, 1.0, +1, n2, 0.5, RateFunction::exp_sigmoid(1.0, 20.0)));
}

// The moment-bound showcase network: faster decay on the inhibitory side,
// 10 neurons per population.
NetworkModel bounds_model() {
    return NetworkModel(
        population(3, 2.0, -1, 10, 0.5, RateFunction::exp_sigmoid(10.0, 20.0)),
        population(2, 1.0, +1, 10, 0.5, RateFunction::exp_sigmoid(1.0, 20.0)));
}

// The study network with the saturating linear rate on both sides.
NetworkModel linear_rate_model() {
    return NetworkModel(
        population(3, 1.0, -1, 50, 0.5, RateFunction::clipped_linear(1.0, 1.0, 10.0)),
        population(2, 1.0, +1, 50, 0.5, RateFunction::clipped_linear(1.0, 1.0, 10.0)));
}

NetworkModel constant_rate_model(double v1, double v2) {
    return NetworkModel(population(1, 1.0, -1, 10, 0.5, RateFunction::constant(v1)),
                        population(1, 1.0, +1, 10, 0.5, RateFunction::constant(v2)));
}

StateVec random_state(const NetworkModel& model, RngStream& rng, double half_width = 2.0) {
    StateVec x = model.zero_state();
    for (double& v : x) v = (2.0 * rng.uniform01() - 1.0) * half_width;
    return x;
}

double noise_scale_of(const NetworkModel& model) {
    return 1.0 / std::sqrt(static_cast<double>(model.total_neurons()));
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2: strong order and Strang dominance, one shared study.

void criteria_1_2() {
    const std::string title_1 = "mean-square order one for every scheme";
    const std::string title_2 = "Strang error at most Lie-Trotter error at every step size";
    try {
        const NetworkModel model = study_model();
        const std::vector<Scheme> schemes = {Scheme::EulerMaruyama, Scheme::LieTrotter,
                                             Scheme::Strang};
        const RmseTable table = rmse_convergence(model, model.zero_state(), schemes,
                                                 {1e-3, 1e-2, 1e-1}, 200, 1.0, 1e-4, 1001);

        Criterion order;
        for (const SchemeFit& fit : table.fits) {
            order.note("slope " + scheme_name(fit.scheme), rounded(fit.fit.slope));
            order.require(fit.fit.slope >= 0.75 && fit.fit.slope <= 1.25,
                          scheme_name(fit.scheme) + " slope in [0.75, 1.25]");
        }
        report(1, title_1, order);

        Criterion dominance;
        std::map<double, double> strang_rmse;
        std::map<double, double> lie_trotter_rmse;
        for (const RmseRow& row : table.rows) {
            if (row.scheme == Scheme::Strang) strang_rmse[row.delta] = row.rmse;
            if (row.scheme == Scheme::LieTrotter) lie_trotter_rmse[row.delta] = row.rmse;
        }
        for (const auto& [delta, rmse] : strang_rmse) {
            dominance.note("delta " + rounded(delta, 2),
                           rounded(rmse, 3) + " vs " + rounded(lie_trotter_rmse.at(delta), 3));
            dominance.require(rmse <= lie_trotter_rmse.at(delta),
                              "strang <= lie-trotter at delta " + rounded(delta, 2));
        }
        report(2, title_2, dominance);
    } catch (const std::exception& error) {
        report_error(1, title_1, error.what());
        report_error(2, title_2, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criteria 3 and 4: moment bound containment, one shared Monte Carlo run.

void criteria_3_4() {
    const std::string title_3 = "first moments inside the analytic band";
    const std::string title_4 = "second moments below the analytic cap";
    try {
        const NetworkModel model = bounds_model();
        const StateVec x0 = model.zero_state();
        const int replicates = 2000;
        const double delta = 0.01;
        const std::size_t record_every = 10;  // grid spacing 0.1 over [0, 10]
        const std::size_t n_steps = 1000;
        const std::size_t n_grid = n_steps / record_every + 1;
        const int n_components = model.pop(1).eta + 1;

        // Accumulate per grid point and component: sum and sum of squares of
        // x and of x^2, enough for the means and their standard errors.
        std::vector<double> sum_x(n_grid * n_components, 0.0);
        std::vector<double> sum_xx(n_grid * n_components, 0.0);
        std::vector<double> sum_x2(n_grid * n_components, 0.0);
        std::vector<double> sum_x4(n_grid * n_components, 0.0);

        for (int rep = 0; rep < replicates; ++rep) {
            RngStream rng(2025, static_cast<std::uint64_t>(rep));
            integrate_streaming(model, Scheme::Strang, x0, delta, n_steps, noise_scale_of(model),
                                rng, [&](std::size_t step, const StateVec& x) {
                                    if (step % record_every != 0) return;
                                    const std::size_t g = step / record_every;
                                    for (int j = 1; j <= n_components; ++j) {
                                        const double v = x[model.flat_index(1, j)];
                                        const std::size_t slot =
                                            g * static_cast<std::size_t>(n_components) +
                                            static_cast<std::size_t>(j - 1);
                                        sum_x[slot] += v;
                                        sum_xx[slot] += v * v;
                                        sum_x2[slot] += v * v;
                                        sum_x4[slot] += v * v * v * v;
                                    }
                                });
        }

        const auto m = static_cast<double>(replicates);
        Criterion first;
        Criterion second;
        double worst_margin_first = std::numeric_limits<double>::infinity();
        double worst_margin_second = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < n_grid; ++g) {
            const double t = static_cast<double>(g * record_every) * delta;
            for (int j = 1; j <= n_components; ++j) {
                const std::size_t slot = g * static_cast<std::size_t>(n_components) +
                                         static_cast<std::size_t>(j - 1);
                const double mean_x = sum_x[slot] / m;
                const double var_x =
                    std::max(0.0, (sum_xx[slot] - m * mean_x * mean_x) / (m - 1.0));
                const double se_x = std::sqrt(var_x / m);
                const Band band = first_moment_bounds(model, x0, 1, j, t);
                const double lo = band.lower - 3.0 * se_x;
                const double hi = band.upper + 3.0 * se_x;
                if (g > 0) {  // at t = 0 mean, band and se are all exactly 0
                    worst_margin_first =
                        std::min({worst_margin_first, mean_x - lo, hi - mean_x});
                }
                first.require(mean_x >= lo && mean_x <= hi,
                              "component j=" + std::to_string(j) + " at t=" + rounded(t, 3));

                if (j <= 3) {
                    const double mean_x2 = sum_x2[slot] / m;
                    const double var_x2 =
                        std::max(0.0, (sum_x4[slot] - m * mean_x2 * mean_x2) / (m - 1.0));
                    const double se_x2 = std::sqrt(var_x2 / m);
                    const double cap = second_moment_bound(model, x0, 1, j, t) + 3.0 * se_x2;
                    if (g > 0) worst_margin_second = std::min(worst_margin_second, cap - mean_x2);
                    second.require(mean_x2 <= cap, "second moment j=" + std::to_string(j) +
                                                       " at t=" + rounded(t, 3));
                }
            }
        }
        first.note("paths", replicates)
            .note("grid points", n_grid)
            .note("worst margin", rounded(worst_margin_first));
        report(3, title_3, first);
        second.note("components", "j=1..3").note("worst margin", rounded(worst_margin_second));
        report(4, title_4, second);
    } catch (const std::exception& error) {
        report_error(3, title_3, error.what());
        report_error(4, title_4, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 5: the discrete lower bound of the excitatory population is the
// constant 0 and a long splitting run respects it.

void criterion_5() {
    const std::string title = "discrete zero bound is exact and respected";
    try {
        const NetworkModel model = study_model();
        const StateVec x0 = model.zero_state();
        const double delta = 0.1;
        const std::size_t n_steps = 100000;
        const int n_components = model.pop(2).eta + 1;

        Criterion c;
        for (int j = 1; j <= n_components; ++j) {
            const std::vector<Band> curve =
                discrete_first_moment_curve(model, x0, 2, j, delta, n_steps);
            bool all_zero = true;
            for (const Band& band : curve) all_zero = all_zero && band.lower == 0.0;
            c.require(all_zero, "lower bound identically 0.0 for j=" + std::to_string(j));
        }

        std::vector<std::vector<double>> series(static_cast<std::size_t>(n_components));
        for (auto& s : series) s.reserve(n_steps + 1);
        RngStream rng(505);
        integrate_streaming(model, Scheme::Strang, x0, delta, n_steps, noise_scale_of(model),
                            rng, [&](std::size_t, const StateVec& x) {
                                for (int j = 1; j <= n_components; ++j) {
                                    series[static_cast<std::size_t>(j - 1)].push_back(
                                        x[model.flat_index(2, j)]);
                                }
                            });
        for (int j = 1; j <= n_components; ++j) {
            const std::vector<double>& s = series[static_cast<std::size_t>(j - 1)];
            const double avg = mean(s);
            const double se = batch_means_se(s);
            if (j == 1) c.note("mean x_2_1", rounded(avg)).note("3se", rounded(3.0 * se));
            c.require(avg >= -3.0 * se, "empirical mean above -3se for j=" + std::to_string(j));
        }
        c.note("steps", n_steps);
        report(5, title, c);
    } catch (const std::exception& error) {
        report_error(5, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 6: the noise map commutes in the Milstein sense, and the
// contraction detects a deliberately broken zero pattern.

void criterion_6() {
    const std::string title = "Milstein correction vanishes for the model noise map";
    try {
        const NetworkModel model = study_model();
        const double f_max = std::max(model.pop(1).rate.max(), model.pop(2).rate.max());
        RngStream rng(66);

        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const StateVec x = random_state(model, rng);
            for (const double entry : milstein_correction(model, x)) {
                worst = std::max(worst, std::abs(entry));
            }
        }

        // Negative control: a noise map with state feedback in one column.
        const int kappa = model.kappa();
        const SigmaFn broken = [kappa](const StateVec& x) {
            std::vector<double> sigma(static_cast<std::size_t>(kappa) * 2, 0.0);
            sigma[0] = x[0];
            sigma[3] = 1.0;
            return sigma;
        };
        StateVec probe = model.zero_state();
        probe[0] = 1.5;
        double control = 0.0;
        for (const double entry : milstein_correction_generic(broken, kappa, probe)) {
            control = std::max(control, std::abs(entry));
        }

        Criterion c;
        c.note("max |entry|", rounded(worst))
            .note("tolerance", rounded(1e-6 * f_max))
            .note("broken-map control", rounded(control));
        c.require(worst <= 1e-6 * f_max, "correction below 1e-6 * f_max over 100 states");
        c.require(control > 1e-2, "control exceeds 1e-2");
        report(6, title, c);
    } catch (const std::exception& error) {
        report_error(6, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 7: one-step conditional covariance has full positive diagonal
// and rank two.

void criterion_7() {
    const std::string title = "noise propagates to every component in one step";
    try {
        const NetworkModel model = study_model();
        const auto kappa = static_cast<std::size_t>(model.kappa());
        RngStream rng(77);

        Criterion c;
        double min_diag = std::numeric_limits<double>::infinity();
        for (const double delta : {0.01, 0.5}) {
            for (int trial = 0; trial < 100; ++trial) {
                const StateVec x = random_state(model, rng);
                const std::vector<double> cov =
                    conditional_covariance(model, x, delta, model.total_neurons());
                for (std::size_t i = 0; i < kappa; ++i) {
                    min_diag = std::min(min_diag, cov[i * kappa + i]);
                }
                const int rank = numerical_rank(cov, kappa);
                if (rank != 2) {
                    c.require(false, "rank 2 at delta " + rounded(delta, 2) + ", got " +
                                         std::to_string(rank));
                    break;
                }
            }
        }
        c.note("min diagonal", rounded(min_diag)).note("states per delta", 100);
        c.require(min_diag > 0.0, "all diagonal entries positive");
        report(7, title, c);
    } catch (const std::exception& error) {
        report_error(7, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 8: analytic contraction factor below one, and the one-step
// Lyapunov drift bound holds in Monte Carlo.

void criterion_8() {
    const std::string title = "Lyapunov contraction with a verified one-step drift";
    try {
        RngStream rng(88);
        Criterion c;

        // Contraction factor over random parameters. The draws keep
        // nu * delta >= 0.5 so the distance between alpha and 1 stays
        // representable in double precision (at eta = 10 it is about 1e-11).
        double max_alpha = 0.0;
        bool all_below_one = true;
        for (int trial = 0; trial < 1000; ++trial) {
            const int eta1 = static_cast<int>(rng.uniform_below(11));
            const int eta2 = static_cast<int>(rng.uniform_below(11));
            const double nu1 = 4.5 * rng.uniform01() + 0.5;
            const double nu2 = 4.5 * rng.uniform01() + 0.5;
            const double delta = 4.0 * rng.uniform01() + 1.0;
            const NetworkModel m(
                population(eta1, nu1, -1, 10, 0.5, RateFunction::constant(1.0)),
                population(eta2, nu2, +1, 10, 0.5, RateFunction::constant(1.0)));
            const double alpha = lyapunov_alpha(m, delta);
            max_alpha = std::max(max_alpha, alpha);
            all_below_one = all_below_one && alpha > 0.0 && alpha < 1.0;
        }
        c.note("draws", 1000).note("smallest 1 - alpha", rounded(1.0 - max_alpha, 3));
        c.require(all_below_one, "alpha in (0, 1) for every draw");

        // Monte Carlo drift: one splitting step from 200 anchors.
        const NetworkModel model = study_model();
        const double delta = 0.1;
        const double alpha = lyapunov_alpha(model, delta);
        const double beta = lyapunov_beta(model, delta, model.total_neurons());
        const Stepper stepper(model, Scheme::LieTrotter, delta, noise_scale_of(model));
        const int n_draws = 5000;

        bool drift_ok = true;
        double worst_slack = std::numeric_limits<double>::infinity();
        for (int anchor = 0; anchor < 200; ++anchor) {
            const StateVec x = random_state(model, rng);
            const double g0 = lyapunov_G_discrete(model, x);
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int draw = 0; draw < n_draws; ++draw) {
                StateVec y = x;
                stepper.step(y, rng);
                const double g = lyapunov_G_discrete(model, y);
                sum += g;
                sum_sq += g * g;
            }
            const double avg = sum / n_draws;
            const double var = std::max(0.0, (sum_sq - n_draws * avg * avg) / (n_draws - 1.0));
            const double se = std::sqrt(var / n_draws);
            const double budget = alpha * g0 + beta + 3.0 * se;
            worst_slack = std::min(worst_slack, budget - avg);
            drift_ok = drift_ok && avg <= budget;
        }
        c.note("alpha", rounded(alpha, 6))
            .note("beta", rounded(beta))
            .note("anchors", 200)
            .note("worst slack", rounded(worst_slack));
        c.require(drift_ok, "mean G after one step within alpha * G + beta + 3se");
        report(8, title, c);
    } catch (const std::exception& error) {
        report_error(8, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 9: thinning exactness; Poisson counts, time rescaling, and a
// corrupted-simulator control.

void criterion_9() {
    const std::string title = "thinning is exact and the corrupted control fails";
    try {
        Criterion c;

        // (a) Constant rates: population counts are Poisson with known mean.
        {
            const NetworkModel model = constant_rate_model(1.0, 1.0);
            const double t_max = 10.0;
            ThinningOptions options;
            options.record_path = false;
            std::array<std::uint64_t, 2> totals = {0, 0};
            for (int run_index = 0; run_index < 500; ++run_index) {
                RngStream rng(909, static_cast<std::uint64_t>(run_index));
                const ThinningResult result =
                    thinning_simulate(model, model.zero_state(), t_max, options, rng);
                totals[0] += result.spikes.count(1);
                totals[1] += result.spikes.count(2);
            }
            for (int k = 1; k <= 2; ++k) {
                const double expected = 500.0 * model.pop(k).n_neurons *
                                        model.pop(k).rate(0.0) * t_max;
                const double sigma = std::sqrt(expected);
                const double z = (static_cast<double>(totals[static_cast<std::size_t>(k - 1)]) -
                                  expected) / sigma;
                c.note("count z population " + std::to_string(k), rounded(z, 3));
                c.require(std::abs(z) <= 3.0,
                          "population " + std::to_string(k) + " count within 3 sigma");
            }
        }

        // (b) Rescaled inter-spike times on the study network pass the KS
        // test; (c) halving the acceptance probability makes it fail.
        const NetworkModel model = study_model();
        const double t_max = 50.0;
        {
            ThinningOptions options;
            RngStream rng(911);
            const ThinningResult result =
                thinning_simulate(model, model.zero_state(), t_max, options, rng);
            const auto tests = time_rescaling_ks(result.path, model, 2000);
            c.note("exact p1", rounded(tests[0].p_value, 3))
                .note("exact p2", rounded(tests[1].p_value, 3))
                .note("spikes", result.spikes.spikes.size());
            c.require(tests[0].p_value > 0.01 && tests[1].p_value > 0.01,
                      "exact simulator passes at level 0.01");
        }
        {
            ThinningOptions options;
            options.acceptance_scale = 0.5;
            RngStream rng(911);
            const ThinningResult result =
                thinning_simulate(model, model.zero_state(), t_max, options, rng);
            const auto tests = time_rescaling_ks(result.path, model, 2000);
            c.note("corrupted p1", rounded(tests[0].p_value, 3))
                .note("corrupted p2", rounded(tests[1].p_value, 3));
            c.require(tests[0].p_value < 0.01 && tests[1].p_value < 0.01,
                      "corrupted simulator fails at level 0.01");
        }
        report(9, title, c);
    } catch (const std::exception& error) {
        report_error(9, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 10: the window-local intensity bound pays off for the sigmoid
// rates and costs nothing for the saturating linear rates.

void criterion_10() {
    const std::string title = "local intensity bound is cheaper where it should be";
    try {
        const std::vector<int> n_list = {20, 50, 100, 150, 200};
        const std::vector<BoundKind> kinds = {BoundKind::Local, BoundKind::Global};
        Criterion c;

        const TimingTable sigmoid =
            timing_benchmark(study_model(), n_list, kinds, 100.0, 20, 1010);
        std::map<int, double> rejection_local;
        std::map<int, double> rejection_global;
        double wall_local = 0.0;
        double wall_global = 0.0;
        for (const TimingRow& row : sigmoid.rows) {
            if (row.method != "pdmp") continue;
            if (row.bound == BoundKind::Local) {
                rejection_local[row.n_total] = row.mean_rejection_fraction;
                wall_local += row.mean_seconds;
            } else {
                rejection_global[row.n_total] = row.mean_rejection_fraction;
                wall_global += row.mean_seconds;
            }
        }
        for (const int n : n_list) {
            c.require(rejection_local.at(n) < rejection_global.at(n),
                      "rejection local < global at N=" + std::to_string(n));
        }
        c.note("rejection local N=100", rounded(rejection_local.at(100), 3))
            .note("rejection global N=100", rounded(rejection_global.at(100), 3))
            .note("sigmoid wall local", rounded(wall_local))
            .note("sigmoid wall global", rounded(wall_global));
        c.require(wall_local <= wall_global, "aggregate local wall <= global wall");

        const TimingTable linear =
            timing_benchmark(linear_rate_model(), n_list, kinds, 100.0, 20, 1011);
        double linear_local = 0.0;
        double linear_global = 0.0;
        for (const TimingRow& row : linear.rows) {
            if (row.method != "pdmp") continue;
            (row.bound == BoundKind::Local ? linear_local : linear_global) += row.mean_seconds;
        }
        const double gap = std::abs(linear_local - linear_global) /
                           std::max(linear_local, linear_global);
        c.note("linear wall local", rounded(linear_local))
            .note("linear wall global", rounded(linear_global))
            .note("relative gap", rounded(gap, 3));
        c.require(gap < 0.2, "linear-rate walls within 20%");
        report(10, title, c);
    } catch (const std::exception& error) {
        report_error(10, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 11: the exact network and its diffusion agree in the long run,
// more closely as the network grows.

void criterion_11() {
    const std::string title = "network and diffusion marginals agree in the long run";
    try {
        Criterion c;
        std::map<int, double> ks_by_n;
        for (const int n : {20, 100}) {
            const ComparisonReport report_n =
                compare_pdmp_diffusion(study_model(n / 2, n / 2), 2e4, 0.1, 1100);
            const ComparisonVariable* excitatory = nullptr;
            for (const ComparisonVariable& var : report_n.variables) {
                if (var.population == 2) excitatory = &var;
            }
            if (excitatory == nullptr) throw std::logic_error("missing excitatory summary");
            const double diff = std::abs(excitatory->mean_pdmp - excitatory->mean_diffusion);
            const double amplitude = excitatory->amplitude_pdmp;
            ks_by_n[n] = excitatory->ks_distance;
            c.note("N=" + std::to_string(n) + " mean diff", rounded(diff, 3))
                .note("amplitude", rounded(amplitude, 3))
                .note("ks", rounded(excitatory->ks_distance, 3));
            c.require(diff <= 0.05 * amplitude,
                      "mean difference within 5% of amplitude at N=" + std::to_string(n));
        }
        c.require(ks_by_n.at(100) <= ks_by_n.at(20) + 0.02,
                  "KS distance does not grow from N=20 to N=100");
        report(11, title, c);
    } catch (const std::exception& error) {
        report_error(11, title, error.what());
    }
}

// ---------------------------------------------------------------------------
// Criterion 12: the special functions agree with brute force.

// Counts the partitions of {1..n} into exactly n_blocks nonempty blocks by
// enumerating restricted growth strings.
void enumerate_partitions(unsigned item, unsigned n, unsigned used_blocks,
                          std::vector<std::uint64_t>& counts) {
    if (item == n) {
        counts[used_blocks] += 1;
        return;
    }
    for (unsigned b = 0; b <= used_blocks; ++b) {
        enumerate_partitions(item + 1, n, std::max(used_blocks, b + 1), counts);
    }
}

std::vector<std::uint64_t> partition_counts(unsigned n) {
    std::vector<std::uint64_t> counts(n + 1, 0);
    if (n == 0) {
        counts[0] = 1;
        return counts;
    }
    enumerate_partitions(1, n, 1, counts);
    return counts;
}

double polylog_series(int n, double z) {
    double sum = n == 0 ? 1.0 : 0.0;  // the l = 0 term, with 0^0 = 1
    for (int l = 1; l <= 5000; ++l) {
        sum += std::pow(static_cast<double>(l), n) * std::pow(z, l);
    }
    return sum;
}

void criterion_12() {
    const std::string title = "special functions match brute-force enumeration";
    try {
        Criterion c;

        bool stirling_ok = true;
        for (unsigned n = 1; n <= 8; ++n) {
            const std::vector<std::uint64_t> counts = partition_counts(n);
            for (unsigned m = 1; m <= n; ++m) {
                stirling_ok = stirling_ok && stirling2(n, m) == counts[m];
            }
        }
        c.note("partition tables", "n=1..8");
        c.require(stirling_ok, "stirling2 equals partition enumeration");

        double worst_rel = 0.0;
        for (int n = 0; n <= 8; ++n) {
            for (const double z : {0.1, 0.5, 0.9}) {
                const double series = polylog_series(n, z);
                const double rel = std::abs(polylog_neg(n, z) - series) / series;
                worst_rel = std::max(worst_rel, rel);
            }
        }
        c.note("worst polylog relative error", rounded(worst_rel, 3));
        c.require(worst_rel <= 1e-10, "polylog closed form within 1e-10 of the series");
        report(12, title, c);
    } catch (const std::exception& error) {
        report_error(12, title, error.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    // With arguments, run only the named criteria (development convenience);
    // the groups 1+2 and 3+4 share their studies and run together.
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    const auto wanted = [&](int a, int b = 0) {
        return selected.empty() || selected.count(a) > 0 || (b != 0 && selected.count(b) > 0);
    };

    if (wanted(1, 2)) criteria_1_2();
    if (wanted(3, 4)) criteria_3_4();
    if (wanted(5)) criterion_5();
    if (wanted(6)) criterion_6();
    if (wanted(7)) criterion_7();
    if (wanted(8)) criterion_8();
    if (wanted(9)) criterion_9();
    if (wanted(10)) criterion_10();
    if (wanted(11)) criterion_11();
    if (wanted(12)) criterion_12();

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
