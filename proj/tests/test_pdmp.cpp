#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/model.hpp"
#include "hawkes/pdmp.hpp"
#include "hawkes/rng.hpp"
#include "test_support.hpp"

using namespace hawkes;
using test::benchmark_model;
using test::constant_rate_model;
using test::make_population;
using test::random_state;

namespace {

// Sup of the potential along the flow on [0, window] by brute-force grid.
double grid_sup_potential(const NetworkModel& model, int k, const StateVec& x, double window,
                          int n_grid) {
    double sup = model.potential(x, k);
    for (int i = 1; i <= n_grid; ++i) {
        const double t = window * static_cast<double>(i) / n_grid;
        sup = std::max(sup, expm_action_component(model, k, 1, t, x));
    }
    return sup;
}

// The argument fed to f_k by the local bound, recomputed from public pieces.
double local_bound_argument(const NetworkModel& model, int k, const StateVec& x,
                            double window) {
    double peak = std::max(model.potential(x, k),
                           expm_action_component(model, k, 1, window, x));
    for (double tc : critical_points(model, k, x, window)) {
        peak = std::max(peak, expm_action_component(model, k, 1, tc, x));
    }
    return peak;
}

double global_bound_argument(const NetworkModel& model, int k, const StateVec& x) {
    const PopulationParams& p = model.pop(k);
    double arg = 0.0;
    double scale = 1.0;
    for (int j = 1; j <= p.eta + 1; ++j) {
        arg = std::max(arg, x[model.flat_index(k, j)] / scale);
        scale *= p.nu;
    }
    return arg;
}

}  // namespace

TEST_CASE("global_bound hand cases") {
    const NetworkModel model(
        make_population(2, 2.0, -1, 10, 0.5, RateFunction::exp_sigmoid(10.0, 20.0)),
        make_population(1, 1.0, +1, 10, 0.5, RateFunction::exp_sigmoid(1.0, 20.0)));
    const RateFunction& f1 = model.pop(1).rate;

    StateVec x = model.zero_state();
    CHECK(global_bound(model, 1, x) == f1(0.0));

    // All components nonpositive: the argument clamps at 0.
    x[0] = -3.0;
    x[1] = -0.5;
    x[2] = -7.0;
    CHECK(global_bound(model, 1, x) == f1(0.0));

    // nu = 2, block (2, 3, 0): max{0, 2, 3/2, 0/4} = 2.
    x[0] = 2.0;
    x[1] = 3.0;
    x[2] = 0.0;
    CHECK(global_bound(model, 1, x) == doctest::Approx(f1(2.0)).epsilon(1e-14));
}

TEST_CASE("global bound dominates the flow sup over a long horizon") {
    const NetworkModel model = benchmark_model();
    RngStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const StateVec x = random_state(model, rng);
        for (int k = 1; k <= 2; ++k) {
            const double sup = grid_sup_potential(model, k, x, 50.0, 4000);
            CHECK(sup <= global_bound_argument(model, k, x) + 1e-9);
        }
    }
}

TEST_CASE("critical_points hand cases") {
    const NetworkModel model(
        make_population(1, 1.0, -1, 10, 0.5, RateFunction::constant(1.0)),
        make_population(1, 1.0, +1, 10, 0.5, RateFunction::constant(1.0)));

    StateVec x = model.zero_state();
    x[model.flat_index(1, 1)] = 0.0;
    x[model.flat_index(1, 2)] = 1.0;
    // Derivative polynomial is 1 - t: one extremum at t = 1.
    auto roots = critical_points(model, 1, x, 2.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(critical_points(model, 1, x, 0.5).empty());

    // Zero state: constant potential, no interior extrema.
    CHECK(critical_points(model, 1, model.zero_state(), 1.0).empty());

    // x^{k,2} = 0, x^{k,1} != 0: derivative is a nonzero constant.
    x[model.flat_index(1, 1)] = 2.0;
    x[model.flat_index(1, 2)] = 0.0;
    CHECK(critical_points(model, 1, x, 5.0).empty());

    CHECK_THROWS_AS(critical_points(model, 1, x, 0.0), std::invalid_argument);
}

TEST_CASE("local_bound hand case") {
    const NetworkModel model(
        make_population(1, 1.0, -1, 10, 0.5, RateFunction::exp_sigmoid(10.0, 20.0)),
        make_population(1, 1.0, +1, 10, 0.5, RateFunction::constant(1.0)));
    StateVec x = model.zero_state();
    x[model.flat_index(1, 2)] = 1.0;
    // Peak over {x_0 = 0, t_c = 1 -> e^{-1}, endpoint 2 e^{-2}} is e^{-1}.
    const double expected = model.pop(1).rate(std::exp(-1.0));
    CHECK(local_bound(model, 1, x, 2.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(local_bound(model, 1, x, -1.0), std::invalid_argument);
}

TEST_CASE("local bound dominates the window sup and is below the global bound") {
    const NetworkModel model = benchmark_model();
    RngStream rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const StateVec x = random_state(model, rng);
        for (double window : {0.1, 1.0, 10.0}) {
            for (int k = 1; k <= 2; ++k) {
                const double local_arg = local_bound_argument(model, k, x, window);
                const double sup = grid_sup_potential(model, k, x, window, 10000);
                CHECK(sup <= local_arg + 1e-7);
                CHECK(local_arg <= global_bound_argument(model, k, x) + 1e-7);
                // And in rate space, via monotonicity of f.
                CHECK(local_bound(model, k, x, window) <=
                      global_bound(model, k, x) * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("adaptive_window follows 1 / (N1 l1 + N2 l2) with clamping") {
    const NetworkModel model = benchmark_model();  // N1 = N2 = 50
    CHECK(adaptive_window(model, 1.0, 1.0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(adaptive_window(model, 1e-12, 1e-12) == 10.0);
    CHECK(adaptive_window(model, 1e9, 1e9) == 1e-6);

    const NetworkModel tiny = constant_rate_model(1.0, 1.0, 1, 1, 1, 1);
    CHECK(adaptive_window(tiny, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(adaptive_window(model, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("constant rates thin with zero rejections and Poisson counts") {
    const double v = 1.0;
    const double t_max = 5.0;
    const NetworkModel model = constant_rate_model(v, v);  // N_k = 10
    ThinningOptions options;
    options.record_path = false;

    const int n_runs = 200;
    double total_spikes_1 = 0.0;
    for (int run = 0; run < n_runs; ++run) {
        RngStream rng(100, static_cast<std::uint64_t>(run));
        const ThinningResult result =
            thinning_simulate(model, model.zero_state(), t_max, options, rng);
        CHECK(result.stats.rejected == 0);
        total_spikes_1 += static_cast<double>(result.spikes.count(1));
    }
    const double mean_count = total_spikes_1 / n_runs;
    const double expected = 10.0 * v * t_max;
    const double se = std::sqrt(expected / n_runs);  // Poisson variance = mean
    CHECK(std::abs(mean_count - expected) <= 3.0 * se);
}

TEST_CASE("a spikeless stretch is the pure linear flow") {
    // Rates so small that no spike lands in [0, t_max].
    const NetworkModel model = constant_rate_model(1e-9, 1e-9);
    ThinningOptions options;
    options.sample_delta = 0.5;
    StateVec x0 = model.zero_state();
    x0[0] = 1.0;
    x0[1] = -2.0;
    x0[2] = 0.5;
    RngStream rng(7);
    const ThinningResult result = thinning_simulate(model, x0, 4.0, options, rng);
    CHECK(result.spikes.spikes.empty());
    REQUIRE(result.samples.size() == 9);
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        const double t = result.sample_times[i];
        CHECK(t == doctest::Approx(0.5 * static_cast<double>(i)).epsilon(1e-12));
        const StateVec expected = expm_action(model, t, x0);
        for (std::size_t c = 0; c < expected.size(); ++c) {
            CHECK(result.samples[i][c] ==
                  doctest::Approx(expected[c]).epsilon(1e-10).scale(1.0));
        }
    }
    const StateVec at_end = expm_action(model, 4.0, x0);
    for (std::size_t c = 0; c < at_end.size(); ++c) {
        CHECK(result.final_state[c] == doctest::Approx(at_end[c]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("identical seeds reproduce the run exactly") {
    const NetworkModel model = benchmark_model(10, 10);
    ThinningOptions options;
    RngStream rng_a(42);
    RngStream rng_b(42);
    const ThinningResult a = thinning_simulate(model, model.zero_state(), 10.0, options, rng_a);
    const ThinningResult b = thinning_simulate(model, model.zero_state(), 10.0, options, rng_b);
    REQUIRE(a.spikes.spikes.size() == b.spikes.spikes.size());
    CHECK(a.spikes.spikes.size() > 0);
    for (std::size_t i = 0; i < a.spikes.spikes.size(); ++i) {
        CHECK(a.spikes.spikes[i].t == b.spikes.spikes[i].t);
        CHECK(a.spikes.spikes[i].population == b.spikes.spikes[i].population);
        CHECK(a.spikes.spikes[i].neuron == b.spikes.spikes[i].neuron);
    }
    RngStream rng_c(43);
    const ThinningResult c = thinning_simulate(model, model.zero_state(), 10.0, options, rng_c);
    const bool same = a.spikes.spikes.size() == c.spikes.spikes.size() &&
                      (a.spikes.spikes.empty() || a.spikes.spikes[0].t == c.spikes.spikes[0].t);
    CHECK_FALSE(same);
}

TEST_CASE("replaying the recorded path reproduces every state") {
    const NetworkModel model = benchmark_model(10, 10);
    ThinningOptions options;
    RngStream rng(5);
    const ThinningResult result =
        thinning_simulate(model, model.zero_state(), 20.0, options, rng);
    REQUIRE(result.path.events.size() > 10);

    StateVec state = result.path.x0;
    double t = result.path.t0;
    for (const PdmpEvent& event : result.path.events) {
        StateVec moved = expm_action(model, event.t - t, state);
        const int receiver = NetworkModel::driver(event.population);
        const PopulationParams& rp = model.pop(receiver);
        moved[model.flat_index(receiver, rp.eta + 1)] +=
            static_cast<double>(rp.sign) / static_cast<double>(model.pop(event.population).n_neurons);
        for (std::size_t c = 0; c < moved.size(); ++c) {
            CHECK(event.state[c] == doctest::Approx(moved[c]).epsilon(1e-10).scale(1.0));
        }
        CHECK(event.lambda1 ==
              doctest::Approx(model.pop(1).rate(model.potential(event.state, 1))).epsilon(1e-12));
        CHECK(event.lambda2 ==
              doctest::Approx(model.pop(2).rate(model.potential(event.state, 2))).epsilon(1e-12));
        CHECK(event.neuron >= 1);
        CHECK(event.neuron <= model.pop(event.population).n_neurons);
        state = event.state;
        t = event.t;
    }
}

TEST_CASE("local bound rejects far fewer candidates than the global bound") {
    const NetworkModel model(
        make_population(3, 0.9, -1, 50, 0.5, RateFunction::exp_sigmoid(10.0, 20.0)),
        make_population(2, 0.9, +1, 50, 0.5, RateFunction::exp_sigmoid(1.0, 20.0)));
    ThinningOptions options;
    options.record_path = false;
    options.record_spikes = false;

    options.bound = BoundKind::Local;
    RngStream rng_local(9);
    const ThinningResult local =
        thinning_simulate(model, model.zero_state(), 20.0, options, rng_local);

    options.bound = BoundKind::Global;
    RngStream rng_global(9);
    const ThinningResult global =
        thinning_simulate(model, model.zero_state(), 20.0, options, rng_global);

    CHECK(local.stats.rejection_fraction() < global.stats.rejection_fraction());
    CHECK(global.stats.rejection_fraction() > 0.3);
    CHECK(local.stats.rejection_fraction() < 0.1);
}

TEST_CASE("thinning options are validated") {
    const NetworkModel model = constant_rate_model(1.0, 1.0);
    RngStream rng(1);
    ThinningOptions options;
    CHECK_THROWS_AS(thinning_simulate(model, model.zero_state(), 0.0, options, rng),
                    std::invalid_argument);
    options.acceptance_scale = 0.0;
    CHECK_THROWS_AS(thinning_simulate(model, model.zero_state(), 1.0, options, rng),
                    std::invalid_argument);
    options.acceptance_scale = 1.5;
    CHECK_THROWS_AS(thinning_simulate(model, model.zero_state(), 1.0, options, rng),
                    std::invalid_argument);
    options.acceptance_scale = 1.0;
    options.sample_delta = -0.5;
    CHECK_THROWS_AS(thinning_simulate(model, model.zero_state(), 1.0, options, rng),
                    std::invalid_argument);
}

TEST_CASE("acceptance_scale below one degrades acceptance") {
    const NetworkModel model = constant_rate_model(1.0, 1.0);
    ThinningOptions options;
    options.record_path = false;
    options.acceptance_scale = 0.5;
    RngStream rng(3);
    const ThinningResult result =
        thinning_simulate(model, model.zero_state(), 50.0, options, rng);
    // Half the candidates should now be rejected.
    CHECK(result.stats.rejection_fraction() > 0.4);
    CHECK(result.stats.rejection_fraction() < 0.6);
}
