#include "hawkes/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"
#include "hawkes/poly_roots.hpp"

namespace hawkes {

namespace {

// Exponential rates this small stand in for "no activity at all"; the
// resulting waiting times overshoot any window.
constexpr double kRateFloor = 1e-300;

// 1/m! for m = 0..12; avoids serialized divides on the thinning hot path.
constexpr double kInvFactorial[] = {1.0,
                                    1.0,
                                    1.0 / 2.0,
                                    1.0 / 6.0,
                                    1.0 / 24.0,
                                    1.0 / 120.0,
                                    1.0 / 720.0,
                                    1.0 / 5040.0,
                                    1.0 / 40320.0,
                                    1.0 / 362880.0,
                                    1.0 / 3628800.0,
                                    1.0 / 39916800.0,
                                    1.0 / 479001600.0};
constexpr int kInvFactorialSize = static_cast<int>(sizeof(kInvFactorial) / sizeof(double));

// d/dt (exp(At)x)^{k,1} = exp(-nu t) * q(t) with
//   q(t) = sum_{m=1}^{eta} (x^{k,m+1} - nu x^{k,m}) t^{m-1}/(m-1)!
//          - nu x^{k,eta+1} t^{eta}/eta!
// Fills coeffs[0..eta] with the coefficients of q.
void potential_derivative_coeffs(const NetworkModel& model, int k, const StateVec& x,
                                 double* coeffs) {
    const PopulationParams& p = model.pop(k);
    const std::size_t base = model.flat_index(k, 1);
    if (p.eta < kInvFactorialSize) {
        for (int m = 1; m <= p.eta; ++m) {
            coeffs[m - 1] = (x[base + static_cast<std::size_t>(m)] -
                             p.nu * x[base + static_cast<std::size_t>(m - 1)]) *
                            kInvFactorial[m - 1];
        }
        coeffs[p.eta] = -p.nu * x[base + static_cast<std::size_t>(p.eta)] * kInvFactorial[p.eta];
        return;
    }
    double inv_fact = 1.0;
    for (int m = 1; m <= p.eta; ++m) {
        coeffs[m - 1] =
            (x[base + static_cast<std::size_t>(m)] - p.nu * x[base + static_cast<std::size_t>(m - 1)]) *
            inv_fact;
        inv_fact /= static_cast<double>(m);
    }
    coeffs[p.eta] = -p.nu * x[base + static_cast<std::size_t>(p.eta)] * inv_fact;
}

// (exp(At)x)^{k,1} for eta < kInvFactorialSize; same value as
// expm_action_component up to rounding order, without the divides.
double flow_potential(const NetworkModel& model, int k, const StateVec& x, double t) {
    const PopulationParams& p = model.pop(k);
    const std::size_t base = model.flat_index(k, 1);
    double t_pow = 1.0;
    double acc = x[base];
    for (int d = 1; d <= p.eta; ++d) {
        t_pow *= t;
        acc += t_pow * kInvFactorial[d] * x[base + static_cast<std::size_t>(d)];
    }
    return std::exp(-p.nu * t) * acc;
}

}  // namespace

std::size_t SpikeTrain::count(int population) const {
    return static_cast<std::size_t>(
        std::count_if(spikes.begin(), spikes.end(),
                      [population](const Spike& s) { return s.population == population; }));
}

double global_bound(const NetworkModel& model, int k, const StateVec& x) {
    const PopulationParams& p = model.pop(k);
    const std::size_t base = model.flat_index(k, 1);
    double arg = 0.0;
    double scale = 1.0;  // nu^(j-1)
    for (int j = 1; j <= p.eta + 1; ++j) {
        arg = std::max(arg, x[base + static_cast<std::size_t>(j - 1)] / scale);
        scale *= p.nu;
    }
    return p.rate(arg);
}

std::vector<double> critical_points(const NetworkModel& model, int k, const StateVec& x,
                                    double window) {
    if (!(window > 0.0)) {
        throw std::invalid_argument("critical_points: window must be positive");
    }
    const PopulationParams& p = model.pop(k);
    if (p.eta == 0) {
        return {};  // pure exponential decay, monotone between jumps
    }
    std::vector<double> coeffs(static_cast<std::size_t>(p.eta) + 1);
    potential_derivative_coeffs(model, k, x, coeffs.data());
    const bool all_zero =
        std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
    if (all_zero) {
        return {};  // the potential is constant along the flow
    }
    return poly_real_roots(coeffs, 0.0, window);
}

double local_bound(const NetworkModel& model, int k, const StateVec& x, double window) {
    if (!(window > 0.0)) {
        throw std::invalid_argument("local_bound: window must be positive");
    }
    const PopulationParams& p = model.pop(k);
    const double start = model.potential(x, k);
    if (p.eta >= 1 && p.eta <= 3) {
        // Stack-only path: this runs once per candidate event during thinning.
        double coeffs[4];
        potential_derivative_coeffs(model, k, x, coeffs);
        // The potential's time derivative along the flow is exp(-nu t) q(t)
        // with q the polynomial above. |q(t) - q(0)| <= t * sum_i i |q_i| t^(i-1)
        // on [0, window], so when |q(0)| exceeds that swing q cannot vanish
        // there, the potential is monotone and the sup sits at an endpoint.
        // Adaptive windows are tiny, so this skips the root solve almost always.
        double swing = 0.0;
        for (int i = p.eta; i >= 1; --i) {
            swing = swing * window + static_cast<double>(i) * std::abs(coeffs[i]);
        }
        if (std::abs(coeffs[0]) > swing * window) {
            return p.rate(coeffs[0] < 0.0 ? start : flow_potential(model, k, x, window));
        }
        double peak = std::max(start, flow_potential(model, k, x, window));
        double roots[3];
        const int n_roots = poly_real_roots_small(coeffs, p.eta, 0.0, window, roots);
        for (int i = 0; i < n_roots; ++i) {
            peak = std::max(peak, flow_potential(model, k, x, roots[i]));
        }
        return p.rate(peak);
    }
    double peak = std::max(start, expm_action_component(model, k, 1, window, x));
    if (p.eta > 3) {
        for (double tc : critical_points(model, k, x, window)) {
            peak = std::max(peak, expm_action_component(model, k, 1, tc, x));
        }
    }
    return p.rate(peak);
}

double adaptive_window(const NetworkModel& model, double lambda1, double lambda2,
                       double window_min, double window_max) {
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
        throw std::invalid_argument("adaptive_window: intensities must be nonnegative");
    }
    const double total = static_cast<double>(model.pop(1).n_neurons) * lambda1 +
                         static_cast<double>(model.pop(2).n_neurons) * lambda2;
    const double window = total > 0.0 ? 1.0 / total : window_max;
    return std::clamp(window, window_min, window_max);
}

namespace {

struct GridSampler {
    double delta = 0.0;
    double t_max = 0.0;
    std::size_t next = 0;
    std::vector<double>* times = nullptr;
    std::vector<StateVec>* states = nullptr;

    // Emits all grid points in [t_from, t_from + dt] by flowing x_from forward.
    void emit_through(const NetworkModel& model, double t_from, const StateVec& x_from,
                      double dt) {
        for (;;) {
            const double tg = static_cast<double>(next) * delta;
            if (tg > t_from + dt || tg > t_max) {
                return;
            }
            times->push_back(tg);
            states->push_back(expm_action(model, tg - t_from, x_from));
            ++next;
        }
    }
};

}  // namespace

ThinningResult thinning_simulate(const NetworkModel& model, const StateVec& x0, double t_max,
                                 const ThinningOptions& options, RngStream& rng) {
    if (x0.size() != static_cast<std::size_t>(model.kappa())) {
        throw std::invalid_argument("thinning_simulate: x0 has wrong dimension");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw std::invalid_argument("thinning_simulate: t_max must be positive and finite");
    }
    if (!(options.acceptance_scale > 0.0) || options.acceptance_scale > 1.0) {
        throw std::invalid_argument("thinning_simulate: acceptance_scale must be in (0, 1]");
    }
    if (!(options.window_min > 0.0) || !(options.window_max >= options.window_min)) {
        throw std::invalid_argument("thinning_simulate: invalid window clamp");
    }
    if (options.sample_delta && !(*options.sample_delta > 0.0)) {
        throw std::invalid_argument("thinning_simulate: sample_delta must be positive");
    }

    ThinningResult result;
    result.path.t0 = 0.0;
    result.path.x0 = x0;

    GridSampler sampler;
    const bool sampling = options.sample_delta.has_value();
    if (sampling) {
        sampler.delta = *options.sample_delta;
        sampler.t_max = t_max;
        sampler.times = &result.sample_times;
        sampler.states = &result.samples;
    }

    const double n1 = static_cast<double>(model.pop(1).n_neurons);
    const double n2 = static_cast<double>(model.pop(2).n_neurons);

    StateVec x = x0;
    StateVec flow;  // scratch for the advanced state
    double t = 0.0;
    double lambda1 = model.pop(1).rate(model.potential(x, 1));
    double lambda2 = model.pop(2).rate(model.potential(x, 2));

    // Advances the state along the deterministic flow by dt, emitting grid
    // samples passed on the way.
    auto advance = [&](double dt) {
        if (sampling) {
            sampler.emit_through(model, t, x, dt);
        }
        expm_action(model, dt, x, flow);
        x.swap(flow);
        t += dt;
    };

    while (t < t_max) {
        const double window = adaptive_window(model, lambda1, lambda2, options.window_min,
                                              options.window_max);
        double bound1;
        double bound2;
        if (options.bound == BoundKind::Global) {
            bound1 = global_bound(model, 1, x);
            bound2 = global_bound(model, 2, x);
        } else {
            // A failed root solve falls back to the window-free bound, which
            // dominates the local one, so thinning stays exact.
            try {
                bound1 = local_bound(model, 1, x, window);
            } catch (const NumericalError&) {
                bound1 = global_bound(model, 1, x);
            }
            try {
                bound2 = local_bound(model, 2, x, window);
            } catch (const NumericalError&) {
                bound2 = global_bound(model, 2, x);
            }
        }
        bound1 = std::max(bound1, kRateFloor);
        bound2 = std::max(bound2, kRateFloor);

        // Fixed draw order: population 1's clock, then population 2's.
        const double tau1 = rng.exponential(n1 * bound1);
        const double tau2 = rng.exponential(n2 * bound2);
        const double tau = std::min(tau1, tau2);
        const int k_star = tau1 <= tau2 ? 1 : 2;  // ties go to population 1

        if (tau > window) {
            // No candidate inside the window; advance and refresh the bounds.
            const double dt = std::min(window, t_max - t);
            advance(dt);
            if (dt == window) {
                ++result.stats.window_advances;
            }
        } else {
            if (t + tau >= t_max) {
                advance(t_max - t);
                break;
            }
            advance(tau);
            const PopulationParams& spiking = model.pop(k_star);
            const double intensity = spiking.rate(model.potential(x, k_star));
            const double bound_k = k_star == 1 ? bound1 : bound2;
            const double ratio = intensity / bound_k;
            if (ratio > 1.0 + 1e-9) {
                throw NumericalError(
                    "thinning_simulate: intensity exceeded its bound, acceptance ratio " +
                    std::to_string(ratio));
            }
            if (rng.uniform01() < ratio * options.acceptance_scale) {
                // Accepted spike: the other population's input component jumps.
                const int receiver = NetworkModel::driver(k_star);
                const PopulationParams& rec = model.pop(receiver);
                const int neuron = static_cast<int>(rng.uniform_below(
                                       static_cast<std::uint64_t>(spiking.n_neurons))) +
                                   1;
                x[model.flat_index(receiver, rec.eta + 1)] +=
                    static_cast<double>(rec.sign) / static_cast<double>(spiking.n_neurons);
                lambda1 = model.pop(1).rate(model.potential(x, 1));
                lambda2 = model.pop(2).rate(model.potential(x, 2));
                ++result.stats.accepted;
                if (options.record_spikes) {
                    result.spikes.spikes.push_back(Spike{t, k_star, neuron});
                }
                if (options.record_path) {
                    result.path.events.push_back(
                        PdmpEvent{t, k_star, neuron, x, lambda1, lambda2});
                }
                continue;  // intensities already refreshed
            }
            ++result.stats.rejected;
        }
        lambda1 = model.pop(1).rate(model.potential(x, 1));
        lambda2 = model.pop(2).rate(model.potential(x, 2));
    }

    result.final_state = std::move(x);
    return result;
}

}  // namespace hawkes
