#ifndef HAWKES_INTEGRATORS_HPP
#define HAWKES_INTEGRATORS_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

// Time steppers for the diffusion approximation
//   dX = (A X + B(X)) dt + noise_scale * sigma(X) dW,
// with noise_scale = 1/sqrt(N). The Ode variants drop the noise term and
// integrate the large-population limit; they draw no randomness at all.
enum class Scheme { EulerMaruyama, LieTrotter, Strang, OdeLieTrotter, OdeStrang };

std::string scheme_name(Scheme scheme);
std::optional<Scheme> scheme_from_name(const std::string& name);
bool scheme_is_deterministic(Scheme scheme);

// Reusable one-step integrator for a fixed (model, scheme, delta,
// noise_scale). The exact-flow coefficients exp(A delta) and exp(A delta/2)
// are precomputed once. Every stochastic step consumes one standard normal
// pair: xi[0] scales noise column 1 (population 2's input), xi[1] scales
// noise column 2 (population 1's input).
class Stepper {
public:
    Stepper(const NetworkModel& model, Scheme scheme, double delta, double noise_scale);

    // Advances x by one step, drawing noise from rng (nothing for Ode schemes).
    void step(StateVec& x, RngStream& rng) const;

    // Advances x by one step with caller-supplied noise, for coupling a
    // coarse grid to refinements of the same Brownian path.
    void step_with_noise(StateVec& x, const std::array<double, 2>& xi) const;

    Scheme scheme() const noexcept { return scheme_; }
    double delta() const noexcept { return delta_; }

private:
    const NetworkModel* model_;
    Scheme scheme_;
    double delta_;
    double noise_scale_;
    double sqrt_delta_;
    std::optional<ExpmCoeffs> full_flow_;  // exp(A delta), Lie-Trotter
    std::optional<ExpmCoeffs> half_flow_;  // exp(A delta/2), Strang
    std::array<std::size_t, 2> input_index_;
};

// Single steps from x, convenience wrappers over Stepper.
//
// Euler-Maruyama: x + delta (A x + B(x)) + sqrt(delta) * noise_scale * sigma(x) xi.
StateVec em_step(const NetworkModel& model, const StateVec& x, double delta,
                 double noise_scale, const std::array<double, 2>& xi);

// Lie-Trotter: jump part first,
//   y = x + delta B(x) + sqrt(delta) * noise_scale * sigma(x) xi,
// then the exact linear flow exp(A delta) y.
StateVec lt_step(const NetworkModel& model, const StateVec& x, double delta,
                 double noise_scale, const std::array<double, 2>& xi);

// Strang: half flow, full jump part, half flow.
StateVec strang_step(const NetworkModel& model, const StateVec& x, double delta,
                     double noise_scale, const std::array<double, 2>& xi);

struct Trajectory {
    double delta = 0.0;
    std::vector<StateVec> states;  // states[i] is the state at t = i * delta

    std::size_t n_steps() const { return states.empty() ? 0 : states.size() - 1; }
    double time_at(std::size_t i) const { return static_cast<double>(i) * delta; }
};

// Runs n_steps of the chosen scheme from x0 and stores the whole path.
// Components are checked for finiteness after every step; divergence raises
// a NumericalError naming the step.
Trajectory integrate(const NetworkModel& model, Scheme scheme, const StateVec& x0,
                     double delta, std::size_t n_steps, double noise_scale, RngStream& rng);

// As integrate, but hands each state (including the initial one, at step 0)
// to `sink(step_index, state)` instead of storing the path.
void integrate_streaming(const NetworkModel& model, Scheme scheme, const StateVec& x0,
                         double delta, std::size_t n_steps, double noise_scale,
                         RngStream& rng,
                         const std::function<void(std::size_t, const StateVec&)>& sink);

// Covariance of the noise injected by one Lie-Trotter or Strang step given
// the current state: (delta / n_total) exp(A delta) sigma(x) sigma(x)^T
// exp(A delta)^T as a dense kappa x kappa row-major matrix. Its rank is 2
// (one noise column per population) but every diagonal entry is positive,
// since the flow spreads each input component over its whole block.
std::vector<double> conditional_covariance(const NetworkModel& model, const StateVec& x,
                                           double delta, double n_total);

// Milstein commutativity tensor: entry (j, m1, m2) holds
//   sum_l sigma^{l,m1}(x) * d sigma^{j,m2}(x) / dx^l,
// with the derivative taken by central differences (h = 1e-6). For this
// model the tensor vanishes identically, which is why Euler-Maruyama already
// attains strong order 1. Indexed out[(j*2 + m1)*2 + m2], all 0-based.
std::vector<double> milstein_correction(const NetworkModel& model, const StateVec& x);

// Same contraction for an arbitrary noise map (kappa x 2, row-major), used
// to show the contraction picks up broken zero patterns.
using SigmaFn = std::function<std::vector<double>(const StateVec&)>;
std::vector<double> milstein_correction_generic(const SigmaFn& sigma, int kappa,
                                                const StateVec& x);

}  // namespace hawkes

#endif
