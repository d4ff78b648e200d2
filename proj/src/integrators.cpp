#include "hawkes/integrators.hpp"

#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::EulerMaruyama:
            return "em";
        case Scheme::LieTrotter:
            return "lie-trotter";
        case Scheme::Strang:
            return "strang";
        case Scheme::OdeLieTrotter:
            return "ode-lie-trotter";
        case Scheme::OdeStrang:
            return "ode-strang";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
    if (name == "em" || name == "euler-maruyama") {
        return Scheme::EulerMaruyama;
    }
    if (name == "lie-trotter") {
        return Scheme::LieTrotter;
    }
    if (name == "strang") {
        return Scheme::Strang;
    }
    if (name == "ode-lie-trotter") {
        return Scheme::OdeLieTrotter;
    }
    if (name == "ode-strang") {
        return Scheme::OdeStrang;
    }
    return std::nullopt;
}

bool scheme_is_deterministic(Scheme scheme) {
    return scheme == Scheme::OdeLieTrotter || scheme == Scheme::OdeStrang;
}

Stepper::Stepper(const NetworkModel& model, Scheme scheme, double delta, double noise_scale)
    : model_(&model),
      scheme_(scheme),
      delta_(delta),
      noise_scale_(scheme_is_deterministic(scheme) ? 0.0 : noise_scale),
      sqrt_delta_(std::sqrt(delta)) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("Stepper: delta must be positive and finite");
    }
    if (!(noise_scale >= 0.0)) {
        throw std::invalid_argument("Stepper: noise_scale must be nonnegative");
    }
    switch (scheme) {
        case Scheme::EulerMaruyama:
            break;
        case Scheme::LieTrotter:
        case Scheme::OdeLieTrotter:
            full_flow_.emplace(model, delta);
            break;
        case Scheme::Strang:
        case Scheme::OdeStrang:
            half_flow_.emplace(model, delta / 2.0);
            break;
    }
    input_index_ = {model.flat_index(1, model.pop(1).eta + 1),
                    model.flat_index(2, model.pop(2).eta + 1)};
}

namespace {

// Adds delta * B + sqrt(delta) * noise_scale * sigma xi in place, with the
// rates evaluated at the state as passed in. Both potentials are read before
// either input component is written, so the update is order-independent.
void add_jump_part(const NetworkModel& model, StateVec& x, double delta, double noise_factor,
                   const std::array<double, 2>& xi,
                   const std::array<std::size_t, 2>& input_index) {
    const double rate1 = model.pop(1).rate(model.potential(x, 1));
    const double rate2 = model.pop(2).rate(model.potential(x, 2));
    const double sign1 = static_cast<double>(model.pop(1).sign);
    const double sign2 = static_cast<double>(model.pop(2).sign);
    x[input_index[0]] += delta * sign1 * rate2 +
                         noise_factor * sign1 / std::sqrt(model.pop(2).proportion) *
                             std::sqrt(rate2) * xi[1];
    x[input_index[1]] += delta * sign2 * rate1 +
                         noise_factor * sign2 / std::sqrt(model.pop(1).proportion) *
                             std::sqrt(rate1) * xi[0];
}

}  // namespace

void Stepper::step_with_noise(StateVec& x, const std::array<double, 2>& xi) const {
    const double noise_factor = sqrt_delta_ * noise_scale_;
    switch (scheme_) {
        case Scheme::EulerMaruyama: {
            const double rate1 = model_->pop(1).rate(model_->potential(x, 1));
            const double rate2 = model_->pop(2).rate(model_->potential(x, 2));
            // Forward sweep: component j only reads component j+1, which is
            // still unmodified when j is updated.
            for (int k = 1; k <= 2; ++k) {
                const PopulationParams& p = model_->pop(k);
                const std::size_t base = model_->flat_index(k, 1);
                for (int j = 0; j <= p.eta; ++j) {
                    const std::size_t idx = base + static_cast<std::size_t>(j);
                    double incr = -p.nu * x[idx];
                    if (j < p.eta) {
                        incr += x[idx + 1];
                    }
                    x[idx] += delta_ * incr;
                }
            }
            const double sign1 = static_cast<double>(model_->pop(1).sign);
            const double sign2 = static_cast<double>(model_->pop(2).sign);
            x[input_index_[0]] += delta_ * sign1 * rate2 +
                                  noise_factor * sign1 /
                                      std::sqrt(model_->pop(2).proportion) * std::sqrt(rate2) *
                                      xi[1];
            x[input_index_[1]] += delta_ * sign2 * rate1 +
                                  noise_factor * sign2 /
                                      std::sqrt(model_->pop(1).proportion) * std::sqrt(rate1) *
                                      xi[0];
            break;
        }
        case Scheme::LieTrotter:
        case Scheme::OdeLieTrotter:
            add_jump_part(*model_, x, delta_, noise_factor, xi, input_index_);
            full_flow_->apply_in_place(x);
            break;
        case Scheme::Strang:
        case Scheme::OdeStrang:
            half_flow_->apply_in_place(x);
            add_jump_part(*model_, x, delta_, noise_factor, xi, input_index_);
            half_flow_->apply_in_place(x);
            break;
    }
}

void Stepper::step(StateVec& x, RngStream& rng) const {
    if (scheme_is_deterministic(scheme_)) {
        step_with_noise(x, {0.0, 0.0});
        return;
    }
    std::array<double, 2> xi;
    xi[0] = rng.normal();
    xi[1] = rng.normal();
    step_with_noise(x, xi);
}

StateVec em_step(const NetworkModel& model, const StateVec& x, double delta,
                 double noise_scale, const std::array<double, 2>& xi) {
    StateVec out = x;
    Stepper(model, Scheme::EulerMaruyama, delta, noise_scale).step_with_noise(out, xi);
    return out;
}

StateVec lt_step(const NetworkModel& model, const StateVec& x, double delta,
                 double noise_scale, const std::array<double, 2>& xi) {
    StateVec out = x;
    Stepper(model, Scheme::LieTrotter, delta, noise_scale).step_with_noise(out, xi);
    return out;
}

StateVec strang_step(const NetworkModel& model, const StateVec& x, double delta,
                     double noise_scale, const std::array<double, 2>& xi) {
    StateVec out = x;
    Stepper(model, Scheme::Strang, delta, noise_scale).step_with_noise(out, xi);
    return out;
}

namespace {

void check_finite(const StateVec& x, std::size_t step) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw NumericalError("integration diverged: non-finite state at step " +
                                 std::to_string(step));
        }
    }
}

}  // namespace

Trajectory integrate(const NetworkModel& model, Scheme scheme, const StateVec& x0,
                     double delta, std::size_t n_steps, double noise_scale, RngStream& rng) {
    Trajectory traj;
    traj.delta = delta;
    traj.states.reserve(n_steps + 1);
    integrate_streaming(model, scheme, x0, delta, n_steps, noise_scale, rng,
                        [&traj](std::size_t, const StateVec& x) { traj.states.push_back(x); });
    return traj;
}

void integrate_streaming(const NetworkModel& model, Scheme scheme, const StateVec& x0,
                         double delta, std::size_t n_steps, double noise_scale,
                         RngStream& rng,
                         const std::function<void(std::size_t, const StateVec&)>& sink) {
    if (x0.size() != static_cast<std::size_t>(model.kappa())) {
        throw std::invalid_argument("integrate: x0 has wrong dimension");
    }
    const Stepper stepper(model, scheme, delta, noise_scale);
    StateVec x = x0;
    sink(0, x);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        stepper.step(x, rng);
        check_finite(x, i);
        sink(i, x);
    }
}

std::vector<double> conditional_covariance(const NetworkModel& model, const StateVec& x,
                                           double delta, double n_total) {
    if (!(delta > 0.0) || !(n_total > 0.0)) {
        throw std::invalid_argument("conditional_covariance: delta and n_total must be > 0");
    }
    const std::size_t kappa = static_cast<std::size_t>(model.kappa());
    const StateVec col1 = expm_action(model, delta,
                                      diffusion_sigma_action(model, x, {1.0, 0.0}));
    const StateVec col2 = expm_action(model, delta,
                                      diffusion_sigma_action(model, x, {0.0, 1.0}));
    std::vector<double> cov(kappa * kappa, 0.0);
    const double weight = delta / n_total;
    for (std::size_t i = 0; i < kappa; ++i) {
        for (std::size_t j = 0; j < kappa; ++j) {
            cov[i * kappa + j] = weight * (col1[i] * col1[j] + col2[i] * col2[j]);
        }
    }
    return cov;
}

std::vector<double> milstein_correction_generic(const SigmaFn& sigma, int kappa,
                                                const StateVec& x) {
    constexpr double kStep = 1e-6;
    const std::size_t dim = static_cast<std::size_t>(kappa);
    const std::vector<double> sigma0 = sigma(x);
    if (sigma0.size() != dim * 2) {
        throw std::invalid_argument("milstein_correction: sigma must return a kappa x 2 matrix");
    }
    std::vector<double> out(dim * 4, 0.0);
    StateVec perturbed = x;
    for (std::size_t l = 0; l < dim; ++l) {
        perturbed[l] = x[l] + kStep;
        const std::vector<double> plus = sigma(perturbed);
        perturbed[l] = x[l] - kStep;
        const std::vector<double> minus = sigma(perturbed);
        perturbed[l] = x[l];
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t m2 = 0; m2 < 2; ++m2) {
                const double deriv = (plus[j * 2 + m2] - minus[j * 2 + m2]) / (2.0 * kStep);
                for (std::size_t m1 = 0; m1 < 2; ++m1) {
                    out[(j * 2 + m1) * 2 + m2] += sigma0[l * 2 + m1] * deriv;
                }
            }
        }
    }
    return out;
}

std::vector<double> milstein_correction(const NetworkModel& model, const StateVec& x) {
    const int kappa = model.kappa();
    SigmaFn sigma = [&model](const StateVec& state) {
        const std::size_t dim = static_cast<std::size_t>(model.kappa());
        std::vector<double> mat(dim * 2, 0.0);
        for (int k = 1; k <= 2; ++k) {
            const int kd = NetworkModel::driver(k);
            const PopulationParams& p = model.pop(k);
            const PopulationParams& pd = model.pop(kd);
            const double amp = static_cast<double>(p.sign) / std::sqrt(pd.proportion) *
                               std::sqrt(pd.rate(model.potential(state, kd)));
            const std::size_t row = model.flat_index(k, p.eta + 1);
            mat[row * 2 + static_cast<std::size_t>(kd - 1)] = amp;
        }
        return mat;
    };
    return milstein_correction_generic(sigma, kappa, x);
}

}  // namespace hawkes
