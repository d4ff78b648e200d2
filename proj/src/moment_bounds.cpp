#include "hawkes/moment_bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hawkes {

namespace {

// Truncated Poisson mass sum_{l=0}^{m} e^{-a} a^l / l!, built term by term so
// large a underflows gracefully instead of overflowing.
double poisson_head(int m, double a) {
    double term = std::exp(-a);
    double sum = term;
    for (int l = 1; l <= m; ++l) {
        term *= a / static_cast<double>(l);
        sum += term;
    }
    return sum;
}

// t_l^p with the 0^0 = 1 convention.
double grid_power(double t, int p) {
    if (p == 0) {
        return 1.0;
    }
    return std::pow(t, p);
}

int tail_power(const NetworkModel& model, int k, int j) {
    const PopulationParams& p = model.pop(k);
    if (j < 1 || j > p.eta + 1) {
        throw std::out_of_range("component index j out of range");
    }
    return p.eta + 1 - j;
}

double inv_factorial(int m) {
    double inv = 1.0;
    for (int r = 2; r <= m; ++r) {
        inv /= static_cast<double>(r);
    }
    return inv;
}

}  // namespace

Band first_moment_bounds(const NetworkModel& model, const StateVec& x0, int k, int j,
                         double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("first_moment_bounds: t must be >= 0");
    }
    const PopulationParams& p = model.pop(k);
    const int m = tail_power(model, k, j);
    const double base = expm_action_component(model, k, j, t, x0);
    const double bracket = 1.0 - poisson_head(m, t * p.nu);
    const double amp = static_cast<double>(p.sign) *
                       model.pop(NetworkModel::driver(k)).rate.max() /
                       std::pow(p.nu, m + 1);
    return Band{base + bracket * std::min(0.0, amp), base + bracket * std::max(0.0, amp)};
}

double bound_integral_I(double nu, int m, int u, double t) {
    if (!(nu > 0.0) || m < 0 || u < 1 || !(t >= 0.0)) {
        throw std::invalid_argument("bound_integral_I: bad arguments");
    }
    const double rate = static_cast<double>(u) * nu;
    const int power = u * m;
    // (power)! / rate^(power+1), accumulated as a running product.
    double front = 1.0 / rate;
    for (int r = 1; r <= power; ++r) {
        front *= static_cast<double>(r) / rate;
    }
    return front * (1.0 - poisson_head(power, rate * t));
}

double bound_sum_I(double nu, int m, int u, double delta, std::size_t i, bool include_l0) {
    if (!(nu > 0.0) || m < 0 || u < 1 || !(delta > 0.0)) {
        throw std::invalid_argument("bound_sum_I: bad arguments");
    }
    const int power = u * m;
    const double rate = static_cast<double>(u) * nu;
    double sum = 0.0;
    for (std::size_t l = include_l0 ? 0 : 1; l <= i; ++l) {
        const double tl = static_cast<double>(l) * delta;
        sum += std::exp(-rate * tl) * grid_power(tl, power);
    }
    return delta * sum;
}

double second_moment_bound(const NetworkModel& model, const StateVec& x0, int k, int j,
                           double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("second_moment_bound: t must be >= 0");
    }
    const PopulationParams& p = model.pop(k);
    const PopulationParams& pd = model.pop(NetworkModel::driver(k));
    const int m = tail_power(model, k, j);
    const double base = expm_action_component(model, k, j, t, x0);
    const double i1 = bound_integral_I(p.nu, m, 1, t);
    const double i2 = bound_integral_I(p.nu, m, 2, t);
    const double fmax = pd.rate.max();
    const double inv_fm = inv_factorial(m);
    const double cross = static_cast<double>(p.sign) * fmax * inv_fm * i1;
    const double n_pop = static_cast<double>(model.total_neurons()) * pd.proportion;
    const double spread = std::sqrt(fmax) * i1 + std::sqrt(i2 / n_pop);
    return base * base + 2.0 * base * std::max(0.0, cross) +
           fmax * inv_fm * inv_fm * spread * spread;
}

Band discrete_first_moment_bounds(const NetworkModel& model, const StateVec& x0, int k,
                                  int j, double delta, std::size_t i, bool include_l0) {
    const PopulationParams& p = model.pop(k);
    const int m = tail_power(model, k, j);
    const double t_i = static_cast<double>(i) * delta;
    const double base = expm_action_component(model, k, j, t_i, x0);
    const double sum = bound_sum_I(p.nu, m, 1, delta, i, include_l0);
    const double amp = static_cast<double>(p.sign) *
                       model.pop(NetworkModel::driver(k)).rate.max() * inv_factorial(m);
    return Band{base + sum * std::min(0.0, amp), base + sum * std::max(0.0, amp)};
}

double discrete_second_moment_bound(const NetworkModel& model, const StateVec& x0, int k,
                                    int j, double delta, std::size_t i, bool include_l0) {
    const PopulationParams& p = model.pop(k);
    const PopulationParams& pd = model.pop(NetworkModel::driver(k));
    const int m = tail_power(model, k, j);
    const double t_i = static_cast<double>(i) * delta;
    const double base = expm_action_component(model, k, j, t_i, x0);
    const double i1 = bound_sum_I(p.nu, m, 1, delta, i, include_l0);
    const double i2 = bound_sum_I(p.nu, m, 2, delta, i, include_l0);
    const double fmax = pd.rate.max();
    const double inv_fm = inv_factorial(m);
    const double cross = static_cast<double>(p.sign) * fmax * inv_fm * i1;
    const double n_pop = static_cast<double>(model.total_neurons()) * pd.proportion;
    const double spread = std::sqrt(fmax) * i1 + std::sqrt(i2 / n_pop);
    return base * base + 2.0 * base * std::max(0.0, cross) +
           fmax * inv_fm * inv_fm * spread * spread;
}

std::vector<Band> discrete_first_moment_curve(const NetworkModel& model, const StateVec& x0,
                                              int k, int j, double delta, std::size_t i_max,
                                              bool include_l0) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("discrete_first_moment_curve: delta must be > 0");
    }
    const PopulationParams& p = model.pop(k);
    const int m = tail_power(model, k, j);
    const double amp = static_cast<double>(p.sign) *
                       model.pop(NetworkModel::driver(k)).rate.max() * inv_factorial(m);
    std::vector<Band> out;
    out.reserve(i_max + 1);
    double running = 0.0;
    for (std::size_t i = 0; i <= i_max; ++i) {
        const double tl = static_cast<double>(i) * delta;
        if (i > 0 || include_l0) {
            running += std::exp(-p.nu * tl) * grid_power(tl, m);
        }
        const double base = expm_action_component(model, k, j, tl, x0);
        const double sum = delta * running;
        out.push_back(
            Band{base + sum * std::min(0.0, amp), base + sum * std::max(0.0, amp)});
    }
    return out;
}

std::vector<double> discrete_second_moment_curve(const NetworkModel& model,
                                                 const StateVec& x0, int k, int j,
                                                 double delta, std::size_t i_max,
                                                 bool include_l0) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("discrete_second_moment_curve: delta must be > 0");
    }
    const PopulationParams& p = model.pop(k);
    const PopulationParams& pd = model.pop(NetworkModel::driver(k));
    const int m = tail_power(model, k, j);
    const double fmax = pd.rate.max();
    const double inv_fm = inv_factorial(m);
    const double n_pop = static_cast<double>(model.total_neurons()) * pd.proportion;
    std::vector<double> out;
    out.reserve(i_max + 1);
    double running1 = 0.0;
    double running2 = 0.0;
    for (std::size_t i = 0; i <= i_max; ++i) {
        const double tl = static_cast<double>(i) * delta;
        if (i > 0 || include_l0) {
            running1 += std::exp(-p.nu * tl) * grid_power(tl, m);
            running2 += std::exp(-2.0 * p.nu * tl) * grid_power(tl, 2 * m);
        }
        const double base = expm_action_component(model, k, j, tl, x0);
        const double i1 = delta * running1;
        const double i2 = delta * running2;
        const double cross = static_cast<double>(p.sign) * fmax * inv_fm * i1;
        const double spread = std::sqrt(fmax) * i1 + std::sqrt(i2 / n_pop);
        out.push_back(base * base + 2.0 * base * std::max(0.0, cross) +
                      fmax * inv_fm * inv_fm * spread * spread);
    }
    return out;
}

std::uint64_t stirling2(unsigned n, unsigned m) {
    if (m > n) {
        throw std::invalid_argument("stirling2: m must not exceed n");
    }
    if (n > 64) {
        throw std::overflow_error("stirling2: n > 64 exceeds the exact 64-bit range");
    }
    if (n == 0) {
        return 1;  // S(0,0) = 1 by convention
    }
    if (m == 0) {
        return 0;
    }
    // Row-by-row recurrence, S(r, c) = c S(r-1, c) + S(r-1, c-1).
    std::vector<std::uint64_t> row(m + 1, 0);
    row[0] = 1;  // acts as S(0, 0); shifted out after the first iteration
    for (unsigned r = 1; r <= n; ++r) {
        const unsigned top = std::min(r, m);
        for (unsigned c = top; c >= 1; --c) {
            std::uint64_t scaled;
            if (__builtin_mul_overflow(static_cast<std::uint64_t>(c), row[c], &scaled)) {
                throw std::overflow_error("stirling2: 64-bit overflow");
            }
            if (__builtin_add_overflow(scaled, row[c - 1], &row[c])) {
                throw std::overflow_error("stirling2: 64-bit overflow");
            }
        }
        row[0] = 0;  // S(r, 0) = 0 for r >= 1
    }
    return row[m];
}

double polylog_neg(int n, double z) {
    if (n < 0) {
        throw std::invalid_argument("polylog_neg: order must be >= 0");
    }
    if (!(z > 0.0) || !(z < 1.0)) {
        throw std::domain_error("polylog_neg: z must lie in (0, 1)");
    }
    // Stirling row S(n+1, c) for c = 0..n+1, in doubles to admit large n.
    std::vector<double> row(static_cast<std::size_t>(n) + 2, 0.0);
    row[0] = 1.0;
    for (int r = 1; r <= n + 1; ++r) {
        for (int c = std::min(r, n + 1); c >= 1; --c) {
            row[static_cast<std::size_t>(c)] =
                static_cast<double>(c) * row[static_cast<std::size_t>(c)] +
                row[static_cast<std::size_t>(c - 1)];
        }
        row[0] = 0.0;
    }
    const double w = -1.0 / (1.0 - z);
    double w_pow = w;
    double factorial = 1.0;
    double sum = 0.0;
    for (int l = 0; l <= n; ++l) {
        if (l > 0) {
            factorial *= static_cast<double>(l);
            w_pow *= w;
        }
        sum += factorial * row[static_cast<std::size_t>(l) + 1] * w_pow;
    }
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
    return sign * sum;
}

Band discrete_asymptotic_bounds(const NetworkModel& model, int k, int j, double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("discrete_asymptotic_bounds: delta must be > 0");
    }
    const PopulationParams& p = model.pop(k);
    const int m = tail_power(model, k, j);
    const double li = polylog_neg(m, std::exp(-p.nu * delta));
    const double factor = std::pow(delta, m + 1) * li;
    const double amp = static_cast<double>(p.sign) *
                       model.pop(NetworkModel::driver(k)).rate.max() * inv_factorial(m);
    return Band{factor * std::min(0.0, amp), factor * std::max(0.0, amp)};
}

double lyapunov_G_discrete(const NetworkModel& model, const StateVec& x) {
    if (x.size() != static_cast<std::size_t>(model.kappa())) {
        throw std::invalid_argument("lyapunov_G_discrete: state has wrong dimension");
    }
    double total = 0.0;
    for (int k = 1; k <= 2; ++k) {
        const PopulationParams& p = model.pop(k);
        const std::size_t base = model.flat_index(k, 1);
        double nu_pow = 1.0;  // nu^(j-1)
        for (int j = 1; j <= p.eta + 1; ++j) {
            total += static_cast<double>(j) / nu_pow *
                     std::abs(x[base + static_cast<std::size_t>(j - 1)]);
            nu_pow *= p.nu;
        }
    }
    return total;
}

double lyapunov_alpha(const NetworkModel& model, double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("lyapunov_alpha: delta must be > 0");
    }
    double alpha = 0.0;
    for (int k = 1; k <= 2; ++k) {
        const PopulationParams& p = model.pop(k);
        alpha = std::max(alpha, poisson_head(p.eta, p.nu * delta));
    }
    return alpha;
}

double lyapunov_beta(const NetworkModel& model, double delta, double n_total) {
    if (!(delta > 0.0) || !(n_total > 0.0)) {
        throw std::invalid_argument("lyapunov_beta: delta and n_total must be > 0");
    }
    double beta = 0.0;
    for (int k = 1; k <= 2; ++k) {
        const PopulationParams& p = model.pop(k);
        const PopulationParams& pd = model.pop(NetworkModel::driver(k));
        // G-mass of exp(A Delta) applied to a unit mass on component
        // (k, eta_k+1): the flow spreads it over the block with Taylor
        // weights Delta^(eta+1-j)/(eta+1-j)!.
        double spread = 0.0;
        double nu_pow = 1.0;  // nu^(j-1)
        for (int j = 1; j <= p.eta + 1; ++j) {
            spread += static_cast<double>(j) / nu_pow *
                      std::pow(delta, p.eta + 1 - j) * inv_factorial(p.eta + 1 - j);
            nu_pow *= p.nu;
        }
        spread *= std::exp(-p.nu * delta);
        const double fmax = pd.rate.max();
        const double drift_mass = delta * fmax;
        const double noise_mass = std::sqrt(delta / n_total) *
                                  std::sqrt(fmax / pd.proportion) *
                                  std::sqrt(2.0 / std::numbers::pi);
        beta += (drift_mass + noise_mass) * spread;
    }
    return beta;
}

MomentBoundCurve build_moment_bound_curve(const NetworkModel& model, const StateVec& x0,
                                          double t_max, std::size_t n_points, double delta,
                                          bool include_l0) {
    if (!(t_max > 0.0) || n_points < 2) {
        throw std::invalid_argument("build_moment_bound_curve: need t_max > 0, n_points >= 2");
    }
    const double step = t_max / static_cast<double>(n_points - 1);
    std::size_t stride = 0;
    if (delta > 0.0) {
        const double ratio = step / delta;
        stride = static_cast<std::size_t>(std::llround(ratio));
        if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-9) {
            throw std::invalid_argument(
                "build_moment_bound_curve: grid step must be an integer multiple of delta");
        }
    }
    MomentBoundCurve curve;
    for (int k = 1; k <= 2; ++k) {
        for (int j = 1; j <= model.pop(k).eta + 1; ++j) {
            for (std::size_t q = 0; q < n_points; ++q) {
                const double t = static_cast<double>(q) * step;
                const Band first = first_moment_bounds(model, x0, k, j, t);
                curve.push_back(MomentBoundRow{t, k, j, 1, "continuous", first.lower,
                                               first.upper});
                curve.push_back(MomentBoundRow{
                    t, k, j, 2, "continuous", 0.0, second_moment_bound(model, x0, k, j, t)});
            }
            if (delta > 0.0) {
                const std::size_t i_max = (n_points - 1) * stride;
                const std::vector<Band> first =
                    discrete_first_moment_curve(model, x0, k, j, delta, i_max, include_l0);
                const std::vector<double> second =
                    discrete_second_moment_curve(model, x0, k, j, delta, i_max, include_l0);
                for (std::size_t q = 0; q < n_points; ++q) {
                    const std::size_t i = q * stride;
                    const double t = static_cast<double>(i) * delta;
                    curve.push_back(MomentBoundRow{t, k, j, 1, "discrete", first[i].lower,
                                                   first[i].upper});
                    curve.push_back(
                        MomentBoundRow{t, k, j, 2, "discrete", 0.0, second[i]});
                }
            }
        }
    }
    return curve;
}

}  // namespace hawkes
