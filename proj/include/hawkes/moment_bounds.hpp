#ifndef HAWKES_MOMENT_BOUNDS_HPP
#define HAWKES_MOMENT_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

struct Band {
    double lower = 0.0;
    double upper = 0.0;
};

// First moment bounds for component (k, j) of the diffusion at time t:
//   (exp(At) x0)^{k,j} + [1 - e^{-t nu} sum_{l=0}^{eta+1-j} (t nu)^l / l!]
//                        * min/max{0, c_k f_max' / nu^(eta+2-j)},
// where f_max' is the supremum of the driving population's rate.
Band first_moment_bounds(const NetworkModel& model, const StateVec& x0, int k, int j,
                         double t);

// Second moment upper bound for component (k, j) of the diffusion at time t.
double second_moment_bound(const NetworkModel& model, const StateVec& x0, int k, int j,
                           double t);

// Exponentially weighted monomial integral
//   I_u(t) = int_0^t e^{-u nu s} s^{u m} ds
//          = (u m)! / (u nu)^(u m + 1) * [1 - e^{-u t nu} sum_{l=0}^{u m} (u t nu)^l / l!].
double bound_integral_I(double nu, int m, int u, double t);

// Left Riemann sum counterpart Delta * sum_{l=0}^{i} e^{-u nu t_l} t_l^{u m}
// on the grid t_l = l Delta, with 0^0 = 1. The l = 0 summand only matters
// for m = 0; the stated discrete bounds include it, `include_l0 = false`
// drops it for consistency studies.
double bound_sum_I(double nu, int m, int u, double delta, std::size_t i, bool include_l0);

// Discrete-scheme analogues of the moment bounds at t_i = i * Delta, with the
// integrals replaced by left Riemann sums.
Band discrete_first_moment_bounds(const NetworkModel& model, const StateVec& x0, int k,
                                  int j, double delta, std::size_t i, bool include_l0 = true);
double discrete_second_moment_bound(const NetworkModel& model, const StateVec& x0, int k,
                                    int j, double delta, std::size_t i,
                                    bool include_l0 = true);

// Whole-grid versions evaluated at every i = 0..i_max with running sums,
// O(i_max) total.
std::vector<Band> discrete_first_moment_curve(const NetworkModel& model, const StateVec& x0,
                                              int k, int j, double delta, std::size_t i_max,
                                              bool include_l0 = true);
std::vector<double> discrete_second_moment_curve(const NetworkModel& model,
                                                 const StateVec& x0, int k, int j,
                                                 double delta, std::size_t i_max,
                                                 bool include_l0 = true);

// Stirling number of the second kind S(n, m) by the recurrence
// S(n, m) = m S(n-1, m) + S(n-1, m-1). Exact in 64 bits; throws
// std::overflow_error if n > 64 or an intermediate value overflows.
std::uint64_t stirling2(unsigned n, unsigned m);

// Negative-order polylogarithm Li_{-n}(z) = sum_{l>=0} l^n z^l (0^0 = 1),
// evaluated by the Stirling closed form
//   (-1)^(n+1) sum_{l=0}^{n} l! S(n+1, l+1) (-1/(1-z))^(l+1).
// Requires 0 < z < 1.
double polylog_neg(int n, double z);

// Long-run limits of the discrete first moment bounds at fixed Delta:
//   Delta^(m+1) Li_{-m}(e^{-nu Delta}) * min/max{0, c_k f_max' / m!},
// with m = eta_k + 1 - j. Converges to the continuous asymptote as Delta -> 0.
Band discrete_asymptotic_bounds(const NetworkModel& model, int k, int j, double delta);

// Lyapunov functional G(x) = sum_k sum_j (j / nu_k^(j-1)) |x^{k,j}|.
double lyapunov_G_discrete(const NetworkModel& model, const StateVec& x);

// One-step contraction factor of the exact flow under G:
//   alpha = max_k e^{-nu_k Delta} sum_{j=0}^{eta_k} (nu_k Delta)^j / j!,
// strictly below 1 for any Delta > 0.
double lyapunov_alpha(const NetworkModel& model, double delta);

// Analytic bound on the G-mass added by one Lie-Trotter step beyond the
// contracted part: the drift contribution Delta * G(exp(A Delta) B) bounded
// via f_max, plus the expected noise contribution using E|xi| = sqrt(2/pi).
double lyapunov_beta(const NetworkModel& model, double delta, double n_total);

// Flattened bound curves for serialization: one row per (t, component, order).
struct MomentBoundRow {
    double t;
    int k;
    int j;
    int order;           // 1 or 2
    std::string flavor;  // "continuous" or "discrete"
    double lower;        // 0 for order 2 (only upper bounds are available)
    double upper;
};
using MomentBoundCurve = std::vector<MomentBoundRow>;

// Continuous bounds on a uniform grid of n_points over [0, t_max] for every
// component and both orders; when delta > 0, discrete rows at the same grid
// are appended (the grid must then be a multiple of delta).
MomentBoundCurve build_moment_bound_curve(const NetworkModel& model, const StateVec& x0,
                                          double t_max, std::size_t n_points, double delta,
                                          bool include_l0 = true);

}  // namespace hawkes

#endif
