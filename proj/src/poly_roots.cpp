#include "hawkes/poly_roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

constexpr double kLeadingTrim = 1e-14;
constexpr double kImagTol = 1e-8;
constexpr double kDedupTol = 1e-9;
constexpr double kResidualTol = 1e-10;

double eval_poly(const double* a, std::size_t n, double t) {
    double value = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        value = value * t + a[i];
    }
    return value;
}

double eval_poly_abs(const double* a, std::size_t n, double t) {
    const double at = std::abs(t);
    double value = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        value = value * at + std::abs(a[i]);
    }
    return value;
}

double eval_poly_deriv(const double* a, std::size_t n, double t) {
    double value = 0.0;
    for (std::size_t i = n; i-- > 1;) {
        value = value * t + static_cast<double>(i) * a[i];
    }
    return value;
}

// A couple of Newton steps to tighten closed-form and eigenvalue roots.
double polish(const double* a, std::size_t n, double t) {
    for (int iter = 0; iter < 3; ++iter) {
        const double p = eval_poly(a, n, t);
        const double dp = eval_poly_deriv(a, n, t);
        if (dp == 0.0) {
            break;
        }
        const double step = p / dp;
        if (!std::isfinite(step)) {
            break;
        }
        t -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t))) {
            break;
        }
    }
    return t;
}

// Closed-form real roots of a cubic via the depressed form and Cardano's
// or the trigonometric method; much cheaper than an eigensolve and exact
// enough that the Newton polish reaches full precision. Writes into out,
// returns the count.
int cubic_real_roots(const double* a, double out[3]) {
    const double b = a[2] / a[3];
    const double c = a[1] / a[3];
    const double d = a[0] / a[3];
    const double shift = b / 3.0;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    int count = 0;
    const double half_q = 0.5 * q;
    const double disc = half_q * half_q + p * p * p / 27.0;
    if (disc > 0.0) {
        // One real root; the copysign form avoids cancellation in u.
        const double root_disc = std::sqrt(disc);
        const double big = -(half_q + std::copysign(root_disc, q));
        const double u = std::cbrt(big);
        const double v = u == 0.0 ? 0.0 : -p / (3.0 * u);
        out[count++] = u + v - shift;
    } else if (p == 0.0) {
        out[count++] = std::cbrt(-q) - shift;  // triple (or near-triple) root
    } else {
        // Three real roots (p < 0 here since disc <= 0).
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        constexpr double kTwoThirdsPi = 2.0943951023931953;
        for (int k = 0; k < 3; ++k) {
            out[count++] = m * std::cos(theta - kTwoThirdsPi * static_cast<double>(k)) - shift;
        }
    }
    for (int i = 0; i < count; ++i) {
        out[i] = polish(a, 4, out[i]);
    }
    return count;
}

// Root candidates for an already trimmed polynomial of degree <= 3 with a
// nonzero leading coefficient. Writes into out, returns the count.
int small_candidates(const double* a, int deg, double out[3]) {
    int count = 0;
    if (deg == 1) {
        out[count++] = -a[0] / a[1];
    } else if (deg == 2) {
        const double qa = a[2];
        const double qb = a[1];
        const double qc = a[0];
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc == 0.0) {
            out[count++] = -qb / (2.0 * qa);
        } else if (disc > 0.0) {
            // Cancellation-free form: compute the large-magnitude root first.
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (qb + std::copysign(sq, qb));
            out[count++] = q / qa;
            out[count++] = q != 0.0 ? qc / q : 0.0;
        }
    } else if (deg == 3) {
        count = cubic_real_roots(a, out);
    }
    return count;
}

// Sorts the candidates, keeps those strictly inside (lo, hi), drops
// duplicates, and applies the residual check; survivors end up packed at
// the front of cand and the new count is returned.
int filter_candidates(const double* a, std::size_t n, double lo, double hi, double* cand,
                      int n_cand) {
    std::sort(cand, cand + n_cand);
    int kept = 0;
    for (int i = 0; i < n_cand; ++i) {
        const double r = cand[i];
        if (!(r > lo && r < hi)) {
            continue;
        }
        if (kept > 0 && std::abs(r - cand[kept - 1]) <= kDedupTol) {
            continue;
        }
        const double scale = eval_poly_abs(a, n, r);
        if (std::abs(eval_poly(a, n, r)) > kResidualTol * std::max(scale, 1e-300)) {
            throw NumericalError("poly_real_roots: root failed the residual check");
        }
        cand[kept++] = r;
    }
    return kept;
}

std::vector<double> companion_real_roots(const double* a, std::size_t deg) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                                      static_cast<Eigen::Index>(deg));
    for (std::size_t i = 0; i + 1 < deg; ++i) {
        companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    }
    for (std::size_t i = 0; i < deg; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) =
            -a[i] / a[deg];
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("poly_real_roots: eigenvalue iteration failed to converge");
    }
    std::vector<double> roots;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const std::complex<double> z = solver.eigenvalues()(i);
        if (std::abs(z.imag()) <= kImagTol * std::max(1.0, std::abs(z))) {
            roots.push_back(polish(a, deg + 1, z.real()));
        }
    }
    return roots;
}

}  // namespace

std::vector<double> poly_real_roots(const std::vector<double>& coeffs, double lo, double hi) {
    if (coeffs.empty()) {
        throw std::invalid_argument("poly_real_roots: empty coefficient list");
    }
    double max_abs = 0.0;
    for (double c : coeffs) {
        max_abs = std::max(max_abs, std::abs(c));
    }
    if (max_abs == 0.0) {
        throw std::invalid_argument("poly_real_roots: identically zero polynomial");
    }

    const double* a = coeffs.data();
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && std::abs(a[deg]) <= kLeadingTrim * max_abs) {
        --deg;
    }

    if (deg <= 3) {
        double cand[3];
        int n_cand = small_candidates(a, static_cast<int>(deg), cand);
        n_cand = filter_candidates(a, deg + 1, lo, hi, cand, n_cand);
        return std::vector<double>(cand, cand + n_cand);
    }

    std::vector<double> cand = companion_real_roots(a, deg);
    const int kept =
        filter_candidates(a, deg + 1, lo, hi, cand.data(), static_cast<int>(cand.size()));
    cand.resize(static_cast<std::size_t>(kept));
    return cand;
}

int poly_real_roots_small(const double* coeffs, int degree, double lo, double hi, double out[3]) {
    if (degree < 0 || degree > 3) {
        throw std::invalid_argument("poly_real_roots_small: degree must be in [0, 3]");
    }
    double max_abs = 0.0;
    for (int i = 0; i <= degree; ++i) {
        max_abs = std::max(max_abs, std::abs(coeffs[i]));
    }
    if (max_abs == 0.0) {
        return 0;
    }
    int deg = degree;
    while (deg > 0 && std::abs(coeffs[deg]) <= kLeadingTrim * max_abs) {
        --deg;
    }
    const int n_cand = small_candidates(coeffs, deg, out);
    return filter_candidates(coeffs, static_cast<std::size_t>(deg) + 1, lo, hi, out, n_cand);
}

}  // namespace hawkes
