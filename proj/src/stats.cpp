#include "hawkes/stats.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) {
        throw std::invalid_argument("mean: empty sample");
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    return sum / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("variance: need at least two samples");
    }
    const double mu = mean(xs);
    double sum = 0.0;
    for (double x : xs) {
        sum += (x - mu) * (x - mu);
    }
    return sum / static_cast<double>(xs.size() - 1);
}

double batch_means_se(const std::vector<double>& xs, std::size_t n_batches) {
    if (n_batches < 2 || xs.size() < 2 * n_batches) {
        throw InsufficientDataError("batch_means_se: series too short for the batch count");
    }
    const std::size_t batch_len = xs.size() / n_batches;
    std::vector<double> batch_mean(n_batches, 0.0);
    for (std::size_t b = 0; b < n_batches; ++b) {
        double sum = 0.0;
        for (std::size_t i = b * batch_len; i < (b + 1) * batch_len; ++i) {
            sum += xs[i];
        }
        batch_mean[b] = sum / static_cast<double>(batch_len);
    }
    return std::sqrt(variance(batch_mean) / static_cast<double>(n_batches));
}

GaussLegendre::GaussLegendre(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("GaussLegendre: need at least one node");
    }
    nodes.resize(n);
    weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                                   (static_cast<double>(k) - 1.0) * p0) /
                                  static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            deriv = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / deriv;
            x -= step;
            if (std::abs(step) < 1e-15) {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        nodes[n / 2] = 0.0;
    }
}

double GaussLegendre::integrate(double a, double b,
                                const std::function<double(double)>& f) const {
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * f(mid + halfwidth * nodes[i]);
    }
    return halfwidth * sum;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line: need matching samples, at least two");
    }
    const double n = static_cast<double>(x.size());
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_line: degenerate abscissas");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

double kolmogorov_q(double t) {
    // Q(0.2) = 1 - 5e-13; below that the alternating series would need far
    // more terms than it is worth.
    if (t < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * static_cast<double>(j) * static_cast<double>(j) *
                                     t * t);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 2) {
        throw InsufficientDataError("ks_test: need at least two samples");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double u = cdf(samples[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - u);
        d = std::max(d, u - static_cast<double>(i) / n);
    }
    const double sqrt_n = std::sqrt(n);
    KsResult result;
    result.statistic = d;
    result.p_value = kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    result.n = samples.size();
    return result;
}

KsResult ks_test_unit_exponential(std::vector<double> samples) {
    return ks_test(std::move(samples),
                   [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); });
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw InsufficientDataError("ks_distance: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < a.size() && ib < b.size()) {
        // Advance past every sample tied at the current value before
        // comparing, or ties would register a spurious ECDF gap.
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] == x) ++ia;
        while (ib < b.size() && b[ib] == x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na -
                                 static_cast<double>(ib) / nb));
    }
    return d;
}

DensityEstimate kde(const std::vector<double>& samples, std::optional<double> bandwidth,
                    std::string component) {
    constexpr std::size_t kGridSize = 512;
    if (samples.size() < 100) {
        throw InsufficientDataError("kde: need at least 100 samples");
    }
    const double sd = std::sqrt(variance(samples));
    double h;
    if (bandwidth) {
        h = *bandwidth;
    } else {
        h = 1.06 * sd * std::pow(static_cast<double>(samples.size()), -0.2);
    }
    if (!(h > 0.0)) {
        throw NumericalError("kde: degenerate bandwidth (constant sample?)");
    }
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    DensityEstimate est;
    est.component = std::move(component);
    est.bandwidth = h;
    est.n = samples.size();
    est.sample_mean = mean(samples);
    const double lo = *mn - 3.0 * h;
    const double hi = *mx + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(kGridSize - 1);
    est.grid.resize(kGridSize);
    est.density.assign(kGridSize, 0.0);
    for (std::size_t g = 0; g < kGridSize; ++g) {
        est.grid[g] = lo + static_cast<double>(g) * step;
    }
    const double norm = 1.0 / (static_cast<double>(samples.size()) * h *
                               std::sqrt(2.0 * std::numbers::pi));
    // The kernel is numerically zero beyond 8 bandwidths, so each sample only
    // touches the grid points inside that window.
    const double reach = 8.0 * h;
    for (double x : samples) {
        const double lo_pos = (x - reach - lo) / step;
        const double hi_pos = (x + reach - lo) / step;
        const std::size_t g_lo =
            lo_pos <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(lo_pos));
        const std::size_t g_hi = hi_pos >= static_cast<double>(kGridSize - 1)
                                     ? kGridSize - 1
                                     : static_cast<std::size_t>(std::floor(hi_pos));
        for (std::size_t g = g_lo; g <= g_hi && g < kGridSize; ++g) {
            const double z = (est.grid[g] - x) / h;
            est.density[g] += norm * std::exp(-0.5 * z * z);
        }
    }
    return est;
}

int numerical_rank(const std::vector<double>& matrix, std::size_t dim, double tol) {
    if (matrix.size() != dim * dim) {
        throw std::invalid_argument("numerical_rank: matrix size mismatch");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                matrix[i * dim + j];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * sv(0)) {
            ++rank;
        }
    }
    return rank;
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) {
        throw std::invalid_argument("quantile: empty sample");
    }
    if (!(q >= 0.0) || !(q <= 1.0)) {
        throw std::invalid_argument("quantile: q must lie in [0, 1]");
    }
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) {
        return xs.back();
    }
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

}  // namespace hawkes
