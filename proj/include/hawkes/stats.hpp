#ifndef HAWKES_STATS_HPP
#define HAWKES_STATS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hawkes {

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // unbiased, needs n >= 2

// Standard error of the mean of a correlated series via non-overlapping
// batch means. n_batches must be >= 2 and the series at least twice as long.
double batch_means_se(const std::vector<double>& xs, std::size_t n_batches = 100);

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
// computed by Newton iteration on the Legendre recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(std::size_t n);

    // Integrates f over [a, b].
    double integrate(double a, double b, const std::function<double(double)>& f) const;
};

// Least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
};

// Survival function of the Kolmogorov distribution,
// Q(t) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 t^2).
double kolmogorov_q(double t);

// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
// uses the asymptotic Kolmogorov law with the Stephens small-sample
// correction (sqrt(n) + 0.12 + 0.11/sqrt(n)).
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Convenience: test against the unit-rate exponential law.
KsResult ks_test_unit_exponential(std::vector<double> samples);

// Two-sample Kolmogorov-Smirnov distance (statistic only).
double ks_distance(std::vector<double> a, std::vector<double> b);

// Gaussian kernel density estimate.
struct DensityEstimate {
    std::string component;       // label of the summarized coordinate
    std::vector<double> grid;    // 512 equispaced abscissas
    std::vector<double> density;
    double bandwidth = 0.0;
    std::size_t n = 0;
    double sample_mean = 0.0;
};

// Bandwidth defaults to Silverman's rule 1.06 * sd * n^(-1/5); the grid has
// 512 points spanning [min - 3h, max + 3h]. Requires n >= 100 and a
// nondegenerate sample (sd > 0).
DensityEstimate kde(const std::vector<double>& samples,
                    std::optional<double> bandwidth = std::nullopt,
                    std::string component = "");

// Number of singular values above tol * largest for a dense row-major
// square matrix.
int numerical_rank(const std::vector<double>& matrix, std::size_t dim, double tol = 1e-10);

// Quantile by linear interpolation of the sorted sample, q in [0, 1].
double quantile(std::vector<double> xs, double q);

}  // namespace hawkes

#endif
