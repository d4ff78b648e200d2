#ifndef HAWKES_EXPERIMENTS_HPP
#define HAWKES_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/integrators.hpp"
#include "hawkes/model.hpp"
#include "hawkes/pdmp.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

// Reproducible numerical studies: every harness takes a seed, addresses one
// RngStream per replicate by index, and reduces results in index order, so
// reports are identical however the replicates are scheduled.

struct RmseRow {
    double delta = 0.0;
    Scheme scheme = Scheme::EulerMaruyama;
    double rmse = 0.0;
};

struct SchemeFit {
    Scheme scheme = Scheme::EulerMaruyama;
    LineFit fit;  // log10(RMSE) against log10(delta)
};

struct RmseTable {
    std::vector<RmseRow> rows;  // grouped by scheme, deltas ascending
    std::vector<SchemeFit> fits;
    int replicates = 0;
    double t_star = 0.0;
    double ref_delta = 0.0;
};

// Strong-error study against a coupled Euler-Maruyama reference at step
// ref_delta. Each replicate drives the reference path and every coarse
// (delta, scheme) path with the same Brownian increments; the coarse noise
// over a step of length delta is the sum of the fine normals divided by
// sqrt(delta / ref_delta). RMSE(delta) is the root mean square over
// replicates of the state error at t_star. Requires ref_delta to divide
// every delta, t_star to be a multiple of every delta, and at least three
// deltas so the log-log slope is a genuine fit.
RmseTable rmse_convergence(const NetworkModel& model, const StateVec& x0,
                           const std::vector<Scheme>& schemes, std::vector<double> deltas,
                           int replicates, double t_star, double ref_delta,
                           std::uint64_t seed);

struct ComparisonVariable {
    int population = 0;  // the main variable x^{k,1}
    double mean_pdmp = 0.0;
    double mean_diffusion = 0.0;
    double ks_distance = 0.0;       // two-sample KS between the marginals
    double amplitude_pdmp = 0.0;    // 99.5% minus 0.5% quantile of the PDMP marginal
    DensityEstimate density_pdmp;
    DensityEstimate density_diffusion;
};

struct ComparisonReport {
    double t_long = 0.0;
    double delta = 0.0;
    std::size_t n_samples = 0;  // per marginal, after burn-in
    double burn_in_fraction = 0.0;
    std::array<ComparisonVariable, 2> variables;
    RejectionStats pdmp_stats;
};

// Long-run comparison of the exact network and its diffusion approximation:
// one thinning run (local bound) and one Strang run from the zero state,
// both sampled on the grid t = i * delta over [0, t_long]. The first 10%
// of each series is discarded as burn-in. Requires t_long >= 1e3.
ComparisonReport compare_pdmp_diffusion(const NetworkModel& model, double t_long,
                                        double delta, std::uint64_t seed);

struct TimingRow {
    std::string method;  // "pdmp" or "diffusion"
    int n_total = 0;
    BoundKind bound = BoundKind::Global;  // meaningful for pdmp rows only
    double mean_seconds = 0.0;
    double sd_seconds = 0.0;
    double mean_rejection_fraction = 0.0;  // pdmp rows only
    double mean_spikes = 0.0;              // pdmp rows only
};

struct TimingTable {
    std::vector<TimingRow> rows;
    double t_max = 0.0;
    int repeats = 0;
    double diffusion_delta = 0.0;
};

// Wall-clock comparison of the thinning simulator (per bound kind) and the
// Strang discretization (step 0.1) as the network grows. Each entry of
// n_list is a total neuron count; population sizes are rescaled as
// N_k = round(p_k * N) keeping the template's proportions. Requires
// repeats >= 3. Timings are comparative (same machine, same run), never
// absolute.
TimingTable timing_benchmark(const NetworkModel& model_template, const std::vector<int>& n_list,
                             const std::vector<BoundKind>& bound_kinds, double t_max,
                             int repeats, std::uint64_t seed);

// Goodness-of-fit of a simulated path via the time change property: the
// integrated population intensity N_k * f_k evaluated between consecutive
// population-k spikes is a unit-rate exponential sample if and only if the
// path has the network's law. Integrals use 32-point Gauss-Legendre on each
// inter-event segment of the deterministic flow. Returns one test per
// population; requires at least min_spikes spikes in each.
std::array<KsResult, 2> time_rescaling_ks(const PdmpPath& path, const NetworkModel& model,
                                          std::size_t min_spikes = 200);

}  // namespace hawkes

#endif
