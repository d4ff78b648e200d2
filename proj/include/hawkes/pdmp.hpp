#ifndef HAWKES_PDMP_HPP
#define HAWKES_PDMP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

enum class BoundKind { Global, Local };

// Dominating intensity for population k valid for all window lengths:
// f_k applied to max_j { 0, x^{k,j} / nu_k^{j-1} }.
double global_bound(const NetworkModel& model, int k, const StateVec& x);

// Times in the open window (0, window) where d/dt (exp(A t) x)^{k,1}
// vanishes, i.e. the interior extrema of population k's potential along
// the deterministic flow. Sorted ascending.
std::vector<double> critical_points(const NetworkModel& model, int k, const StateVec& x,
                                    double window);

// Dominating intensity for population k valid on [0, window]: f_k of the
// exact maximum of the potential along the flow, taking the endpoints and
// all interior critical points as candidates.
double local_bound(const NetworkModel& model, int k, const StateVec& x, double window);

// Thinning window 1 / (N_1 lambda_1 + N_2 lambda_2), clamped to
// [window_min, window_max].
double adaptive_window(const NetworkModel& model, double lambda1, double lambda2,
                       double window_min = 1e-6, double window_max = 10.0);

struct Spike {
    double t;
    int population;  // 1 or 2
    int neuron;      // 1 .. N_population
};

struct SpikeTrain {
    std::vector<Spike> spikes;  // ordered by time

    std::size_t count(int population) const;
};

struct PdmpEvent {
    double t;
    int population;  // spiking population
    int neuron;      // 1 .. N_population
    StateVec state;  // post-jump state
    double lambda1;  // f_1(x^{1,1}) at the post-jump state
    double lambda2;  // f_2(x^{2,1}) at the post-jump state
};

// Piecewise-deterministic path: between consecutive events the state follows
// exp(A (t - t_event)) applied to the stored post-jump state.
struct PdmpPath {
    double t0 = 0.0;
    StateVec x0;
    std::vector<PdmpEvent> events;
};

struct RejectionStats {
    std::uint64_t window_advances = 0;  // windows that elapsed with no candidate
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;

    double rejection_fraction() const {
        const std::uint64_t total = accepted + rejected;
        return total == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(total);
    }
};

struct ThinningOptions {
    BoundKind bound = BoundKind::Local;
    double window_min = 1e-6;
    double window_max = 10.0;
    // Multiplies every acceptance probability. Values below 1 deliberately
    // corrupt the simulator; used as a negative control in goodness-of-fit
    // checks. Must lie in (0, 1].
    double acceptance_scale = 1.0;
    bool record_path = true;
    bool record_spikes = true;
    // When set, the state is also sampled on the uniform grid
    // t = 0, d, 2d, ... up to t_max via the exact flow.
    std::optional<double> sample_delta;
};

struct ThinningResult {
    PdmpPath path;
    SpikeTrain spikes;
    RejectionStats stats;
    std::vector<double> sample_times;
    std::vector<StateVec> samples;
    StateVec final_state;
};

// Exact simulation of the spiking network by thinning. Candidate spikes for
// population k arrive at rate N_k times a dominating intensity recomputed at
// every transition; candidates are accepted with probability
// f_k(potential) / bound. The exponential race, the acceptance draw and the
// uniform neuron label consume random draws in a fixed order, so identical
// (model, x0, t_max, options, seed) reproduce the run exactly.
ThinningResult thinning_simulate(const NetworkModel& model, const StateVec& x0, double t_max,
                                 const ThinningOptions& options, RngStream& rng);

}  // namespace hawkes

#endif
