#ifndef HAWKES_MODEL_HPP
#define HAWKES_MODEL_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "hawkes/rate_function.hpp"

namespace hawkes {

// Flat state of the Markovian cascade, laid out block by block:
// population 1 components (j = 1..eta_1+1) followed by population 2
// components (j = 1..eta_2+1). Component (k, 1) is the potential seen
// by population k's rate function; component (k, eta_k+1) is the one
// receiving input from the other population.
using StateVec = std::vector<double>;

struct PopulationParams {
    int eta = 1;              // memory order of the Erlang kernel, >= 0
    double nu = 1.0;          // exponential decay rate, > 0
    int sign = 1;             // synaptic sign c_k, -1 (inhibitory) or +1 (excitatory)
    int n_neurons = 50;       // population size N_k, >= 1
    double proportion = 0.5;  // population fraction p_k in (0, 1)
    RateFunction rate = RateFunction::constant(1.0);  // firing rate f_k
};

// Two-population network with cyclic coupling: population 1 listens to
// population 2 and vice versa.
class NetworkModel {
public:
    // Validates all parameters; proportions must sum to 1 within 1e-12 and
    // memory orders are capped so factorial-weighted terms stay in range.
    NetworkModel(PopulationParams pop1, PopulationParams pop2);

    // k is 1 or 2 throughout the public interface.
    const PopulationParams& pop(int k) const;

    // The population whose spikes drive population k (the "other" one).
    static int driver(int k) noexcept { return k == 1 ? 2 : 1; }

    // State dimension eta_1 + eta_2 + 2.
    int kappa() const noexcept { return kappa_; }

    int total_neurons() const noexcept { return total_neurons_; }

    // 0-based position of component (k, j) in a StateVec, j in 1..eta_k+1.
    // Population 1's block comes first, components in increasing j.
    std::size_t flat_index(int k, int j) const;

    // Component (k, 1), the argument of f_k.
    double potential(const StateVec& x, int k) const { return x[flat_index(k, 1)]; }

    StateVec zero_state() const { return StateVec(static_cast<std::size_t>(kappa_), 0.0); }

    bool operator==(const NetworkModel& other) const noexcept;

    // Largest supported memory order. Keeps t^m / m! and (2m)! finite in
    // double precision across the analytic bound formulas.
    static constexpr int kMaxEta = 60;

private:
    std::array<PopulationParams, 2> pops_;
    int kappa_;
    int total_neurons_;
    std::array<std::size_t, 2> block_offset_;
};

// Action of the deterministic flow: y = exp(A t) x, where A is block
// diagonal with one bidiagonal block per population (diagonal -nu_k,
// superdiagonal 1). Component j of block k maps to
//   exp(-nu_k t) * sum_{m=j}^{eta_k+1} t^{m-j}/(m-j)! * x^{k,m},
// evaluated with running products, no matrix is formed.
void expm_action(const NetworkModel& model, double t, const StateVec& x, StateVec& out);
StateVec expm_action(const NetworkModel& model, double t, const StateVec& x);

// Single component (k, j) of exp(A t) x, without touching the rest.
double expm_action_component(const NetworkModel& model, int k, int j, double t,
                             const StateVec& x);

// Precomputed coefficients of exp(A t) for a fixed t, for hot loops that
// apply the same flow repeatedly.
class ExpmCoeffs {
public:
    ExpmCoeffs(const NetworkModel& model, double t);

    void apply(const StateVec& x, StateVec& out) const;
    void apply_in_place(StateVec& x) const;

    double t() const noexcept { return t_; }

private:
    double t_;
    std::array<double, 2> decay_;               // exp(-nu_k t)
    std::array<std::vector<double>, 2> taylor_; // t^d / d!, d = 0..eta_k
    std::array<std::size_t, 2> offset_;
    std::array<int, 2> block_len_;
};

// Spike-driven drift B(x): zero except component (k, eta_k+1) which carries
// c_k * f_{k'}(x^{k',1}) with k' the driving population.
void drift_B(const NetworkModel& model, const StateVec& x, StateVec& out);
StateVec drift_B(const NetworkModel& model, const StateVec& x);

// Noise map applied to a 2-vector xi of standard normals: sigma(x) xi.
// Column 1 of sigma drives population 2's input component, column 2 drives
// population 1's, mirroring which population's spikes feed which block:
//   (sigma(x) xi)^{1,eta_1+1} = c_1 / sqrt(p_2) * sqrt(f_2(x^{2,1})) * xi[1]
//   (sigma(x) xi)^{2,eta_2+1} = c_2 / sqrt(p_1) * sqrt(f_1(x^{1,1})) * xi[0]
void diffusion_sigma_action(const NetworkModel& model, const StateVec& x,
                            const std::array<double, 2>& xi, StateVec& out);
StateVec diffusion_sigma_action(const NetworkModel& model, const StateVec& x,
                                const std::array<double, 2>& xi);

// Full deterministic drift A x + B(x).
void full_drift(const NetworkModel& model, const StateVec& x, StateVec& out);
StateVec full_drift(const NetworkModel& model, const StateVec& x);

}  // namespace hawkes

#endif
