#include "hawkes/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hawkes {

namespace {

void validate_population(const PopulationParams& p, int k) {
    const std::string tag = "population " + std::to_string(k) + ": ";
    if (p.eta < 0 || p.eta > NetworkModel::kMaxEta) {
        throw std::invalid_argument(tag + "eta must be in [0, " +
                                    std::to_string(NetworkModel::kMaxEta) + "]");
    }
    if (!(p.nu > 0.0) || !std::isfinite(p.nu)) {
        throw std::invalid_argument(tag + "nu must be positive and finite");
    }
    if (p.sign != 1 && p.sign != -1) {
        throw std::invalid_argument(tag + "sign must be -1 or +1");
    }
    if (p.n_neurons < 1) {
        throw std::invalid_argument(tag + "n_neurons must be >= 1");
    }
    if (!(p.proportion > 0.0) || !(p.proportion < 1.0)) {
        throw std::invalid_argument(tag + "proportion must lie in (0, 1)");
    }
}

}  // namespace

NetworkModel::NetworkModel(PopulationParams pop1, PopulationParams pop2)
    : pops_{std::move(pop1), std::move(pop2)} {
    validate_population(pops_[0], 1);
    validate_population(pops_[1], 2);
    if (std::abs(pops_[0].proportion + pops_[1].proportion - 1.0) > 1e-12) {
        throw std::invalid_argument("population proportions must sum to 1");
    }
    kappa_ = pops_[0].eta + pops_[1].eta + 2;
    total_neurons_ = pops_[0].n_neurons + pops_[1].n_neurons;
    block_offset_ = {0, static_cast<std::size_t>(pops_[0].eta) + 1};
}

const PopulationParams& NetworkModel::pop(int k) const {
    if (k != 1 && k != 2) {
        throw std::out_of_range("population index must be 1 or 2");
    }
    return pops_[static_cast<std::size_t>(k - 1)];
}

std::size_t NetworkModel::flat_index(int k, int j) const {
    const PopulationParams& p = pop(k);
    if (j < 1 || j > p.eta + 1) {
        throw std::out_of_range("component index j out of range for population " +
                                std::to_string(k));
    }
    return block_offset_[static_cast<std::size_t>(k - 1)] + static_cast<std::size_t>(j - 1);
}

bool NetworkModel::operator==(const NetworkModel& other) const noexcept {
    for (std::size_t i = 0; i < 2; ++i) {
        const PopulationParams& a = pops_[i];
        const PopulationParams& b = other.pops_[i];
        if (a.eta != b.eta || a.nu != b.nu || a.sign != b.sign ||
            a.n_neurons != b.n_neurons || a.proportion != b.proportion ||
            !(a.rate == b.rate)) {
            return false;
        }
    }
    return true;
}

namespace {

void check_dimension(const NetworkModel& model, const StateVec& x) {
    if (x.size() != static_cast<std::size_t>(model.kappa())) {
        throw std::invalid_argument("state vector has wrong dimension");
    }
}

// One bidiagonal block of exp(A t) applied to x[off .. off+len), writing to
// out. The upper triangular Toeplitz coefficients t^d / d! are built by a
// running product.
void expm_block(double nu, double t, const double* x, double* out, int len) {
    const double decay = std::exp(-nu * t);
    for (int j = 0; j < len; ++j) {
        double term = 1.0;
        double acc = x[j];
        for (int m = j + 1; m < len; ++m) {
            term *= t / static_cast<double>(m - j);
            acc += term * x[m];
        }
        out[j] = decay * acc;
    }
}

}  // namespace

void expm_action(const NetworkModel& model, double t, const StateVec& x, StateVec& out) {
    check_dimension(model, x);
    out.resize(x.size());
    std::size_t off = 0;
    for (int k = 1; k <= 2; ++k) {
        const int len = model.pop(k).eta + 1;
        expm_block(model.pop(k).nu, t, x.data() + off, out.data() + off, len);
        off += static_cast<std::size_t>(len);
    }
}

StateVec expm_action(const NetworkModel& model, double t, const StateVec& x) {
    StateVec out;
    expm_action(model, t, x, out);
    return out;
}

double expm_action_component(const NetworkModel& model, int k, int j, double t,
                             const StateVec& x) {
    check_dimension(model, x);
    const PopulationParams& p = model.pop(k);
    const std::size_t base = model.flat_index(k, j);
    const int tail = p.eta + 1 - j;  // components above j in the same block
    double term = 1.0;
    double acc = x[base];
    for (int d = 1; d <= tail; ++d) {
        term *= t / static_cast<double>(d);
        acc += term * x[base + static_cast<std::size_t>(d)];
    }
    return std::exp(-p.nu * t) * acc;
}

ExpmCoeffs::ExpmCoeffs(const NetworkModel& model, double t) : t_(t) {
    for (int k = 1; k <= 2; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const PopulationParams& p = model.pop(k);
        decay_[i] = std::exp(-p.nu * t);
        block_len_[i] = p.eta + 1;
        offset_[i] = model.flat_index(k, 1);
        taylor_[i].resize(static_cast<std::size_t>(p.eta) + 1);
        double term = 1.0;
        taylor_[i][0] = 1.0;
        for (int d = 1; d <= p.eta; ++d) {
            term *= t / static_cast<double>(d);
            taylor_[i][static_cast<std::size_t>(d)] = term;
        }
    }
}

void ExpmCoeffs::apply(const StateVec& x, StateVec& out) const {
    out.resize(x.size());
    for (std::size_t i = 0; i < 2; ++i) {
        const double* xin = x.data() + offset_[i];
        double* xout = out.data() + offset_[i];
        const int len = block_len_[i];
        for (int j = 0; j < len; ++j) {
            double acc = xin[j];
            for (int m = j + 1; m < len; ++m) {
                acc += taylor_[i][static_cast<std::size_t>(m - j)] * xin[m];
            }
            xout[j] = decay_[i] * acc;
        }
    }
}

void ExpmCoeffs::apply_in_place(StateVec& x) const {
    // Each output component only reads components with larger j, so a
    // forward sweep updates in place safely.
    for (std::size_t i = 0; i < 2; ++i) {
        double* blk = x.data() + offset_[i];
        const int len = block_len_[i];
        for (int j = 0; j < len; ++j) {
            double acc = blk[j];
            for (int m = j + 1; m < len; ++m) {
                acc += taylor_[i][static_cast<std::size_t>(m - j)] * blk[m];
            }
            blk[j] = decay_[i] * acc;
        }
    }
}

void drift_B(const NetworkModel& model, const StateVec& x, StateVec& out) {
    check_dimension(model, x);
    out.assign(x.size(), 0.0);
    for (int k = 1; k <= 2; ++k) {
        const int kd = NetworkModel::driver(k);
        const PopulationParams& p = model.pop(k);
        const double input = model.pop(kd).rate(model.potential(x, kd));
        out[model.flat_index(k, p.eta + 1)] = static_cast<double>(p.sign) * input;
    }
}

StateVec drift_B(const NetworkModel& model, const StateVec& x) {
    StateVec out;
    drift_B(model, x, out);
    return out;
}

void diffusion_sigma_action(const NetworkModel& model, const StateVec& x,
                            const std::array<double, 2>& xi, StateVec& out) {
    check_dimension(model, x);
    out.assign(x.size(), 0.0);
    for (int k = 1; k <= 2; ++k) {
        const int kd = NetworkModel::driver(k);
        const PopulationParams& p = model.pop(k);
        const PopulationParams& pd = model.pop(kd);
        const double amp = static_cast<double>(p.sign) / std::sqrt(pd.proportion) *
                           std::sqrt(pd.rate(model.potential(x, kd)));
        // Noise column kd carries the spike fluctuations of population kd.
        out[model.flat_index(k, p.eta + 1)] = amp * xi[static_cast<std::size_t>(kd - 1)];
    }
}

StateVec diffusion_sigma_action(const NetworkModel& model, const StateVec& x,
                                const std::array<double, 2>& xi) {
    StateVec out;
    diffusion_sigma_action(model, x, xi, out);
    return out;
}

void full_drift(const NetworkModel& model, const StateVec& x, StateVec& out) {
    check_dimension(model, x);
    out.resize(x.size());
    std::size_t off = 0;
    for (int k = 1; k <= 2; ++k) {
        const PopulationParams& p = model.pop(k);
        const int len = p.eta + 1;
        for (int j = 0; j < len; ++j) {
            const std::size_t idx = off + static_cast<std::size_t>(j);
            out[idx] = -p.nu * x[idx];
            if (j + 1 < len) {
                out[idx] += x[idx + 1];
            }
        }
        const int kd = NetworkModel::driver(k);
        out[off + static_cast<std::size_t>(p.eta)] +=
            static_cast<double>(p.sign) * model.pop(kd).rate(model.potential(x, kd));
        off += static_cast<std::size_t>(len);
    }
}

StateVec full_drift(const NetworkModel& model, const StateVec& x) {
    StateVec out;
    full_drift(model, x, out);
    return out;
}

}  // namespace hawkes
