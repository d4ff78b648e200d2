#include "hawkes/rate_function.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

RateFunction RateFunction::exp_sigmoid(double scale, double threshold) {
    if (!(scale > 0.0)) {
        throw std::invalid_argument("exp_sigmoid: scale must be > 0");
    }
    if (!(threshold > 1.0)) {
        throw std::invalid_argument("exp_sigmoid: threshold must be > 1");
    }
    return RateFunction(Kind::ExpSigmoid, scale, threshold, 0.0, 2.0 * scale * threshold);
}

RateFunction RateFunction::clipped_linear(double base, double slope, double cap) {
    if (!(base > 0.0)) {
        throw std::invalid_argument("clipped_linear: base must be > 0");
    }
    if (!(slope >= 0.0)) {
        throw std::invalid_argument("clipped_linear: slope must be >= 0");
    }
    if (!(cap >= base)) {
        throw std::invalid_argument("clipped_linear: cap must be >= base");
    }
    return RateFunction(Kind::ClippedLinear, base, slope, cap, cap);
}

RateFunction RateFunction::constant(double value) {
    if (!(value > 0.0)) {
        throw std::invalid_argument("constant: value must be > 0");
    }
    return RateFunction(Kind::Constant, value, 0.0, 0.0, value);
}

double RateFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::ExpSigmoid: {
            // Both branches meet with matching value and slope at x = log(theta).
            const double s = a_;
            const double theta = b_;
            if (x < std::log(theta)) {
                return s * std::exp(x);
            }
            return 2.0 * s * theta / (1.0 + theta * theta * std::exp(-2.0 * x));
        }
        case Kind::ClippedLinear: {
            const double linear = x > 0.0 ? a_ + b_ * x : a_;
            return linear < c_ ? linear : c_;
        }
        case Kind::Constant:
            return a_;
    }
    throw std::logic_error("RateFunction: unknown kind");
}

std::string RateFunction::kind_name() const {
    switch (kind_) {
        case Kind::ExpSigmoid:
            return "exp_sigmoid";
        case Kind::ClippedLinear:
            return "clipped_linear";
        case Kind::Constant:
            return "constant";
    }
    return "unknown";
}

bool RateFunction::operator==(const RateFunction& other) const noexcept {
    return kind_ == other.kind_ && a_ == other.a_ && b_ == other.b_ && c_ == other.c_;
}

}  // namespace hawkes
