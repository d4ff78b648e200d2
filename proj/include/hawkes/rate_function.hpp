#ifndef HAWKES_RATE_FUNCTION_HPP
#define HAWKES_RATE_FUNCTION_HPP

#include <string>

namespace hawkes {

// Nondecreasing, bounded firing-rate nonlinearity mapping a membrane-like
// potential to a spike rate.
//
// Families:
//   exp_sigmoid(s, theta):    f(x) = s*exp(x) for x < log(theta),
//                             f(x) = 2*s*theta / (1 + theta^2 * exp(-2x)) otherwise.
//                             Supremum 2*s*theta.
//   clipped_linear(b, m, c):  f(x) = min(b + m*x*[x > 0], c). Supremum c.
//   constant(v):              f(x) = v. Supremum v.
class RateFunction {
public:
    enum class Kind { ExpSigmoid, ClippedLinear, Constant };

    static RateFunction exp_sigmoid(double scale, double threshold);
    static RateFunction clipped_linear(double base, double slope, double cap);
    static RateFunction constant(double value);

    double operator()(double x) const;

    // Supremum of f over the real line.
    double max() const noexcept { return max_; }

    Kind kind() const noexcept { return kind_; }

    // Family parameters, meaning depends on kind():
    //   ExpSigmoid:    a = scale, b = threshold, c unused
    //   ClippedLinear: a = base, b = slope, c = cap
    //   Constant:      a = value
    double param_a() const noexcept { return a_; }
    double param_b() const noexcept { return b_; }
    double param_c() const noexcept { return c_; }

    std::string kind_name() const;

    bool operator==(const RateFunction& other) const noexcept;

private:
    RateFunction(Kind kind, double a, double b, double c, double max)
        : kind_(kind), a_(a), b_(b), c_(c), max_(max) {}

    Kind kind_;
    double a_, b_, c_;
    double max_;
};

}  // namespace hawkes

#endif
