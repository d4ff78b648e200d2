#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes/poly_roots.hpp"
#include "hawkes/rng.hpp"

using hawkes::poly_real_roots;
using hawkes::poly_real_roots_small;
using hawkes::RngStream;

namespace {

double eval(const std::vector<double>& a, double t) {
    double v = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) {
        v = v * t + a[i];
    }
    return v;
}

// Expands prod (t - r_i) into ascending coefficients.
std::vector<double> from_roots(const std::vector<double>& roots) {
    std::vector<double> a = {1.0};
    for (double r : roots) {
        a.push_back(0.0);
        for (std::size_t i = a.size(); i-- > 1;) {
            a[i] = a[i - 1] - r * a[i];
        }
        a[0] *= -r;
    }
    return a;
}

}  // namespace

TEST_CASE("linear and constant polynomials") {
    CHECK(poly_real_roots({1.0, -1.0}, 0.0, 2.0) == std::vector<double>{1.0});
    CHECK(poly_real_roots({1.0, -1.0}, 0.0, 1.0).empty());  // endpoint excluded
    CHECK(poly_real_roots({5.0}, -10.0, 10.0).empty());
    CHECK(poly_real_roots({0.0, 0.0, 3.0}, -1.0, 1.0) == std::vector<double>{0.0});
}

TEST_CASE("quadratics, including the cancellation-prone case") {
    const auto roots = poly_real_roots({2.0, -3.0, 1.0}, 0.0, 10.0);  // (t-1)(t-2)
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));

    // Double root collapses to one entry.
    const auto dbl = poly_real_roots({1.0, -2.0, 1.0}, 0.0, 10.0);
    REQUIRE(dbl.size() == 1);
    CHECK(dbl[0] == doctest::Approx(1.0).epsilon(1e-7));

    // No real roots.
    CHECK(poly_real_roots({1.0, 0.0, 1.0}, -10.0, 10.0).empty());

    // Wildly separated roots: t^2 - 1e8 t + 1, roots near 1e8 and 1e-8.
    const auto sep = poly_real_roots({1.0, -1e8, 1.0}, 0.0, 1e9);
    REQUIRE(sep.size() == 2);
    CHECK(sep[0] == doctest::Approx(1e-8).epsilon(1e-10));
    CHECK(sep[1] == doctest::Approx(1e8).epsilon(1e-12));
}

TEST_CASE("cubic with known integer roots") {
    // (t-1)(t-2)(t-3) = -6 + 11 t - 6 t^2 + t^3
    const std::vector<double> a = {-6.0, 11.0, -6.0, 1.0};
    const auto inside = poly_real_roots(a, 0.0, 2.5);
    REQUIRE(inside.size() == 2);
    CHECK(inside[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inside[1] == doctest::Approx(2.0).epsilon(1e-12));

    const auto all = poly_real_roots(a, 0.0, 100.0);
    REQUIRE(all.size() == 3);
    CHECK(all[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cubic one-real-root branch") {
    // (t - 2)(t^2 + 1) = -2 + t - 2 t^2 + t^3
    const auto roots = poly_real_roots({-2.0, 1.0, -2.0, 1.0}, -10.0, 10.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("triple root cubic") {
    // (t - 1)^3 = -1 + 3t - 3t^2 + t^3
    const auto roots = poly_real_roots({-1.0, 3.0, -3.0, 1.0}, 0.0, 10.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("quartic via the companion matrix") {
    // (t^2 - 1)(t^2 - 4) = 4 - 5 t^2 + t^4
    const auto roots = poly_real_roots({4.0, 0.0, -5.0, 0.0, 1.0}, 0.0, 3.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("near-zero leading coefficients are trimmed") {
    const auto roots = poly_real_roots({-1.0, 1.0, 1e-20}, 0.0, 2.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs throw") {
    CHECK_THROWS_AS(poly_real_roots({}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(poly_real_roots({0.0, 0.0, 0.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("no sign change between grid neighbours is ever missed") {
    RngStream rng(17);
    for (int degree : {3, 5}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> a(static_cast<std::size_t>(degree) + 1);
            for (double& c : a) {
                c = 6.0 * rng.uniform01() - 3.0;
            }
            if (std::abs(a.back()) < 1e-3) {
                a.back() = 1.0;
            }
            const double lo = 0.0;
            const double hi = 4.0;
            const auto roots = poly_real_roots(a, lo, hi);
            const int n_grid = 2000;
            const double h = (hi - lo) / n_grid;
            for (int i = 0; i < n_grid; ++i) {
                const double t0 = lo + i * h;
                const double t1 = t0 + h;
                if (eval(a, t0) * eval(a, t1) < 0.0) {
                    const bool covered =
                        std::any_of(roots.begin(), roots.end(), [&](double r) {
                            return r >= t0 - h && r <= t1 + h;
                        });
                    CHECK_MESSAGE(covered, "missed sign change near t=", t0,
                                  " degree=", degree);
                }
            }
        }
    }
}

TEST_CASE("random factored cubics are recovered to high accuracy") {
    RngStream rng(18);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> roots(3);
        for (double& r : roots) {
            r = 10.0 * rng.uniform01() - 5.0;
        }
        std::sort(roots.begin(), roots.end());
        // Skip clusters; de-duplication makes counting ambiguous there.
        if (roots[1] - roots[0] < 1e-3 || roots[2] - roots[1] < 1e-3) {
            continue;
        }
        const auto a = from_roots(roots);
        const auto found = poly_real_roots(a, -6.0, 6.0);
        REQUIRE(found.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(found[i] == doctest::Approx(roots[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("small-degree variant agrees with the general one") {
    RngStream rng(19);
    for (int degree = 0; degree <= 3; ++degree) {
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<double> a(static_cast<std::size_t>(degree) + 1);
            for (double& c : a) {
                c = 4.0 * rng.uniform01() - 2.0;
            }
            double out[3];
            bool all_zero = std::all_of(a.begin(), a.end(), [](double c) { return c == 0.0; });
            if (all_zero) {
                continue;
            }
            const int n = poly_real_roots_small(a.data(), degree, 0.0, 3.0, out);
            const auto expect = poly_real_roots(a, 0.0, 3.0);
            REQUIRE(static_cast<std::size_t>(n) == expect.size());
            for (int i = 0; i < n; ++i) {
                CHECK(out[i] == expect[static_cast<std::size_t>(i)]);
            }
        }
    }
}

TEST_CASE("small-degree variant handles degenerate cases directly") {
    double out[3];
    const double zero[4] = {0.0, 0.0, 0.0, 0.0};
    CHECK(poly_real_roots_small(zero, 3, 0.0, 1.0, out) == 0);
    const double lin[2] = {1.0, -1.0};
    CHECK(poly_real_roots_small(lin, 1, 0.0, 2.0, out) == 1);
    CHECK(out[0] == 1.0);
    CHECK_THROWS_AS(poly_real_roots_small(lin, 4, 0.0, 1.0, out), std::invalid_argument);
    CHECK_THROWS_AS(poly_real_roots_small(lin, -1, 0.0, 1.0, out), std::invalid_argument);
}
