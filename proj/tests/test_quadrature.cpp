#include <cmath>
#include <vector>

#include <doctest.h>

#include "dce/quadrature.hpp"

using namespace dce;

namespace {

QuadratureSpec tight(double rel = 1e-10) {
    QuadratureSpec s;
    s.rel_tol = rel;
    return s;
}

}  // namespace

TEST_CASE("finite integrals with closed forms") {
    const auto spec = tight();
    auto r = integrate_finite(pointwise([](double) { return 3.0; }), 1.0, 4.0, spec);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(9.0).epsilon(1e-14));

    r = integrate_finite(pointwise([](double x) { return std::sin(x); }), 0.0, M_PI, spec);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    // narrow Lorentzian, helped by a breakpoint at the centre
    const double g = 1e-4;
    const std::vector<double> bp = {0.3};
    r = integrate_finite(pointwise([g](double x) { return g / ((x - 0.3) * (x - 0.3) + g * g); }),
                         0.0, 1.0, spec, bp);
    const double exact = std::atan(0.7 / g) + std::atan(0.3 / g);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
    CHECK(r.error_estimate <= 1e-10 * std::abs(r.value) * 1.0000001);
}

TEST_CASE("semi-infinite integrals") {
    QuadratureSpec spec = tight(1e-10);
    spec.cutoff_policy = AdaptiveConverged{2.0, 1e-12, 0.0};
    auto r = integrate_semi_infinite(pointwise([](double x) { return std::exp(-x); }), 0.0, spec);
    CHECK(r.converged);
    CHECK_FALSE(r.diverged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

    r = integrate_semi_infinite(pointwise([](double x) { return x * std::exp(-2.0 * x); }), 0.0, spec);
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-9));

    spec.cutoff_policy = HardCutoff{3.0};
    r = integrate_semi_infinite(pointwise([](double x) { return std::exp(-x); }), 0.0, spec);
    CHECK(r.value == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
    CHECK(r.effective_upper_limit == 3.0);
}

TEST_CASE("growing integrand is flagged as divergent") {
    QuadratureSpec spec;
    spec.cutoff_policy = AdaptiveConverged{};
    const auto r = integrate_semi_infinite(pointwise([](double x) { return x; }), 0.0, spec);
    CHECK(r.diverged);
    CHECK_FALSE(r.converged);

    spec.cutoff_policy = AdaptiveConverged{2.0, 1e-3, 0.0};
    const auto c = integrate_semi_infinite(pointwise([](double x) { return 1.0 / (1.0 + x * x); }), 0.0, spec);
    CHECK_FALSE(c.diverged);
}

TEST_CASE("no false divergence across tolerances") {
    for (double tol : {1e-9, 1e-7, 1e-5, 1e-3}) {
        QuadratureSpec spec = tight(tol);
        spec.cutoff_policy = AdaptiveConverged{};
        const auto r = integrate_semi_infinite(
            pointwise([](double x) { return x * x * std::exp(-x); }), 0.0, spec);
        CHECK_FALSE(r.diverged);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(2.0).epsilon(std::max(1e-3, 10 * tol)));
    }
}

TEST_CASE("linearity") {
    const auto spec = tight(1e-12);
    auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
    auto g = [](double x) { return 1.0 / (1.0 + x); };
    const double a = integrate_finite(pointwise(f), 0.0, 2.0, spec).value;
    const double b = integrate_finite(pointwise(g), 0.0, 2.0, spec).value;
    const double ab = integrate_finite(pointwise([&](double x) { return 2 * f(x) - 5 * g(x); }),
                                       0.0, 2.0, spec).value;
    CHECK(ab == doctest::Approx(2 * a - 5 * b).epsilon(1e-11));
}

TEST_CASE("tighter tolerance does not increase the error") {
    auto f = [](double x) { return std::sqrt(x) * std::exp(-x); };
    const double exact = 0.5 * std::sqrt(M_PI) * std::erf(std::sqrt(4.0)) - 2.0 * std::exp(-4.0);
    double prev_err = INFINITY;
    std::size_t prev_evals = 0;
    for (double tol : {1e-3, 1e-5, 1e-7, 1e-9}) {
        const auto r = integrate_finite(pointwise(f), 0.0, 4.0, tight(tol));
        const double err = std::abs(r.value - exact);
        CHECK(err <= prev_err * 1.0000001 + 1e-15);
        CHECK(r.evaluations >= prev_evals);
        prev_err = err;
        prev_evals = r.evaluations;
    }
}

TEST_CASE("deterministic results") {
    auto f = pointwise([](double x) { return std::sin(50 * x) * std::exp(-x); });
    const auto a = integrate_finite(f, 0.0, 10.0, tight(1e-11));
    const auto b = integrate_finite(f, 0.0, 10.0, tight(1e-11));
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
}

TEST_CASE("non-finite integrand is a numeric error") {
    CHECK_THROWS_AS(integrate_finite(pointwise([](double x) { return 1.0 / (x - 0.5) / 0.0; }),
                                     0.0, 1.0, tight()),
                    NumericError);
}

TEST_CASE("convergence scan accumulates segments") {
    const std::vector<double> cuts = {1.0, 2.0, 4.0, 8.0};
    const auto pts = convergence_scan(pointwise([](double x) { return x; }), cuts, tight());
    REQUIRE(pts.size() == cuts.size());
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        CHECK(pts[i].cutoff == cuts[i]);
        CHECK(pts[i].value == doctest::Approx(0.5 * cuts[i] * cuts[i]).epsilon(1e-13));
    }
    for (std::size_t i = 1; i < cuts.size(); ++i) CHECK(pts[i].value / pts[i - 1].value == doctest::Approx(4.0));
}

TEST_CASE("spec validation") {
    QuadratureSpec s;
    CHECK_NOTHROW(s.validate());
    s.rel_tol = 0.0;
    CHECK_THROWS(s.validate());
    s = QuadratureSpec{};
    s.max_subdivisions = 0;
    CHECK_THROWS(s.validate());
    s = QuadratureSpec{};
    s.cutoff_policy = HardCutoff{-1.0};
    CHECK_THROWS(s.validate());
}
