#pragma once

// Adaptive Gauss–Kronrod quadrature on finite and semi-infinite intervals.
//
// Each panel is integrated with the 21-point Kronrod rule and its embedded
// 10-point Gauss rule; the panel error estimate is |K21 − G10|. The panel
// with the largest estimate is bisected until the summed estimate drops
// below max(rel_tol·|value|, abs_tol). Bisection order and the final
// summation order (by panel position) depend only on the integrand values,
// so results are bit-reproducible.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace dce {

/// Integrate only up to a fixed upper limit.
struct HardCutoff {
    double q_c = 0.0;

    bool operator==(const HardCutoff&) const = default;
};

/// Integrate over windows [a, w], [w, w·f], [w·f, w·f²], ... until two
/// consecutive windows each add less than rel_change of the running total.
/// initial_window ≤ a means "a + 1".
struct AdaptiveConverged {
    double window_factor = 2.0;
    double rel_change = 1e-3;
    double initial_window = 0.0;

    bool operator==(const AdaptiveConverged&) const = default;
};

using CutoffPolicy = std::variant<HardCutoff, AdaptiveConverged>;

struct QuadratureSpec {
    double rel_tol = 1e-4;
    double abs_tol = 0.0;
    /// Bisections per finite integral; also the window budget of
    /// AdaptiveConverged.
    int max_subdivisions = 2000;
    CutoffPolicy cutoff_policy = AdaptiveConverged{};

    void validate() const;

    bool operator==(const QuadratureSpec&) const = default;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    /// Set when AdaptiveConverged saw five consecutive non-decreasing windows.
    bool diverged = false;
    double effective_upper_limit = 0.0;
};

/// Thrown when an integrand returns NaN or ±inf.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluates f at every abscissa in x, writing into y (same size).
using BatchIntegrand = std::function<void(std::span<const double> x, std::span<double> y)>;

template <class F>
BatchIntegrand pointwise(F f) {
    return [f = std::move(f)](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
    };
}

/// Breakpoints strictly inside (a, b) seed the initial panel boundaries;
/// others are ignored.
IntegralResult integrate_finite(const BatchIntegrand& f, double a, double b,
                                const QuadratureSpec& spec,
                                std::span<const double> breakpoints = {});

/// ∫_a^∞ f under spec.cutoff_policy.
IntegralResult integrate_semi_infinite(const BatchIntegrand& f, double a,
                                       const QuadratureSpec& spec,
                                       std::span<const double> breakpoints = {});

struct ConvergencePoint {
    double cutoff = 0.0;
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

/// ∫_a^{c} f for every c in cutoffs (strictly increasing, all > a). The
/// segments between consecutive cutoffs are integrated once and accumulated.
std::vector<ConvergencePoint> convergence_scan(const BatchIntegrand& f,
                                               std::span<const double> cutoffs,
                                               const QuadratureSpec& spec, double a = 0.0,
                                               std::span<const double> breakpoints = {});

}  // namespace dce
