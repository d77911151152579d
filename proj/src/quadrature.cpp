#include "dce/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

namespace dce {
namespace {

// 21-point Kronrod abscissae/weights and the embedded 10-point Gauss
// weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208034521596, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr std::size_t kNodes = 21;

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

class PanelRule {
public:
    explicit PanelRule(const BatchIntegrand& f) : f_(f) {}

    Panel evaluate(double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        for (std::size_t j = 0; j < 10; ++j) {
            x_[2 * j] = c - h * kXgk[j];
            x_[2 * j + 1] = c + h * kXgk[j];
        }
        x_[20] = c;
        f_(x_, y_);
        evaluations += kNodes;

        double kronrod = kWgk[10] * y_[20];
        double gauss = 0.0;
        for (std::size_t j = 0; j < 10; ++j) {
            const double lo = y_[2 * j];
            const double hi = y_[2 * j + 1];
            if (!std::isfinite(lo) || !std::isfinite(hi)) non_finite(j);
            kronrod += kWgk[j] * (lo + hi);
            if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
        }
        if (!std::isfinite(y_[20])) non_finite(10);
        return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
    }

    std::size_t evaluations = 0;

private:
    [[noreturn]] void non_finite(std::size_t j) const {
        const double x = j == 10 ? x_[20] : x_[2 * j];
        throw NumericError("integrand is not finite near x = " + std::to_string(x));
    }

    const BatchIntegrand& f_;
    std::array<double, kNodes> x_{};
    std::array<double, kNodes> y_{};
};

bool within_tolerance(double error, double value, const QuadratureSpec& spec) {
    return error <= std::max(spec.rel_tol * std::abs(value), spec.abs_tol);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw std::invalid_argument("abs_tol must be >= 0");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
    if (const auto* hard = std::get_if<HardCutoff>(&cutoff_policy)) {
        if (!(hard->q_c > 0.0)) throw std::invalid_argument("q_c must be > 0");
    } else {
        const auto& adaptive = std::get<AdaptiveConverged>(cutoff_policy);
        if (!(adaptive.window_factor > 1.0)) {
            throw std::invalid_argument("window_factor must be > 1");
        }
        if (!(adaptive.rel_change > 0.0)) throw std::invalid_argument("rel_change must be > 0");
    }
}

IntegralResult integrate_finite(const BatchIntegrand& f, double a, double b,
                                const QuadratureSpec& spec,
                                std::span<const double> breakpoints) {
    if (!(a < b)) throw std::invalid_argument("integrate_finite: requires a < b");
    if (!(spec.rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");

    std::vector<double> edges{a};
    for (double p : breakpoints) {
        if (p > a && p < b) edges.push_back(p);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    PanelRule rule(f);
    std::vector<Panel> panels;
    panels.reserve(edges.size() + 2 * static_cast<std::size_t>(spec.max_subdivisions));

    // Max-heap on error; ties go to the lower index so the order is fixed.
    using Entry = std::pair<double, std::size_t>;
    auto cmp = [](const Entry& l, const Entry& r) {
        return l.first < r.first || (l.first == r.first && l.second > r.second);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        panels.push_back(rule.evaluate(edges[i], edges[i + 1]));
        value += panels.back().value;
        error += panels.back().error;
        heap.emplace(panels.back().error, panels.size() - 1);
    }

    // Running totals decide when to re-sum; the re-summed totals (in panel
    // order, independent of refinement history) decide termination.
    auto exact_totals = [&] {
        std::vector<const Panel*> order;
        order.reserve(panels.size());
        for (const auto& p : panels) {
            if (p.a < p.b) order.push_back(&p);
        }
        std::sort(order.begin(), order.end(), [](const Panel* l, const Panel* r) { return l->a < r->a; });
        double v = 0.0, e = 0.0;
        for (const auto* p : order) {
            v += p->value;
            e += p->error;
        }
        return std::pair{v, e};
    };

    int subdivisions = 0;
    bool converged = false;
    while (true) {
        if (within_tolerance(error, value, spec)) {
            std::tie(value, error) = exact_totals();
            if (within_tolerance(error, value, spec)) {
                converged = true;
                break;
            }
        }
        if (subdivisions >= spec.max_subdivisions || heap.empty()) break;

        const auto [panel_error, index] = heap.top();
        heap.pop();
        const Panel parent = panels[index];
        const double mid = 0.5 * (parent.a + parent.b);
        if (!(mid > parent.a && mid < parent.b)) continue;  // at floating-point resolution

        const Panel left = rule.evaluate(parent.a, mid);
        const Panel right = rule.evaluate(mid, parent.b);
        ++subdivisions;
        panels[index] = left;
        panels.push_back(right);
        heap.emplace(left.error, index);
        heap.emplace(right.error, panels.size() - 1);
        value += left.value + right.value - parent.value;
        error = std::max(0.0, error + left.error + right.error - panel_error);
    }
    if (!converged) std::tie(value, error) = exact_totals();

    IntegralResult result;
    result.value = value;
    result.error_estimate = error;
    result.evaluations = rule.evaluations;
    result.converged = converged;
    result.effective_upper_limit = b;
    return result;
}

IntegralResult integrate_semi_infinite(const BatchIntegrand& f, double a,
                                       const QuadratureSpec& spec,
                                       std::span<const double> breakpoints) {
    if (!(a >= 0.0)) throw std::invalid_argument("integrate_semi_infinite: requires a >= 0");
    spec.validate();

    if (const auto* hard = std::get_if<HardCutoff>(&spec.cutoff_policy)) {
        if (!(hard->q_c > a)) throw std::invalid_argument("cutoff must exceed the lower limit");
        return integrate_finite(f, a, hard->q_c, spec, breakpoints);
    }

    const auto& policy = std::get<AdaptiveConverged>(spec.cutoff_policy);
    double lo = a;
    double hi = policy.initial_window > a ? policy.initial_window : a + 1.0;

    IntegralResult total;
    bool all_converged = true;
    double previous = 0.0;
    int small_run = 0;
    int growth_run = 0;
    for (int window = 0; window < spec.max_subdivisions; ++window) {
        QuadratureSpec window_spec = spec;
        window_spec.abs_tol = std::max(spec.abs_tol, 0.5 * spec.rel_tol * std::abs(total.value));
        const auto part = integrate_finite(f, lo, hi, window_spec, breakpoints);

        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.evaluations += part.evaluations;
        total.effective_upper_limit = hi;
        all_converged = all_converged && part.converged;

        const double contribution = std::abs(part.value);
        if (window > 0) {
            small_run = contribution <= policy.rel_change * std::abs(total.value) ? small_run + 1 : 0;
            growth_run = contribution >= previous ? growth_run + 1 : 0;
            if (small_run >= 2) {
                total.converged = all_converged;
                return total;
            }
            if (growth_run >= 5) {
                total.diverged = true;
                total.converged = false;
                return total;
            }
        }
        previous = contribution;
        lo = hi;
        hi *= policy.window_factor;
    }
    total.converged = false;
    return total;
}

std::vector<ConvergencePoint> convergence_scan(const BatchIntegrand& f,
                                               std::span<const double> cutoffs,
                                               const QuadratureSpec& spec, double a,
                                               std::span<const double> breakpoints) {
    std::vector<ConvergencePoint> table;
    table.reserve(cutoffs.size());
    double lo = a;
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    for (double c : cutoffs) {
        if (!(c > lo)) {
            throw std::invalid_argument("convergence_scan: cutoffs must be strictly increasing and > a");
        }
        const auto part = integrate_finite(f, lo, c, spec, breakpoints);
        value += part.value;
        error += part.error_estimate;
        converged = converged && part.converged;
        table.push_back({c, value, error, converged});
        lo = c;
    }
    return table;
}

}  // namespace dce
