#include "dce/emission.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "dce/constants.hpp"
#include "dce/kernels.hpp"
#include "dce/parallel.hpp"

namespace dce {
namespace {

// The inner wavenumber integrals run this much tighter than the outer
// frequency integral so that their noise stays below the outer estimate.
constexpr double kInnerTolFactor = 0.1;

// Everything below is in units of ω₀ (frequency), ω₀/c (wavenumber).
class ScaledProblem {
public:
    explicit ScaledProblem(const EmissionConfig& cfg)
        : cfg_(cfg),
          params_(kernels::KernelParams::from(cfg.material, cfg.geometry)),
          table_(kernels::active()),
          w0_(cfg.material.omega_0),
          k0_(cfg.material.omega_0 / kSpeedOfLight),
          width_(cfg.pulse.T * cfg.material.omega_0),
          carrier_(cfg.pulse.Omega / cfg.material.omega_0) {
        const double s = params_.eps_inf * params_.plasma_sq * cfg.pulse.delta_omega;
        strength_sq_ = s * s / (16.0 * kPi * kPi * kPi);
        surface_shift_ = params_.eps_inf * params_.plasma_sq / (1.0 + params_.eps_inf);
    }

    double w0() const { return w0_; }
    double k0() const { return k0_; }

    // Dimensionless pulse spectrum, F(ω)·ω₀.
    double pulse(double y) const {
        const double a = width_ * (y - carrier_);
        const double b = width_ * (y + carrier_);
        return width_ * std::sqrt(2.0 * kPi) * 0.5 * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
    }

    // |Δχ|²/(16π³) without the denominators, which live in the kernel.
    double prefactor(double x, double xp) const {
        const double f = pulse(x + xp);
        return strength_sq_ * f * f;
    }

    void kernel(double x, double xp, std::span<const double> k, std::span<double> out) const {
        table_.pair_kernel(params_, x, xp, k, out);
    }

    QuadratureSpec inner_spec() const {
        QuadratureSpec spec = cfg_.quadrature;
        spec.rel_tol *= kInnerTolFactor;
        spec.abs_tol = 0.0;
        if (auto* hard = std::get_if<HardCutoff>(&spec.cutoff_policy)) {
            hard->q_c /= k0_;
        } else {
            auto& adaptive = std::get<AdaptiveConverged>(spec.cutoff_policy);
            if (adaptive.initial_window > 0.0) {
                adaptive.initial_window /= k0_;
            } else if (params_.beta > 0.0) {
                adaptive.initial_window = 2.0 / params_.beta;
            } else {
                adaptive.initial_window = 30.0 / params_.slab;
            }
        }
        return spec;
    }

    // Panel seeds for the wavenumber integral at the pair (x, xp): the
    // thin-slab mode of the local response, the half-space surface mode and
    // the bulk resonance of the nonlocal response, plus a few decades
    // around the slab scale.
    std::vector<double> wavenumber_breakpoints(double x, double xp) const {
        std::vector<double> bp;
        for (double m : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) bp.push_back(m / params_.slab);
        for (double y : {x, xp}) {
            const double ratio2 = params_.plasma_sq;
            const double denom = 1.0 - y * y;
            if (denom != 0.0) {
                const double eps = params_.eps_inf * (1.0 + ratio2 / denom);
                if (eps != -1.0) {
                    const double r = std::abs((eps - 1.0) / (eps + 1.0));
                    if (r > 1.0) bp.push_back(std::log(r) / params_.slab);
                }
            }
            if (params_.beta > 0.0) {
                const double sp = 1.0 + surface_shift_ - y * y;
                if (sp > 0.0) bp.push_back(std::sqrt(sp) / params_.beta);
                if (denom > 0.0) bp.push_back(std::sqrt(denom) / params_.beta);
            }
        }
        if (params_.beta > 0.0) {
            for (double m : {0.25, 0.5, 1.0, 1.5}) bp.push_back(m / params_.beta);
        }
        std::sort(bp.begin(), bp.end());
        return bp;
    }

    // ∫ dk of the kernel only (no prefactor).
    IntegralResult wavenumber_integral(double x, double xp, const QuadratureSpec& spec) const {
        const auto bp = wavenumber_breakpoints(x, xp);
        BatchIntegrand f = [&](std::span<const double> k, std::span<double> y) {
            kernel(x, xp, k, y);
        };
        return integrate_semi_infinite(f, 0.0, spec, bp);
    }

    DoubleIntegral double_integral(double x) const {
        const auto inner = inner_spec();
        DoubleIntegral out;
        double worst_inner_rel = 0.0;
        bool inner_converged = true;
        double q_max = 0.0;

        BatchIntegrand outer = [&](std::span<const double> xps, std::span<double> y) {
            for (std::size_t i = 0; i < xps.size(); ++i) {
                const double pre = prefactor(x, xps[i]);
                if (pre == 0.0) {
                    y[i] = 0.0;
                    continue;
                }
                const auto r = wavenumber_integral(x, xps[i], inner);
                y[i] = pre * r.value;
                out.evaluations += r.evaluations;
                inner_converged = inner_converged && r.converged;
                out.diverged = out.diverged || r.diverged;
                q_max = std::max(q_max, r.effective_upper_limit);
                if (r.value != 0.0) {
                    worst_inner_rel = std::max(worst_inner_rel, r.error_estimate / std::abs(r.value));
                }
            }
        };

        const double upper = carrier_ + x + 10.0 / width_;
        const double centre = carrier_ - x;
        std::vector<double> bp = {1.0,
                                  std::sqrt(1.0 + surface_shift_),
                                  std::sqrt(1.0 + params_.plasma_sq)};
        for (double m : {-4.0, -2.0, 0.0, 2.0, 4.0}) bp.push_back(centre + m / width_);

        QuadratureSpec outer_spec = cfg_.quadrature;
        const auto r = integrate_finite(outer, 0.0, upper, outer_spec, bp);

        const double scale = k0_ * k0_ / w0_;
        out.value = r.value * scale;
        out.error_estimate = r.error_estimate * scale + worst_inner_rel * std::abs(out.value);
        out.converged = r.converged && inner_converged;
        out.effective_q_max = q_max * k0_;
        return out;
    }

private:
    const EmissionConfig& cfg_;
    kernels::KernelParams params_;
    const kernels::KernelTable& table_;
    double w0_;
    double k0_;
    double width_;
    double carrier_;
    double strength_sq_ = 0.0;
    double surface_shift_ = 0.0;
};

void require_grid(std::span<const double> grid, const char* name) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw std::invalid_argument(std::string(name) + " must be positive and strictly increasing");
        }
    }
}

}  // namespace

void EmissionConfig::validate() const {
    material.validate();
    pulse.validate();
    geometry.validate();
    quadrature.validate();
    if (!(material.gamma > 0.0)) {
        throw std::invalid_argument("gamma must be > 0 for emission integrals");
    }
    if ((model_tag == ModelTag::local) != material.is_local()) {
        throw std::invalid_argument("model_tag local requires beta == 0 and nonlocal requires beta > 0");
    }
}

double pair_integrand(const EmissionConfig& cfg, double omega, double omega_prime, double q) {
    if (!(omega > 0.0 && omega_prime > 0.0 && q > 0.0)) {
        throw std::domain_error("pair_integrand: omega, omega_prime and q must be > 0");
    }
    const ScaledProblem p(cfg);
    const double x = omega / p.w0();
    const double xp = omega_prime / p.w0();
    const double pre = p.prefactor(x, xp);
    if (pre == 0.0) return 0.0;
    const std::array<double, 1> k{q / p.k0()};
    std::array<double, 1> g{};
    p.kernel(x, xp, k, g);
    return pre * g[0] * p.k0() / (p.w0() * p.w0());
}

IntegrandMap integrand_map(const EmissionConfig& cfg, double omega_fixed,
                           std::span<const double> omega_prime_grid,
                           std::span<const double> q_grid) {
    require_grid(omega_prime_grid, "omega_prime_grid");
    require_grid(q_grid, "q_grid");
    const ScaledProblem p(cfg);
    IntegrandMap map;
    map.omega_fixed = omega_fixed;
    map.omega_prime_grid.assign(omega_prime_grid.begin(), omega_prime_grid.end());
    map.q_grid.assign(q_grid.begin(), q_grid.end());
    map.values.resize(omega_prime_grid.size() * q_grid.size());

    std::vector<double> k(q_grid.size());
    for (std::size_t j = 0; j < k.size(); ++j) k[j] = q_grid[j] / p.k0();
    const double x = omega_fixed / p.w0();
    const double scale = p.k0() / (p.w0() * p.w0());

    parallel_for(omega_prime_grid.size(), [&](std::size_t i) {
        const double xp = omega_prime_grid[i] / p.w0();
        std::span<double> row(map.values.data() + i * k.size(), k.size());
        p.kernel(x, xp, k, row);
        const double pre = p.prefactor(x, xp) * scale;
        for (double& v : row) v = std::abs(pre * v);
    });
    return map;
}

IntegralResult wavenumber_integral(const EmissionConfig& cfg, double omega, double omega_prime) {
    cfg.validate();
    const ScaledProblem p(cfg);
    const double x = omega / p.w0();
    const double xp = omega_prime / p.w0();
    // Same tolerance as requested; this is a standalone integral here.
    QuadratureSpec spec = p.inner_spec();
    spec.rel_tol = cfg.quadrature.rel_tol;
    auto r = p.wavenumber_integral(x, xp, spec);
    const double scale = p.prefactor(x, xp) * p.k0() * p.k0() / (p.w0() * p.w0());
    r.value *= scale;
    r.error_estimate *= scale;
    r.effective_upper_limit *= p.k0();
    return r;
}

PairRate pair_emission_spectral_rate(const EmissionConfig& cfg, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("pair_emission_spectral_rate: omega must be > 0");
    cfg.validate();
    PairRate out;
    if (cfg.pulse.delta_omega == 0.0) {
        out.per_area.converged = true;
        return out;
    }
    const ScaledProblem p(cfg);
    out.per_area = p.double_integral(omega / p.w0());
    out.rate = out.per_area.value / cfg.pulse.T;
    out.rate_error = out.per_area.error_estimate / cfg.pulse.T;
    return out;
}

SpectrumResult emission_spectrum(const EmissionConfig& cfg, std::span<const double> omega_grid) {
    require_grid(omega_grid, "omega_grid");
    cfg.validate();
    SpectrumResult s;
    s.config = cfg;
    s.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    const std::size_t n = omega_grid.size();
    s.rate.resize(n);
    s.error_estimates.resize(n);
    s.effective_q_max.resize(n);
    std::vector<char> flags(n);
    parallel_for(n, [&](std::size_t i) {
        const auto r = pair_emission_spectral_rate(cfg, omega_grid[i]);
        s.rate[i] = r.rate;
        s.error_estimates[i] = r.rate_error;
        flags[i] = r.per_area.converged ? 1 : 0;
        s.effective_q_max[i] = r.per_area.effective_q_max;
    });
    s.converged_flags.assign(flags.begin(), flags.end());
    return s;
}

DoubleIntegral decay_rate_factor(const EmissionConfig& cfg, double omega_a) {
    return pair_emission_spectral_rate(cfg, omega_a).per_area;
}

std::vector<CutoffRow> cutoff_study(const EmissionConfig& cfg, double omega,
                                    std::span<const double> cutoffs) {
    require_grid(cutoffs, "cutoffs");
    std::vector<CutoffRow> rows(cutoffs.size());
    parallel_for(cutoffs.size(), [&](std::size_t i) {
        EmissionConfig c = cfg;
        c.quadrature.cutoff_policy = HardCutoff{cutoffs[i]};
        rows[i] = {cutoffs[i], pair_emission_spectral_rate(c, omega)};
    });
    return rows;
}

std::vector<double> default_spectrum_grid(const LorentzMaterial& mat, double lo, double hi,
                                          std::size_t points) {
    if (!(hi > lo && lo > 0.0) || points < 8) {
        throw std::invalid_argument("default_spectrum_grid: need 0 < lo < hi and points >= 8");
    }
    const std::size_t base = points / 2;
    const std::size_t per_side = (points - base) / 4;
    std::vector<double> x;
    x.reserve(points);
    for (std::size_t i = 0; i < base; ++i) {
        x.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(base - 1));
    }
    const double asymptote = *surface_mode_freq_closed_form(mat, 0.0) / mat.omega_0;
    for (double peak : {1.0, asymptote}) {
        for (std::size_t j = 0; j < per_side; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(per_side - 1);
            const double offset = 1e-4 * std::pow(300.0, t);  // 1e-4 .. 3e-2
            x.push_back(peak - offset);
            x.push_back(peak + offset);
        }
    }
    std::erase_if(x, [&](double v) { return v < lo || v > hi; });
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    for (double& v : x) v *= mat.omega_0;
    return x;
}

}  // namespace dce
