#include "dce/slab.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "dce/constants.hpp"
#include "dce/kernels.hpp"
#include "dce/parallel.hpp"

namespace dce {
namespace {

void require_increasing_positive(std::span<const double> grid, const char* name) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw std::invalid_argument(std::string(name) + " must be positive and strictly increasing");
        }
    }
}

// ε∞ω_p²/(1 + ε∞) in units of ω₀².
double surface_shift(const LorentzMaterial& mat) {
    const double ratio = mat.omega_p / mat.omega_0;
    return mat.eps_inf * ratio * ratio / (1.0 + mat.eps_inf);
}

}  // namespace

void SlabGeometry::validate() const {
    if (!(std::isfinite(d_s) && d_s > 0.0)) throw std::invalid_argument("d_s must be > 0");
    if (!(std::isfinite(d) && d > 0.0 && d <= d_s)) {
        throw std::invalid_argument("d must satisfy 0 < d <= d_s");
    }
}

std::complex<double> interface_r(ComplexResponse eps) {
    if (std::isinf(eps.real()) || std::isinf(eps.imag())) return {1.0, 0.0};
    if (eps == ComplexResponse{-1.0, 0.0}) {
        throw std::domain_error("interface_r: lossless surface pole (eps == -1)");
    }
    return (eps - 1.0) / (eps + 1.0);
}

std::complex<double> reflection_slab(const LorentzMaterial& mat, const SlabGeometry& geom,
                                     double omega, double q) {
    const auto r = interface_r(permittivity_bg(mat, omega, q));
    const double e = std::exp(-2.0 * q * geom.d_s);
    return r * (-std::expm1(-2.0 * q * geom.d_s)) / (1.0 - r * r * e);
}

DispersionMap dispersion_map(const LorentzMaterial& mat, const SlabGeometry& geom,
                             std::span<const double> omega_grid, std::span<const double> q_grid) {
    require_increasing_positive(omega_grid, "omega_grid");
    require_increasing_positive(q_grid, "q_grid");

    DispersionMap map;
    map.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    map.q_grid.assign(q_grid.begin(), q_grid.end());
    map.values.resize(omega_grid.size() * q_grid.size());

    const auto params = kernels::KernelParams::from(mat, geom);
    const double k_scale = kSpeedOfLight / mat.omega_0;
    std::vector<double> k(q_grid.size());
    for (std::size_t j = 0; j < q_grid.size(); ++j) k[j] = q_grid[j] * k_scale;
    const auto& table = kernels::active();

    parallel_for(omega_grid.size(), [&](std::size_t i) {
        std::vector<double> re(k.size()), im(k.size());
        table.reflection(params, omega_grid[i] / mat.omega_0, k, re, im);
        for (std::size_t j = 0; j < k.size(); ++j) {
            map.values[i * k.size() + j] = std::hypot(re[j], im[j]);
        }
    });
    return map;
}

std::optional<double> surface_mode_freq(const LorentzMaterial& mat, double q) {
    // Work in s = (ω/ω₀)². With a = ω₀²(q)/ω₀², the lossless permittivity
    // ε∞(1 + p²/(a − s)) increases monotonically from −∞ (just above s = a)
    // towards ε∞ on s > max(a, 0), so ε = −1 has at most one root there.
    const double ratio = mat.omega_p / mat.omega_0;
    const double p2 = ratio * ratio;
    const double bq = mat.beta * q / mat.omega_0;
    const double a = 1.0 - bq * bq;
    auto h = [&](double s) { return mat.eps_inf * (1.0 + p2 / (a - s)) + 1.0; };

    double lo = 0.0;
    if (a > 0.0) {
        lo = std::nextafter(a, 2.0 * a);
    } else if (a == 0.0) {
        lo = 1e-300;
    } else if (h(0.0) >= 0.0) {
        return std::nullopt;
    }
    double hi = lo + 1.0;
    while (h(hi) <= 0.0) hi = lo + 2.0 * (hi - lo);

    std::uintmax_t max_iter = 200;
    const auto [s_lo, s_hi] = boost::math::tools::toms748_solve(
        h, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    return mat.omega_0 * std::sqrt(0.5 * (s_lo + s_hi));
}

std::optional<double> surface_mode_freq_closed_form(const LorentzMaterial& mat, double q) {
    const double s = resonance_freq_sq(mat, q) / (mat.omega_0 * mat.omega_0) + surface_shift(mat);
    if (s <= 0.0) return std::nullopt;
    return mat.omega_0 * std::sqrt(s);
}

std::optional<double> local_slab_mode_wavenumber(const LorentzMaterial& mat,
                                                 const SlabGeometry& geom, double omega) {
    const double x = omega / mat.omega_0;
    const double ratio = mat.omega_p / mat.omega_0;
    const double denom = 1.0 - x * x;
    if (denom == 0.0) return std::nullopt;
    const double eps = mat.eps_inf * (1.0 + ratio * ratio / denom);
    if (eps == -1.0) return std::nullopt;
    const double r = std::abs((eps - 1.0) / (eps + 1.0));
    if (r <= 1.0) return std::nullopt;
    return std::log(r) / geom.d_s;
}

}  // namespace dce
