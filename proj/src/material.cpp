#include "dce/material.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "dce/constants.hpp"

namespace dce {
namespace {

std::atomic<std::uint64_t> g_dipole_warnings{0};

void check_dipole_limit(double q) {
    if (q <= kDipoleLimitWavenumber) return;
    if (g_dipole_warnings.fetch_add(1, std::memory_order_relaxed) == 0) {
        std::cerr << "warning: wavenumber " << q << " rad/m exceeds 2*pi/a0 = "
                  << kDipoleLimitWavenumber << " rad/m; the dipole approximation is not valid\n";
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// D = ω₀²(q) − ω² − iγω in units of ω₀².
std::complex<double> scaled_denominator(const LorentzMaterial& mat, double omega, double q) {
    const double x = omega / mat.omega_0;
    const double bq = mat.beta * q / mat.omega_0;
    return {1.0 - bq * bq - x * x, -mat.gamma / mat.omega_0 * x};
}

}  // namespace

void LorentzMaterial::validate() const {
    require(std::isfinite(omega_p) && omega_p > 0.0, "omega_p must be > 0");
    require(std::isfinite(omega_0) && omega_0 > 0.0, "omega_0 must be > 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(eps_inf) && eps_inf >= 1.0, "eps_inf must be >= 1");
    require(std::isfinite(beta) && beta >= 0.0, "beta must be >= 0");
}

LorentzMaterial silicon_carbide(double beta) {
    return LorentzMaterial{.eps_inf = 6.7,
                           .omega_p = 1.049e14,
                           .omega_0 = 1.49e14,
                           .gamma = 8.97e11,
                           .beta = beta};
}

void ModulationPulse::validate() const {
    require(std::isfinite(delta_omega) && std::abs(delta_omega) <= kMaxModulationDepth,
            "delta_omega must satisfy |delta_omega| <= 0.2 (perturbative regime)");
    require(std::isfinite(Omega) && Omega > 0.0, "Omega must be > 0");
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
}

double resonance_freq_sq(const LorentzMaterial& mat, double q) {
    const double bq = mat.beta * q;
    return mat.omega_0 * mat.omega_0 - bq * bq;
}

ComplexResponse permittivity_bg(const LorentzMaterial& mat, double omega, double q) {
    if (omega < 0.0) throw std::domain_error("permittivity_bg: omega must be >= 0");
    if (q < 0.0) throw std::domain_error("permittivity_bg: q must be >= 0");
    check_dipole_limit(q);
    const double ratio = mat.omega_p / mat.omega_0;
    const auto d = scaled_denominator(mat, omega, q);
    const double inv = 1.0 / std::norm(d);
    const std::complex<double> susceptibility{ratio * ratio * d.real() * inv,
                                              -ratio * ratio * d.imag() * inv};
    return mat.eps_inf * (1.0 + susceptibility);
}

ComplexResponse delta_chi(const LorentzMaterial& mat, const ModulationPulse& pulse,
                          double omega, double omega_prime, double q) {
    if (pulse.delta_omega == 0.0) return {0.0, 0.0};
    check_dipole_limit(q);
    const double ratio = mat.omega_p / mat.omega_0;
    // The ω₀⁴ of the two denominators cancels the ω₀² ω_p² of the numerator
    // down to (ω_p/ω₀)².
    const auto num = -mat.eps_inf * ratio * ratio * pulse.delta_omega *
                     pulse_spectrum(pulse, omega_prime - omega);
    const auto d1 = scaled_denominator(mat, omega_prime, q);
    const auto d2 = scaled_denominator(mat, omega, q);
    return num / (d1 * d2);
}

double pulse_time(const ModulationPulse& pulse, double t) {
    const double s = t / pulse.T;
    return std::cos(pulse.Omega * t) * std::exp(-0.5 * s * s);
}

double pulse_spectrum(const ModulationPulse& pulse, double omega) {
    const double a = pulse.T * (omega - pulse.Omega);
    const double b = pulse.T * (omega + pulse.Omega);
    return pulse.T * std::sqrt(2.0 * kPi) * 0.5 * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
}

std::uint64_t dipole_limit_warning_count() {
    return g_dipole_warnings.load(std::memory_order_relaxed);
}

}  // namespace dce
