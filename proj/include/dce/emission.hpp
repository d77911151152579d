#pragma once

// Pair generation of surface phonon-polaritons on a time-modulated slab and
// the three-quantum decay channel of an emitter above it.
//
// Both observables share the double integral
//
//   ∫₀^∞ dω′ |Δχ(ω, −ω′, q)|²/(16π³) ∫₀^∞ dq q (1 − e^{−2qd})² Im R_p(ω′,q) Im R_p(ω,q),
//
// evaluated as nested 1-D adaptive quadratures (wavenumber inside). In the
// nonlocal model Δχ is taken at the integration wavenumber q.

#include <cstddef>
#include <span>
#include <vector>

#include "dce/material.hpp"
#include "dce/quadrature.hpp"
#include "dce/slab.hpp"

namespace dce {

enum class ModelTag { local, nonlocal };

/// Wavenumber cutoffs (q_c, initial_window) in the quadrature spec are in
/// rad/m.
struct EmissionConfig {
    LorentzMaterial material;
    ModulationPulse pulse;
    SlabGeometry geometry;
    QuadratureSpec quadrature;
    ModelTag model_tag = ModelTag::nonlocal;

    /// Module invariants plus model_tag == local ⇔ material.beta == 0.
    void validate() const;
};

/// Outcome of the ω′/q double integral.
struct DoubleIntegral {
    double value = 0.0;           ///< [s·m⁻²]
    double error_estimate = 0.0;  ///< outer estimate plus the worst inner relative error
    bool converged = false;       ///< outer and every inner integral converged
    bool diverged = false;        ///< some inner wavenumber integral flagged divergence
    double effective_q_max = 0.0; ///< largest inner upper limit used [rad/m]
    std::size_t evaluations = 0;  ///< kernel evaluations
};

struct PairRate {
    DoubleIntegral per_area;  ///< (1/A) dP/dω [s·m⁻²]
    double rate = 0.0;        ///< (1/AT) dP/dω [m⁻²]
    double rate_error = 0.0;
};

struct SpectrumResult {
    EmissionConfig config;
    std::vector<double> omega_grid;  ///< [rad/s]
    std::vector<double> rate;        ///< (1/AT) dP/dω [m⁻²]
    std::vector<double> error_estimates;
    std::vector<bool> converged_flags;
    std::vector<double> effective_q_max;  ///< [rad/m]
};

struct IntegrandMap {
    double omega_fixed = 0.0;              ///< [rad/s]
    std::vector<double> omega_prime_grid;  ///< [rad/s]
    std::vector<double> q_grid;            ///< [rad/m]
    std::vector<double> values;            ///< row-major, one row per ω′ [s²·m⁻¹]

    double at(std::size_t i_omega_prime, std::size_t j_q) const {
        return values[i_omega_prime * q_grid.size() + j_q];
    }
};

struct CutoffRow {
    double q_c = 0.0;  ///< [rad/m]
    PairRate result;
};

/// |Δχ(ω,−ω′,q)|²/(16π³) · q(1 − e^{−2qd})² · Im R_p(ω′,q) · Im R_p(ω,q)  [s²·m⁻¹].
double pair_integrand(const EmissionConfig& cfg, double omega, double omega_prime, double q);

/// pair_integrand over an (ω′, q) grid at fixed ω.
IntegrandMap integrand_map(const EmissionConfig& cfg, double omega_fixed,
                           std::span<const double> omega_prime_grid,
                           std::span<const double> q_grid);

/// ∫ dq pair_integrand(ω, ω′, q) under cfg.quadrature.cutoff_policy [s²·m⁻²].
IntegralResult wavenumber_integral(const EmissionConfig& cfg, double omega, double omega_prime);

/// (1/A) dP/dω and (1/AT) dP/dω at ω.
PairRate pair_emission_spectral_rate(const EmissionConfig& cfg, double omega);

/// pair_emission_spectral_rate on every grid point (evaluated concurrently,
/// stored by index).
SpectrumResult emission_spectrum(const EmissionConfig& cfg, std::span<const double> omega_grid);

/// Factor multiplying γ₀ in the |e,0⟩ → |g,1_m 1_n 1_l⟩ rate: the same double
/// integral as the pair rate with ω → ω_a [s·m⁻²].
DoubleIntegral decay_rate_factor(const EmissionConfig& cfg, double omega_a);

/// Pair rate at ω with HardCutoff(q_c) for every q_c in cutoffs (increasing).
std::vector<CutoffRow> cutoff_study(const EmissionConfig& cfg, double omega,
                                    std::span<const double> cutoffs);

/// Default spectral grid on [lo, hi]·ω₀: a uniform base refined with
/// geometrically spaced points around ω₀ and the surface-mode asymptote.
std::vector<double> default_spectrum_grid(const LorentzMaterial& mat, double lo = 0.8,
                                          double hi = 1.4, std::size_t points = 400);

}  // namespace dce
