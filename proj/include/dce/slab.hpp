#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dce/material.hpp"

namespace dce {

/// Free-standing slab of total thickness d_s whose top layer of thickness d
/// is time-modulated.
struct SlabGeometry {
    double d_s = 100e-9;  ///< [m]
    double d = 10e-9;     ///< [m]

    /// Requires 0 < d ≤ d_s.
    void validate() const;

    bool operator==(const SlabGeometry&) const = default;
};

/// |R_p| sampled on an (ω, q) grid, row-major with one row per frequency.
struct DispersionMap {
    std::vector<double> omega_grid;  ///< [rad/s]
    std::vector<double> q_grid;      ///< [rad/m]
    std::vector<double> values;

    double at(std::size_t i_omega, std::size_t j_q) const {
        return values[i_omega * q_grid.size() + j_q];
    }
};

/// Quasistatic vacuum/medium coefficient (ε − 1)/(ε + 1). Returns 1 for an
/// infinite ε; throws std::domain_error on the lossless pole ε = −1.
std::complex<double> interface_r(ComplexResponse eps);

/// Electrostatic p-polarized reflection of a vacuum-clad slab,
///   R_p = r(1 − e^{−2q d_s}) / (1 − r² e^{−2q d_s}),  r = interface_r(ε(ω, q)).
std::complex<double> reflection_slab(const LorentzMaterial& mat, const SlabGeometry& geom,
                                     double omega, double q);

/// |R_p| over the grid using the active batch kernel. Grids must be
/// strictly increasing and positive.
DispersionMap dispersion_map(const LorentzMaterial& mat, const SlabGeometry& geom,
                             std::span<const double> omega_grid, std::span<const double> q_grid);

/// Lossless (γ = 0) surface-mode frequency at wavenumber q, found as the
/// numeric root of ε_bg(ω, q) = −1. Empty when the root does not exist,
/// which happens in the nonlocal model once β²q² > ω₀² + ε∞ω_p²/(1 + ε∞).
std::optional<double> surface_mode_freq(const LorentzMaterial& mat, double q);

/// √(ω₀² − β²q² + ε∞ω_p²/(1 + ε∞)), the analytic counterpart of
/// surface_mode_freq.
std::optional<double> surface_mode_freq_closed_form(const LorentzMaterial& mat, double q);

/// Wavenumber of the lossless thin-slab mode of the local model at ω, where
/// r² e^{−2q d_s} = 1. Empty when |r| ≤ 1 (no bound mode at this frequency).
std::optional<double> local_slab_mode_wavenumber(const LorentzMaterial& mat,
                                                 const SlabGeometry& geom, double omega);

}  // namespace dce
