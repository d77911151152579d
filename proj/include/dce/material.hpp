#pragma once

#include <complex>
#include <cstdint>

namespace dce {

using ComplexResponse = std::complex<double>;

/// Nonlocal Lorentz oscillator for a polar dielectric.
///
/// The TO resonance red-shifts with wavenumber, ω₀²(q) = ω₀² − β²q², so the
/// polarization response dies out at large q. beta == 0 is the ordinary
/// local Lorentz model.
struct LorentzMaterial {
    double eps_inf = 1.0;  ///< high-frequency permittivity
    double omega_p = 0.0;  ///< plasma frequency (oscillator strength) [rad/s]
    double omega_0 = 0.0;  ///< TO phonon frequency [rad/s]
    double gamma = 0.0;    ///< damping rate [rad/s]
    double beta = 0.0;     ///< nonlocality velocity [m/s]

    bool is_local() const { return beta == 0.0; }

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    bool operator==(const LorentzMaterial&) const = default;
};

/// Default nonlocality velocity for SiC [m/s].
inline constexpr double kSiCBeta = 1.539e6;

/// SiC constants: ω_p = 1.049e14, ω₀ = 1.49e14, γ = 8.97e11 rad/s, ε∞ = 6.7.
LorentzMaterial silicon_carbide(double beta = kSiCBeta);

/// Gaussian-windowed carrier f(t) = cos(Ωt)·exp(−t²/2T²) scaling the TO
/// resonance as ω₀ → ω₀(1 + δω f(t)).
struct ModulationPulse {
    double delta_omega = 0.01;  ///< modulation depth δω (dimensionless)
    double Omega = 0.0;         ///< carrier frequency [rad/s]
    double T = 0.0;             ///< Gaussian width [s]

    /// Rejects |δω| > 0.2 (outside the perturbative regime), Ω ≤ 0, T ≤ 0.
    void validate() const;

    bool operator==(const ModulationPulse&) const = default;
};

inline constexpr double kMaxModulationDepth = 0.2;

/// ω₀² − β²q² [rad²/s²]. Negative once q exceeds ω₀/β.
double resonance_freq_sq(const LorentzMaterial& mat, double q);

/// ε∞·(1 + ω_p²/(ω₀²(q) − ω² − iγω)). Requires omega ≥ 0 and q ≥ 0; callers
/// obtain negative frequencies through ε(−ω) = ε(ω)*.
ComplexResponse permittivity_bg(const LorentzMaterial& mat, double omega, double q);

/// Two-frequency modulation susceptibility
///   −ε∞ ω₀² ω_p² δω F(ω′ − ω) / ((ω₀²(q) − ω′² − iγω′)(ω₀²(q) − ω² − iγω))
/// with F the pulse spectrum. Frequencies may be negative; they are
/// substituted directly.
ComplexResponse delta_chi(const LorentzMaterial& mat, const ModulationPulse& pulse,
                          double omega, double omega_prime, double q);

/// cos(Ωt)·exp(−t²/2T²).
double pulse_time(const ModulationPulse& pulse, double t);

/// F(ω) = ∫ f(t) e^{iωt} dt
///      = T·√(2π)/2 · [exp(−T²(ω−Ω)²/2) + exp(−T²(ω+Ω)²/2)].
double pulse_spectrum(const ModulationPulse& pulse, double omega);

/// Number of evaluations so far that were asked for q > 2π/a₀. A warning is
/// printed to stderr the first time it happens.
std::uint64_t dipole_limit_warning_count();

}  // namespace dce
