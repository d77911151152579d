#pragma once

// Batch kernels for the slab reflection coefficient and the wavenumber
// integrand of the pair-generation rate.
//
// All quantities are dimensionless: frequencies in units of ω₀, wavenumbers
// in units of ω₀/c, lengths in units of c/ω₀, velocities in units of c.
// Every ISA variant implements exactly the same arithmetic sequence as the
// scalar reference so the outputs agree to a few ulps.

#include <span>
#include <string_view>

namespace dce {
struct LorentzMaterial;
struct SlabGeometry;
}  // namespace dce

namespace dce::kernels {

struct KernelParams {
    double eps_inf = 1.0;
    double plasma_sq = 0.0;   // (ω_p/ω₀)²
    double damping = 0.0;     // γ/ω₀
    double beta = 0.0;        // β/c
    double slab = 0.0;        // d_s·ω₀/c
    double layer = 0.0;       // d·ω₀/c

    static KernelParams from(const LorentzMaterial& mat, const SlabGeometry& geom);
};

/// R_p(x, k) for every k. re/im must have k.size() elements.
using ReflectionFn = void (*)(const KernelParams&, double x, std::span<const double> k,
                              std::span<double> re, std::span<double> im);

/// k·(1 − e^{−2k·layer})² · Im R_p(x,k) · Im R_p(xp,k) / (|D(x,k)|²·|D(xp,k)|²)
/// where D(y,k) = 1 − β²k² − y² − iγy. This is the wavenumber integrand of
/// the pair rate without the k-independent pulse/strength prefactor.
using PairKernelFn = void (*)(const KernelParams&, double x, double xp,
                              std::span<const double> k, std::span<double> out);

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    std::string_view name;
    ReflectionFn reflection;
    PairKernelFn pair_kernel;
};

namespace scalar {
void reflection(const KernelParams& p, double x, std::span<const double> k,
                std::span<double> re, std::span<double> im);
void pair_kernel(const KernelParams& p, double x, double xp, std::span<const double> k,
                 std::span<double> out);
}  // namespace scalar

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Best available table. DCE_ISA=scalar in the environment forces the
/// scalar reference.
const KernelTable& active();

}  // namespace dce::kernels
