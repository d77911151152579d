#include "dce/kernels.hpp"

#include <cmath>

#include "dce/constants.hpp"
#include "dce/material.hpp"
#include "dce/slab.hpp"

namespace dce::kernels {

KernelParams KernelParams::from(const LorentzMaterial& mat, const SlabGeometry& geom) {
    const double w0 = mat.omega_0;
    const double k0 = w0 / kSpeedOfLight;
    KernelParams p;
    p.eps_inf = mat.eps_inf;
    p.plasma_sq = (mat.omega_p / w0) * (mat.omega_p / w0);
    p.damping = mat.gamma / w0;
    p.beta = mat.beta / kSpeedOfLight;
    p.slab = geom.d_s * k0;
    p.layer = geom.d * k0;
    return p;
}

namespace scalar {
namespace {

struct Reflect {
    double re;
    double im;
    double inv_den;  // 1/|D|²
};

inline Reflect reflect_one(const KernelParams& p, double x, double k) {
    const double bk = p.beta * k;
    const double dre = 1.0 - bk * bk - x * x;
    const double dim = -p.damping * x;
    const double inv_den = 1.0 / (dre * dre + dim * dim);

    const double ere = p.eps_inf + p.eps_inf * p.plasma_sq * dre * inv_den;
    const double eim = -p.eps_inf * p.plasma_sq * dim * inv_den;

    // r = (ε − 1)/(ε + 1)
    const double nre = ere - 1.0;
    const double mre = ere + 1.0;
    const double inv_m = 1.0 / (mre * mre + eim * eim);
    const double rre = (nre * mre + eim * eim) * inv_m;
    const double rim = (eim * mre - nre * eim) * inv_m;

    // R = r(1 − E)/(1 − r²E)
    const double e = std::exp(-2.0 * k * p.slab);
    const double one_minus_e = -std::expm1(-2.0 * k * p.slab);
    const double qre = 1.0 - e * (rre * rre - rim * rim);
    const double qim = -e * (2.0 * rre * rim);
    const double inv_q = one_minus_e / (qre * qre + qim * qim);
    return {(rre * qre + rim * qim) * inv_q, (rim * qre - rre * qim) * inv_q, inv_den};
}

}  // namespace

void reflection(const KernelParams& p, double x, std::span<const double> k,
                std::span<double> re, std::span<double> im) {
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto r = reflect_one(p, x, k[i]);
        re[i] = r.re;
        im[i] = r.im;
    }
}

void pair_kernel(const KernelParams& p, double x, double xp, std::span<const double> k,
                 std::span<double> out) {
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto a = reflect_one(p, x, k[i]);
        const auto b = reflect_one(p, xp, k[i]);
        const double t = -std::expm1(-2.0 * k[i] * p.layer);
        out[i] = k[i] * t * t * (a.im * a.inv_den) * (b.im * b.inv_den);
    }
}

}  // namespace scalar
}  // namespace dce::kernels
