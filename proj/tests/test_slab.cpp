#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "dce/constants.hpp"
#include "dce/slab.hpp"

using namespace dce;

namespace {

constexpr double c0 = kSpeedOfLight;

// Plain bisection on Re ε(ω, q) + 1 for the lossless material, ω ∈ [lo, hi].
double bisect_surface_mode(LorentzMaterial m, double q, double lo, double hi) {
    m.gamma = 0.0;
    auto h = [&](double w) { return permittivity_bg(m, w, q).real() + 1.0; };
    // ε + 1 rises from −inf just above the pole through zero
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("interface coefficient") {
    CHECK(interface_r(3.0) == std::complex<double>(0.5));
    CHECK(interface_r(1.0) == std::complex<double>(0.0));
    CHECK(interface_r(std::complex<double>(INFINITY, 0.0)) == std::complex<double>(1.0));
    CHECK_THROWS_AS(interface_r(-1.0), std::domain_error);
    const auto r = interface_r({-1.0, 0.1});
    CHECK(r.imag() > 0.0);  // lossy side of the pole
}

TEST_CASE("slab reflection limits") {
    const auto sic = silicon_carbide();
    const SlabGeometry g;
    const double w = 1.1 * sic.omega_0;

    // thick limit: e^{-2q d_s} negligible, R_p -> r
    const double q_big = 500.0 / g.d_s;
    const auto r = interface_r(permittivity_bg(sic, w, q_big));
    CHECK(std::abs(reflection_slab(sic, g, w, q_big) - r) < 1e-12 * std::abs(r) + 1e-300);

    // thin limit: vanishing optical thickness reflects nothing
    CHECK(std::abs(reflection_slab(sic, g, w, 1e-6 / g.d_s)) < 1e-4);

    // a semi-infinite slab and a thick slab agree
    SlabGeometry thick{1e-3, 1e-4};
    const double q = 50.0 * sic.omega_0 / c0;
    const auto rr = interface_r(permittivity_bg(sic, w, q));
    CHECK(std::abs(reflection_slab(sic, thick, w, q) - rr) < 1e-10);
}

TEST_CASE("passive slab") {
    for (double beta : {0.0, kSiCBeta}) {
        const auto m = silicon_carbide(beta);
        const SlabGeometry g;
        for (int i = 0; i < 100; ++i) {
            const double w = m.omega_0 * std::pow(10.0, -1.0 + 1.5 * i / 99.0);
            for (int j = 0; j < 100; ++j) {
                const double q = (m.omega_0 / c0) * std::pow(10.0, -1.0 + 6.0 * j / 99.0);
                REQUIRE(reflection_slab(m, g, w, q).imag() >= -1e-12);
            }
        }
    }
}

TEST_CASE("local surface mode is flat") {
    const auto local = silicon_carbide(0.0);
    const double k0 = local.omega_0 / c0;
    const double p2 = std::pow(local.omega_p / local.omega_0, 2);
    const double asym = std::sqrt(1.0 + local.eps_inf * p2 / (1.0 + local.eps_inf));
    for (double qq : {1.0, 100.0, 1e4}) {
        const auto w = surface_mode_freq(local, qq * k0);
        REQUIRE(w.has_value());
        CHECK(*w / local.omega_0 == doctest::Approx(asym).epsilon(1e-12));
        const double oracle = bisect_surface_mode(local, qq * k0, local.omega_0 * 1.0000001,
                                                  local.omega_0 * 1.5);
        CHECK(*w == doctest::Approx(oracle).epsilon(1e-10));
    }
    CHECK(std::abs(asym - 1.1964) < 1e-3);
}

TEST_CASE("nonlocal surface mode bends down and ends") {
    const auto sic = silicon_carbide();
    const double qmax = 1.1 * sic.omega_0 / sic.beta;
    double prev = INFINITY;
    for (int i = 1; i <= 50; ++i) {
        const double q = qmax * i / 50.0;
        const auto w = surface_mode_freq(sic, q);
        const auto closed = surface_mode_freq_closed_form(sic, q);
        REQUIRE(w.has_value());
        REQUIRE(closed.has_value());
        CHECK(std::abs(*w / *closed - 1.0) < 1e-9);
        CHECK(*w < prev);
        prev = *w;
    }
    const double q_end = 2.0 * sic.omega_0 / sic.beta;
    CHECK_FALSE(surface_mode_freq(sic, q_end).has_value());
    CHECK_FALSE(surface_mode_freq_closed_form(sic, q_end).has_value());

    // the a < 0 branch: resonance pushed below zero but a root still exists
    const double q_neg = 1.15 * sic.omega_0 / sic.beta;
    const auto w = surface_mode_freq(sic, q_neg);
    REQUIRE(w.has_value());
    CHECK(std::abs(*w / *surface_mode_freq_closed_form(sic, q_neg) - 1.0) < 1e-9);
}

TEST_CASE("local thin-slab mode") {
    const auto local = silicon_carbide(0.0);
    const SlabGeometry g;
    const double w = 1.15 * local.omega_0;
    const auto q = local_slab_mode_wavenumber(local, g, w);
    REQUIRE(q.has_value());
    auto m = local;
    m.gamma = 0.0;
    const auto r = interface_r(permittivity_bg(m, w, *q));
    CHECK(std::norm(r) * std::exp(-2.0 * *q * g.d_s) == doctest::Approx(1.0).epsilon(1e-9));
    // above the LO frequency ε > 0 and there is no bound mode
    CHECK_FALSE(local_slab_mode_wavenumber(local, g, 1.3 * local.omega_0).has_value());
}

TEST_CASE("dispersion map") {
    const auto sic = silicon_carbide();
    const SlabGeometry g;
    std::vector<double> w, q;
    for (int i = 0; i < 17; ++i) w.push_back(sic.omega_0 * (0.8 + 0.03 * i));
    for (int j = 0; j < 23; ++j) q.push_back(sic.omega_0 / c0 * (1.0 + 40.0 * j));
    const auto map = dispersion_map(sic, g, w, q);
    REQUIRE(map.values.size() == w.size() * q.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            CHECK(map.at(i, j) == doctest::Approx(std::abs(reflection_slab(sic, g, w[i], q[j]))).epsilon(1e-12));

    // a material without oscillator strength is vacuum
    auto vac = sic;
    vac.omega_p = 0.0;
    vac.eps_inf = 1.0;
    CHECK(permittivity_bg(vac, w[3], q[3]) == std::complex<double>(1.0));
    const auto empty = dispersion_map(vac, g, w, q);
    for (double v : empty.values) CHECK(v == 0.0);

    std::vector<double> bad = {2.0, 1.0};
    CHECK_THROWS(dispersion_map(sic, g, bad, q));
}

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(SlabGeometry{}.validate());
    CHECK_THROWS_AS((SlabGeometry{10e-9, 20e-9}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SlabGeometry{10e-9, 0.0}.validate()), std::invalid_argument);
}
