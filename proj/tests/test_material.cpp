#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>
#include <fftw3.h>

#include "dce/material.hpp"

using namespace dce;

namespace {

ModulationPulse fig4b_pulse(const LorentzMaterial& m) {
    return {0.01, 2.2 * m.omega_0, 80e-15};
}

// F(ω) = ∫ f(t) e^{iωt} dt sampled through a real FFT of f on [−N dt/2, N dt/2).
struct FftSpectrum {
    double dt = 0.0;
    std::vector<double> omega;
    std::vector<double> value;
};

FftSpectrum fft_spectrum(const ModulationPulse& p, int n, double dt) {
    std::vector<double> in(n);
    for (int i = 0; i < n; ++i) in[i] = pulse_time(p, (i - n / 2) * dt);
    std::vector<fftw_complex> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    FftSpectrum s;
    s.dt = dt;
    for (int k = 0; k <= n / 2; ++k) {
        // shift by t0 = −(n/2)dt gives a (−1)^k phase; f is even so F is real
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s.omega.push_back(2.0 * M_PI * k / (n * dt));
        s.value.push_back(sign * out[k][0] * dt);
    }
    return s;
}

}  // namespace

TEST_CASE("static permittivity of SiC") {
    const auto sic = silicon_carbide();
    const auto eps = permittivity_bg(sic, 0.0, 0.0);
    const double p = sic.omega_p / sic.omega_0;
    CHECK(eps.real() == doctest::Approx(6.7 * (1.0 + p * p)).epsilon(1e-14));
    CHECK(std::abs(eps.real() - 10.021) < 1e-3);
    CHECK(eps.imag() == 0.0);
}

TEST_CASE("large wavenumbers are transparent in the nonlocal model") {
    const auto sic = silicon_carbide();
    const double q = 1e3 * sic.omega_0 / sic.beta;
    const auto eps = permittivity_bg(sic, 1.1 * sic.omega_0, q);
    CHECK(std::abs(eps - std::complex<double>(sic.eps_inf)) < 1e-4);

    // local model never forgets the resonance
    const auto local = silicon_carbide(0.0);
    CHECK(permittivity_bg(local, 1.1 * sic.omega_0, q) == permittivity_bg(local, 1.1 * sic.omega_0, 0.0));
}

TEST_CASE("passivity over a log grid") {
    for (double beta : {0.0, kSiCBeta}) {
        const auto m = silicon_carbide(beta);
        for (int i = 0; i < 120; ++i) {
            const double w = m.omega_0 * std::pow(10.0, -2.0 + 3.0 * i / 119.0);
            for (int j = 0; j < 120; ++j) {
                const double q = (m.omega_0 / 2.998e8) * std::pow(10.0, -1.0 + 6.0 * j / 119.0);
                REQUIRE(permittivity_bg(m, w, q).imag() >= 0.0);
            }
        }
    }
}

TEST_CASE("resonance shift") {
    const auto m = silicon_carbide();
    CHECK(resonance_freq_sq(m, 0.0) == m.omega_0 * m.omega_0);
    const double q = m.omega_0 / m.beta;
    CHECK(std::abs(resonance_freq_sq(m, q)) < 1e-6 * m.omega_0 * m.omega_0);
    CHECK(resonance_freq_sq(m, 2.0 * q) < 0.0);
}

TEST_CASE("delta_chi is linear in the modulation depth and symmetric") {
    const auto m = silicon_carbide();
    auto p = fig4b_pulse(m);
    const double w = 1.2 * m.omega_0, wp = -1.0 * m.omega_0, q = 3e7;
    const auto a = delta_chi(m, p, w, wp, q);
    p.delta_omega *= 3.0;
    const auto b = delta_chi(m, p, w, wp, q);
    CHECK(std::abs(b - 3.0 * a) <= 1e-15 * std::abs(b));
    CHECK(std::abs(delta_chi(m, p, wp, w, q) - b) <= 1e-15 * std::abs(b));
    p.delta_omega = 0.0;
    CHECK(delta_chi(m, p, w, wp, q) == std::complex<double>(0.0));
}

TEST_CASE("pulse shape and closed-form spectrum") {
    const auto m = silicon_carbide();
    const auto p = fig4b_pulse(m);
    CHECK(pulse_time(p, 0.0) == 1.0);
    CHECK(pulse_time(p, p.T) == doctest::Approx(std::cos(p.Omega * p.T) * std::exp(-0.5)));
    CHECK(pulse_spectrum(p, p.Omega) ==
          doctest::Approx(p.T * std::sqrt(2.0 * M_PI) / 2.0).epsilon(1e-12));
    CHECK(pulse_spectrum(p, -p.Omega) == pulse_spectrum(p, p.Omega));
}

TEST_CASE("pulse spectrum agrees with a discrete Fourier transform") {
    const auto m = silicon_carbide();
    const auto p = fig4b_pulse(m);
    const auto s = fft_spectrum(p, 4000, p.T / 40.0);
    int checked = 0;
    for (std::size_t k = 0; k < s.omega.size(); ++k) {
        if (std::abs(s.omega[k] - p.Omega) > 4.0 / p.T) continue;
        const double exact = pulse_spectrum(p, s.omega[k]);
        CHECK(std::abs(s.value[k] - exact) <= 1e-6 * std::abs(exact));
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("validation") {
    auto m = silicon_carbide();
    CHECK_NOTHROW(m.validate());
    m.eps_inf = 0.5;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m = silicon_carbide();
    m.omega_p = 0.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    CHECK_THROWS_AS(permittivity_bg(silicon_carbide(), -1.0, 0.0), std::domain_error);

    ModulationPulse p{0.5, 3e14, 80e-15};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.delta_omega = -0.2;
    CHECK_NOTHROW(p.validate());
    p.T = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
