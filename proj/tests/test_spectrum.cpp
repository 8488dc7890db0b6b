#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "generators.hpp"
#include "pencil/spectrum.hpp"
#include "pencil/zeros.hpp"

using namespace pencil;

namespace {

cplx fold(cplx z) {
    double re = z.real();
    while (re < -kPi) re += 4.0 * kPi;
    while (re >= 3.0 * kPi) re -= 4.0 * kPi;
    return {re, z.imag()};
}

/// Zeros in the open upper half-strip from the roots of P(w) inside the unit disc.
std::vector<cplx> companion_zeros(const CharacteristicFunction& phi) {
    std::vector<cplx> p = phi.polynomial();
    while (p.size() > 1 && p.back() == cplx(0.0)) p.pop_back();
    const int deg = static_cast<int>(p.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[static_cast<std::size_t>(i)] / p.back();
    const Eigen::VectorXcd roots = comp.eigenvalues();
    std::vector<cplx> zs;
    for (int i = 0; i < deg; ++i) {
        const cplx w = roots(i);
        if (std::abs(w) < 1.0 - 1e-6 && std::abs(w) > 1e-12) zs.push_back(fold(-2.0 * cplx(0, 1) * std::log(w)));
    }
    return zs;
}

bool contains_near(const std::vector<SpectralZero>& zs, cplx z, double tol) {
    for (const SpectralZero& s : zs) {
        if (std::abs(s.z - z) < tol) return true;
    }
    return false;
}

std::size_t total_multiplicity(const std::vector<SpectralZero>& zs) {
    std::size_t m = 0;
    for (const SpectralZero& s : zs) m += static_cast<std::size_t>(s.multiplicity);
    return m;
}

} // namespace

TEST_CASE("free characteristic function") {
    const CharacteristicFunction phi(CoefficientTriple{});
    for (double re : {-3.0, -1.0, 0.3, 2.0, 5.0, 9.0}) {
        for (double im : {0.0, 0.1, 1.0, 3.0}) {
            const cplx z(re, im);
            const cplx ref = -2.0 * cplx(0, 1) * std::sin(z);
            CHECK(std::abs(phi(z) - ref) <= 1e-13 * std::abs(ref) + 1e-15);
        }
    }
    CHECK(phi.polynomial().size() == 7);
    const SpectrumReport r = spectrum_report(CoefficientTriple{});
    CHECK(r.eigenvalues.empty());
    CHECK(r.spectral_singularities.empty());
    CHECK(r.boundary_indeterminate.size() == 4);
    CHECK(r.continuous_lo == -2.0);
    CHECK(r.continuous_hi == 2.0);
}

TEST_CASE("polynomial form of Phi") {
    std::mt19937_64 rng(testgen::kSeed + 10);
    for (int t = 0; t < 20; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng);
        const CharacteristicFunction phi(c);
        CHECK(phi.polynomial().size() == static_cast<std::size_t>(4 * (c.n_max() - c.n_min()) + 7));
        cplx prod_inv = 1.0;
        for (int n = c.n_min(); n <= c.n_max(); ++n) prod_inv /= c.a(n);
        CHECK(std::abs(phi.polynomial()[0] - prod_inv) < 1e-12 * std::abs(prod_inv));
        const cplx z = testgen::random_z(rng);
        const cplx w = std::exp(cplx(0, 0.5) * z);
        cplx acc = 0.0, wk = 1.0;
        for (cplx pk : phi.polynomial()) {
            acc += pk * wk;
            wk *= w;
        }
        CHECK(std::abs(acc - phi.reduced(z)) <= 1e-12 * phi.magnitude(z) * std::abs(w * w));
        CHECK(std::abs(phi(z) - pencil::phi(c, z)) <= 1e-12 * phi.magnitude(z));
    }
}

TEST_CASE("asymptotics as Im z grows") {
    const CoefficientTriple c(0, {1.3, 0.7}, {0.2, -0.1}, {0.5, -0.4});
    const std::vector<cplx> probe = phi_asymptotic_probe(c, {1.0, 4.0, 16.0, 40.0});
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const double y = std::vector<double>{1.0, 4.0, 16.0, 40.0}[i];
        CHECK(std::abs(probe[i] - cplx(1.0)) < 5.0 * std::exp(-0.5 * y));
    }
}

TEST_CASE("jets of Phi match the closed form") {
    const CharacteristicFunction phi(CoefficientTriple{});
    const cplx z(0.4, 0.3);
    const Jet j = phi.jet(z, 4);
    // -2i sin z: derivatives cycle through -2i (cos, -sin, -cos, sin)
    const cplx m2i = -2.0 * cplx(0, 1);
    CHECK(std::abs(j.derivative(1) - m2i * std::cos(z)) < 1e-13);
    CHECK(std::abs(j.derivative(2) + m2i * std::sin(z)) < 1e-13);
    CHECK(std::abs(j.derivative(3) + m2i * std::cos(z)) < 1e-12);
    CHECK(std::abs(j.derivative(4) - m2i * std::sin(z)) < 1e-12);
}

TEST_CASE("single-site eigenvalues") {
    const SpectrumReport r = spectrum_report(CoefficientTriple(0, {1.0}, {0.0}, {-3.0}));
    REQUIRE(r.eigenvalues.size() == 2);
    const double lam = std::sqrt(2.0 + std::sqrt(13.0));
    for (const SpectralZero& s : r.eigenvalues) {
        CHECK(s.multiplicity == 1);
        CHECK(std::abs(std::abs(s.lambda) - lam) < 1e-10);
        CHECK(std::abs(s.lambda.imag()) < 1e-10);
    }
    CHECK(r.spectral_singularities.empty());
}

TEST_CASE("single-site spectral singularities") {
    const SpectrumReport r = spectrum_report(CoefficientTriple(0, {1.0}, {0.0}, {cplx(0, 2)}));
    CHECK(r.eigenvalues.empty());
    REQUIRE(r.spectral_singularities.size() == 2);
    CHECK(contains_near(r.spectral_singularities, kPi / 2, 1e-7));
    CHECK(contains_near(r.spectral_singularities, 2.5 * kPi, 1e-7));
    for (const SpectralZero& s : r.spectral_singularities) {
        CHECK(s.z.imag() == 0.0);
        CHECK(s.multiplicity == 2);
    }
}

TEST_CASE("property: eigenvalues agree with the companion matrix oracle") {
    std::mt19937_64 rng(testgen::kSeed + 11);
    for (int t = 0; t < 15; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng, 5, 1.5);
        const CharacteristicFunction phi(c);
        const SpectrumReport r = spectrum_report(phi);
        std::vector<cplx> oracle = companion_zeros(phi);
        std::vector<cplx> interior;
        for (cplx z : oracle) {
            if (z.imag() > 1e-5) interior.push_back(z);
        }
        std::size_t clear = 0;
        for (cplx z : interior) {
            if (z.imag() > 1e-4) {
                ++clear;
                CHECK(contains_near(r.eigenvalues, z, 1e-6));
            }
        }
        CHECK(total_multiplicity(r.eigenvalues) >= clear);
        CHECK(total_multiplicity(r.eigenvalues) <= interior.size());
    }
}

TEST_CASE("property: conjugate symmetry") {
    std::mt19937_64 rng(testgen::kSeed + 12);
    for (int t = 0; t < 10; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng, 4, 1.0);
        const CoefficientTriple cc = c.conjugated();
        const cplx z = testgen::random_z(rng);
        const CharacteristicFunction p(c, false), pc(cc, false);
        CHECK(std::abs(pc(-std::conj(z)) - std::conj(p(z))) <= 1e-12 * p.magnitude(z));
        const SpectrumReport r = spectrum_report(c), rc = spectrum_report(cc);
        REQUIRE(r.eigenvalues.size() == rc.eigenvalues.size());
        for (const SpectralZero& s : r.eigenvalues) CHECK(contains_near(rc.eigenvalues, fold(-std::conj(s.z)), 1e-8));
    }
}

TEST_CASE("property: Phi is analytic (vanishing contour integral)") {
    std::mt19937_64 rng(testgen::kSeed + 13);
    for (int t = 0; t < 5; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng);
        const CharacteristicFunction phi(c, false);
        const cplx z0 = testgen::random_z(rng, 1.0);
        const double r = 0.3;
        const int N = 256;
        cplx integral = 0.0;
        double scale = 0.0;
        for (int k = 0; k < N; ++k) {
            const cplx e = std::polar(1.0, 2.0 * kPi * k / N);
            const cplx v = phi(z0 + r * e);
            integral += v * cplx(0, 1) * r * e * (2.0 * kPi / N);
            scale = std::max(scale, std::abs(v));
        }
        CHECK(std::abs(integral) < 1e-11 * scale);
    }
}

TEST_CASE("property: zero set ignores Jost rescaling") {
    std::mt19937_64 rng(testgen::kSeed + 14);
    for (int t = 0; t < 5; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng, 4, 1.0);
        const SpectrumReport base = spectrum_report(c);
        CharacteristicFunction phi(c);
        phi.set_jost_scales(testgen::complex_in_disc(rng, 5.0) + 0.1, testgen::complex_in_disc(rng, 5.0) + 0.1);
        const SpectrumReport r = spectrum_report(phi);
        REQUIRE(r.eigenvalues.size() == base.eigenvalues.size());
        REQUIRE(r.spectral_singularities.size() == base.spectral_singularities.size());
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
            CHECK(std::abs(r.eigenvalues[i].z - base.eigenvalues[i].z) <= 1e-10);
            CHECK(r.eigenvalues[i].multiplicity == base.eigenvalues[i].multiplicity);
        }
    }
}

TEST_CASE("generic zero finder multiplicities") {
    const std::vector<cplx> roots{cplx(1.0, 0.5), cplx(1.0, 0.5), cplx(-0.5, 0.2), cplx(0.3, 1.1),
                                  cplx(0.3, 1.1), cplx(0.3, 1.1)};
    const JetFunction f = [&](cplx z, int order) {
        Jet acc = Jet::constant(1.0, order);
        for (cplx r : roots) acc = acc * (Jet::variable(z, order) - Jet::constant(r, order));
        return acc;
    };
    const Rect region{-2.0, 2.0, -0.1, 2.0};
    CHECK(winding_number(f, region) == 6);
    const std::vector<Zero> zs = find_zeros(f, region);
    REQUIRE(zs.size() == 3);
    for (const Zero& z : zs) {
        if (std::abs(z.z - roots[0]) < 1e-6) CHECK(z.multiplicity == 2);
        else if (std::abs(z.z - roots[2]) < 1e-6) CHECK(z.multiplicity == 1);
        else {
            CHECK(std::abs(z.z - roots[3]) < 1e-6);
            CHECK(z.multiplicity == 3);
        }
    }
}

TEST_CASE("scattering coefficients") {
    const CoefficientTriple free;
    const Scattering s = scattering_coeffs(free, 0.7);
    CHECK(std::abs(s.psi) < 1e-14);
    CHECK(std::abs(s.mu - cplx(1.0)) < 1e-14);
    CHECK_THROWS_AS(scattering_coeffs(free, kPi), PoleError);
    CHECK_THROWS_AS(scattering_coeffs(free, 4.0 * kPi), ContractViolation);

    std::mt19937_64 rng(testgen::kSeed + 15);
    for (int t = 0; t < 10; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng);
        std::vector<double> zetas;
        std::uniform_real_distribution<double> u(-kPi + 0.05, 3.0 * kPi - 0.05);
        while (zetas.size() < 20) {
            const double zeta = u(rng);
            if (std::abs(std::sin(zeta)) > 0.05) zetas.push_back(zeta);
        }
        const ScatteringData d = scattering_data(c, zetas);
        for (double res : d.residual) CHECK(res < 1e-8);
    }
}

TEST_CASE("search region") {
    const CharacteristicFunction phi(CoefficientTriple(0, {1.0}, {0.0}, {-3.0}));
    const Rect r = default_search_region(phi);
    CHECK(r.im_lo < 0.0);
    CHECK(r.im_hi > 1.19476);
    CHECK(r.width() == doctest::Approx(4.0 * kPi));
    CHECK(is_excluded_point(cplx(kPi, 1e-8)));
    CHECK(!is_excluded_point(cplx(kPi / 2, 0.0)));
}
