#include <doctest.h>

#include "generators.hpp"
#include "pencil/principal.hpp"
#include "pencil/spectrum.hpp"

using namespace pencil;

namespace {

double binom(int r, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (r - k + i) / i;
    return b;
}

/// Central difference of order r with step h, Richardson-extrapolated twice.
IndexedSeq fd_derivative(const CoefficientTriple& c, cplx lam, int r, double h, Window w) {
    auto central = [&](double step) {
        IndexedSeq acc = IndexedSeq::zeros(w);
        for (int k = 0; k <= r; ++k) {
            const cplx at = lam + (0.5 * r - k) * step;
            const IndexedSeq f = lambda_jost_stack(c, at, 0, Side::plus, w).layer(0);
            const double wk = (k % 2 == 0 ? 1.0 : -1.0) * binom(r, k);
            for (int n = w.lo; n <= w.hi; ++n) acc[n] += wk * f[n];
        }
        for (int n = w.lo; n <= w.hi; ++n) acc[n] /= std::pow(step, r);
        return acc;
    };
    const IndexedSeq a = central(h), b = central(0.5 * h), c4 = central(0.25 * h);
    IndexedSeq out = IndexedSeq::zeros(w);
    for (int n = w.lo; n <= w.hi; ++n) {
        const cplx r1 = (4.0 * b[n] - a[n]) / 3.0, r2 = (4.0 * c4[n] - b[n]) / 3.0;
        out[n] = (16.0 * r2 - r1) / 15.0;
    }
    return out;
}

IndexedSeq synthetic(Window w, auto f) {
    IndexedSeq y = IndexedSeq::zeros(w);
    for (int n = w.lo; n <= w.hi; ++n) y[n] = f(n);
    return y;
}

} // namespace

TEST_CASE("free lambda derivative") {
    // F_n = (-1)^n w^{2n}, w = (lambda - sqrt(lambda^2 - 4)) / 2 branch with |w| < 1 off the cut.
    const CoefficientTriple c;
    const cplx lam(2.5, 0.3);
    const LambdaDerivativeStack st = lambda_jost_stack(c, lam, 2, Side::plus, Window{-3, 3});
    const cplx z = lambda_to_z(lam);
    const cplx w = std::exp(cplx(0, 0.5) * z);
    const cplx dw = w * w / (w * w - 1.0);  // from w^2 - lambda w + 1 = 0
    for (int n = -3; n <= 3; ++n) {
        const double sgn = n % 2 == 0 ? 1.0 : -1.0;
        CHECK(std::abs(st.derivative(0, n) - sgn * std::pow(w, 2 * n)) < 1e-13);
        CHECK(std::abs(st.derivative(1, n) - sgn * 2.0 * n * std::pow(w, 2 * n - 1) * dw) < 1e-12);
    }
}

TEST_CASE("property: lambda derivatives match finite differences") {
    std::mt19937_64 rng(testgen::kSeed + 30);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.4, 1.5);
    const std::array<double, 4> steps{0.0, 5e-3, 2e-2, 4e-2};
    for (int t = 0; t < 10; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng, 4, 0.5);
        const cplx lam(re(rng), (t % 2 == 0 ? 1.0 : -1.0) * im(rng));
        const Window w{c.n_min() - 3, c.n_max() + 3};
        const LambdaDerivativeStack st = lambda_jost_stack(c, lam, 3, Side::plus, w);
        for (int r = 1; r <= 3; ++r) {
            // steps scale with the distance to the cut and the branch points
            const double d = std::min({std::abs(lam.imag()), std::abs(lam - 2.0), std::abs(lam + 2.0)});
            const IndexedSeq fd = fd_derivative(c, lam, r, d * steps[static_cast<std::size_t>(r)], w);
            const IndexedSeq ex = st.layer(r);
            double err = 0.0;
            for (int n = w.lo; n <= w.hi; ++n) err = std::max(err, std::abs(fd[n] - ex[n]));
            INFO("r = ", r, " lambda = ", lam.real(), ",", lam.imag());
            CHECK(err <= 1e-5 * ex.max_abs());
        }
    }
}

TEST_CASE("branch points") {
    const CoefficientTriple c;
    CHECK_THROWS_AS(lambda_jost_stack(c, cplx(2.0), 1, Side::plus), BranchPointError);
    CHECK_NOTHROW(lambda_jost_stack(c, cplx(2.0), 0, Side::plus));
    CHECK_THROWS_AS(lambda_jost_stack(c, cplx(0.5, 0.5), 16, Side::plus), ContractViolation);
}

TEST_CASE("H equals Phi") {
    const CoefficientTriple c(0, {1.1, 0.8}, {0.2, -0.1}, {0.3, 0.5});
    const cplx lam(0.4, 0.7);
    CHECK(std::abs(h_function(c, lam) - phi(c, lambda_to_z(lam))) < 1e-12 * std::abs(phi(c, lambda_to_z(lam))));
}

TEST_CASE("weighted norms") {
    const IndexedSeq y(-1, {1.0, 2.0, 1.0});
    CHECK(weighted_norm(y, 0, WeightSign::plus) == doctest::Approx(6.0));
    CHECK(weighted_norm(y, 1, WeightSign::plus) == doctest::Approx(4.0 + 4.0 + 4.0));
    CHECK(weighted_norm(y, 1, WeightSign::minus) == doctest::Approx(0.25 + 4.0 + 0.25));
    CHECK_THROWS_AS(weighted_norm(y, -1, WeightSign::plus), ContractViolation);
}

TEST_CASE("growth classification of model sequences") {
    const Window w{-200, 200};
    CHECK(classify_growth(synthetic(w, [](int n) { return cplx(std::exp(-0.3 * std::abs(n))); })).tag == "l2");
    CHECK(classify_growth(synthetic(w, [](int n) { return std::exp(cplx(0, 0.7 * n)); })).tag == "H_-1");
    CHECK(classify_growth(synthetic(w, [](int n) { return cplx(n) * std::exp(cplx(0, 0.7 * n)); })).tag == "H_-2");
    CHECK(classify_growth(synthetic(w, [](int n) { return cplx(1.0 * n * n); })).tag == "H_-3");
    CHECK(classify_growth(synthetic(w, [](int n) { return cplx(std::exp(0.1 * n)); })).tag == "exponential");
    CHECK_THROWS_AS(classify_growth(IndexedSeq(0, std::vector<cplx>(10, 1.0))), ContractViolation);
}

TEST_CASE("principal vectors at an eigenvalue") {
    const CoefficientTriple c(0, {1.0}, {0.0}, {-3.0});
    const SpectrumReport rep = spectrum_report(c);
    for (const SpectralZero& s : rep.eigenvalues) {
        const PrincipalVectorStack st = principal_vectors(c, SpectralPoint{s.z, s.lambda}, 1);
        CHECK(st.kind == ZeroKind::eigenvalue);
        CHECK(st.growth[0].in_l2);
        CHECK(st.chain_residual[0] < 1e-10);
        const Linkage link = linkage_coefficients(c, SpectralPoint{s.z, s.lambda}, 0);
        CHECK(link.residual[0] < 1e-10);
    }
    CHECK_THROWS_AS(principal_vectors(c, SpectralPoint::from_lambda(cplx(3.0, 0.5)), 1), ContractViolation);
}

TEST_CASE("principal vectors at a double spectral singularity") {
    const CoefficientTriple c(0, {1.0}, {0.0}, {cplx(0, 2)});
    for (double zr : {0.5 * kPi, 2.5 * kPi}) {
        const SpectralPoint pt = SpectralPoint::from_z(zr);
        CHECK(measured_multiplicity(c, pt.z) == 2);
        const PrincipalVectorStack st = principal_vectors(c, pt, 2);
        CHECK(st.kind == ZeroKind::singularity);
        CHECK(st.growth[0].tag == "H_-1");
        CHECK(!st.growth[0].in_l2);
        CHECK(st.growth[1].tag == "H_-2");
        for (double r : st.chain_residual) CHECK(r < 1e-8);
        CHECK_THROWS_AS(principal_vectors(c, pt, 3), ContractViolation);
    }
}

TEST_CASE("property: chain residuals at random eigenvalues") {
    std::mt19937_64 rng(testgen::kSeed + 31);
    int seen = 0;
    for (int t = 0; t < 30 && seen < 10; ++t) {
        const CoefficientTriple c = testgen::random_triple(rng, 3, 1.5);
        for (const SpectralZero& s : spectrum_report(c).eigenvalues) {
            if (s.z.imag() < 0.05) continue;
            const PrincipalVectorStack st = principal_vectors(c, SpectralPoint{s.z, s.lambda}, s.multiplicity);
            for (double r : st.chain_residual) CHECK(r < 1e-6);
            CHECK(st.growth[0].in_l2);
            ++seen;
        }
    }
    CHECK(seen > 0);
}
