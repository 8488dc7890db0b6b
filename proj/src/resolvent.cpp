#include "pencil/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "pencil/spectrum.hpp"

namespace pencil {

namespace {

constexpr cplx kI(0.0, 1.0);

double sign_parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

std::optional<cplx> nearby_zero(const CharacteristicFunction& f, cplx z) {
    for (int it = 0; it < 40; ++it) {
        const Jet j = f.jet(z, 1);
        if (j[1] == cplx(0.0)) return std::nullopt;
        const cplx step = j[0] / j[1];
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) return z;
    }
    return std::nullopt;
}

/// sum_{k >= 0} exp(-2 k y) = 1 / (1 - exp(-2y)).
double geometric(double y) { return 1.0 / -std::expm1(-2.0 * y); }

} // namespace

GreenKernel::GreenKernel(const CoefficientTriple& coeffs, cplx z, Window window)
    : z_(z), window_(window) {
    if (window.hi < window.lo) {
        throw ContractViolation("GreenKernel: empty window");
    }
    const Window jw{std::min(window.lo, coeffs.n_min() - 2), std::max(window.hi, coeffs.n_max() + 2)};
    f_minus_ = jost_direct(coeffs, z, Side::minus, jw);
    f_plus_ = jost_direct(coeffs, z, Side::plus, jw);
    phi_ = wronskian(f_minus_, f_plus_, coeffs, coeffs.n_min() - 1);
    const CharacteristicFunction cf(coeffs, false);
    if (std::abs(phi_) <= 1e-12 * cf.magnitude(z)) {
        const std::optional<cplx> near = nearby_zero(cf, z);
        throw SpectralPointError("resolvent requested at a zero of Phi (|Phi| = " +
                                     std::to_string(std::abs(phi_)) + ")",
                                 near);
    }
}

cplx GreenKernel::operator()(int n, int m) const {
    if (!window_.contains(n) || !window_.contains(m)) {
        throw ContractViolation("GreenKernel: (n, m) outside the kernel window");
    }
    const double sign = sign_parity(n + m);
    if (m <= n - 1) {
        return sign * std::exp(kI * static_cast<double>(n - m) * z_) * f_minus_.scaled[m] *
               f_plus_.scaled[n] / phi_;
    }
    return sign * std::exp(kI * static_cast<double>(m - n) * z_) * f_plus_.scaled[m] *
           f_minus_.scaled[n] / phi_;
}

cplx green_kernel(const CoefficientTriple& coeffs, cplx z, int n, int m) {
    const GreenKernel g(coeffs, z, {std::min(n, m), std::max(n, m)});
    return g(n, m);
}

Window resolvent_window(const CoefficientTriple& coeffs, const IndexedSeq& phi_vec, int pad) {
    int lo = coeffs.n_min(), hi = coeffs.n_max();
    if (phi_vec.size() > 0) {
        lo = std::min(lo, phi_vec.first());
        hi = std::max(hi, phi_vec.last());
    }
    return {lo - pad, hi + pad};
}

IndexedSeq apply_resolvent(const CoefficientTriple& coeffs, cplx z, const IndexedSeq& phi_vec,
                           std::optional<Window> out) {
    const Window w = out.value_or(resolvent_window(coeffs, phi_vec));
    if (phi_vec.size() == 0) return IndexedSeq::zeros(w);
    const Window kw{std::min(w.lo, phi_vec.first()), std::max(w.hi, phi_vec.last())};
    const GreenKernel g(coeffs, z, kw);
    IndexedSeq y = IndexedSeq::zeros(w);
    for (int n = w.lo; n <= w.hi; ++n) {
        cplx acc = 0.0;
        for (int m = phi_vec.first(); m <= phi_vec.last(); ++m) {
            if (phi_vec[m] != cplx(0.0)) acc += g(n, m) * phi_vec[m];
        }
        y[n] = acc;
    }
    return y;
}

NormProbe resolvent_norm_probe(const CoefficientTriple& coeffs, cplx z, std::optional<int> m0_opt) {
    const double y = z.imag();
    if (!(y > 0.0)) {
        throw ContractViolation("resolvent_norm_probe: Im z must be positive");
    }
    const int m0 = m0_opt.value_or(coeffs.n_min() - 5);
    const int tail_top = std::min(m0, coeffs.n_min());  // h_m = conj of the free tail below this
    const Window jw{std::min(m0, coeffs.n_min()) - 2, std::max(m0, coeffs.n_max()) + 2};
    const JostSolution fm = jost_direct(coeffs, z, Side::minus, jw);
    const JostSolution fp = jost_direct(coeffs, z, Side::plus, jw);

    NormProbe p;
    p.z = z;
    p.m0 = m0;
    p.phi = wronskian(fm, fp, coeffs, coeffs.n_min() - 1);
    const CharacteristicFunction cf(coeffs, false);
    if (std::abs(p.phi) <= 1e-12 * cf.magnitude(z)) {
        throw SpectralPointError("norm probe requested at a zero of Phi", nearby_zero(cf, z));
    }

    // ||h||^2: free tail m < tail_top, |f^-_m|^2 = exp(2 m y), plus stored values up to m0 - 1.
    double h2 = std::exp(2.0 * (tail_top - 1) * y) * geometric(y);
    for (int m = tail_top; m <= m0 - 1; ++m) h2 += std::norm(fm.value(m));
    p.h_norm = std::sqrt(h2);

    // ||f^+||^2 over n >= m0: stored values up to n_max, free tail exp(-2 n y) beyond.
    const int free_from = std::max(m0, coeffs.n_max() + 1);
    double f2 = std::exp(-2.0 * free_from * y) * geometric(y);
    for (int n = m0; n < free_from; ++n) f2 += std::norm(fp.value(n));
    p.f_plus_norm = std::sqrt(f2);

    p.lower_bound = p.h_norm * p.f_plus_norm / std::abs(p.phi);

    // Explicit entries of h down to relative size 1e-16.
    const int depth = static_cast<int>(std::ceil(16.0 * std::log(10.0) / y)) + 1;
    const Window hw{m0 - depth, m0 - 1};
    const JostSolution fh = jost_direct(coeffs, z, Side::minus, {hw.lo, std::max(hw.hi, coeffs.n_max() + 2)});
    p.h = IndexedSeq::zeros(hw);
    for (int m = hw.lo; m <= hw.hi; ++m) p.h[m] = std::conj(fh.value(m));
    return p;
}

} // namespace pencil
