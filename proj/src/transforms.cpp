#include "pencil/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pencil {

SturmLiouvilleForm to_sturm_liouville(const CoefficientTriple& coeffs) {
    for (int n = coeffs.n_min(); n <= coeffs.n_max(); ++n) {
        if (coeffs.p(n) != cplx(0.0)) {
            throw ContractViolation("to_sturm_liouville: p_n must vanish (n = " + std::to_string(n) + ")");
        }
    }
    SturmLiouvilleForm f;
    f.n_min = coeffs.n_min();
    f.a.assign(coeffs.a_values().begin(), coeffs.a_values().end());
    f.b = derived_sequences(coeffs).b;
    return f;
}

CoefficientTriple from_sturm_liouville(const SturmLiouvilleForm& form) {
    if (form.a.empty()) {
        throw ContractViolation("from_sturm_liouville: empty coefficient window");
    }
    const int n_max = form.n_min + static_cast<int>(form.a.size()) - 1;
    auto a = [&](int n) {
        return (n >= form.n_min && n <= n_max) ? form.a[static_cast<std::size_t>(n - form.n_min)]
                                               : cplx(1.0);
    };
    std::vector<cplx> q(form.a.size()), p(form.a.size(), 0.0);
    for (int n = form.n_min; n <= n_max; ++n) {
        q[static_cast<std::size_t>(n - form.n_min)] = form.b.at(n) - 2.0 + a(n) + a(n - 1);
    }
    return {form.n_min, form.a, p, q};
}

CoefficientTriple from_klein_gordon(int n_min, const std::vector<cplx>& a, const std::vector<cplx>& v) {
    if (a.size() != v.size()) {
        throw ContractViolation("from_klein_gordon: a and v must have the same length");
    }
    std::vector<cplx> p(v.size()), q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        p[i] = -v[i];
        q[i] = v[i] * v[i];
    }
    return {n_min, a, p, q};
}

CoefficientTriple from_klein_gordon(const KleinGordonForm& form) {
    return from_klein_gordon(form.n_min, form.a, form.v);
}

// ---------------------------------------------------------------------------

QPencil::QPencil(double q_base, int n_min, std::vector<cplx> a, std::vector<cplx> b, std::vector<cplx> c)
    : q_(q_base), n_min_(n_min), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (!(q_ > 1.0) || !std::isfinite(q_)) {
        throw ContractViolation("QPencil: q must be a finite number greater than 1");
    }
    if (a_.empty() || b_.size() != a_.size() || c_.size() != a_.size()) {
        throw ContractViolation("QPencil: a, b, c must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] == cplx(0.0)) {
            throw ContractViolation("QPencil: a(t) must be nonzero on the samples");
        }
        if (!std::isfinite(std::abs(a_[i])) || !std::isfinite(std::abs(b_[i])) ||
            !std::isfinite(std::abs(c_[i]))) {
            throw ContractViolation("QPencil: samples must be finite");
        }
    }
}

cplx QPencil::a(int n) const {
    if (window().contains(n)) return a_[static_cast<std::size_t>(n - n_min_)];
    const double tn = t(n);
    return (q_ - 1.0) * (q_ - 1.0) * tn * tn;
}

cplx QPencil::b(int n) const {
    if (window().contains(n)) return b_[static_cast<std::size_t>(n - n_min_)];
    const double s = std::sqrt(q_) - 1.0;
    return s * s;
}

cplx QPencil::c(int n) const {
    return window().contains(n) ? c_[static_cast<std::size_t>(n - n_min_)] : cplx(0.0);
}

HatPencil q_to_discrete(const QPencil& qp) {
    const double q = qp.q_base();
    const double sq = std::sqrt(q);
    const double q4 = std::pow(q, 0.25);
    HatPencil h;
    h.q_base = q;
    h.window = {qp.n_min(), qp.n_max() + 1};
    h.lambda_scale = q4;
    auto a_hat = [&](int n) -> cplx {
        if (!qp.window().contains(n)) return 1.0;
        const double tn = qp.t(n);
        return qp.a(n) / ((q - 1.0) * (q - 1.0) * tn * tn);
    };
    h.a_hat = IndexedSeq::zeros(h.window);
    h.b_hat = IndexedSeq::zeros(h.window);
    h.c_hat = IndexedSeq::zeros(h.window);
    for (int n = h.window.lo; n <= h.window.hi; ++n) {
        h.a_hat[n] = a_hat(n);
        h.b_hat[n] = qp.b(n) / sq - sq * a_hat(n) - a_hat(n - 1) / sq;
        h.c_hat[n] = qp.c(n) / q4;
    }
    std::vector<cplx> a, p, qq;
    for (int n = h.window.lo; n <= h.window.hi; ++n) {
        if (h.a_hat[n] == cplx(0.0)) {
            throw ContractViolation("q_to_discrete: hat coefficient a^_" + std::to_string(n) + " vanishes");
        }
        const cplx a_prev = (n == h.window.lo) ? cplx(1.0) : h.a_hat[n - 1];
        a.push_back(h.a_hat[n]);
        p.push_back(h.c_hat[n]);
        qq.push_back(h.b_hat[n] + h.a_hat[n] + a_prev);
    }
    h.bridged = CoefficientTriple(h.window.lo, a, p, qq);
    return h;
}

QPencil q_from_triple(const CoefficientTriple& coeffs, double q_base) {
    if (!(q_base > 1.0)) {
        throw ContractViolation("q_from_triple: q must exceed 1");
    }
    const double sq = std::sqrt(q_base);
    const double q4 = std::pow(q_base, 0.25);
    std::vector<cplx> a, b, c;
    for (int n = coeffs.n_min(); n <= coeffs.n_max() + 1; ++n) {
        const double tn = std::pow(q_base, n);
        const double scale = (q_base - 1.0) * (q_base - 1.0) * tn * tn;
        const cplx b_hat = coeffs.q(n) - coeffs.a(n) - coeffs.a(n - 1);
        a.push_back(coeffs.a(n) * scale);
        b.push_back(sq * (b_hat + sq * coeffs.a(n) + coeffs.a(n - 1) / sq));
        c.push_back(q4 * coeffs.p(n));
    }
    return {q_base, coeffs.n_min(), a, b, c};
}

QSpectrumReport q_spectrum(const QPencil& qp, double tol) {
    const HatPencil h = q_to_discrete(qp);
    QSpectrumReport r;
    r.hat = spectrum_report(h.bridged, tol);
    r.lambda_scale = h.lambda_scale;
    auto scaled = [&](std::vector<SpectralZero> v) {
        for (SpectralZero& s : v) s.lambda *= h.lambda_scale;
        return v;
    };
    r.eigenvalues = scaled(r.hat.eigenvalues);
    r.spectral_singularities = scaled(r.hat.spectral_singularities);
    r.boundary_indeterminate = scaled(r.hat.boundary_indeterminate);
    r.continuous_lo = -2.0 * h.lambda_scale;
    r.continuous_hi = 2.0 * h.lambda_scale;
    return r;
}

int q_exponent(double q_base, double t) {
    if (!(t > 0.0)) {
        throw ContractViolation("q_exponent: t must be positive");
    }
    const double x = std::log(t) / std::log(q_base);
    const double n = std::round(x);
    if (std::abs(x - n) > 1e-12) {
        throw ContractViolation("t is not an integer power of q");
    }
    return static_cast<int>(n);
}

cplx q_jost(const QPencil& qp, cplx z, double t, Side side) {
    const int n = q_exponent(qp.q_base(), t);
    const HatPencil h = q_to_discrete(qp);
    const int margin = std::max({2, h.bridged.n_min() - n, n - h.bridged.n_max()});
    const KernelTable table = kernel_table(h.bridged, side, margin);
    return jost_from_kernels(table, h.bridged, z, n) / std::sqrt(qp.t(n));
}

cplx q_wronskian(const QPencil& qp, cplx z, int n) {
    const HatPencil h = q_to_discrete(qp);
    const double t0 = qp.t(n), t1 = qp.t(n + 1);
    const cplx jm0 = q_jost(qp, z, t0, Side::minus), jm1 = q_jost(qp, z, t1, Side::minus);
    const cplx jp0 = q_jost(qp, z, t0, Side::plus), jp1 = q_jost(qp, z, t1, Side::plus);
    const cplx a_hat = h.window.contains(n) ? h.a_hat[n] : cplx(1.0);
    return a_hat * std::sqrt(t0 * t1) * (jm0 * jp1 - jm1 * jp0);
}

IndexedSeq apply_q_pencil(const QPencil& qp, cplx lambda, const IndexedSeq& u) {
    if (u.size() < 3) {
        throw ContractViolation("apply_q_pencil needs u on at least three consecutive exponents");
    }
    const double q = qp.q_base();
    const IndexedSeq du = q_derivative(u, q);
    IndexedSeq g = IndexedSeq::zeros(du.window());
    for (int n = g.first(); n <= g.last(); ++n) g[n] = qp.a(n) * du[n];
    const Window interior{u.first() + 1, u.last() - 1};
    IndexedSeq r = IndexedSeq::zeros(interior);
    for (int n = interior.lo; n <= interior.hi; ++n) {
        // (g^D)(t / q) = (g(t) - g(t / q)) / ((q - 1) t / q)
        const cplx dg = (g[n] - g[n - 1]) / ((q - 1.0) * qp.t(n - 1));
        r[n] = dg + (qp.b(n) + 2.0 * lambda * qp.c(n) + lambda * lambda) * u[n];
    }
    return r;
}

IndexedSeq q_derivative(const IndexedSeq& f, double q_base) {
    if (f.size() < 2) {
        throw ContractViolation("q_derivative needs at least two samples");
    }
    IndexedSeq d = IndexedSeq::zeros({f.first(), f.last() - 1});
    for (int n = d.first(); n <= d.last(); ++n) {
        d[n] = (f[n + 1] - f[n]) / ((q_base - 1.0) * std::pow(q_base, n));
    }
    return d;
}

cplx q_integral(const IndexedSeq& f, double q_base, int from, int to) {
    cplx s = 0.0;
    for (int n = from; n < to; ++n) s += std::pow(q_base, n) * f.at(n);
    return (q_base - 1.0) * s;
}

} // namespace pencil
