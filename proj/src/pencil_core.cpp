#include "pencil/pencil_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pencil {

cplx IndexedSeq::at(int n) const {
    if (!contains(n)) {
        throw ContractViolation("index " + std::to_string(n) + " outside [" +
                                std::to_string(first()) + ", " + std::to_string(last()) + "]");
    }
    return (*this)[n];
}

double IndexedSeq::max_abs() const {
    double m = 0.0;
    for (const cplx& v : values_) m = std::max(m, std::abs(v));
    return m;
}

CoefficientTriple::CoefficientTriple() : n_min_(0), a_{1.0}, p_{0.0}, q_{0.0} {}

CoefficientTriple::CoefficientTriple(int n_min, std::vector<cplx> a, std::vector<cplx> p,
                                     std::vector<cplx> q)
    : n_min_(n_min), a_(std::move(a)), p_(std::move(p)), q_(std::move(q)) {
    if (a_.empty()) {
        throw ContractViolation("coefficient window must contain at least one index");
    }
    if (p_.size() != a_.size() || q_.size() != a_.size()) {
        throw ContractViolation("a, p, q must have the same length");
    }
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] == cplx(0.0)) {
            throw ContractViolation("a_n must be nonzero (n = " +
                                    std::to_string(n_min_ + static_cast<int>(i)) + ")");
        }
        if (!std::isfinite(std::abs(a_[i])) || !std::isfinite(std::abs(p_[i])) ||
            !std::isfinite(std::abs(q_[i]))) {
            throw ContractViolation("coefficients must be finite");
        }
    }
}

cplx CoefficientTriple::a(int n) const {
    return window().contains(n) ? a_[static_cast<std::size_t>(n - n_min_)] : cplx(1.0);
}

cplx CoefficientTriple::p(int n) const {
    return window().contains(n) ? p_[static_cast<std::size_t>(n - n_min_)] : cplx(0.0);
}

cplx CoefficientTriple::q(int n) const {
    return window().contains(n) ? q_[static_cast<std::size_t>(n - n_min_)] : cplx(0.0);
}

cplx CoefficientTriple::h(int n) const { return 2.0 - a(n) - a(n - 1) + q(n); }

double CoefficientTriple::perturbation(int n) const {
    return std::abs(1.0 - a(n)) + std::abs(p(n)) + std::abs(q(n));
}

bool CoefficientTriple::is_free() const {
    for (int n = n_min(); n <= n_max(); ++n) {
        if (perturbation(n) != 0.0) return false;
    }
    return true;
}

CoefficientTriple CoefficientTriple::conjugated() const {
    auto conj_all = [](std::vector<cplx> v) {
        for (auto& x : v) x = std::conj(x);
        return v;
    };
    return {n_min_, conj_all(a_), conj_all(p_), conj_all(q_)};
}

DerivedSequences derived_sequences(const CoefficientTriple& coeffs) {
    const Window w{coeffs.n_min(), coeffs.n_max() + 1};
    DerivedSequences d{IndexedSeq::zeros(w), IndexedSeq::zeros(w)};
    for (int n = w.lo; n <= w.hi; ++n) {
        d.h[n] = coeffs.h(n);
        d.b[n] = 2.0 + coeffs.q(n) - coeffs.a(n) - coeffs.a(n - 1);
    }
    return d;
}

cplx z_to_lambda(cplx z) { return 2.0 * std::cos(z / 2.0); }

cplx lambda_to_z(cplx lambda) {
    cplx z = 2.0 * std::acos(lambda / 2.0);
    if (z.imag() < 0.0) z = -z;
    if (z.real() < -kPi) z += 4.0 * kPi;
    return z;
}

IndexedSeq apply_pencil(const CoefficientTriple& coeffs, cplx lambda, const IndexedSeq& y) {
    if (y.size() < 3) {
        throw ContractViolation("apply_pencil needs y on at least three consecutive indices");
    }
    const Window interior{y.first() + 1, y.last() - 1};
    IndexedSeq r = IndexedSeq::zeros(interior);
    const cplx shift = lambda * lambda - 2.0;
    for (int n = interior.lo; n <= interior.hi; ++n) {
        const cplx diag = coeffs.h(n) + 2.0 * lambda * coeffs.p(n) + shift;
        r[n] = coeffs.a(n) * y[n + 1] + coeffs.a(n - 1) * y[n - 1] + diag * y[n];
    }
    return r;
}

ConditionReport condition_report(const CoefficientTriple& coeffs, double eps, double delta) {
    if (!(eps > 0.0)) {
        throw ContractViolation("condition_report: eps must be positive");
    }
    if (!(delta >= 0.5 && delta <= 1.0)) {
        throw ContractViolation("condition_report: delta must lie in [1/2, 1]");
    }
    ConditionReport rep;
    for (int n = coeffs.n_min(); n <= coeffs.n_max(); ++n) {
        const double pert = coeffs.perturbation(n);
        const double an = std::abs(static_cast<double>(n));
        rep.pq_sum += an * pert;
        rep.condition1_margin = std::max(rep.condition1_margin, std::exp(eps * an) * pert);
        rep.condition2_margin =
            std::max(rep.condition2_margin, std::exp(eps * std::pow(an, delta)) * pert);
    }
    rep.satisfies_pq = std::isfinite(rep.pq_sum);
    return rep;
}

} // namespace pencil
