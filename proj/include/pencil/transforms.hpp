#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "pencil/jost.hpp"
#include "pencil/pencil_core.hpp"
#include "pencil/spectrum.hpp"

namespace pencil {

/// Jacobi form a_n y_{n+1} + a_{n-1} y_{n-1} + b_n y_n = lt y_n of a pencil
/// with p = 0, where b_n = 2 + q_n - a_n - a_{n-1} and lt = 2 - lambda^2.
struct SturmLiouvilleForm {
    int n_min = 0;
    std::vector<cplx> a;  // on [n_min, n_max]
    IndexedSeq b;         // on [n_min, n_max + 1]

    static cplx lambda_tilde(cplx lambda) { return 2.0 - lambda * lambda; }
};

/// Throws ContractViolation if any p_n is nonzero.
SturmLiouvilleForm to_sturm_liouville(const CoefficientTriple& coeffs);

/// q_n = b_n - 2 + a_n + a_{n-1}; p = 0.
CoefficientTriple from_sturm_liouville(const SturmLiouvilleForm& form);

struct KleinGordonForm {
    int n_min = 0;
    std::vector<cplx> a;
    std::vector<cplx> v;
};

/// Pencil with p = -v and q = v^2, i.e. Delta(a Delta y) + (v - lambda)^2 y = 0.
CoefficientTriple from_klein_gordon(int n_min, const std::vector<cplx>& a, const std::vector<cplx>& v);
CoefficientTriple from_klein_gordon(const KleinGordonForm& form);

/// (a u^D)^{D rho} + (b + 2 lambda c + lambda^2) u = 0 on t = q^n.
///
/// Samples a, b, c are stored for n in [n_min, n_max]; outside the window
/// a(t) = (q - 1)^2 t^2, b(t) = (sqrt(q) - 1)^2 and c = 0, which is the
/// choice that makes the hat pencil free there.
class QPencil {
public:
    QPencil(double q_base, int n_min, std::vector<cplx> a, std::vector<cplx> b, std::vector<cplx> c);

    double q_base() const { return q_; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_min_ + static_cast<int>(a_.size()) - 1; }
    Window window() const { return {n_min(), n_max()}; }

    double t(int n) const { return std::pow(q_, n); }
    cplx a(int n) const;
    cplx b(int n) const;
    cplx c(int n) const;

    std::span<const cplx> a_values() const { return a_; }
    std::span<const cplx> b_values() const { return b_; }
    std::span<const cplx> c_values() const { return c_; }

private:
    double q_;
    int n_min_;
    std::vector<cplx> a_, b_, c_;
};

/// Hat sequences of the three-term pencil
///   a^_n u^_{n+1} + a^_{n-1} u^_{n-1} + (b^_n + 2 l^ c^_n + l^^2) u^_n = 0,
/// l^ = q^{-1/4} lambda, together with the CoefficientTriple that has the same
/// three-term form: a = a^, p = c^, q_n = b^_n + a^_n + a^_{n-1}.
struct HatPencil {
    double q_base = 2.0;
    Window window;  // [n_min, n_max + 1]
    IndexedSeq a_hat;
    IndexedSeq b_hat;
    IndexedSeq c_hat;
    CoefficientTriple bridged;
    double lambda_scale = 1.0;  // q^{1/4}
};

HatPencil q_to_discrete(const QPencil& qp);

/// The q-pencil whose hat pencil is the given three-term triple.  The window
/// grows by one index on the right so that b carries the edge value of h.
QPencil q_from_triple(const CoefficientTriple& coeffs, double q_base);

struct QSpectrumReport {
    std::vector<SpectralZero> eigenvalues;             // lambda in q-pencil units
    std::vector<SpectralZero> spectral_singularities;
    std::vector<SpectralZero> boundary_indeterminate;
    double continuous_lo = -2.0;
    double continuous_hi = 2.0;
    double lambda_scale = 1.0;
    SpectrumReport hat;
};

QSpectrumReport q_spectrum(const QPencil& qp, double tol = 1e-10);

/// Exponent n with t = q^n; throws ContractViolation unless ln t / ln q is
/// within 1e-12 of an integer.
int q_exponent(double q_base, double t);

/// J^{+-}(t, z) = f^_n(z) / sqrt(t) with t = q^n, from the hat-pencil kernel tables.
cplx q_jost(const QPencil& qp, cplx z, double t, Side side = Side::plus);

/// a^_n sqrt(t_n t_{n+1}) (J^-(t_n) J^+(t_{n+1}) - J^-(t_{n+1}) J^+(t_n)), built from J^{+-}.
cplx q_wronskian(const QPencil& qp, cplx z, int n);

/// Residual of the q-difference equation for samples u_n = u(q^n) at interior n.
IndexedSeq apply_q_pencil(const QPencil& qp, cplx lambda, const IndexedSeq& u);

/// (f(qt) - f(t)) / ((q - 1) t) on [first, last - 1].
IndexedSeq q_derivative(const IndexedSeq& f, double q_base);

/// (q - 1) sum_{from <= n < to} q^n f_n.
cplx q_integral(const IndexedSeq& f, double q_base, int from, int to);

} // namespace pencil
