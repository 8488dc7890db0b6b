#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "pencil/errors.hpp"

namespace pencil {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Closed integer index range [lo, hi].
struct Window {
    int lo = 0;
    int hi = 0;

    int size() const { return hi - lo + 1; }
    bool contains(int n) const { return n >= lo && n <= hi; }
    friend bool operator==(const Window&, const Window&) = default;
};

/// Complex sequence stored on a window of consecutive integer indices.
class IndexedSeq {
public:
    IndexedSeq() = default;
    IndexedSeq(int first, std::vector<cplx> values) : first_(first), values_(std::move(values)) {}
    static IndexedSeq zeros(Window w) { return IndexedSeq(w.lo, std::vector<cplx>(w.size())); }

    int first() const { return first_; }
    int last() const { return first_ + static_cast<int>(values_.size()) - 1; }
    Window window() const { return {first(), last()}; }
    std::size_t size() const { return values_.size(); }
    bool contains(int n) const { return n >= first() && n <= last(); }

    cplx operator[](int n) const { return values_[static_cast<std::size_t>(n - first_)]; }
    cplx& operator[](int n) { return values_[static_cast<std::size_t>(n - first_)]; }
    cplx at(int n) const;

    std::span<const cplx> values() const { return values_; }
    double max_abs() const;

private:
    int first_ = 0;
    std::vector<cplx> values_;
};

/// Coefficients {a_n}, {p_n}, {q_n} of the pencil
///   Delta(a_{n-1} Delta y_{n-1}) + (q_n + 2 lambda p_n + lambda^2) y_n,
/// stored on [n_min, n_max]; outside the window a = 1 and p = q = 0.
class CoefficientTriple {
public:
    /// The unperturbed pencil (a = 1, p = q = 0), stored on the window [0, 0].
    CoefficientTriple();

    /// Throws ContractViolation on length mismatch, empty storage or a zero a_n.
    CoefficientTriple(int n_min, std::vector<cplx> a, std::vector<cplx> p, std::vector<cplx> q);

    static CoefficientTriple free_pencil() { return {}; }

    int n_min() const { return n_min_; }
    int n_max() const { return n_min_ + static_cast<int>(a_.size()) - 1; }
    Window window() const { return {n_min(), n_max()}; }

    cplx a(int n) const;
    cplx p(int n) const;
    cplx q(int n) const;

    /// h_n = 2 - a_n - a_{n-1} + q_n; zero outside [n_min, n_max + 1].
    cplx h(int n) const;

    /// |1 - a_n| + |p_n| + |q_n|.
    double perturbation(int n) const;

    bool is_free() const;
    CoefficientTriple conjugated() const;

    std::span<const cplx> a_values() const { return a_; }
    std::span<const cplx> p_values() const { return p_; }
    std::span<const cplx> q_values() const { return q_; }

private:
    int n_min_ = 0;
    std::vector<cplx> a_;
    std::vector<cplx> p_;
    std::vector<cplx> q_;
};

/// h_n = 2 - a_n - a_{n-1} + q_n next to the Sturm-Liouville diagonal
/// b_n = 2 + q_n - a_n - a_{n-1}; both on [n_min, n_max + 1].
struct DerivedSequences {
    IndexedSeq h;
    IndexedSeq b;
};

DerivedSequences derived_sequences(const CoefficientTriple& coeffs);

/// lambda = 2 cos(z / 2).
cplx z_to_lambda(cplx z);

/// Inverse of z_to_lambda onto Re z in [-pi, 3pi], Im z >= 0.  Real lambda in
/// (-2, 2) maps to real z in (0, 2pi); real |lambda| > 2 maps to Im z > 0.
cplx lambda_to_z(cplx lambda);

/// A point of the closed upper half-strip with both coordinates.
struct SpectralPoint {
    cplx z;
    cplx lambda;

    static SpectralPoint from_z(cplx z) { return {z, z_to_lambda(z)}; }
    static SpectralPoint from_lambda(cplx lambda) { return {lambda_to_z(lambda), lambda}; }
};

/// Residual r_n = a_n y_{n+1} + a_{n-1} y_{n-1} + (h_n + 2 lambda p_n + lambda^2 - 2) y_n
/// on the interior of y's window.  Needs at least three samples.
IndexedSeq apply_pencil(const CoefficientTriple& coeffs, cplx lambda, const IndexedSeq& y);

struct ConditionReport {
    bool satisfies_pq = true;
    double pq_sum = 0.0;            // sum |n| (|1-a_n| + |p_n| + |q_n|)
    double condition1_margin = 0.0; // sup exp(eps |n|) (...)
    double condition2_margin = 0.0; // sup exp(eps |n|^delta) (...)
};

/// Requires eps > 0 and 1/2 <= delta <= 1.
ConditionReport condition_report(const CoefficientTriple& coeffs, double eps, double delta);

} // namespace pencil
