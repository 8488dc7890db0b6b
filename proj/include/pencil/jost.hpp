#pragma once

#include <string>
#include <vector>

#include "pencil/pencil_core.hpp"

namespace pencil {

enum class Side { plus, minus };

const char* to_string(Side side);
Side side_from_string(const std::string& s);

/// Jost solution f^{+-}(z) (or g^{+-}(z) = f^{+-}(-z)) sampled on a window.
///
/// Values are kept in tail-scaled form: f_n = (-1)^n exp(i n rate) s_n with
/// rate = +z for f^+, -z for f^-, and the signs flipped for g.  Beyond the
/// support on its own side s_n == 1 exactly, and s_n never overflows for
/// large Im z, which is why the scaled form is the stored representation.
struct JostSolution {
    Side side = Side::plus;
    bool reflected = false;  // true for g = f(-z)
    cplx z;                  // spectral parameter, lambda = 2 cos(z/2)
    cplx rate;               // phase rate of the scale factor
    IndexedSeq scaled;
    std::string normalization;

    Window window() const { return scaled.window(); }

    /// (-1)^n exp(i n rate).
    cplx phase(int n) const;

    /// Unscaled f_n; throws NumericRangeError if it is not representable.
    cplx value(int n) const;
    IndexedSeq values() const;

    /// c * f; scaled values are multiplied, the tail convention tag records it.
    JostSolution rescaled(cplx c) const;
};

/// f^+ from the tail f_n = (-1)^n e^{inz} (n > n_max) by backward recursion,
/// on [w_min, n_max + 2].  Requires w_min <= n_min - 2.
JostSolution jost_plus_direct(const CoefficientTriple& coeffs, cplx z, int w_min);

/// f^- from the tail f_n = (-1)^n e^{-inz} (n < n_min) by forward recursion,
/// on [n_min - 2, w_max].  Requires w_max >= n_max + 2.
JostSolution jost_minus_direct(const CoefficientTriple& coeffs, cplx z, int w_max);

/// Either side on an arbitrary window (the recursion always starts at the tail).
JostSolution jost_direct(const CoefficientTriple& coeffs, cplx z, Side side, Window window);

/// g^{+-}(z) = f^{+-}(-z).
JostSolution g_solution(const CoefficientTriple& coeffs, cplx z, Side side, Window window);

/// Default window that covers the support with two indices on either side.
Window default_jost_window(const CoefficientTriple& coeffs);

/// Coefficients alpha_n and kernels K_{n,m} of the series
///   f_n^+ = alpha_n^+ e^{inz}  (1 + sum_{m>=1}  K_{n,m}^+ e^{imz/2}),
///   f_n^- = alpha_n^- e^{-inz} (1 + sum_{m<=-1} K_{n,m}^- e^{-imz/2}).
/// Rows cover `window`; every nonzero kernel of those rows is stored.
struct KernelTable {
    Side side = Side::plus;
    Window window;
    int m_max = 0;
    IndexedSeq alpha;
    std::vector<std::vector<cplx>> rows;  // rows[n - window.lo][|m| - 1]

    /// K_{n,m}; m > 0 for side plus, m < 0 for side minus.  Zero past m_max.
    cplx kernel(int n, int m) const;

    /// 1 + sum_k K_{n,+-k} w^k at w = e^{iz/2}.
    cplx series(int n, cplx w) const;
};

/// Kernel table from the coefficient-matching recurrences, accumulated from
/// the vanishing tail.  Rows span the support widened by `margin` on each side.
KernelTable kernel_table(const CoefficientTriple& coeffs, Side side, int margin = 2);

/// f_n^{+-}(z) evaluated from the finite kernel series.
cplx jost_from_kernels(const KernelTable& table, const CoefficientTriple& coeffs, cplx z, int n);

/// The same series in tail-scaled form, comparable with JostSolution::scaled.
cplx jost_from_kernels_scaled(const KernelTable& table, cplx z, int n);

} // namespace pencil
