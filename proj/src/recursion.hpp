#pragma once

// Tail-scaled three-term recursions shared by the Jost, spectrum and principal
// modules.  Templated on the scalar so the same code runs on plain complex
// values and on Taylor jets (exact derivatives in z or lambda).
//
// With w = e^{iz/2}, lambda = w + 1/w and the scaled unknowns
//   f_n^+ = (-1)^n e^{inz} s_n,   f_n^- = (-1)^n e^{-inz} t_n,
// the pencil equation becomes
//   a_{n-1} s_{n-1} = d_n s_n - a_n w^4 s_{n+1},
//   a_n     t_{n+1} = d_n t_n - a_{n-1} w^4 t_{n-1},
// with d_n = 1 + 2 p_n w + h_n w^2 + 2 p_n w^3 + w^4.  Every coefficient is a
// polynomial in w, so nothing overflows as Im z grows.

#include <algorithm>
#include <vector>

#include "pencil/pencil_core.hpp"

namespace pencil::detail {

template <class T>
struct WPowers {
    T w, w2, w3, w4, one;

    explicit WPowers(const T& w_in)
        : w(w_in), w2(w_in * w_in), w3(w2 * w_in), w4(w2 * w2), one(w_in * cplx(0.0) + cplx(1.0)) {}

    T d(const CoefficientTriple& c, int n) const {
        const cplx p2 = 2.0 * c.p(n);
        return one + w * p2 + w2 * c.h(n) + w3 * p2 + w4;
    }
};

/// s_n for n in [lo, hi]; s_n = 1 for n > n_max.
template <class T>
std::vector<T> scaled_plus(const CoefficientTriple& c, const WPowers<T>& pw, int lo, int hi) {
    const int top = std::max(hi, c.n_max() + 2);
    const int bottom = std::min(lo, top - 1);
    std::vector<T> s(static_cast<std::size_t>(top - bottom + 1), pw.one);
    auto at = [&](int n) -> T& { return s[static_cast<std::size_t>(n - bottom)]; };
    for (int n = std::min(top - 1, c.n_max() + 1); n > bottom; --n) {
        at(n - 1) = (pw.d(c, n) * at(n) - pw.w4 * at(n + 1) * c.a(n)) / c.a(n - 1);
    }
    return {s.begin() + (lo - bottom), s.begin() + (hi - bottom) + 1};
}

/// t_n for n in [lo, hi]; t_n = 1 for n < n_min.
template <class T>
std::vector<T> scaled_minus(const CoefficientTriple& c, const WPowers<T>& pw, int lo, int hi) {
    const int bottom = std::min(lo, c.n_min() - 2);
    const int top = std::max(hi, bottom + 1);
    std::vector<T> t(static_cast<std::size_t>(top - bottom + 1), pw.one);
    auto at = [&](int n) -> T& { return t[static_cast<std::size_t>(n - bottom)]; };
    for (int n = std::max(bottom + 1, c.n_min()); n < top; ++n) {
        at(n + 1) = (pw.d(c, n) * at(n) - pw.w4 * at(n - 1) * c.a(n - 1)) / c.a(n);
    }
    return {t.begin() + (lo - bottom), t.begin() + (hi - bottom) + 1};
}

/// Phi(z) = W[f^-, f^+] at n = n_min - 1 from the scaled plus solution:
///   Phi = w^{-2} s_{n_min-1} - w^2 s_{n_min}   (t = 1 and a = 1 there).
/// Returns Phi * w^2 = s_{n_min-1} - w^4 s_{n_min}, a polynomial in w.
template <class T>
T phi_times_w2(const CoefficientTriple& c, const WPowers<T>& pw) {
    const int n0 = c.n_min() - 1;
    const std::vector<T> s = scaled_plus(c, pw, n0, n0 + 1);
    return s[0] - pw.w4 * s[1];
}

} // namespace pencil::detail
