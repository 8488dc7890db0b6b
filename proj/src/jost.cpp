#include "pencil/jost.hpp"

#include <cmath>
#include <string>

#include "recursion.hpp"

namespace pencil {

namespace {

constexpr cplx kI(0.0, 1.0);

double sign_parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

std::string normalization_tag(Side side, bool reflected) {
    std::string tag = side == Side::plus ? "f_n = (-1)^n exp(+i n z) for n > n_max"
                                         : "f_n = (-1)^n exp(-i n z) for n < n_min";
    if (reflected) tag = "g(z) = f(-z); " + tag;
    return tag;
}

JostSolution make_solution(const CoefficientTriple& coeffs, cplx z, Side side, Window window,
                           bool reflected) {
    if (window.hi < window.lo) {
        throw ContractViolation("empty Jost window");
    }
    const cplx z_eval = reflected ? -z : z;
    const detail::WPowers<cplx> pw(std::exp(kI * z_eval / 2.0));
    std::vector<cplx> s = side == Side::plus
                              ? detail::scaled_plus(coeffs, pw, window.lo, window.hi)
                              : detail::scaled_minus(coeffs, pw, window.lo, window.hi);
    for (const cplx& v : s) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericRangeError("Jost recursion left the floating-point range");
        }
    }
    JostSolution sol;
    sol.side = side;
    sol.reflected = reflected;
    sol.z = z;
    sol.rate = side == Side::plus ? z_eval : -z_eval;
    sol.scaled = IndexedSeq(window.lo, std::move(s));
    sol.normalization = normalization_tag(side, reflected);
    return sol;
}

} // namespace

const char* to_string(Side side) { return side == Side::plus ? "plus" : "minus"; }

Side side_from_string(const std::string& s) {
    if (s == "plus" || s == "+") return Side::plus;
    if (s == "minus" || s == "-") return Side::minus;
    throw ContractViolation("side must be 'plus' or 'minus', got '" + s + "'");
}

cplx JostSolution::phase(int n) const {
    return sign_parity(n) * std::exp(kI * static_cast<double>(n) * rate);
}

cplx JostSolution::value(int n) const {
    const cplx v = phase(n) * scaled.at(n);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericRangeError("Jost value f_" + std::to_string(n) +
                                " is outside the floating-point range; use the scaled form");
    }
    return v;
}

IndexedSeq JostSolution::values() const {
    IndexedSeq out = IndexedSeq::zeros(window());
    for (int n = out.first(); n <= out.last(); ++n) out[n] = value(n);
    return out;
}

JostSolution JostSolution::rescaled(cplx c) const {
    JostSolution r = *this;
    for (int n = r.scaled.first(); n <= r.scaled.last(); ++n) r.scaled[n] *= c;
    r.normalization += " (rescaled)";
    return r;
}

Window default_jost_window(const CoefficientTriple& coeffs) {
    return {coeffs.n_min() - 2, coeffs.n_max() + 2};
}

JostSolution jost_plus_direct(const CoefficientTriple& coeffs, cplx z, int w_min) {
    if (w_min > coeffs.n_min() - 2) {
        throw ContractViolation("jost_plus_direct: w_min must be <= n_min - 2");
    }
    return make_solution(coeffs, z, Side::plus, {w_min, coeffs.n_max() + 2}, false);
}

JostSolution jost_minus_direct(const CoefficientTriple& coeffs, cplx z, int w_max) {
    if (w_max < coeffs.n_max() + 2) {
        throw ContractViolation("jost_minus_direct: w_max must be >= n_max + 2");
    }
    return make_solution(coeffs, z, Side::minus, {coeffs.n_min() - 2, w_max}, false);
}

JostSolution jost_direct(const CoefficientTriple& coeffs, cplx z, Side side, Window window) {
    return make_solution(coeffs, z, side, window, false);
}

JostSolution g_solution(const CoefficientTriple& coeffs, cplx z, Side side, Window window) {
    return make_solution(coeffs, z, side, window, true);
}

// ---------------------------------------------------------------------------
// Kernel tables

cplx KernelTable::kernel(int n, int m) const {
    if (!window.contains(n)) {
        throw ContractViolation("kernel row " + std::to_string(n) + " outside the table window");
    }
    if ((side == Side::plus && m <= 0) || (side == Side::minus && m >= 0)) {
        throw ContractViolation("kernel index m has the wrong sign for this side");
    }
    const int k = std::abs(m);
    if (k > m_max) return 0.0;
    return rows[static_cast<std::size_t>(n - window.lo)][static_cast<std::size_t>(k - 1)];
}

cplx KernelTable::series(int n, cplx w) const {
    if (!window.contains(n)) {
        throw ContractViolation("kernel row " + std::to_string(n) + " outside the table window");
    }
    const auto& row = rows[static_cast<std::size_t>(n - window.lo)];
    cplx acc = 0.0;
    for (auto it = row.rbegin(); it != row.rend(); ++it) acc = (acc + *it) * w;
    return 1.0 + acc;
}

KernelTable kernel_table(const CoefficientTriple& coeffs, Side side, int margin) {
    if (margin < 0) {
        throw ContractViolation("kernel_table: margin must be non-negative");
    }
    KernelTable t;
    t.side = side;
    t.window = {coeffs.n_min() - margin, coeffs.n_max() + margin};
    t.m_max = side == Side::plus ? 4 * (coeffs.n_max() - t.window.lo) + 2
                                 : 4 * (t.window.hi - coeffs.n_min()) + 2;
    const auto width = static_cast<std::size_t>(t.m_max);

    // Rows on an extended range so the accumulation starts where every K vanishes.
    const int lo = std::min(t.window.lo, coeffs.n_min() - 2);
    const int hi = std::max(t.window.hi, coeffs.n_max() + 2);
    std::vector<std::vector<cplx>> K(static_cast<std::size_t>(hi - lo + 1),
                                     std::vector<cplx>(width + 1, 0.0));
    // K[.][0] is the constant term 1 of the series.
    for (auto& row : K) row[0] = 1.0;
    auto row = [&](int n) -> std::vector<cplx>& { return K[static_cast<std::size_t>(n - lo)]; };
    auto k_at = [&](int n, int m) -> cplx {
        if (m < 0 || n < lo || n > hi) return m == 0 ? cplx(1.0) : cplx(0.0);
        return row(n)[static_cast<std::size_t>(m)];
    };

    if (side == Side::plus) {
        // K_{n-1,1} = K_{n,1} + 2 p_n
        // K_{n-1,2} = K_{n,2} + h_n + 2 p_n K_{n,1}
        // K_{n-1,3} = K_{n,3} + h_n K_{n,1} + 2 p_n (K_{n,2} + 1)
        // K_{n-1,4} = K_{n,4} + (1 - a_n^2) + h_n K_{n,2} + 2 p_n (K_{n,1} + K_{n,3})
        // K_{n-1,m+4} = K_{n,m+4} + K_{n,m} - a_n^2 K_{n+1,m} + h_n K_{n,m+2}
        //               + 2 p_n (K_{n,m+1} + K_{n,m+3})
        for (int n = coeffs.n_max() + 1; n > lo; --n) {
            const cplx p2 = 2.0 * coeffs.p(n);
            const cplx hn = coeffs.h(n);
            const cplx a2 = coeffs.a(n) * coeffs.a(n);
            auto& dst = row(n - 1);
            for (std::size_t m = 1; m <= width; ++m) {
                const int mi = static_cast<int>(m);
                cplx v = k_at(n, mi) + p2 * k_at(n, mi - 1) + hn * k_at(n, mi - 2) +
                         p2 * k_at(n, mi - 3);
                if (mi >= 4) v += k_at(n, mi - 4) - a2 * k_at(n + 1, mi - 4);
                dst[m] = v;
            }
        }
    } else {
        // Mirror image: accumulate upward from the left tail with a_{n-1}.
        for (int n = coeffs.n_min(); n < hi; ++n) {
            const cplx p2 = 2.0 * coeffs.p(n);
            const cplx hn = coeffs.h(n);
            const cplx a2 = coeffs.a(n - 1) * coeffs.a(n - 1);
            auto& dst = row(n + 1);
            for (std::size_t m = 1; m <= width; ++m) {
                const int mi = static_cast<int>(m);
                cplx v = k_at(n, mi) + p2 * k_at(n, mi - 1) + hn * k_at(n, mi - 2) +
                         p2 * k_at(n, mi - 3);
                if (mi >= 4) v += k_at(n, mi - 4) - a2 * k_at(n - 1, mi - 4);
                dst[m] = v;
            }
        }
    }

    t.alpha = IndexedSeq::zeros(t.window);
    t.rows.reserve(static_cast<std::size_t>(t.window.size()));
    for (int n = t.window.lo; n <= t.window.hi; ++n) {
        const auto& src = row(n);
        t.rows.emplace_back(src.begin() + 1, src.end());
        // alpha^+_n = (-1)^n prod_{r=n}^{n_max} a_r^{-1};  alpha^-_n = (-1)^n prod_{r=n_min}^{n-1} a_r^{-1}
        cplx beta = 1.0;
        if (side == Side::plus) {
            for (int r = n; r <= coeffs.n_max(); ++r) beta /= coeffs.a(r);
        } else {
            for (int r = coeffs.n_min(); r <= n - 1; ++r) beta /= coeffs.a(r);
        }
        t.alpha[n] = sign_parity(n) * beta;
    }
    return t;
}

cplx jost_from_kernels_scaled(const KernelTable& table, cplx z, int n) {
    const cplx w = std::exp(kI * z / 2.0);
    return sign_parity(n) * table.alpha.at(n) * table.series(n, w);
}

cplx jost_from_kernels(const KernelTable& table, const CoefficientTriple& coeffs, cplx z, int n) {
    if (!table.window.contains(n)) {
        throw ContractViolation("jost_from_kernels: n outside the kernel table window");
    }
    (void)coeffs;
    const double dir = table.side == Side::plus ? 1.0 : -1.0;
    const cplx w = std::exp(kI * z / 2.0);
    return table.alpha.at(n) * std::exp(dir * kI * static_cast<double>(n) * z) *
           table.series(n, w);
}

} // namespace pencil
