#pragma once

#include <random>
#include <vector>

#include "pencil/pencil_core.hpp"

namespace pencil::testgen {

inline constexpr std::uint64_t kSeed = 0x5eed2026u;

inline cplx complex_in_disc(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double t = 2.0 * kPi * u(rng);
    return std::polar(r, t);
}

/// Compactly supported triple with width in [1, max_width] and every
/// |1 - a_n|, |p_n|, |q_n| at most `size`.
inline CoefficientTriple random_triple(std::mt19937_64& rng, int max_width = 8, double size = 0.5,
                                       bool with_p = true) {
    std::uniform_int_distribution<int> width(1, max_width);
    std::uniform_int_distribution<int> start(-4, 4);
    const int w = width(rng);
    std::vector<cplx> a(w), p(w), q(w);
    for (int i = 0; i < w; ++i) {
        a[i] = 1.0 + complex_in_disc(rng, size);
        p[i] = with_p ? complex_in_disc(rng, size) : cplx(0.0);
        q[i] = complex_in_disc(rng, size);
    }
    return {start(rng), a, p, q};
}

/// z in the closed half-strip Re z in [-pi, 3pi], Im z in [0, im_max].
inline cplx random_z(std::mt19937_64& rng, double im_max = 2.0) {
    std::uniform_real_distribution<double> re(-kPi, 3.0 * kPi), im(0.0, im_max);
    return {re(rng), im(rng)};
}

inline IndexedSeq random_seq(std::mt19937_64& rng, Window w, double size = 1.0) {
    IndexedSeq s = IndexedSeq::zeros(w);
    for (int n = w.lo; n <= w.hi; ++n) s[n] = complex_in_disc(rng, size);
    return s;
}

} // namespace pencil::testgen
