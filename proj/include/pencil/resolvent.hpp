#pragma once

#include <optional>

#include "pencil/jost.hpp"
#include "pencil/pencil_core.hpp"

namespace pencil {

/// Kernel of the resolvent at a point of the resolvent set:
///   G_{n,m} = f^-_m f^+_n / Phi   for m <= n - 1,
///   G_{n,m} = f^+_m f^-_n / Phi   for m >= n.
/// Products are formed from the scaled Jost values, so entries far from the
/// support neither overflow nor underflow prematurely.
class GreenKernel {
public:
    /// Throws SpectralPointError when |Phi(z)| <= 1e-12 times its natural size.
    GreenKernel(const CoefficientTriple& coeffs, cplx z, Window window);

    cplx z() const { return z_; }
    cplx lambda() const { return z_to_lambda(z_); }
    cplx phi() const { return phi_; }
    Window window() const { return window_; }

    /// G_{n,m} for n, m in the window.
    cplx operator()(int n, int m) const;

private:
    cplx z_;
    Window window_;
    JostSolution f_minus_;
    JostSolution f_plus_;
    cplx phi_;
};

cplx green_kernel(const CoefficientTriple& coeffs, cplx z, int n, int m);

/// Window holding the support of phi and of the coefficients, padded by `pad`.
Window resolvent_window(const CoefficientTriple& coeffs, const IndexedSeq& phi_vec, int pad = 5);

/// y_n = sum_m G_{n,m} phi_m on `out` (default resolvent_window).
IndexedSeq apply_resolvent(const CoefficientTriple& coeffs, cplx z, const IndexedSeq& phi_vec,
                           std::optional<Window> out = std::nullopt);

/// Test vector h_m = conj(f^-_m) for m < m0 (zero from m0 on) and the lower
/// bound ||R h|| / ||h|| >= ||h|| ||f^+ restricted to n >= m0|| / |Phi|
/// that follows from R h = (f^+ / Phi) ||h||^2 on n >= m0.  The free tails are
/// summed in closed form.
struct NormProbe {
    cplx z;
    int m0 = 0;
    IndexedSeq h;          // explicit entries down to relative size 1e-16
    double h_norm = 0.0;
    double f_plus_norm = 0.0;
    cplx phi;
    double lower_bound = 0.0;
};

/// Requires Im z > 0.  m0 defaults to n_min - 5.
NormProbe resolvent_norm_probe(const CoefficientTriple& coeffs, cplx z,
                               std::optional<int> m0 = std::nullopt);

} // namespace pencil
