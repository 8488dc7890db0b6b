#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pencil/jet.hpp"
#include "pencil/jost.hpp"
#include "pencil/pencil_core.hpp"
#include "pencil/zeros.hpp"

namespace pencil {

/// W[u, v] = a_n (u_n v_{n+1} - u_{n+1} v_n), evaluated from the scaled forms
/// so that the exponential factors cancel before they are formed.
/// Throws ContractViolation if u and v were built at different z or do not
/// cover n and n + 1.
cplx wronskian(const JostSolution& u, const JostSolution& v, const CoefficientTriple& coeffs, int n);

/// Phi(z) = W[f^-(z), f^+(z)].
///
/// With w = e^{iz/2}, Phi(z) e^{iz} is a polynomial P(w) of degree
/// 4 (n_max - n_min) + 6; zeros in the strip Re z in [-pi, 3pi), Im z >= 0
/// correspond one to one to roots of P in the punctured closed unit disc.
/// Values and z-jets come from the scaled recursion.  The optional cache is
/// shared between copies and guarded by a mutex.
class CharacteristicFunction {
public:
    explicit CharacteristicFunction(CoefficientTriple coeffs, bool use_cache = true);

    const CoefficientTriple& coeffs() const { return coeffs_; }

    /// Multiply f^- by c_minus and f^+ by c_plus (Phi scales by their product).
    void set_jost_scales(cplx c_minus, cplx c_plus);

    cplx operator()(cplx z) const;

    /// Taylor jet of Phi in z of the given order.
    Jet jet(cplx z, int order) const;

    /// Phi(z) e^{iz}; bounded on the closed upper half-plane.
    cplx reduced(cplx z) const;

    /// Coefficients P_k of Phi(z) e^{iz} = sum_k P_k e^{ikz/2} (Jost scales included).
    const std::vector<cplx>& polynomial() const { return poly_; }

    /// sum_k |P_k| |w|^{k-2}, the size of the terms that make up Phi(z).
    double magnitude(cplx z) const;

    /// No zero has Im z above this: 2 ln(1 + max_{k>=1} |P_k| / |P_0|).
    double height_bound() const;

    /// JetFunction view for the generic zero finder.
    JetFunction as_jet_function() const;

private:
    struct Cache;

    CoefficientTriple coeffs_;
    cplx scale_ = 1.0;
    std::vector<cplx> poly_;
    std::vector<cplx> base_poly_;
    std::shared_ptr<Cache> cache_;
};

/// Phi(z) = W[f^-, f^+] at n = n_min - 1.
cplx phi(const CoefficientTriple& coeffs, cplx z);

struct Scattering {
    cplx psi;
    cplx mu;
};

/// psi and mu of f^+ = psi f^- + mu g^- at real zeta, with g^- = f^-(-zeta).
/// Throws PoleError when sin(zeta) vanishes and ContractViolation outside (-pi, 3pi).
Scattering scattering_coeffs(const CoefficientTriple& coeffs, double zeta);

struct ScatteringData {
    std::vector<double> zeta;
    std::vector<cplx> psi;
    std::vector<cplx> mu;
    /// max_n |f^+_n - psi f^-_n - mu g^-_n| / max_n |f^+_n| per point.
    std::vector<double> residual;
};

ScatteringData scattering_data(const CoefficientTriple& coeffs, const std::vector<double>& zetas);

/// Default search box: Re z in [-pi - 0.0123, 3pi - 0.0123] (one full period),
/// Im z in [-0.05, height_bound + 1].  The strip below the axis lets real zeros
/// sit in the interior of the box.
Rect default_search_region(const CharacteristicFunction& phi);

/// Zeros of Phi in `region`, folded into Re z in [-pi, 3pi); zeros with
/// Im z < -1e-9 (1 + |z|) are dropped.  Excluded points are kept here and
/// separated by spectrum_report.
std::vector<Zero> find_zeros(const CharacteristicFunction& phi, const Rect& region, double tol);
std::vector<Zero> find_zeros(const CoefficientTriple& coeffs, const Rect& region, double tol);

struct SpectralZero {
    cplx z;
    cplx lambda;
    int multiplicity = 1;
};

struct SpectrumReport {
    std::vector<SpectralZero> eigenvalues;
    std::vector<SpectralZero> spectral_singularities;
    /// Zeros within 1e-6 of {-pi, 0, pi, 2pi, 3pi}.
    std::vector<SpectralZero> boundary_indeterminate;
    double continuous_lo = -2.0;
    double continuous_hi = 2.0;
    Rect region;
    std::string convention_note;
};

/// On-axis threshold tol_axis = 1e-9 (1 + |z|).
bool on_axis(cplx z);

/// True within 1e-6 of one of -pi, 0, pi, 2pi, 3pi.
bool is_excluded_point(cplx z);

SpectrumReport spectrum_report(const CharacteristicFunction& phi, double tol = 1e-10);
SpectrumReport spectrum_report(const CoefficientTriple& coeffs, double tol = 1e-10);

/// Phi(re_z + i y) e^{iz} prod_r a_r for each y of the ladder; tends to 1 as y grows.
std::vector<cplx> phi_asymptotic_probe(const CoefficientTriple& coeffs,
                                       const std::vector<double>& im_ladder, double re_z = 0.5);

} // namespace pencil
