#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pencil/jost.hpp"
#include "pencil/pencil_core.hpp"

namespace pencil {

/// F_n(lambda) = f_n(z(lambda)) and its lambda-derivatives up to `order` on a window.
///
/// The tail (-1)^n w^{+-2n} with w = e^{iz/2} is expanded in lambda by solving
/// w^2 - lambda w + 1 = 0 order by order; the three-term recursion then
/// carries the jets through the support.  On the real axis the two sides of
/// the cut [-2, 2] are different boundary values, selected by the z of the
/// SpectralPoint.
struct LambdaDerivativeStack {
    SpectralPoint point;
    int order = 0;
    Side side = Side::plus;
    Window window;
    /// taylor[n - window.lo][r] = (1 / r!) d^r F_n / d lambda^r.
    std::vector<std::vector<cplx>> taylor;

    cplx derivative(int r, int n) const;
    cplx taylor_coefficient(int r, int n) const;
    /// d^r F / d lambda^r over the window.
    IndexedSeq layer(int r) const;
};

/// Throws BranchPointError at lambda = +-2 when order >= 1, ContractViolation
/// for order outside [0, 15] or a point whose z and lambda disagree.
LambdaDerivativeStack lambda_jost_stack(const CoefficientTriple& coeffs, const SpectralPoint& point,
                                        int order, Side side,
                                        std::optional<Window> window = std::nullopt);
LambdaDerivativeStack lambda_jost_stack(const CoefficientTriple& coeffs, cplx lambda0, int order,
                                        Side side, std::optional<Window> window = std::nullopt);

/// H(lambda) = W[F^-(lambda), F^+(lambda)] = Phi(lambda_to_z(lambda)).
cplx h_function(const CoefficientTriple& coeffs, cplx lambda);
cplx h_function(const CoefficientTriple& coeffs, const SpectralPoint& point);

enum class WeightSign { plus, minus };

/// sum_n (1 + |n|)^{+-2p} |y_n|^2 over the stored window.
double weighted_norm(const IndexedSeq& y, int p, WeightSign sign);

/// Measured growth of a vector on the outer third of each side of its window.
struct GrowthClass {
    bool in_l2 = false;
    /// Smallest p with the vector in H_{-p}; 0 for l2, -1 for exponential growth.
    int h_minus_p = 0;
    double rate_left = 0.0;     // fitted d log|y| / d|n| on the left
    double rate_right = 0.0;
    double degree_left = 0.0;   // fitted d log|y| / d log|n|
    double degree_right = 0.0;
    std::string tag;            // "l2", "H_-1", "H_-2", ..., "exponential"
};

GrowthClass classify_growth(const IndexedSeq& y);

enum class ZeroKind { eigenvalue, singularity };

const char* to_string(ZeroKind k);

struct PrincipalVectorStack {
    SpectralPoint point;
    int multiplicity = 1;
    ZeroKind kind = ZeroKind::eigenvalue;
    int measured_winding = 0;
    /// U[r]_n = (1 / r!) d^r F^+_n / d lambda^r at lambda_j.
    std::vector<IndexedSeq> U;
    std::vector<GrowthClass> growth;
    std::vector<cplx> beta;
    /// max_n |l U^(r) + (2p + 2 lambda) U^(r-1) + U^(r-2)| over the size of the terms.
    std::vector<double> chain_residual;
};

/// Principal vectors U^(0..m_j-1) at a zero of Phi.  Left of the support the
/// vectors are assembled from F^- and the linkage coefficients, which keeps
/// them accurate where F^+ alone would be swamped by the growing solution.
/// Throws ContractViolation if the point is not a zero or its winding is
/// below m_j, BranchPointError at lambda = +-2.
PrincipalVectorStack principal_vectors(const CoefficientTriple& coeffs, const SpectralPoint& point,
                                       int m_j, std::optional<Window> window = std::nullopt);

struct Linkage {
    std::vector<cplx> beta;
    /// Relative least-squares residual of each order.
    std::vector<double> residual;
};

/// beta_0 .. beta_{r_max} with d^r F^+ = sum_v C(r, v) beta_{r-v} d^v F^- at
/// lambda_j, solved order by order in the least-squares sense over
/// [n_min - 2, n_max + 2].
Linkage linkage_coefficients(const CoefficientTriple& coeffs, const SpectralPoint& point, int r_max);

/// Largest winding of Phi around small squares centred at z.
int measured_multiplicity(const CoefficientTriple& coeffs, cplx z);

} // namespace pencil
