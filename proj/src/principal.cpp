#include "pencil/principal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pencil/jet.hpp"
#include "pencil/spectrum.hpp"

namespace pencil {

namespace {

constexpr cplx kI(0.0, 1.0);

double sign_parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

/// w(lambda) with w + 1/w = lambda and w(lambda0) = e^{i z0 / 2}.
Jet w_jet(const SpectralPoint& pt, int order) {
    const cplx w0 = std::exp(0.5 * kI * pt.z);
    const cplx denom = 2.0 * w0 - pt.lambda;
    Jet w = Jet::constant(w0, order);
    if (order == 0) return w;
    if (std::abs(denom) < 1e-12) {
        throw BranchPointError("lambda = +-2 is a branch point of z(lambda); use z-derivatives");
    }
    for (int j = 1; j <= order; ++j) {
        cplx s = w[j - 1];
        for (int i = 1; i <= j - 1; ++i) s -= w[i] * w[j - i];
        w[j] = s / denom;
    }
    return w;
}

void check_point(const SpectralPoint& pt) {
    if (std::abs(z_to_lambda(pt.z) - pt.lambda) > 1e-10 * (1.0 + std::abs(pt.lambda))) {
        throw ContractViolation("spectral point: z and lambda are inconsistent");
    }
}

/// Unscaled jets of F_n on [lo, hi] for the given side.
std::vector<Jet> jost_jets(const CoefficientTriple& c, const SpectralPoint& pt, int order, Side side,
                           int lo, int hi) {
    const Jet w = w_jet(pt, order);
    const Jet lam = Jet::variable(pt.lambda, order);
    const Jet shift = lam * lam - 2.0;
    std::vector<Jet> f(static_cast<std::size_t>(hi - lo + 1));
    auto at = [&](int n) -> Jet& { return f[static_cast<std::size_t>(n - lo)]; };
    auto diag = [&](int n) { return shift + lam * (2.0 * c.p(n)) + c.h(n); };
    if (side == Side::plus) {
        const Jet w2 = w * w;
        auto tail = [&](int n) { return pow(w2, n) * sign_parity(n); };
        const int top = std::max(hi, c.n_max() + 2);
        std::vector<Jet> g(static_cast<std::size_t>(top - std::min(lo, c.n_max()) + 1));
        const int base = std::min(lo, c.n_max());
        auto gt = [&](int n) -> Jet& { return g[static_cast<std::size_t>(n - base)]; };
        for (int n = top; n >= base; --n) {
            if (n >= c.n_max() + 1) {
                gt(n) = tail(n);
            } else {
                gt(n) = -(gt(n + 2) * c.a(n + 1) + diag(n + 1) * gt(n + 1)) / c.a(n);
            }
        }
        for (int n = lo; n <= hi; ++n) at(n) = gt(n);
    } else {
        const Jet wm2 = reciprocal(w * w);
        auto tail = [&](int n) { return pow(wm2, n) * sign_parity(n); };
        const int bottom = std::min(lo, c.n_min() - 2);
        const int cap = std::max(hi, c.n_min());
        std::vector<Jet> g(static_cast<std::size_t>(cap - bottom + 1));
        auto gt = [&](int n) -> Jet& { return g[static_cast<std::size_t>(n - bottom)]; };
        for (int n = bottom; n <= cap; ++n) {
            if (n <= c.n_min() - 1) {
                gt(n) = tail(n);
            } else {
                gt(n) = -(gt(n - 2) * c.a(n - 2) + diag(n - 1) * gt(n - 1)) / c.a(n - 1);
            }
        }
        for (int n = lo; n <= hi; ++n) at(n) = gt(n);
    }
    return f;
}

double binom(int r, int v) {
    double b = 1.0;
    for (int i = 1; i <= v; ++i) b = b * (r - v + i) / i;
    return b;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

struct LinearFit {
    double slope = 0.0;
    bool ok = false;
};

LinearFit fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return {};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return {};
    return {sxy / sxx, true};
}

struct SideFit {
    bool vanished = false;  // every block maximum underflowed or is zero
    double rate = 0.0;
    double degree = 0.0;
};

/// Block maxima of |y| over the outer third of one side, fitted against |n| and log|n|.
SideFit fit_side(const IndexedSeq& y, int from, int to) {
    constexpr int block = 4;
    std::vector<double> xs, logx, logm;
    const int step = from <= to ? 1 : -1;
    const int count = std::abs(to - from) + 1;
    for (int b = 0; b + block <= count; b += block) {
        double m = 0.0;
        int center = from + step * (b + block / 2);
        for (int k = 0; k < block; ++k) m = std::max(m, std::abs(y[from + step * (b + k)]));
        if (m > std::numeric_limits<double>::min()) {
            xs.push_back(std::abs(static_cast<double>(center)));
            logx.push_back(std::log(1.0 + std::abs(static_cast<double>(center))));
            logm.push_back(std::log(m));
        }
    }
    SideFit s;
    if (xs.size() < 2) {
        s.vanished = true;
        s.rate = -std::numeric_limits<double>::infinity();
        s.degree = -std::numeric_limits<double>::infinity();
        return s;
    }
    s.rate = fit(xs, logm).slope;
    s.degree = fit(logx, logm).slope;
    return s;
}

} // namespace

// ---------------------------------------------------------------------------

cplx LambdaDerivativeStack::taylor_coefficient(int r, int n) const {
    if (r < 0 || r > order || !window.contains(n)) {
        throw ContractViolation("derivative stack index out of range");
    }
    return taylor[static_cast<std::size_t>(n - window.lo)][static_cast<std::size_t>(r)];
}

cplx LambdaDerivativeStack::derivative(int r, int n) const {
    return taylor_coefficient(r, n) * factorial(r);
}

IndexedSeq LambdaDerivativeStack::layer(int r) const {
    IndexedSeq out = IndexedSeq::zeros(window);
    for (int n = window.lo; n <= window.hi; ++n) out[n] = derivative(r, n);
    return out;
}

LambdaDerivativeStack lambda_jost_stack(const CoefficientTriple& coeffs, const SpectralPoint& point,
                                        int order, Side side, std::optional<Window> window) {
    if (order < 0 || order > Jet::kMaxOrder) {
        throw ContractViolation("lambda_jost_stack: order must lie in [0, 15]");
    }
    check_point(point);
    const Window w = window.value_or(default_jost_window(coeffs));
    if (w.hi < w.lo) {
        throw ContractViolation("lambda_jost_stack: empty window");
    }
    const std::vector<Jet> jets = jost_jets(coeffs, point, order, side, w.lo, w.hi);
    LambdaDerivativeStack st;
    st.point = point;
    st.order = order;
    st.side = side;
    st.window = w;
    st.taylor.reserve(jets.size());
    for (const Jet& j : jets) {
        std::vector<cplx> row(static_cast<std::size_t>(order) + 1);
        for (int r = 0; r <= order; ++r) {
            row[static_cast<std::size_t>(r)] = j[r];
            if (!std::isfinite(std::abs(j[r]))) {
                throw NumericRangeError("lambda-derivative stack overflowed; shrink the window");
            }
        }
        st.taylor.push_back(std::move(row));
    }
    return st;
}

LambdaDerivativeStack lambda_jost_stack(const CoefficientTriple& coeffs, cplx lambda0, int order,
                                        Side side, std::optional<Window> window) {
    return lambda_jost_stack(coeffs, SpectralPoint::from_lambda(lambda0), order, side, window);
}

cplx h_function(const CoefficientTriple& coeffs, const SpectralPoint& point) {
    const int n = coeffs.n_min() - 1;
    const Window w{n, n + 1};
    const LambdaDerivativeStack fm = lambda_jost_stack(coeffs, point, 0, Side::minus, w);
    const LambdaDerivativeStack fp = lambda_jost_stack(coeffs, point, 0, Side::plus, w);
    return coeffs.a(n) * (fm.taylor_coefficient(0, n) * fp.taylor_coefficient(0, n + 1) -
                          fm.taylor_coefficient(0, n + 1) * fp.taylor_coefficient(0, n));
}

cplx h_function(const CoefficientTriple& coeffs, cplx lambda) {
    return h_function(coeffs, SpectralPoint::from_lambda(lambda));
}

double weighted_norm(const IndexedSeq& y, int p, WeightSign sign) {
    if (p < 0) {
        throw ContractViolation("weighted_norm: p must be non-negative");
    }
    const double e = (sign == WeightSign::plus ? 2.0 : -2.0) * p;
    double s = 0.0;
    for (int n = y.first(); n <= y.last(); ++n) {
        s += std::pow(1.0 + std::abs(static_cast<double>(n)), e) * std::norm(y[n]);
    }
    return s;
}

GrowthClass classify_growth(const IndexedSeq& y) {
    if (y.size() < 24) {
        throw ContractViolation("classify_growth: window too small for a tail fit");
    }
    const int third = static_cast<int>(y.size()) / 3;
    const SideFit left = fit_side(y, y.first(), y.first() + third - 1);
    const SideFit right = fit_side(y, y.last(), y.last() - third + 1);
    GrowthClass g;
    g.rate_left = left.rate;
    g.rate_right = right.rate;
    g.degree_left = left.degree;
    g.degree_right = right.degree;

    constexpr double kDecay = -1e-2;
    auto decays = [&](const SideFit& s) { return s.vanished || s.rate < kDecay; };
    if (decays(left) && decays(right)) {
        g.in_l2 = true;
        g.h_minus_p = 0;
        g.tag = "l2";
        return g;
    }
    double d = std::max(decays(left) ? -1.0 : left.degree, decays(right) ? -1.0 : right.degree);
    if (d > 8.0) {
        g.h_minus_p = -1;
        g.tag = "exponential";
        return g;
    }
    if (std::abs(d - std::round(d)) <= 0.25) d = std::round(d);
    if (d < -0.5) {
        g.in_l2 = true;
        g.h_minus_p = 0;
        g.tag = "l2";
        return g;
    }
    g.h_minus_p = static_cast<int>(std::floor(d + 0.5)) + 1;
    g.tag = "H_-" + std::to_string(g.h_minus_p);
    return g;
}

const char* to_string(ZeroKind k) { return k == ZeroKind::eigenvalue ? "eigenvalue" : "singularity"; }

int measured_multiplicity(const CoefficientTriple& coeffs, cplx z) {
    const CharacteristicFunction f(coeffs, false);
    ZeroFinderOptions opts;
    opts.scale = [&f](cplx x) { return f.magnitude(x); };
    const JetFunction jf = f.as_jet_function();
    for (double rho : {1e-3, 1.7e-3, 6e-4, 3.1e-3, 3e-4}) {
        const Rect r{z.real() - rho, z.real() + rho * 1.07, z.imag() - rho * 0.93, z.imag() + rho};
        try {
            return winding_number(jf, r, opts);
        } catch (const RootFindingError&) {
            continue;
        }
    }
    throw RootFindingError("could not isolate the zero for a winding count");
}

Linkage linkage_coefficients(const CoefficientTriple& coeffs, const SpectralPoint& point, int r_max) {
    if (r_max < 0) {
        throw ContractViolation("linkage_coefficients: r_max must be non-negative");
    }
    check_point(point);
    const CharacteristicFunction f(coeffs, false);
    if (std::abs(f(point.z)) > 1e-8 * f.magnitude(point.z)) {
        throw ContractViolation("linkage_coefficients: lambda_j is not a zero of H");
    }
    const Window fw{coeffs.n_min() - 2, coeffs.n_max() + 2};
    const LambdaDerivativeStack fp = lambda_jost_stack(coeffs, point, r_max, Side::plus, fw);
    const LambdaDerivativeStack fm = lambda_jost_stack(coeffs, point, r_max, Side::minus, fw);

    double denom = 0.0;
    for (int n = fw.lo; n <= fw.hi; ++n) denom += std::norm(fm.derivative(0, n));
    if (!(denom > 1e-280)) {
        throw NumericError("linkage_coefficients: F^- vanishes on the fit window");
    }

    Linkage out;
    for (int r = 0; r <= r_max; ++r) {
        std::vector<cplx> rhs(static_cast<std::size_t>(fw.size()));
        double ref = 0.0;
        for (int n = fw.lo; n <= fw.hi; ++n) {
            cplx v = fp.derivative(r, n);
            ref = std::max(ref, std::abs(v));
            for (int k = 1; k <= r; ++k) {
                v -= binom(r, k) * out.beta[static_cast<std::size_t>(r - k)] * fm.derivative(k, n);
            }
            rhs[static_cast<std::size_t>(n - fw.lo)] = v;
        }
        cplx num = 0.0;
        for (int n = fw.lo; n <= fw.hi; ++n) {
            num += std::conj(fm.derivative(0, n)) * rhs[static_cast<std::size_t>(n - fw.lo)];
        }
        const cplx beta = num / denom;
        double res = 0.0;
        for (int n = fw.lo; n <= fw.hi; ++n) {
            res = std::max(res, std::abs(rhs[static_cast<std::size_t>(n - fw.lo)] - beta * fm.derivative(0, n)));
        }
        out.beta.push_back(beta);
        out.residual.push_back(ref > 0.0 ? res / ref : res);
    }
    return out;
}

PrincipalVectorStack principal_vectors(const CoefficientTriple& coeffs, const SpectralPoint& point,
                                       int m_j, std::optional<Window> window) {
    if (m_j < 1 || m_j > Jet::kMaxOrder + 1) {
        throw ContractViolation("principal_vectors: multiplicity must lie in [1, 16]");
    }
    check_point(point);
    if (std::abs(std::abs(point.lambda) - 2.0) < 1e-12 && std::abs(point.lambda.imag()) < 1e-12) {
        throw BranchPointError("principal vectors are not defined at lambda = +-2");
    }
    const CharacteristicFunction f(coeffs, false);
    if (std::abs(f(point.z)) > 1e-8 * f.magnitude(point.z)) {
        throw ContractViolation("principal_vectors: lambda_j is not a zero of H");
    }
    PrincipalVectorStack st;
    st.point = point;
    st.multiplicity = m_j;
    st.kind = on_axis(point.z) ? ZeroKind::singularity : ZeroKind::eigenvalue;
    st.measured_winding = measured_multiplicity(coeffs, point.z);
    if (st.measured_winding < m_j) {
        throw ContractViolation("principal_vectors: requested multiplicity " + std::to_string(m_j) +
                                " exceeds the measured winding " + std::to_string(st.measured_winding));
    }

    const int r_max = m_j - 1;
    const Window w = window.value_or(Window{coeffs.n_min() - 200, coeffs.n_max() + 200});
    const int split = coeffs.n_min() - 1;  // F^+ from here up, the F^- combination below
    const Linkage link = linkage_coefficients(coeffs, point, r_max);
    st.beta = link.beta;

    const Window pw{std::min(split, w.hi), std::max(w.hi, split)};
    const Window mw{std::min(w.lo, split - 1), std::max(w.lo, split - 1)};
    const LambdaDerivativeStack fp = lambda_jost_stack(coeffs, point, r_max, Side::plus, pw);
    const LambdaDerivativeStack fm = lambda_jost_stack(coeffs, point, r_max, Side::minus, mw);

    for (int r = 0; r <= r_max; ++r) {
        IndexedSeq u = IndexedSeq::zeros(w);
        for (int n = w.lo; n <= w.hi; ++n) {
            if (n >= split) {
                u[n] = fp.taylor_coefficient(r, n);
            } else {
                cplx s = 0.0;
                for (int v = 0; v <= r; ++v) {
                    s += st.beta[static_cast<std::size_t>(r - v)] / factorial(r - v) *
                         fm.taylor_coefficient(v, n);
                }
                u[n] = s;
            }
        }
        st.U.push_back(std::move(u));
    }

    const cplx lam = point.lambda;
    for (int r = 0; r <= r_max; ++r) {
        const IndexedSeq res = apply_pencil(coeffs, lam, st.U[static_cast<std::size_t>(r)]);
        double worst = 0.0;
        for (int n = res.first(); n <= res.last(); ++n) {
            cplx v = res[n];
            double scale = std::abs(st.U[static_cast<std::size_t>(r)][n]) * (2.0 + std::abs(lam * lam)) +
                           std::abs(st.U[static_cast<std::size_t>(r)][n - 1]) +
                           std::abs(st.U[static_cast<std::size_t>(r)][n + 1]);
            if (r >= 1) {
                const cplx u1 = st.U[static_cast<std::size_t>(r - 1)][n];
                v += (2.0 * coeffs.p(n) + 2.0 * lam) * u1;
                scale += std::abs(2.0 * coeffs.p(n) + 2.0 * lam) * std::abs(u1);
            }
            if (r >= 2) {
                const cplx u2 = st.U[static_cast<std::size_t>(r - 2)][n];
                v += u2;
                scale += std::abs(u2);
            }
            worst = std::max(worst, scale > 0.0 ? std::abs(v) / scale : std::abs(v));
        }
        st.chain_residual.push_back(worst);
        st.growth.push_back(classify_growth(st.U[static_cast<std::size_t>(r)]));
    }
    return st;
}

} // namespace pencil
