#include "pencil/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "recursion.hpp"

namespace pencil {

namespace {

constexpr cplx kI(0.0, 1.0);

double axis_tol(cplx z) { return 1e-9 * (1.0 + std::abs(z)); }

bool same_z(cplx a, cplx b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)); }

std::vector<cplx> phi_polynomial(const CoefficientTriple& coeffs) {
    const KernelTable t = kernel_table(coeffs, Side::plus, 1);
    const int n0 = coeffs.n_min() - 1;
    auto beta = [&](int n) { return ((n % 2 == 0) ? 1.0 : -1.0) * t.alpha.at(n); };
    auto k_at = [&](int n, int k) -> cplx {
        if (k == 0) return 1.0;
        if (k < 0 || k > t.m_max) return 0.0;
        return t.kernel(n, k);
    };
    std::vector<cplx> p(static_cast<std::size_t>(t.m_max) + 1);
    for (int k = 0; k <= t.m_max; ++k) {
        p[static_cast<std::size_t>(k)] = beta(n0) * k_at(n0, k) - beta(n0 + 1) * k_at(n0 + 1, k - 4);
    }
    return p;
}

} // namespace

cplx wronskian(const JostSolution& u, const JostSolution& v, const CoefficientTriple& coeffs, int n) {
    if (!same_z(u.z, v.z)) {
        throw ContractViolation("wronskian: solutions were built at different z");
    }
    if (!u.scaled.contains(n) || !u.scaled.contains(n + 1) || !v.scaled.contains(n) ||
        !v.scaled.contains(n + 1)) {
        throw ContractViolation("wronskian: both solutions must cover n and n + 1");
    }
    const cplx common = std::exp(kI * static_cast<double>(n) * (u.rate + v.rate));
    const cplx inner = -std::exp(kI * v.rate) * u.scaled[n] * v.scaled[n + 1] +
                       std::exp(kI * u.rate) * u.scaled[n + 1] * v.scaled[n];
    return coeffs.a(n) * common * inner;
}

// ---------------------------------------------------------------------------

struct CharacteristicFunction::Cache {
    std::mutex mutex;
    std::map<std::pair<double, double>, Jet> jets;
};

CharacteristicFunction::CharacteristicFunction(CoefficientTriple coeffs, bool use_cache)
    : coeffs_(std::move(coeffs)), base_poly_(phi_polynomial(coeffs_)) {
    poly_ = base_poly_;
    if (use_cache) cache_ = std::make_shared<Cache>();
}

void CharacteristicFunction::set_jost_scales(cplx c_minus, cplx c_plus) {
    if (c_minus == cplx(0.0) || c_plus == cplx(0.0)) {
        throw ContractViolation("Jost scale factors must be nonzero");
    }
    scale_ = c_minus * c_plus;
    poly_ = base_poly_;
    for (cplx& c : poly_) c *= scale_;
    if (cache_) cache_ = std::make_shared<Cache>();
}

Jet CharacteristicFunction::jet(cplx z, int order) const {
    if (cache_) {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->jets.find({z.real(), z.imag()});
        if (it != cache_->jets.end() && it->second.order() >= order) return it->second;
    }
    const Jet w = exp(Jet::variable(z, order) * (0.5 * kI));
    const detail::WPowers<Jet> pw(w);
    Jet r = detail::phi_times_w2(coeffs_, pw) / pw.w2;
    r *= scale_;
    if (cache_) {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto& slot = cache_->jets[{z.real(), z.imag()}];
        if (slot.order() < order || slot.value() == cplx(0.0)) slot = r;
    }
    return r;
}

cplx CharacteristicFunction::operator()(cplx z) const {
    const detail::WPowers<cplx> pw(std::exp(0.5 * kI * z));
    return scale_ * detail::phi_times_w2(coeffs_, pw) / pw.w2;
}

cplx CharacteristicFunction::reduced(cplx z) const {
    const detail::WPowers<cplx> pw(std::exp(0.5 * kI * z));
    return scale_ * detail::phi_times_w2(coeffs_, pw);
}

double CharacteristicFunction::magnitude(cplx z) const {
    const double aw = std::abs(std::exp(0.5 * kI * z));
    double s = 0.0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) s = s * aw + std::abs(*it);
    return s / (aw * aw);
}

double CharacteristicFunction::height_bound() const {
    double top = 0.0;
    for (std::size_t k = 1; k < poly_.size(); ++k) top = std::max(top, std::abs(poly_[k]));
    return 2.0 * std::log1p(top / std::abs(poly_[0]));
}

JetFunction CharacteristicFunction::as_jet_function() const {
    return [self = *this](cplx z, int order) { return self.jet(z, order); };
}

cplx phi(const CoefficientTriple& coeffs, cplx z) {
    const Window w = default_jost_window(coeffs);
    const JostSolution fm = jost_direct(coeffs, z, Side::minus, w);
    const JostSolution fp = jost_direct(coeffs, z, Side::plus, w);
    return wronskian(fm, fp, coeffs, coeffs.n_min() - 1);
}

// ---------------------------------------------------------------------------

Scattering scattering_coeffs(const CoefficientTriple& coeffs, double zeta) {
    if (!(zeta > -kPi && zeta < 3.0 * kPi)) {
        throw ContractViolation("scattering_coeffs: zeta must lie in (-pi, 3pi)");
    }
    if (std::abs(std::sin(zeta)) < 1e-10) {
        throw PoleError("scattering_coeffs: sin(zeta) = 0 is a pole of psi and mu");
    }
    const Window w = default_jost_window(coeffs);
    const JostSolution fp = jost_direct(coeffs, zeta, Side::plus, w);
    const JostSolution fm = jost_direct(coeffs, zeta, Side::minus, w);
    const JostSolution gm = g_solution(coeffs, zeta, Side::minus, w);
    const int n = coeffs.n_min() - 1;
    const cplx w_fm_gm = wronskian(fm, gm, coeffs, n);
    return {wronskian(fp, gm, coeffs, n) / w_fm_gm, wronskian(fp, fm, coeffs, n) / -w_fm_gm};
}

ScatteringData scattering_data(const CoefficientTriple& coeffs, const std::vector<double>& zetas) {
    ScatteringData out;
    const Window w = default_jost_window(coeffs);
    for (double zeta : zetas) {
        const Scattering s = scattering_coeffs(coeffs, zeta);
        const JostSolution fp = jost_direct(coeffs, zeta, Side::plus, w);
        const JostSolution fm = jost_direct(coeffs, zeta, Side::minus, w);
        const JostSolution gm = g_solution(coeffs, zeta, Side::minus, w);
        double res = 0.0, ref = 0.0;
        for (int n = w.lo; n <= w.hi; ++n) {
            const cplx f = fp.value(n);
            res = std::max(res, std::abs(f - s.psi * fm.value(n) - s.mu * gm.value(n)));
            ref = std::max(ref, std::abs(f));
        }
        out.zeta.push_back(zeta);
        out.psi.push_back(s.psi);
        out.mu.push_back(s.mu);
        out.residual.push_back(res / ref);
    }
    return out;
}

// ---------------------------------------------------------------------------

Rect default_search_region(const CharacteristicFunction& phi) {
    const double shift = 0.0123;
    return {-kPi - shift, 3.0 * kPi - shift, -0.05, phi.height_bound() + 1.0};
}

std::vector<Zero> find_zeros(const CharacteristicFunction& phi, const Rect& region, double tol) {
    ZeroFinderOptions opts;
    opts.tol = tol;
    opts.scale = [&phi](cplx z) { return phi.magnitude(z); };
    std::vector<Zero> raw = find_zeros(phi.as_jet_function(), region, opts);
    std::vector<Zero> out;
    for (Zero zr : raw) {
        double re = zr.z.real();
        while (re < -kPi) re += 4.0 * kPi;
        while (re >= 3.0 * kPi) re -= 4.0 * kPi;
        zr.z = {re, zr.z.imag()};
        if (zr.z.imag() < -axis_tol(zr.z)) continue;
        out.push_back(zr);
    }
    std::sort(out.begin(), out.end(), [](const Zero& a, const Zero& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return out;
}

std::vector<Zero> find_zeros(const CoefficientTriple& coeffs, const Rect& region, double tol) {
    return find_zeros(CharacteristicFunction(coeffs), region, tol);
}

bool on_axis(cplx z) { return std::abs(z.imag()) <= axis_tol(z); }

bool is_excluded_point(cplx z) {
    for (int k = -1; k <= 3; ++k) {
        if (std::abs(z - cplx(k * kPi, 0.0)) <= 1e-6) return true;
    }
    return false;
}

SpectrumReport spectrum_report(const CharacteristicFunction& phi, double tol) {
    if (!(tol > 0.0)) {
        throw ContractViolation("spectrum_report: tol must be positive");
    }
    SpectrumReport rep;
    rep.region = default_search_region(phi);
    for (const Zero& zr : find_zeros(phi, rep.region, tol)) {
        cplx z = zr.z;
        if (on_axis(z)) z = {z.real(), 0.0};
        const SpectralZero sz{z, z_to_lambda(z), zr.multiplicity};
        if (is_excluded_point(z)) {
            rep.boundary_indeterminate.push_back(sz);
        } else if (on_axis(z)) {
            rep.spectral_singularities.push_back(sz);
        } else {
            rep.eigenvalues.push_back(sz);
        }
    }
    rep.convention_note =
        "f^+_n = (-1)^n exp(inz) for n > n_max, f^-_n = (-1)^n exp(-inz) for n < n_min; "
        "Phi = W[f^-, f^+] (free pencil: -2i sin z); lambda = 2cos(z/2); "
        "z folded into Re z in [-pi, 3pi)";
    return rep;
}

SpectrumReport spectrum_report(const CoefficientTriple& coeffs, double tol) {
    return spectrum_report(CharacteristicFunction(coeffs), tol);
}

std::vector<cplx> phi_asymptotic_probe(const CoefficientTriple& coeffs,
                                       const std::vector<double>& im_ladder, double re_z) {
    for (std::size_t i = 0; i < im_ladder.size(); ++i) {
        if (im_ladder[i] < 0.0 || (i > 0 && !(im_ladder[i] > im_ladder[i - 1]))) {
            throw ContractViolation("phi_asymptotic_probe: ladder must be increasing and non-negative");
        }
    }
    cplx a_prod = 1.0;
    for (int n = coeffs.n_min(); n <= coeffs.n_max(); ++n) a_prod *= coeffs.a(n);
    const CharacteristicFunction f(coeffs, false);
    std::vector<cplx> out;
    out.reserve(im_ladder.size());
    for (double y : im_ladder) out.push_back(f.reduced({re_z, y}) * a_prod);
    return out;
}

} // namespace pencil
