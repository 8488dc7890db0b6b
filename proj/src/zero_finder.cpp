#include "pencil/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pencil/errors.hpp"

namespace pencil {

namespace {

struct ContourHit {};

struct Sample {
    cplx v;
    double log_rate;  // |f'/f|
};

class Engine {
public:
    Engine(const JetFunction& f, const ZeroFinderOptions& opts) : f_(f), opts_(opts) {}

    double scale(cplx z) const { return opts_.scale ? opts_.scale(z) : 1.0; }

    Sample sample(cplx z) const {
        const Jet j = f_(z, 1);
        const cplx v = j.value();
        const double mag = std::abs(v);
        if (!std::isfinite(mag)) {
            throw NumericRangeError("function value overflow on a contour");
        }
        if (mag <= opts_.contour_floor * scale(z)) throw ContourHit{};
        return {v, std::abs(j[1]) / mag};
    }

    /// Continuous change of arg f along the segment a -> b.
    double arg_change(cplx a, const Sample& sa, cplx b, const Sample& sb, int depth) const {
        const double h = std::abs(b - a);
        const double darg = std::arg(sb.v / sa.v);
        const bool smooth = std::abs(darg) <= 0.5 && h * std::max(sa.log_rate, sb.log_rate) <= 0.5;
        if (smooth) return darg;
        if (depth >= 48) throw ContourHit{};
        const cplx m = 0.5 * (a + b);
        const Sample sm = sample(m);
        return arg_change(a, sa, m, sm, depth + 1) + arg_change(m, sm, b, sb, depth + 1);
    }

    double segment(cplx a, cplx b) const { return arg_change(a, sample(a), b, sample(b), 0); }

    /// Throws ContourHit when the count is not trustworthy.
    int winding(const Rect& r) const {
        const cplx c0(r.re_lo, r.im_lo), c1(r.re_hi, r.im_lo), c2(r.re_hi, r.im_hi),
            c3(r.re_lo, r.im_hi);
        const double total = segment(c0, c1) + segment(c1, c2) + segment(c2, c3) + segment(c3, c0);
        const double turns = total / (2.0 * std::numbers::pi);
        const double rounded = std::round(turns);
        if (std::abs(turns - rounded) > 0.1 || rounded < 0.0) throw ContourHit{};
        return static_cast<int>(rounded);
    }

    bool newton(cplx& z, const Rect& r, int k) const {
        const double slack = 1e-9 * (1.0 + std::abs(r.center()));
        for (int it = 0; it < 80; ++it) {
            const Jet j = f_(z, k);
            if (j[k] == cplx(0.0)) return false;
            // f^{(k-1)} / f^{(k)} in Taylor-coefficient form.
            const cplx step = j[k - 1] / (static_cast<double>(k) * j[k]);
            z -= step;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
            if (!r.contains(z, slack + 0.5 * std::max(r.width(), r.height()))) return false;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z))) {
                break;
            }
        }
        return r.contains(z, slack);
    }

    bool accept(cplx z) const {
        const cplx v = f_(z, 0).value();
        return std::abs(v) <= opts_.tol * scale(z);
    }

    void process(const Rect& r, int count, std::vector<Zero>& out) const {
        if (count == 0) return;
        const double size = std::max(r.width(), r.height());
        if (count == 1) {
            cplx z = r.center();
            if (newton(z, r, 1)) {
                out.push_back({z, 1});
                return;
            }
        } else if (size < opts_.cluster_size) {
            cplx z = r.center();
            if (newton(z, r, count) && accept(z)) {
                out.push_back({z, count});
                return;
            }
        }
        if (size < opts_.min_size) {
            out.push_back({r.center(), count});
            return;
        }
        split(r, count, out);
    }

    void split(const Rect& r, int count, std::vector<Zero>& out) const {
        static constexpr std::array<double, 7> fractions{0.4871, 0.5313, 0.4420, 0.5711,
                                                         0.3990, 0.6137, 0.4603};
        const bool vertical_cut = r.width() >= r.height();
        for (double t : fractions) {
            Rect lo = r, hi = r;
            if (vertical_cut) {
                const double x = r.re_lo + t * r.width();
                lo.re_hi = x;
                hi.re_lo = x;
            } else {
                const double y = r.im_lo + t * r.height();
                lo.im_hi = y;
                hi.im_lo = y;
            }
            int c_lo = 0, c_hi = 0;
            try {
                c_lo = winding(lo);
                c_hi = winding(hi);
            } catch (const ContourHit&) {
                continue;
            }
            if (c_lo + c_hi != count) continue;
            process(lo, c_lo, out);
            process(hi, c_hi, out);
            return;
        }
        // Every cut passed too close to a cluster; try it as one zero.
        cplx z = r.center();
        if (count > 1 && newton(z, r, count) && accept(z)) {
            out.push_back({z, count});
            return;
        }
        throw RootFindingError("rectangle subdivision failed to reproduce the winding count " +
                               std::to_string(count) + " near z = (" +
                               std::to_string(r.center().real()) + ", " +
                               std::to_string(r.center().imag()) + ")");
    }

private:
    const JetFunction& f_;
    const ZeroFinderOptions& opts_;
};

void check_region(const Rect& r) {
    if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
        throw ContractViolation("search region must have positive width and height");
    }
}

Rect nudged(const Rect& r, int attempt) {
    const double d = 1.37e-3 * attempt;
    Rect s = r;
    s.re_lo -= d;
    s.re_hi -= d;
    s.im_lo -= 0.71 * d;
    s.im_hi += 1.13 * d;
    return s;
}

} // namespace

int winding_number(const JetFunction& f, const Rect& r, const ZeroFinderOptions& opts) {
    check_region(r);
    const Engine e(f, opts);
    try {
        return e.winding(r);
    } catch (const ContourHit&) {
        throw RootFindingError("contour passes through a zero of the function");
    }
}

std::vector<Zero> find_zeros(const JetFunction& f, Rect region, const ZeroFinderOptions& opts) {
    check_region(region);
    if (!(opts.tol > 0.0)) {
        throw ContractViolation("find_zeros: tol must be positive");
    }
    const Engine e(f, opts);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const Rect r = nudged(region, attempt);
        int count = 0;
        try {
            count = e.winding(r);
        } catch (const ContourHit&) {
            continue;
        }
        std::vector<Zero> out;
        e.process(r, count, out);
        std::sort(out.begin(), out.end(), [](const Zero& a, const Zero& b) {
            if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
            return a.z.imag() < b.z.imag();
        });
        return out;
    }
    throw RootFindingError("could not find a zero-free contour around the search region");
}

} // namespace pencil
