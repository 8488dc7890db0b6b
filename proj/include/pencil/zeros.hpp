#pragma once

#include <functional>
#include <vector>

#include "pencil/jet.hpp"

namespace pencil {

/// Taylor jet of order `order` of an entire function at z.
using JetFunction = std::function<Jet(cplx z, int order)>;

/// Axis-aligned rectangle [re_lo, re_hi] x [im_lo, im_hi] in the z-plane.
struct Rect {
    double re_lo = 0.0;
    double re_hi = 0.0;
    double im_lo = 0.0;
    double im_hi = 0.0;

    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    bool contains(cplx z, double slack = 0.0) const {
        return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
               z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
    }
};

struct Zero {
    cplx z;
    int multiplicity = 1;
};

struct ZeroFinderOptions {
    /// Newton acceptance |f(z)| <= tol * scale(z).
    double tol = 1e-10;
    /// Rectangles holding several zeros are shrunk below this size before a
    /// cluster Newton step is tried.
    double cluster_size = 1e-3;
    /// Subdivision stops here; the rectangle centre is reported.
    double min_size = 1e-7;
    /// |f| below contour_floor * scale on a contour counts as a hit.
    double contour_floor = 1e-9;
    /// Typical magnitude of f near z, used for relative thresholds.
    std::function<double(cplx)> scale;
};

/// Winding number of f around the boundary of `r` (counter-clockwise).
/// Throws RootFindingError if the contour passes through or too close to a zero.
int winding_number(const JetFunction& f, const Rect& r, const ZeroFinderOptions& opts = {});

/// All zeros of f inside `region` with multiplicities, by argument-principle
/// subdivision and Newton refinement.  The region edges are nudged
/// automatically when they pass through a zero.
std::vector<Zero> find_zeros(const JetFunction& f, Rect region, const ZeroFinderOptions& opts = {});

} // namespace pencil
