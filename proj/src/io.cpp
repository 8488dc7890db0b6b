#include "pencil/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace pencil::io {

json number(double x) {
    if (!std::isfinite(x)) {
        if (std::isnan(x)) return "nan";
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    double r = std::strtod(buf, nullptr);
    if (r == 0.0) r = 0.0;
    return r;
}

json to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

namespace {

double real_from_json(const json& j, const char* what) {
    if (!j.is_number()) {
        throw InputError(std::string(what) + ": expected a number");
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw InputError(std::string(what) + ": value must be finite");
    return x;
}

int int_from_json(const json& j, const char* what) {
    if (!j.is_number_integer()) {
        throw InputError(std::string(what) + ": expected an integer");
    }
    return j.get<int>();
}

const json& require(const json& j, const char* key) {
    if (!j.is_object()) throw InputError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field \"") + key + "\"");
    return *it;
}

std::vector<cplx> complex_array(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const json& e : j) v.push_back(complex_from_json(e));
    return v;
}

/// Optional array of exactly `len` entries; absent gives `fill`.
std::vector<cplx> optional_array(const json& j, const char* key, std::size_t len, cplx fill) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::vector<cplx>(len, fill);
    std::vector<cplx> v = complex_array(*it, key);
    if (v.size() != len) {
        throw InputError(std::string("field \"") + key + "\" has " + std::to_string(v.size()) +
                         " entries, expected " + std::to_string(len));
    }
    return v;
}

json complex_list(std::span<const cplx> v) {
    json a = json::array();
    for (cplx z : v) a.push_back(to_json(z));
    return a;
}

/// Length implied by n_max or by the first array present.
std::size_t window_length(const json& j, int n_min, std::initializer_list<const char*> keys) {
    if (auto it = j.find("n_max"); it != j.end()) {
        const int n_max = int_from_json(*it, "n_max");
        if (n_max < n_min) throw InputError("n_max must not be below n_min");
        return static_cast<std::size_t>(n_max - n_min + 1);
    }
    for (const char* k : keys) {
        if (auto it = j.find(k); it != j.end() && it->is_array()) {
            if (it->empty()) throw InputError(std::string("field \"") + k + "\" is empty");
            return it->size();
        }
    }
    return 1;
}

json zero_list(std::vector<SpectralZero> zs) {
    std::sort(zs.begin(), zs.end(), [](const SpectralZero& x, const SpectralZero& y) {
        if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
        return x.z.imag() < y.z.imag();
    });
    json a = json::array();
    for (const SpectralZero& s : zs) {
        a.push_back({{"z", to_json(s.z)}, {"lambda", to_json(s.lambda)}, {"multiplicity", s.multiplicity}});
    }
    return a;
}

} // namespace

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {real_from_json(j, "complex value"), 0.0};
    if (j.is_array()) {
        if (j.size() != 2) throw InputError("complex value: expected [re, im]");
        return {real_from_json(j[0], "complex value"), real_from_json(j[1], "complex value")};
    }
    if (j.is_object()) {
        const double re = j.contains("re") ? real_from_json(j["re"], "re") : 0.0;
        const double im = j.contains("im") ? real_from_json(j["im"], "im") : 0.0;
        return {re, im};
    }
    throw InputError("complex value: expected a number, [re, im] or {\"re\", \"im\"}");
}

CoefficientTriple triple_from_json(const json& j) {
    if (!j.is_object()) throw InputError("pencil payload must be a JSON object");
    const int n_min = j.contains("n_min") ? int_from_json(j["n_min"], "n_min") : 0;
    const std::size_t len = window_length(j, n_min, {"a", "p", "q"});
    return {n_min, optional_array(j, "a", len, 1.0), optional_array(j, "p", len, 0.0),
            optional_array(j, "q", len, 0.0)};
}

json to_json(const CoefficientTriple& c) {
    return {{"n_min", c.n_min()},
            {"n_max", c.n_max()},
            {"a", complex_list(c.a_values())},
            {"p", complex_list(c.p_values())},
            {"q", complex_list(c.q_values())}};
}

SturmLiouvilleForm sturm_from_json(const json& j) {
    SturmLiouvilleForm f;
    f.n_min = j.contains("n_min") ? int_from_json(j["n_min"], "n_min") : 0;
    f.a = complex_array(require(j, "a"), "a");
    std::vector<cplx> b = complex_array(require(j, "b"), "b");
    if (f.a.empty() || b.size() != f.a.size() + 1) {
        throw InputError("sturm payload: b must have one entry more than a");
    }
    f.b = IndexedSeq(f.n_min, std::move(b));
    return f;
}

json to_json(const SturmLiouvilleForm& f) {
    return {{"n_min", f.n_min}, {"a", complex_list(f.a)}, {"b", complex_list(f.b.values())}};
}

KleinGordonForm kg_from_json(const json& j) {
    KleinGordonForm f;
    f.n_min = j.contains("n_min") ? int_from_json(j["n_min"], "n_min") : 0;
    f.v = complex_array(require(j, "v"), "v");
    if (f.v.empty()) throw InputError("kg payload: v is empty");
    f.a = optional_array(j, "a", f.v.size(), 1.0);
    return f;
}

json to_json(const KleinGordonForm& f) {
    return {{"n_min", f.n_min}, {"a", complex_list(f.a)}, {"v", complex_list(f.v)}};
}

QPencil qpencil_from_json(const json& j) {
    const double q = real_from_json(require(j, "q"), "q");
    const int n_min = int_from_json(require(j, "n_min"), "n_min");
    const std::size_t len = window_length(j, n_min, {"a", "b", "c"});
    return {q, n_min, complex_array(require(j, "a"), "a"), optional_array(j, "b", len, 0.0),
            optional_array(j, "c", len, 0.0)};
}

json to_json(const QPencil& qp) {
    return {{"q", number(qp.q_base())},
            {"n_min", qp.n_min()},
            {"n_max", qp.n_max()},
            {"a", complex_list(qp.a_values())},
            {"b", complex_list(qp.b_values())},
            {"c", complex_list(qp.c_values())}};
}

json to_json(const HatPencil& h) {
    return {{"q", number(h.q_base)},
            {"n_min", h.window.lo},
            {"n_max", h.window.hi},
            {"a_hat", complex_list(h.a_hat.values())},
            {"b_hat", complex_list(h.b_hat.values())},
            {"c_hat", complex_list(h.c_hat.values())},
            {"lambda_scale", number(h.lambda_scale)},
            {"pencil", to_json(h.bridged)}};
}

json to_json(const IndexedSeq& s) {
    return {{"first", s.first()}, {"values", complex_list(s.values())}};
}

IndexedSeq seq_from_json(const json& j) {
    if (j.is_array()) return IndexedSeq(0, complex_array(j, "vector"));
    const int first = j.contains("first") ? int_from_json(j["first"], "first") : 0;
    std::vector<cplx> v = complex_array(require(j, "values"), "values");
    if (v.empty()) throw InputError("vector is empty");
    return IndexedSeq(first, std::move(v));
}

const char* to_string(ProblemKind k) {
    switch (k) {
    case ProblemKind::pencil: return "pencil";
    case ProblemKind::sturm: return "sturm";
    case ProblemKind::kg: return "kg";
    case ProblemKind::q: return "q";
    }
    return "?";
}

CoefficientTriple ProblemSpec::triple() const {
    switch (kind) {
    case ProblemKind::pencil: return std::get<CoefficientTriple>(payload);
    case ProblemKind::sturm: return from_sturm_liouville(std::get<SturmLiouvilleForm>(payload));
    case ProblemKind::kg: return from_klein_gordon(std::get<KleinGordonForm>(payload));
    case ProblemKind::q: return q_to_discrete(std::get<QPencil>(payload)).bridged;
    }
    throw InputError("unknown problem kind");
}

ProblemSpec problem_from_json(const json& j) {
    if (!j.is_object()) throw InputError("problem must be a JSON object");
    ProblemSpec spec;
    if (!j.contains("kind")) {
        spec.payload = triple_from_json(j);
        return spec;
    }
    const json& k = j["kind"];
    if (!k.is_string()) throw InputError("\"kind\" must be a string");
    const std::string kind = k.get<std::string>();
    const json& payload = require(j, "payload");
    if (kind == "pencil") {
        spec.kind = ProblemKind::pencil;
        spec.payload = triple_from_json(payload);
    } else if (kind == "sturm") {
        spec.kind = ProblemKind::sturm;
        spec.payload = sturm_from_json(payload);
    } else if (kind == "kg") {
        spec.kind = ProblemKind::kg;
        spec.payload = kg_from_json(payload);
    } else if (kind == "q") {
        spec.kind = ProblemKind::q;
        spec.payload = qpencil_from_json(payload);
    } else {
        throw InputError("unknown kind \"" + kind + "\" (expected pencil, sturm, kg or q)");
    }
    return spec;
}

json to_json(const SpectrumReport& r) {
    return {{"eigenvalues", zero_list(r.eigenvalues)},
            {"spectral_singularities", zero_list(r.spectral_singularities)},
            {"boundary_indeterminate", zero_list(r.boundary_indeterminate)},
            {"continuous_spectrum", json::array({number(r.continuous_lo), number(r.continuous_hi)})},
            {"search_region",
             {{"re", json::array({number(r.region.re_lo), number(r.region.re_hi)})},
              {"im", json::array({number(r.region.im_lo), number(r.region.im_hi)})}}},
            {"convention", r.convention_note}};
}

json to_json(const QSpectrumReport& r) {
    return {{"eigenvalues", zero_list(r.eigenvalues)},
            {"spectral_singularities", zero_list(r.spectral_singularities)},
            {"boundary_indeterminate", zero_list(r.boundary_indeterminate)},
            {"continuous_spectrum", json::array({number(r.continuous_lo), number(r.continuous_hi)})},
            {"lambda_scale", number(r.lambda_scale)},
            {"hat", to_json(r.hat)}};
}

json to_json(const GrowthClass& g) {
    return {{"tag", g.tag},
            {"in_l2", g.in_l2},
            {"h_minus_p", g.h_minus_p},
            {"rate", json::array({number(g.rate_left), number(g.rate_right)})},
            {"degree", json::array({number(g.degree_left), number(g.degree_right)})}};
}

json to_json(const PrincipalVectorStack& s, Window shown) {
    json vectors = json::array();
    for (std::size_t r = 0; r < s.U.size(); ++r) {
        const IndexedSeq& u = s.U[r];
        const Window w{std::max(shown.lo, u.first()), std::min(shown.hi, u.last())};
        std::vector<cplx> vals;
        for (int n = w.lo; n <= w.hi; ++n) vals.push_back(u[n]);
        vectors.push_back({{"order", r},
                           {"first", w.lo},
                           {"values", complex_list(vals)},
                           {"growth", to_json(s.growth[r])},
                           {"chain_residual", number(s.chain_residual[r])}});
    }
    return {{"z", to_json(s.point.z)},
            {"lambda", to_json(s.point.lambda)},
            {"kind", to_string(s.kind)},
            {"multiplicity", s.multiplicity},
            {"measured_winding", s.measured_winding},
            {"beta", complex_list(s.beta)},
            {"vectors", vectors}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace pencil::io
