#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "pencil/pencil_core.hpp"
#include "pencil/principal.hpp"
#include "pencil/spectrum.hpp"
#include "pencil/transforms.hpp"

namespace pencil::io {

using json = nlohmann::json;

/// Malformed or inconsistent JSON input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Doubles are rounded to 15 significant digits and -0 becomes 0, so that
/// dumps are byte-stable.
json number(double x);
json to_json(cplx z);

/// Accepts a number, [re, im] or {"re": .., "im": ..}.
cplx complex_from_json(const json& j);

/// {"n_min", "n_max"?, "a"?, "p"?, "q"?}; omitted arrays take their free values.
CoefficientTriple triple_from_json(const json& j);
json to_json(const CoefficientTriple& c);

/// {"n_min", "a", "b"} with b one entry longer than a.
SturmLiouvilleForm sturm_from_json(const json& j);
json to_json(const SturmLiouvilleForm& f);

/// {"n_min", "a"?, "v"}.
KleinGordonForm kg_from_json(const json& j);
json to_json(const KleinGordonForm& f);

/// {"q", "n_min", "n_max", "a", "b", "c"}.
QPencil qpencil_from_json(const json& j);
json to_json(const QPencil& qp);

json to_json(const HatPencil& h);
json to_json(const IndexedSeq& s);
IndexedSeq seq_from_json(const json& j);

enum class ProblemKind { pencil, sturm, kg, q };

const char* to_string(ProblemKind k);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::pencil;
    std::variant<CoefficientTriple, SturmLiouvilleForm, KleinGordonForm, QPencil> payload;

    /// The three-term pencil behind any kind (the hat pencil for kind q).
    CoefficientTriple triple() const;
};

/// {"kind": "pencil"|"sturm"|"kg"|"q", "payload": {...}}; a bare object
/// without "kind" is read as a pencil payload.
ProblemSpec problem_from_json(const json& j);

/// Zero lists are sorted by Re z, then Im z.
json to_json(const SpectrumReport& r);
json to_json(const QSpectrumReport& r);
json to_json(const GrowthClass& g);
json to_json(const PrincipalVectorStack& s, Window shown);

/// Dump with two-space indentation and a trailing newline.
std::string dump(const json& j);

} // namespace pencil::io
