#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pencil/io.hpp"
#include "pencil/jost.hpp"
#include "pencil/principal.hpp"
#include "pencil/resolvent.hpp"
#include "pencil/spectrum.hpp"
#include "pencil/transforms.hpp"

namespace pencil::cli {

namespace {

using io::json;

struct Options {
    std::string input = "-";
    std::string out;
    double tol = 1e-10;
    int threads = 0;
    int grid_re = 200;
    int grid_im = 100;

    std::string grid_csv;
    std::string z;
    std::string side = "plus";
    std::optional<int> n_lo, n_hi;
    std::string rhs_file;
    double lambda_re = 0.0, lambda_im = 0.0;
    std::optional<int> order;
    int pad = 10;
    std::string mode;
    double q_base = 4.0;
};

std::string format_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x == 0.0 ? 0.0 : x);
    return buf;
}

/// "re" or "re,im".
cplx parse_complex(const std::string& s, const char* flag) {
    std::istringstream is(s);
    std::string re_s, im_s;
    std::getline(is, re_s, ',');
    std::getline(is, im_s);
    try {
        std::size_t used = 0;
        const double re = std::stod(re_s, &used);
        if (used != re_s.size()) throw std::invalid_argument(s);
        double im = 0.0;
        if (!im_s.empty()) {
            im = std::stod(im_s, &used);
            if (used != im_s.size()) throw std::invalid_argument(s);
        }
        return {re, im};
    } catch (const std::exception&) {
        throw io::InputError(std::string(flag) + ": expected \"re\" or \"re,im\", got \"" + s + "\"");
    }
}

json read_json(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") return json::parse(in);
    std::ifstream f(path);
    if (!f) throw io::InputError("cannot open " + path);
    return json::parse(f);
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw io::InputError("cannot write " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

unsigned thread_count(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    return std::max(1u, std::thread::hardware_concurrency());
}

void write_grid(const CoefficientTriple& coeffs, double im_max, const Options& o) {
    if (o.grid_re < 2 || o.grid_im < 1) throw io::InputError("grid needs --grid-re >= 2 and --grid-im >= 1");
    const CharacteristicFunction phi(coeffs, false);
    const int nr = o.grid_re, ni = o.grid_im;
    std::vector<double> vals(static_cast<std::size_t>(nr) * ni);
    auto re_at = [&](int i) { return -kPi + 4.0 * kPi * i / (nr - 1); };
    auto im_at = [&](int k) { return im_max * (k + 1) / ni; };
    const unsigned nt = std::min<unsigned>(thread_count(o.threads), static_cast<unsigned>(ni));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int k = static_cast<int>(t); k < ni; k += static_cast<int>(nt)) {
                    for (int i = 0; i < nr; ++i) {
                        vals[static_cast<std::size_t>(k) * nr + i] = std::log10(std::abs(phi(cplx(re_at(i), im_at(k)))));
                    }
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    Sink sink(o.grid_csv, std::cout);
    std::ostream& os = sink.stream();
    os << "re_z,im_z,log10_abs_phi\n";
    for (int k = 0; k < ni; ++k) {
        for (int i = 0; i < nr; ++i) {
            os << format_g(re_at(i)) << ',' << format_g(im_at(k)) << ','
               << format_g(vals[static_cast<std::size_t>(k) * nr + i]) << '\n';
        }
    }
}

void cmd_analyze(const io::ProblemSpec& spec, const Options& o, std::ostream& out) {
    json j;
    CoefficientTriple coeffs = spec.triple();
    double im_max = 0.0;
    if (spec.kind == io::ProblemKind::q) {
        const QSpectrumReport r = q_spectrum(std::get<QPencil>(spec.payload), o.tol);
        j = io::to_json(r);
        im_max = r.hat.region.im_hi;
    } else {
        const SpectrumReport r = spectrum_report(coeffs, o.tol);
        j = io::to_json(r);
        im_max = r.region.im_hi;
    }
    j["kind"] = io::to_string(spec.kind);
    j["tol"] = io::number(o.tol);
    Sink sink(o.out, out);
    sink.stream() << io::dump(j);
    if (!o.grid_csv.empty()) write_grid(coeffs, im_max, o);
}

void cmd_jost(const io::ProblemSpec& spec, const Options& o, std::ostream& out) {
    if (o.z.empty()) throw io::InputError("jost: --z is required");
    const cplx z = parse_complex(o.z, "--z");
    const Side side = side_from_string(o.side);
    const CoefficientTriple coeffs = spec.triple();
    const Window dw = default_jost_window(coeffs);
    const Window w{o.n_lo.value_or(dw.lo), o.n_hi.value_or(dw.hi)};
    if (w.hi < w.lo) throw io::InputError("jost: empty index window");

    json header = {{"z", io::to_json(z)}, {"side", to_string(side)}, {"window", {w.lo, w.hi}}};
    std::vector<cplx> vals;
    if (spec.kind == io::ProblemKind::q) {
        const QPencil& qp = std::get<QPencil>(spec.payload);
        header["normalization"] = "J(q^n) = f_n / q^(n/2) of the hat pencil, f_n = (-1)^n exp(+-i n z) beyond the support";
        header["q"] = io::number(qp.q_base());
        for (int n = w.lo; n <= w.hi; ++n) vals.push_back(q_jost(qp, z, std::pow(qp.q_base(), n), side));
    } else {
        const JostSolution f = jost_direct(coeffs, z, side, w);
        header["normalization"] = f.normalization;
        for (int n = w.lo; n <= w.hi; ++n) vals.push_back(f.value(n));
    }
    Sink sink(o.out, out);
    std::ostream& os = sink.stream();
    os << "# " << header.dump() << "\n";
    os << "n,re,im\n";
    for (int n = w.lo; n <= w.hi; ++n) {
        const cplx v = vals[static_cast<std::size_t>(n - w.lo)];
        os << n << ',' << format_g(v.real()) << ',' << format_g(v.imag()) << '\n';
    }
}

void cmd_resolvent(const io::ProblemSpec& spec, const Options& o, std::istream& in, std::ostream& out) {
    if (o.z.empty()) throw io::InputError("resolvent: --z is required");
    if (o.rhs_file.empty()) throw io::InputError("resolvent: --rhs-file is required");
    const cplx z = parse_complex(o.z, "--z");
    const CoefficientTriple coeffs = spec.triple();
    const IndexedSeq rhs = io::seq_from_json(read_json(o.rhs_file, in));
    const Window w{o.n_lo.value_or(resolvent_window(coeffs, rhs).lo),
                   o.n_hi.value_or(resolvent_window(coeffs, rhs).hi)};
    if (w.size() < 3) throw io::InputError("resolvent: output window needs at least three indices");
    const IndexedSeq y = apply_resolvent(coeffs, z, rhs, w);
    const IndexedSeq ly = apply_pencil(coeffs, z_to_lambda(z), y);
    double res = 0.0;
    for (int n = ly.first(); n <= ly.last(); ++n) {
        const cplx f = rhs.contains(n) ? rhs[n] : cplx(0.0);
        res = std::max(res, std::abs(ly[n] - f));
    }
    json j = {{"z", io::to_json(z)},
              {"lambda", io::to_json(z_to_lambda(z))},
              {"solution", io::to_json(y)},
              {"residual_norm", io::number(res)}};
    Sink sink(o.out, out);
    sink.stream() << io::dump(j);
}

/// Real lambda inside (-2, 2) is reached from both edges of the cut; take the
/// z where Phi is smaller relative to its size.
SpectralPoint resolve_point(const CoefficientTriple& coeffs, cplx lambda) {
    const SpectralPoint a = SpectralPoint::from_lambda(lambda);
    if (std::abs(lambda.imag()) > 1e-12 || std::abs(lambda.real()) >= 2.0) return a;
    const SpectralPoint b{4.0 * kPi - a.z, lambda};
    const CharacteristicFunction phi(coeffs, false);
    auto rel = [&](const SpectralPoint& p) { return std::abs(phi(p.z)) / phi.magnitude(p.z); };
    return rel(b) < rel(a) ? b : a;
}

void cmd_principal(const io::ProblemSpec& spec, const Options& o, std::ostream& out) {
    const CoefficientTriple coeffs = spec.triple();
    double scale = 1.0;
    if (spec.kind == io::ProblemKind::q) scale = q_to_discrete(std::get<QPencil>(spec.payload)).lambda_scale;
    SpectralPoint point;
    if (!o.z.empty()) {
        point = SpectralPoint::from_z(parse_complex(o.z, "--z"));
    } else {
        point = resolve_point(coeffs, cplx(o.lambda_re, o.lambda_im) / scale);
    }
    const int m = o.order.value_or(measured_multiplicity(coeffs, point.z));
    const PrincipalVectorStack st = principal_vectors(coeffs, point, m);
    json j = io::to_json(st, {coeffs.n_min() - o.pad, coeffs.n_max() + o.pad});
    if (spec.kind == io::ProblemKind::q) {
        j["lambda_scale"] = io::number(scale);
        j["lambda_q"] = io::to_json(point.lambda * scale);
    }
    Sink sink(o.out, out);
    sink.stream() << io::dump(j);
}

json spec_json(const char* kind, json payload) { return {{"kind", kind}, {"payload", std::move(payload)}}; }

void cmd_transform(const io::ProblemSpec& spec, const Options& o, std::ostream& out) {
    using K = io::ProblemKind;
    json j;
    if (o.mode == "sturm") {
        if (spec.kind == K::pencil) {
            j = spec_json("sturm", io::to_json(to_sturm_liouville(std::get<CoefficientTriple>(spec.payload))));
        } else if (spec.kind == K::sturm) {
            j = spec_json("pencil", io::to_json(from_sturm_liouville(std::get<SturmLiouvilleForm>(spec.payload))));
        } else {
            throw io::InputError("transform --mode sturm takes a pencil or sturm problem");
        }
    } else if (o.mode == "kg") {
        if (spec.kind == K::kg) {
            j = spec_json("pencil", io::to_json(from_klein_gordon(std::get<KleinGordonForm>(spec.payload))));
        } else if (spec.kind == K::pencil) {
            const CoefficientTriple& c = std::get<CoefficientTriple>(spec.payload);
            KleinGordonForm f;
            f.n_min = c.n_min();
            f.a.assign(c.a_values().begin(), c.a_values().end());
            for (int n = c.n_min(); n <= c.n_max(); ++n) {
                const cplx v = -c.p(n);
                if (std::abs(v * v - c.q(n)) > 1e-14 * (1.0 + std::abs(c.q(n)))) {
                    throw io::InputError("transform --mode kg: q_" + std::to_string(n) + " is not p_n^2");
                }
                f.v.push_back(v);
            }
            j = spec_json("kg", io::to_json(f));
        } else {
            throw io::InputError("transform --mode kg takes a kg or pencil problem");
        }
    } else if (o.mode == "q") {
        if (spec.kind == K::q) {
            const HatPencil h = q_to_discrete(std::get<QPencil>(spec.payload));
            j = spec_json("pencil", io::to_json(h.bridged));
            j["hat"] = io::to_json(h);
        } else if (spec.kind == K::pencil) {
            j = spec_json("q", io::to_json(q_from_triple(std::get<CoefficientTriple>(spec.payload), o.q_base)));
        } else {
            throw io::InputError("transform --mode q takes a q or pencil problem");
        }
    } else {
        throw io::InputError("transform: --mode must be sturm, kg or q");
    }
    Sink sink(o.out, out);
    sink.stream() << io::dump(j);
}

void emit_error(std::ostream& out, const char* type, const std::string& msg, json extra = json::object()) {
    json e = {{"type", type}, {"message", msg}};
    for (auto it = extra.begin(); it != extra.end(); ++it) e[it.key()] = it.value();
    out << io::dump({{"error", e}});
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Spectral analysis of quadratic difference pencils", "pencil"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--input", o.input, "Problem JSON file (default: stdin)");
    app.add_option("--out", o.out, "Output file (default: stdout)");
    app.add_option("--tol", o.tol, "Zero-finder tolerance")->check(CLI::PositiveNumber);
    app.add_option("--threads", o.threads, "Worker threads for grids (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--grid-re", o.grid_re, "Grid points along Re z");
    app.add_option("--grid-im", o.grid_im, "Grid points along Im z");

    auto* analyze = app.add_subcommand("analyze", "Spectrum report");
    analyze->add_option("--grid-csv", o.grid_csv, "Write log10|Phi| over the strip to this CSV file");

    auto* jost = app.add_subcommand("jost", "Jost solution on an index window (CSV)");
    jost->add_option("--z", o.z, "Spectral parameter \"re,im\"")->required();
    jost->add_option("--side", o.side, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    jost->add_option("--n-lo", o.n_lo, "First index");
    jost->add_option("--n-hi", o.n_hi, "Last index");

    auto* resolvent = app.add_subcommand("resolvent", "Apply the resolvent to a vector");
    resolvent->add_option("--z", o.z, "Spectral parameter \"re,im\"")->required();
    resolvent->add_option("--rhs-file", o.rhs_file, "JSON vector: [..] or {\"first\", \"values\"}")->required();
    resolvent->add_option("--n-lo", o.n_lo, "First output index");
    resolvent->add_option("--n-hi", o.n_hi, "Last output index");

    auto* principal = app.add_subcommand("principal", "Principal vectors at a zero of Phi");
    principal->add_option("--lambda-re", o.lambda_re, "Re lambda");
    principal->add_option("--lambda-im", o.lambda_im, "Im lambda");
    principal->add_option("--order", o.order, "Chain length (default: measured multiplicity)");
    principal->add_option("--z", o.z, "Pick the point by z instead of lambda");
    principal->add_option("--pad", o.pad, "Vectors are printed on the support widened by this much");

    auto* transform = app.add_subcommand("transform", "Sturm-Liouville, Klein-Gordon and q-difference forms");
    transform->add_option("--mode", o.mode, "sturm, kg or q")->required()->check(CLI::IsMember({"sturm", "kg", "q"}));
    transform->add_option("--q-base", o.q_base, "q for pencil -> q-pencil lifting")->check(CLI::Range(1.0, 1e300));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        emit_error(out, "input", e.what());
        return kExitInput;
    }

    try {
        const io::ProblemSpec spec = io::problem_from_json(read_json(o.input, in));
        if (analyze->parsed()) cmd_analyze(spec, o, out);
        else if (jost->parsed()) cmd_jost(spec, o, out);
        else if (resolvent->parsed()) cmd_resolvent(spec, o, in, out);
        else if (principal->parsed()) cmd_principal(spec, o, out);
        else cmd_transform(spec, o, out);
    } catch (const json::exception& e) {
        emit_error(out, "input", e.what());
        return kExitInput;
    } catch (const io::InputError& e) {
        emit_error(out, "input", e.what());
        return kExitInput;
    } catch (const ContractViolation& e) {
        emit_error(out, "input", e.what());
        return kExitInput;
    } catch (const SpectralPointError& e) {
        json extra = json::object();
        if (e.nearest_zero) extra["nearest_zero"] = io::to_json(*e.nearest_zero);
        emit_error(out, "numeric", e.what(), extra);
        return kExitNumeric;
    } catch (const NumericError& e) {
        emit_error(out, "numeric", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "unexpected failure: " << e.what() << "\n";
        emit_error(out, "numeric", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace pencil::cli
