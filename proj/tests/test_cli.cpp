#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "pencil/io.hpp"

using namespace pencil;
using io::json;

namespace {

struct Result {
    int code;
    std::string out;
};

Result run_cli(std::vector<std::string> args, const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("pencil_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("json complex values") {
    CHECK(io::complex_from_json(json(1.5)) == cplx(1.5));
    CHECK(io::complex_from_json(json::array({1.0, -2.0})) == cplx(1.0, -2.0));
    CHECK(io::complex_from_json(json{{"im", 3.0}}) == cplx(0.0, 3.0));
    CHECK_THROWS_AS(io::complex_from_json(json("x")), io::InputError);
    CHECK_THROWS_AS(io::complex_from_json(json::array({1.0})), io::InputError);
}

TEST_CASE("json number formatting") {
    CHECK(io::number(0.1 + 0.2).dump() == "0.3");
    CHECK(io::number(-0.0).dump() == "0.0");
    CHECK(io::number(1.0 / 3.0).dump() == "0.333333333333333");
}

TEST_CASE("triple payloads") {
    const CoefficientTriple c = io::triple_from_json(json::parse(R"({"n_min": -1, "q": [0, [0, 2], -3]})"));
    CHECK(c.n_min() == -1);
    CHECK(c.n_max() == 1);
    CHECK(c.a(0) == cplx(1.0));
    CHECK(c.q(0) == cplx(0.0, 2.0));
    CHECK_THROWS_AS(io::triple_from_json(json::parse(R"({"n_min": 0, "n_max": 1, "q": [1]})")), io::InputError);
    const CoefficientTriple back = io::triple_from_json(io::to_json(c));
    CHECK(back.q(1) == c.q(1));
    CHECK(io::problem_from_json(json::parse(R"({"kind": "q", "payload": {"q": 4, "n_min": 0, "a": [9], "b": [1], "c": [0]}})"))
              .kind == io::ProblemKind::q);
    CHECK_THROWS_AS(io::problem_from_json(json::parse(R"({"kind": "x", "payload": {}})")), io::InputError);
}

TEST_CASE("analyze free pencil") {
    const Result r = run_cli({"analyze"}, "{}");
    REQUIRE(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["eigenvalues"].empty());
    CHECK(j["spectral_singularities"].empty());
    CHECK(j["continuous_spectrum"] == json::array({-2.0, 2.0}));
}

TEST_CASE("analyze single site") {
    const Result r = run_cli({"analyze", "--tol", "1e-10"}, R"({"n_min": 0, "q": [-3]})");
    REQUIRE(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    REQUIRE(j["eigenvalues"].size() == 2);
    CHECK(j["eigenvalues"][0]["lambda"][0].get<double>() == doctest::Approx(2.36760454372431).epsilon(1e-12));
    CHECK(j["eigenvalues"][1]["lambda"][0].get<double>() == doctest::Approx(-2.36760454372431).epsilon(1e-12));
}

TEST_CASE("output is deterministic") {
    const std::string in = R"({"kind": "pencil", "payload": {"n_min": -1, "a": [1.2, 0.8], "p": [[0, 0.3], 0], "q": [-2, [0.5, 1]]}})";
    const Result a = run_cli({"analyze"}, in), b = run_cli({"analyze"}, in);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const auto g1 = temp_file("grid1.csv"), g4 = temp_file("grid4.csv");
    CHECK(run_cli({"analyze", "--grid-csv", g1.string(), "--threads", "1", "--grid-re", "40", "--grid-im", "20"}, in).code == 0);
    CHECK(run_cli({"analyze", "--grid-csv", g4.string(), "--threads", "4", "--grid-re", "40", "--grid-im", "20"}, in).code == 0);
    const std::string s1 = slurp(g1), s4 = slurp(g4);
    CHECK(s1 == s4);
    CHECK(std::count(s1.begin(), s1.end(), '\n') == 40 * 20 + 1);
    CHECK(s1.rfind("re_z,im_z,log10_abs_phi\n", 0) == 0);
}

TEST_CASE("input errors") {
    Result r = run_cli({"analyze"}, "{not json");
    CHECK(r.code == cli::kExitInput);
    CHECK(json::parse(r.out)["error"]["type"] == "input");
    r = run_cli({"analyze"}, R"({"kind": "nope", "payload": {}})");
    CHECK(r.code == cli::kExitInput);
    r = run_cli({"analyze"}, R"({"n_min": 0, "a": [0]})");
    CHECK(r.code == cli::kExitInput);
    r = run_cli({"frobnicate"}, "{}");
    CHECK(r.code == cli::kExitInput);
    r = run_cli({"jost", "--z", "abc"}, "{}");
    CHECK(r.code == cli::kExitInput);
}

TEST_CASE("numeric failures") {
    const auto rhs = temp_file("rhs.json");
    std::ofstream(rhs) << "[1, 0, 0]";
    const Result r = run_cli({"resolvent", "--z", "0,1.19476321728711", "--rhs-file", rhs.string()}, R"({"q": [-3]})");
    CHECK(r.code == cli::kExitNumeric);
    const json j = json::parse(r.out);
    CHECK(j["error"]["type"] == "numeric");
    CHECK(j["error"].contains("nearest_zero"));
}

TEST_CASE("resolvent subcommand") {
    const auto rhs = temp_file("rhs2.json");
    std::ofstream(rhs) << R"({"first": -1, "values": [1, [0, 1], 0.5]})";
    const Result r = run_cli({"resolvent", "--z", "0.5,0.3", "--rhs-file", rhs.string()}, R"({"q": [-3]})");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["residual_norm"].get<double>() < 1e-10);
    CHECK(j["solution"]["values"].size() > 3);
}

TEST_CASE("jost subcommand") {
    const Result r = run_cli({"jost", "--z", "0.5,0.2", "--side", "minus", "--n-lo", "-3", "--n-hi", "3"}, R"({"q": [-3]})");
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::string header;
    std::getline(is, header);
    REQUIRE(header.rfind("# ", 0) == 0);
    const json h = json::parse(header.substr(2));
    CHECK(h["side"] == "minus");
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2 + 7);
}

TEST_CASE("principal subcommand picks the branch of a real lambda") {
    const Result r = run_cli({"principal", "--lambda-re", "-1.4142135623730951"}, R"({"q": [[0, 2]]})");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["kind"] == "singularity");
    CHECK(j["multiplicity"] == 2);
    CHECK(j["vectors"][0]["growth"]["tag"] == "H_-1");
    CHECK(j["z"][0].get<double>() == doctest::Approx(2.5 * 3.141592653589793));
}

TEST_CASE("transform subcommand") {
    const Result s = run_cli({"transform", "--mode", "sturm"}, R"({"n_min": 0, "a": [2]})");
    REQUIRE(s.code == 0);
    const json sj = json::parse(s.out);
    CHECK(sj["kind"] == "sturm");
    const Result back = run_cli({"transform", "--mode", "sturm"}, s.out);
    REQUIRE(back.code == 0);
    CHECK(json::parse(back.out)["payload"]["a"][0][0] == 2.0);

    const Result q = run_cli({"transform", "--mode", "q", "--q-base", "4"}, R"({"q": [-3]})");
    REQUIRE(q.code == 0);
    const Result qa = run_cli({"analyze"}, q.out);
    REQUIRE(qa.code == 0);
    const json qj = json::parse(qa.out);
    CHECK(qj["lambda_scale"].get<double>() == doctest::Approx(std::sqrt(2.0)));
    CHECK(qj["eigenvalues"].size() == 2);

    CHECK(run_cli({"transform", "--mode", "kg"}, R"({"q": [-3]})").code == cli::kExitInput);
    const Result kg = run_cli({"transform", "--mode", "kg"}, R"({"kind": "kg", "payload": {"v": [1]}})");
    REQUIRE(kg.code == 0);
    CHECK(json::parse(kg.out)["payload"]["p"][0][0] == -1.0);
}
