#include "gribov/cli.hpp"
#include "gribov/io.hpp"

#include "doctest.h"

#include <fstream>
#include <sstream>

using namespace gribov;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "gribov");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli_main(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("coefficient vector JSON round-trip") {
    CoefficientVector v(Basis::u, 3, {cplx(1.5, -2.0), cplx(0.1, 0.0)});
    auto back = coefficient_vector_from_json(Json::parse(to_json(v).dump()));
    CHECK(back.basis() == Basis::u);
    CHECK(back.start() == 3);
    CHECK(max_abs_difference(back, v) == 0.0);
    CHECK_THROWS(coefficient_vector_from_json(Json::parse(R"({"basis":"x","start":0,"re":[]})")));
    CHECK_THROWS(coefficient_vector_from_json(Json::parse(R"({"basis":"e","start":0,"re":[1],"im":[]})")));
    CHECK_THROWS(coefficient_vector_from_json(Json::parse(R"([1,2])")));
}

TEST_CASE("format_double is fixed at 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(4.0) == "4");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(-0.0) == "0");
}

TEST_CASE("deficiency report JSON") {
    DeficiencyReport r;
    r.p = 1, r.m = 2, r.criterion = 2.0, r.verdict = Determinacy::inconclusive;
    Json j = to_json(r);
    CHECK(j["verdict"] == "inconclusive");
    CHECK(j["n_plus"].is_null());
}

TEST_CASE("spectrum subcommand") {
    auto r = invoke({"spectrum", "--mu", "3", "--lambda", "1", "--n", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("1,4,0,") != std::string::npos);
    CHECK(r.out.find("2,5,0,") != std::string::npos);
}

TEST_CASE("deficiency subcommand") {
    auto r = invoke({"deficiency", "--p", "1", "--m", "2", "--jmax", "200"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["verdict"] == "completely_indeterminate");
    CHECK(j["n_plus"] == 2);
    CHECK(j["n_minus"] == 2);
}

TEST_CASE("invalid input exits 2 with a JSON error") {
    for (auto args : std::vector<std::vector<std::string>>{{"spectrum", "--bogus", "1"},
                                                           {"spectrum", "--tol", "0"},
                                                           {"spectrum", "--format", "svg"},
                                                           {"sigma0", "--mu", "1,,2"},
                                                           {"polys", "--kind", "hermite"},
                                                           {"kernel-apply", "--input", "/nonexistent.json"},
                                                           {"frobnicate"},
                                                           {}}) {
        auto r = invoke(args);
        CHECK(r.code == 2);
        CHECK(Json::parse(r.err.substr(0, r.err.find('\n')))["error"] == "invalid_input");
    }
}

TEST_CASE("module errors exit 1") {
    auto r = invoke({"eigvec", "--xi-re", "1e200", "--n", "5000"});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.err)["error"] == "overflow");
}

TEST_CASE("kernel-apply rejects complex input") {
    std::string path = "kernel_apply_complex.json";
    std::ofstream(path) << R"({"basis":"u","start":2,"re":[1],"im":[0.5]})";
    CHECK(invoke({"kernel-apply", "--input", path}).code == 2);
    std::ofstream(path) << R"({"basis":"u","start":2,"re":[1]})";
    auto ok = invoke({"kernel-apply", "--input", path, "--samples", "3", "--ymax", "2"});
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("y,value\n", 0) == 0);
}

TEST_CASE("polys subcommand") {
    Json j = Json::parse(invoke({"polys", "--kind", "plasma_P", "--n", "2"}).out);
    CHECK(j["coeffs"] == Json::parse(R"([["2","1"],["0","1"],["4","1"]])"));
    Json f = Json::parse(invoke({"polys", "--kind", "second", "--n", "2", "--x", "3"}).out);
    CHECK(f["Q"][0].get<double>() == doctest::Approx(0.7071067811865476));
}

TEST_CASE("output is deterministic") {
    std::vector<std::string> args{"eigvec", "--xi-re", "2", "--xi-im", "3", "--n", "300"};
    CHECK(invoke(args).out == invoke(args).out);
}

TEST_CASE("svg output for curves") {
    auto r = invoke({"eigvec", "--n", "100", "--format", "svg"});
    CHECK(r.code == 0);
    CHECK(r.out.find("<svg") != std::string::npos);
    CHECK(r.out.find("polyline") != std::string::npos);
}
