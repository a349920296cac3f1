#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rt/driver.hpp"
#include "rt/errors.hpp"

using namespace rt;
namespace fs = std::filesystem;

namespace {

const char* const kLine = R"({
  "name": "line",
  "backend": "scalar",
  "complexes": {"line": {"ranks": [1, 1], "differentials": [[[2]]]}},
  "tasks": {"torsion": [{"complex": "line", "expect": EXPECT}]}
})";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rt_cli_" + std::to_string(fnv1a(std::to_string(reinterpret_cast<std::uintptr_t>(this)))));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = path / name;
        std::ofstream(p) << text;
        return p.string();
    }
};

std::string line_scenario(const std::string& expect) {
    std::string s = kLine;
    s.replace(s.find("EXPECT"), 6, expect);
    return s;
}

int run_quiet(const std::string& sub, const std::string& scenario, const TempDir& dir, std::string* text = nullptr) {
    RunOptions opt;
    opt.subcommand = sub;
    opt.scenario_path = scenario;
    opt.out_dir = dir.path.string();
    std::ostringstream out, err;
    const int code = run(opt, out, err);
    if (text) *text = out.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fnv1a") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("backends by name") {
    CHECK(backend_by_name("scalar")->order() == 1);
    CHECK(backend_by_name("cyclic:6")->order() == 6);
    CHECK(backend_by_name("quaternion8")->order() == 8);
    CHECK(backend_by_name("cyclic:2 x symmetric3")->order() == 12);
    CHECK_THROWS_AS(backend_by_name("dihedral"), ParseError);
    CHECK_THROWS_AS(backend_by_name("cyclic:x"), ParseError);
    CHECK_THROWS_AS(backend_by_name("cyclic:65"), ValidationError);
}

TEST_CASE("scenario parsing errors") {
    CHECK_THROWS_AS(Scenario::parse("{"), ParseError);
    CHECK_THROWS_AS(Scenario::parse("[]"), ParseError);
    CHECK_THROWS_AS(Scenario::parse(R"({"name": "x", "colour": 1})"), ParseError);
    CHECK_THROWS_AS(Scenario::load("/nonexistent/scenario.json"), ParseError);
    CHECK_THROWS_AS(Scenario::parse(R"({"backend": "scalar",
        "complexes": {"bad": {"ranks": [1, 1, 1], "differentials": [[[1]], [[1]]]}}})"),
                    ValidationError);
    const Scenario s = Scenario::parse(line_scenario("0.5"));
    CHECK(s.name() == "line");
    CHECK(s.hash() == fnv1a(line_scenario("0.5")));
    CHECK(s.tasks("torsion").size() == 1);
    CHECK_FALSE(s.has_tasks("cone"));
}

TEST_CASE("report formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(hex64(255) == "00000000000000ff");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");

    Report r;
    std::ostringstream csv;
    write_csv(r, csv);
    CHECK(csv.str() == "check,value,reference,residual,tolerance,pass,anchor,note\n");
    CHECK(r.all_pass());

    r.checks.push_back(make_check("near", 1.0, 1.0 + 1e-12, 1e-9, "identity"));
    r.checks.push_back(make_result("reported", 3.0, "identity"));
    CHECK(r.all_pass());
    r.checks.push_back(make_check("nan", std::nan(""), 0.0, 1.0, "identity"));
    CHECK_FALSE(r.all_pass());
}

TEST_CASE("exit codes") {
    const TempDir dir;
    std::string text;
    CHECK(run_quiet("torsion", dir.write("ok.json", line_scenario("0.69314718055994531")), dir, &text) == 0);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(fs::exists(dir.path / "torsion_report.txt"));
    CHECK(slurp(dir.path / "torsion_report.txt") == text);
    CHECK(slurp(dir.path / "torsion_report.csv").rfind("check,value,", 0) == 0);

    CHECK(run_quiet("torsion", dir.write("wrong.json", line_scenario("0.5")), dir) == 1);
    CHECK(run_quiet("torsion", dir.write("broken.json", "{\"name\": "), dir) == 2);
    CHECK(run_quiet("torsion", (dir.path / "missing.json").string(), dir) == 2);
    CHECK(run_quiet("nonsense", dir.write("ok2.json", line_scenario("0.69314718055994531")), dir) == 2);
    CHECK(run_quiet("torsion", dir.write("invalid.json", R"({"backend": "scalar",
        "complexes": {"bad": {"ranks": [1, 1, 1], "differentials": [[[1]], [[1]]]}},
        "tasks": {"torsion": [{"complex": "bad"}]}})"),
                    dir) == 3);
}

TEST_CASE("subcommand list") {
    const auto& subs = subcommands();
    for (const char* s : {"torsion", "cone", "milnor", "cmm", "morse", "anomaly", "witten", "detclass", "selftest"})
        CHECK(std::find(subs.begin(), subs.end(), s) != subs.end());
}

TEST_CASE("determinant class verdicts through the driver") {
    const TempDir dir;
    const std::string flat = dir.write("flat.json", R"({"name": "flat", "backend": "scalar", "tasks": {"detclass": [
        {"family": "flat", "grids": [64, 128, 256, 512], "expect": "DIVERGENT"}]}})");
    std::string text;
    CHECK(run_quiet("detclass", flat, dir, &text) == 0);
    CHECK(text.find("DIVERGENT") != std::string::npos);
    CHECK(fs::exists(dir.path / "detclass_sweep.csv"));
}
