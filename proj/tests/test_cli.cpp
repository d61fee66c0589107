#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liespec/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "liespec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = liespec::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

} // namespace

TEST_CASE("sigma") {
    const Run r = run({"sigma", "--group", "t3", "--matrix", "1 0 0 0 3 0 0 0 2"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "sigma: 3 2 1"));
    CHECK(run({"sigma", "--group", "t2", "--matrix", "1 2 2 4"}).code == 2);
    CHECK(run({"sigma", "--group", "t2", "--matrix", "1 2 3"}).code == 2);
    CHECK(run({"sigma", "--group", "su2", "--matrix", "1 0 0 1"}).code == 2);
}

TEST_CASE("matrix from a file") {
    const auto path = std::filesystem::temp_directory_path() / "liespec_cli_matrix.txt";
    {
        std::ofstream f(path);
        f << "2\n2 0\n0 0.5\n";
    }
    const Run r = run({"sigma", "--group", "t2", "--matrix", path.string()});
    std::filesystem::remove(path);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "sigma: 2 0.5"));
}

TEST_CASE("lambda1") {
    CHECK(run({"lambda1", "--group", "su2"}).out == "lambda1=3 witness=spin(1/2) certified=true\n");
    CHECK(contains(run({"lambda1", "--group", "so3"}).out, "lambda1=8 witness=spin(1)"));
    CHECK(contains(run({"lambda1", "--group", "t2"}).out, "lambda1=39.4784176044"));
    CHECK(run({"lambda1", "--group", "su2", "--matrix", "10 0 0 0 10 0 0 0 0.01", "--window-cap", "20"}).code == 3);

    const Run js = run({"--format", "json", "lambda1", "--group", "su2"});
    REQUIRE(js.code == 0);
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["lambda1"].get<double>() == doctest::Approx(3.0));

    const Run csv = run({"--format", "csv", "lambda1", "--group", "so3"});
    CHECK(csv.out.rfind("group,lambda1,witness,certified", 0) == 0);
}

TEST_CASE("diam") {
    const Run t = run({"diam", "--group", "t2"});
    CHECK(t.code == 0);
    CHECK(contains(t.out, "diam=0.707106781187"));
    CHECK(contains(run({"diam", "--group", "so3", "--method", "biinv"}).out, "diam=1.57079632679"));
    CHECK(contains(run({"diam", "--group", "su2", "--method", "bounds", "--matrix", "2 0 0 0 2 0 0 0 2"}).out,
                   "upper=1.57079632679"));
    const Run g = run({"--format", "json", "diam", "--group", "su2", "--net-size", "2000"});
    REQUIRE(g.code == 0);
    const auto doc = nlohmann::json::parse(g.out);
    CHECK(doc["value"].get<double>() == doctest::Approx(3.14159).epsilon(0.08));
    CHECK(run({"diam", "--group", "su2", "--method", "lattice"}).code == 2);
}

TEST_CASE("ell") {
    CHECK(contains(run({"ell", "--group", "su2"}).out, "ell=2 k_max=2"));
    CHECK(contains(run({"ell", "--group", "t3"}).out, "ell=3 k_max=3"));
    CHECK(contains(run({"ell", "--group", "su2xsu2"}).out, "ell=5 k_max=5"));
    CHECK(run({"ell", "--group", "su2", "--rotation", "1 1 0 0 1 0 0 0 1"}).code == 2);
}

TEST_CASE("input errors") {
    CHECK(run({"lambda1", "--group", "su3"}).code == 2);
    CHECK(run({"--format", "xml", "lambda1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    const auto path = std::filesystem::temp_directory_path() / "liespec_cli_config.toml";
    {
        std::ofstream f(path);
        f << "bogus_key = 3\n";
    }
    CHECK(run({"--config", path.string(), "lambda1"}).code == 2);
    {
        std::ofstream f(path);
        f << "format = \"csv\"\n";
    }
    const Run ok = run({"--config", path.string(), "lambda1", "--group", "su2"});
    std::filesystem::remove(path);
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("group,lambda1", 0) == 0);
}

TEST_CASE("scan output does not depend on jobs") {
    const std::vector<std::string> base{"--format", "csv", "--seed", "5", "scan", "--group", "t3", "--samples", "8"};
    auto with_jobs = base;
    with_jobs.insert(with_jobs.begin(), {"--jobs", "3"});
    const Run a = run(base), b = run(with_jobs);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 9);
    const Run table = run({"scan", "--group", "t2", "--samples", "5"});
    CHECK(contains(table.out, "samples=5"));
}

TEST_CASE("degenerate and verify") {
    const Run d = run({"degenerate", "--group", "t2", "--kind", "dense-line"});
    CHECK(d.code == 0);
    CHECK(contains(d.out, "strictly decreasing: yes"));
    CHECK(run({"degenerate", "--group", "t2", "--kind", "shrink-transverse"}).code == 2);
    const Run v = run({"verify", "--group", "t2", "--trials", "10"});
    CHECK(v.code == 0);
    CHECK(contains(v.out, "all checks passed"));
}
