#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "icw/cli.hpp"
#include "icw/errors.hpp"
#include "icw/families.hpp"
#include "icw/io.hpp"

using namespace icw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const char* name) { return std::string(ICW_TEST_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
  fs::path p = fs::temp_directory_path() / ("icw_test_" + name);
  std::ofstream(p) << contents;
  return p.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes per command") {
    struct Row {
      std::vector<std::string> args;
      int code;
    };
    const std::string swap = data("swap.json");
    const std::vector<Row> rows{
        {{"pd-check", "--group", "F2", "--function", "haagerup:n=1"}, 0},
        {{"pd-check", "--group", "F2", "--function", "neg-wordlength"}, 1},
        {{"pd-check", "--group", "F2"}, 2},
        {{"pd-check", "--function", "delta"}, 2},
        {{"pd-check", "--group", "Z", "--table", data("decay_table.json")}, 0},
        {{"cnd-check", "--group", "F2"}, 0},
        {{"cnd-check", "--group", "F2", "--function", "haagerup:n=1"}, 1},
        {{"ideal", "--group", "F2", "--function", "haagerup:n=1", "--ideal", "c0"}, 0},
        {{"ideal", "--group", "F2", "--function", "haagerup:n=1", "--ideal", "cc"}, 1},
        {{"ideal", "--group", "F2", "--function", "haagerup:n=1", "--ideal", "bogus"}, 2},
        {{"lp-norm", "--group", "F2", "--function", "haagerup:n=1", "--p", "2"}, 0},
        {{"lp-norm", "--group", "F2", "--function", "haagerup:n=1", "--p", "1"}, 1},
        {{"lp-norm", "--group", "F2", "--function", "haagerup:n=1", "--p", "0.5"}, 2},
        {{"gns", "--group", "F2", "--function", "haagerup:n=1", "--radius", "2"}, 0},
        {{"gns", "--group", "F2", "--function", "neg-wordlength", "--radius", "2"}, 1},
        {{"norm-gap", "--group", "F2", "--element", "gensum", "--ideal", "c0", "--radius", "4"}, 0},
        {{"norm-gap", "--group", "Z2", "--element", "gensum", "--ideal", "cc", "--radius", "4"}, 1},
        {{"norm-gap", "--group", "Z2", "--element", "a + ", "--ideal", "cc"}, 2},
        {{"certificate", "--group", "F2", "--ideal", "c0", "--family", "haagerup:n=1..10"}, 0},
        {{"certificate", "--group", "F2", "--ideal", "cc", "--family", "haagerup:n=1..10"}, 1},
        {{"certificate", "--group", "F2", "--system", swap, "--action", "atmenable", "--family", "haagerup:n=1..3"}, 2},
        {{"coproduct", "--group", "F2"}, 0},
        {{"coproduct", "--group", "F2", "--radius", "30"}, 2},
        {{"growth", "--group", "F2", "--window", "6"}, 0},
        {{"dynamics", "--system", swap, "--op", "spectral-gap"}, 0},
        {{"dynamics", "--system", swap, "--op", "nope"}, 2},
        {{"dynamics", "--system", "/nonexistent/icw.json", "--op", "covariant"}, 2},
        {{"dn-report", "--system", swap}, 0},
        {{"dn-report"}, 2},
        {{"bogus"}, 2},
        {{}, 2},
        {{"--help"}, 0},
        {{"gns", "--help"}, 0},
    };
    for (const auto& row : rows) {
      std::string joined;
      for (const auto& a : row.args) joined += a + " ";
      CAPTURE(joined);
      Run r = run(row.args);
      CHECK(r.code == row.code);
      if (r.code == 2) CHECK_FALSE(r.err.empty());
    }
  }

  TEST_CASE("reports share a header and end with pass") {
    Run r = run({"lp-norm", "--group", "F2", "--function", "haagerup:n=1", "--p", "2", "--seed", "9"});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["schema"] == 1);
    CHECK(j["command"] == "lp-norm");
    CHECK(j["tolerances"]["psd_tol"] == 1e-8);
    CHECK(j["seed"] == 9);
    CHECK(j["status"] == "finite");
    CHECK(j["total"].get<double>() == doctest::Approx(1 + 4 * std::exp(-2.0) / (1 - 3 * std::exp(-2.0))));
    CHECK(j["pass"] == true);
    CHECK(r.out.rfind("\"pass\"") > r.out.rfind("\"total\""));
  }

  TEST_CASE("runs are deterministic") {
    std::vector<std::string> args{"pd-check", "--group", "F2", "--function", "random_pd:dim=3", "--seed", "4"};
    Run a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    args.back() = "5";
    CHECK(run(args).out != a.out);
  }

  TEST_CASE("dynamics report values") {
    auto j = run({"dynamics", "--system", data("swap.json"), "--op", "radon-nikodym", "--at", "a"}).json();
    CHECK(j["rho"][0] == 2.0);
    CHECK(j["rho"][1] == 0.5);
    auto env = run({"dynamics", "--system", data("swap.json"), "--op", "envelopes"}).json();
    CHECK(env["envelopes"]["integral_upper"] == 4.0 / 3.0);
    auto dn = run({"dn-report", "--system", data("swap.json")}).json();
    CHECK(dn["fixed_vector"] == true);
  }

  TEST_CASE("csv output and output files") {
    Run growth = run({"growth", "--group", "F2", "--window", "3", "--format", "csv"});
    REQUIRE(growth.code == 0);
    CHECK(growth.out == "k,sphere_count\n1,4\n2,12\n3,36\n");
    Run flat = run({"ideal", "--group", "F2", "--function", "delta", "--ideal", "cc", "--format", "csv"});
    CHECK(flat.out.rfind("key,value\n", 0) == 0);
    CHECK(flat.out.find("pass,true") != std::string::npos);

    fs::path target = fs::temp_directory_path() / "icw_test_report.json";
    fs::remove(target);
    Run file = run({"coproduct", "--group", "Z", "--radius", "2", "-o", target.string()});
    CHECK(file.code == 0);
    CHECK(file.out.empty());
    auto j = load_json_file(target.string());
    CHECK(j["density_rank"] == 25);
    fs::remove(target);
  }

  TEST_CASE("element budget from the environment") {
    ::setenv("ICW_ELEMENT_BUDGET", "10", 1);
    Run small = run({"pd-check", "--group", "F2", "--function", "delta"});
    ::setenv("ICW_ELEMENT_BUDGET", "-3", 1);
    Run bad = run({"pd-check", "--group", "F2", "--function", "delta"});
    ::unsetenv("ICW_ELEMENT_BUDGET");
    CHECK(small.code == 2);
    CHECK(small.err.find("budget") != std::string::npos);
    CHECK(bad.code == 2);
    CHECK(cli::default_budget() == 2'000'000);
    Run flag = run({"pd-check", "--group", "F2", "--function", "delta", "--budget", "10"});
    CHECK(flag.code == 2);
  }

  TEST_CASE("function and family specs") {
    auto f2 = GroupModel::free(2);
    auto h = cli::resolve_function(f2, "haagerup:n=1*haagerup:n=1", 0);
    CHECK(std::abs(h(parse_element(f2, "ab")) - std::exp(-4.0)) < 1e-15);
    auto r = cli::resolve_function(f2, "real_part(random_pd:dim=2,seed=3)", 0);
    CHECK(r(parse_element(f2, "a")).imag() == 0.0);
    CHECK_THROWS_AS(cli::resolve_function(f2, "random_pd:size=2", 0), InputError);
    CHECK(cli::expand_family("haagerup:n=1..3") ==
          std::vector<std::string>{"haagerup:n=1", "haagerup:n=2", "haagerup:n=3"});
    CHECK(cli::expand_family("delta;one") == std::vector<std::string>{"delta", "one"});
    CHECK_THROWS_AS(cli::expand_family("haagerup:n=3..1"), InputError);
    CHECK(cli::resolve_element(f2, "gensum") == gensum(f2));
  }

  TEST_CASE("json round trips") {
    auto sys = random_system(GroupModel::free_abelian(2), 5, 3);
    auto back = system_from_json(nlohmann::json::parse(to_json(sys).dump()));
    CHECK(back.measure() == sys.measure());
    for (int g = 0; g < 2; ++g) CHECK(back.permutation(g) == sys.permutation(g));

    auto rep = random_rep(GroupModel::free(2), 3, 1);
    auto rback = rep_from_json(nlohmann::json::parse(to_json(rep).dump()));
    for (int g = 0; g < 2; ++g) CHECK((rback.image(g) - rep.image(g)).norm() == 0.0);

    for (const TailCertificate& c : std::vector<TailCertificate>{NoCertificate{}, FiniteSupport{3},
                                                                 ExpDecay{2.0, 0.5, true, 0.0},
                                                                 ExpDecay{2.0, 0.5, false, 1.0},
                                                                 SphereSupSequence{{1.0, 0.5}, true},
                                                                 BoundedBelow{0.25, 2}})
      CHECK(to_json(certificate_from_json(nlohmann::json::parse(to_json(c).dump()), "c")) == to_json(c));
  }

  TEST_CASE("json errors name their location") {
    auto message = [](auto&& f) {
      try {
        f();
      } catch (const InputError& e) {
        return std::string(e.what());
      }
      return std::string("no error");
    };
    std::string syntax = message([] { parse_json_text("{\n  \"group\": \"F2\",\n  oops\n}", "sys.json"); });
    CHECK(syntax.find("sys.json:3:") != std::string::npos);

    auto doc = nlohmann::json::parse(R"({"group": "ZmodN:2", "points": 2, "action": {"a": [1, 1]}, "measure": [0.5, 0.5]})");
    CHECK(message([&] { system_from_json(doc, "s.json"); }).find("action.a[1]") != std::string::npos);
    doc["action"]["a"] = {1, 0};
    doc["measure"] = {0.5, -0.5};
    CHECK(message([&] { system_from_json(doc, "s.json"); }).find("measure") != std::string::npos);
    doc.erase("measure");
    CHECK(message([&] { system_from_json(doc, "s.json"); }).find("measure") != std::string::npos);

    auto table = nlohmann::json::parse(
        R"({"group": "F2", "values": {"e": 1, "aa": 0.5}, "certificate": {"kind": "finite_support", "radius": 1}})");
    CHECK_THROWS(table_from_json(table));
    table["certificate"]["radius"] = 2;
    auto h = table_from_json(table);
    CHECK(h(parse_element(GroupModel::free(2), "aa")) == cplx(0.5));
    table["certificate"] = {{"kind", "exp_decay"}, {"amplitude", 1.0}, {"rate", 0.5}, {"floor", 2.0}};
    CHECK(message([&] { table_from_json(table); }).find("floor") != std::string::npos);

    std::string path = temp_file("broken.json", "{\"group\": ");
    Run r = run({"dn-report", "--system", path});
    CHECK(r.code == 2);
    CHECK(r.err.find(path) != std::string::npos);
    fs::remove(path);
  }
}
