#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "matrix_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using embedlab::cli::run_cli;

namespace {

const std::string kData = EMBEDLAB_TEST_DATA_DIR;

struct Run {
  int code = -1;
  json report;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, embedlab::cli::CliEnvironment env = {}) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(args, out, err, env);
  r.err = err.str();
  r.out = out.str();
  // help text is plain; everything else is one JSON document
  if (!r.out.empty() && r.out.front() == '{') r.report = json::parse(r.out);
  return r;
}

std::string data_file(const std::string& name) { return kData + "/" + name; }

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("embedlab_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("embed e2e1.json exits 1 with NotEmbeddable") {
    const Run r = run({"embed", data_file("e2e1.json")});
    CHECK(r.code == 1);
    CHECK(r.report["result"]["verdict"] == "NotEmbeddable");
    CHECK(r.report["status"] == "negative");
    CHECK(r.report["result"]["branch_failures"].size() == 1);
  }

  TEST_CASE("embed e1e2.json exits 0") {
    const Run r = run({"embed", data_file("e1e2.json")});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["verdict"] == "Embeddable");
    CHECK(r.report["result"]["generator"].is_array());
  }

  TEST_CASE("expm z1.json") {
    const Run r = run({"expm", data_file("z1.json")});
    CHECK(r.code == 0);
    const double want[3][3] = {{0.135, 0.233, 0.632}, {0, 0.368, 0.632}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(r.report["result"]["matrix"][i][j].get<double>() - want[i][j]) < 5e-4);
  }

  TEST_CASE("classify identity3.json") {
    const Run r = run({"classify", data_file("identity3.json")});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["flags"]["stochastic"] == true);
    CHECK(r.report["result"]["flags"]["m_matrix"] == true);
  }

  TEST_CASE("structure reports decomposition and conditions") {
    const Run r = run({"structure", data_file("e1.json")});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["decomposition"]["block_sizes"] == json::array({1, 1, 1}));
    CHECK(r.report["result"]["necessary_conditions"]["passed"] == true);
  }

  TEST_CASE("infdiv verdicts and exit codes") {
    CHECK(run({"infdiv", data_file("diag_scaling_a.json")}).code == 0);
    CHECK(run({"infdiv", data_file("diag_scaling_b.json")}).code == 1);
    const Run r = run({"infdiv", data_file("sum_a.json"), "--roots", "2,7"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["roots_demonstrated"].size() == 2);
    CHECK(r.report["result"]["roots_demonstrated"][1]["order"] == 7);
  }

  TEST_CASE("logm with and without a branch") {
    const Run principal = run({"logm", data_file("two_state.json")});
    CHECK(principal.code == 0);
    CHECK(std::abs(principal.report["result"]["log"][0][1].get<double>() - 0.118892) < 1e-6);
    const Run branch = run({"logm", data_file("two_state.json"), "--branch", "0,0"});
    CHECK(branch.code == 0);
    const Run unreal = run({"logm", data_file("e1.json"), "--branch", "0,1,-1"});
    CHECK(unreal.code == 1);
    CHECK(unreal.report["result"]["log"].is_null());
    CHECK(run({"logm", data_file("e1.json"), "--branch", "0,1"}).code == 64);
    CHECK(run({"logm", data_file("e1.json"), "--branch", "0,x,1"}).code == 64);
  }

  TEST_CASE("root") {
    const Run r = run({"root", data_file("e1.json"), "--n", "2"});
    CHECK(r.code == 0);
    CHECK(std::abs(r.report["result"]["root"][1][1].get<double>() - std::exp(-0.5)) < 1e-12);
    CHECK(run({"root", data_file("e1.json")}).code == 64);
    CHECK(run({"root", data_file("e1.json"), "--n", "0"}).code == 64);
  }

  TEST_CASE("usage errors exit 64") {
    CHECK(run({}).code == 64);
    CHECK(run({"frobnicate", data_file("e1.json")}).code == 64);
    CHECK(run({"embed"}).code == 64);
    CHECK(run({"embed", data_file("e1.json"), "--bound", "sideways"}).code == 64);
    CHECK(run({"embed", data_file("e1.json"), "--tol", "-1"}).code == 64);
    CHECK(run({"embed", data_file("e1.json")}, {std::string("abc"), false}).code == 64);
  }

  TEST_CASE("format errors exit 65") {
    CHECK(run({"embed", "/nonexistent/file.json"}).code == 65);
    CHECK(run({"embed", temp_file("bad.json", "{\"rows\": [[1, 0], [0]]}").string()}).code == 65);
    CHECK(run({"embed", temp_file("badn.json", "{\"n\": 3, \"rows\": [[1, 0], [0, 1]]}").string()}).code == 65);
    CHECK(run({"embed", temp_file("bad.csv", "1,0\n0,x\n").string()}).code == 65);
    CHECK(run({"embed", temp_file("kind.json", "{\"rows\": [[1]], \"kind\": \"weird\"}").string()}).code == 65);
    CHECK(run({"embed", temp_file("notjson.json", "{ nope").string()}).code == 65);
    const Run pre = run({"embed", data_file("sum_a.json")});
    CHECK(pre.code == 65);
    CHECK(pre.report["error"]["kind"] == "NotStochastic");
  }

  TEST_CASE("numerical errors surface as undetermined") {
    const Run r = run({"root", temp_file("neg.json", "{\"rows\": [[-1, 0], [0, 2]]}").string(), "--n", "2"});
    CHECK(r.code == 2);
    CHECK(r.report["status"] == "undetermined");
    CHECK(r.report["error"]["kind"] == "NegativeRealEigenvalue");
  }

  TEST_CASE("tolerance: flag beats environment beats default") {
    CHECK(run({"classify", data_file("e1.json")}).report["tolerances"]["entry_tol"] == 1e-9);
    const Run env = run({"classify", data_file("e1.json")}, {std::string("1e-6"), false});
    CHECK(env.report["tolerances"]["entry_tol"] == 1e-6);
    CHECK(env.report["tolerance_source"] == "env");
    CHECK(env.report["command"]["env"]["EMBEDLAB_TOL"] == "1e-6");
    const Run flag = run({"classify", data_file("e1.json"), "--tol", "1e-4"}, {std::string("1e-6"), false});
    CHECK(flag.report["tolerances"]["entry_tol"] == 1e-4);
    CHECK(flag.report["tolerance_source"] == "flag");
  }

  TEST_CASE("report is self-describing") {
    const Run r = run({"embed", data_file("two_state.json"), "--bound", "paper"});
    CHECK(r.report["tool"] == "embedlab");
    CHECK(r.report["version"].is_string());
    CHECK(r.report["command"]["subcommand"] == "embed");
    CHECK(r.report["command"]["argv"][2] == "--bound");
    CHECK(r.report["input"]["n"] == 2);
    CHECK(r.report["input"]["kind"] == "stochastic");
    CHECK(r.report["duration_ms"].is_number());
    CHECK(r.report["result"]["bound"]["mode"] == "paper_one_sided");
  }

  TEST_CASE("human summary only when asked") {
    CHECK(run({"embed", data_file("e2e1.json")}).err.empty());
    const Run r = run({"embed", data_file("e2e1.json")}, {std::nullopt, true});
    CHECK(r.err.find("NotEmbeddable") != std::string::npos);
  }

  TEST_CASE("report round trip: re-running the echoed command on the echoed input") {
    const std::vector<std::vector<std::string>> commands{
        {"classify", "identity3.json"},  {"structure", "e1.json"},     {"expm", "z1.json"},
        {"logm", "two_state.json"},      {"root", "e1.json", "--n", "3"}, {"embed", "e2e1.json"},
        {"embed", "e1e2.json"},          {"embed", "swap_like.json"}, {"infdiv", "diag_scaling_a.json"},
        {"infdiv", "diag_scaling_b.json"}, {"infdiv", "sum_a.json"}, {"embed", "two_state.csv"}};
    for (auto args : commands) {
      args[1] = data_file(args[1]);
      INFO(args[0], " ", args[1]);
      const Run first = run(args);
      REQUIRE_MESSAGE(first.report.contains("input"), first.report.dump());
      // Rebuild the input from the echo and re-run the echoed argv on it.
      json echoed_input{{"n", first.report["input"]["n"]}, {"rows", first.report["input"]["rows"]}};
      const fs::path file = temp_file("echo_" + args[0] + ".json", echoed_input.dump());
      std::vector<std::string> argv = first.report["command"]["argv"].get<std::vector<std::string>>();
      argv[1] = file.string();
      const Run second = run(argv);
      CHECK_MESSAGE(second.code == first.code, args[0] << " " << args[1]);
      CHECK_MESSAGE(second.report["result"] == first.report["result"], args[0] << " " << args[1]);
      CHECK(second.report["status"] == first.report["status"]);
    }
  }

  TEST_CASE("CSV and JSON encodings give identical reports") {
    for (const std::string cmd : {"classify", "structure", "embed", "expm", "logm"}) {
      for (const std::string stem : {"two_state", "e2e1"}) {
        const Run a = run({cmd, data_file(stem + ".json")});
        const Run b = run({cmd, data_file(stem + ".csv")});
        CHECK(a.code == b.code);
        CHECK_MESSAGE(a.report["result"] == b.report["result"], cmd << " " << stem);
        CHECK(a.report["input"]["rows"] == b.report["input"]["rows"]);
        CHECK(a.report["input"]["name"] == b.report["input"]["name"]);
      }
    }
  }

  TEST_CASE("help exits 0") {
    const Run top = run({"--help"});
    CHECK(top.code == 0);
    CHECK(top.out.find("embed") != std::string::npos);
    const Run sub = run({"embed", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--bound") != std::string::npos);
  }
}

TEST_SUITE("cli.matrix_io") {
  using namespace embedlab::cli;

  TEST_CASE("csv comments, metadata and whitespace") {
    const auto m = parse_matrix_csv("# kind: stochastic\n# name: x\n\n 0.5 , 0.5\n1,0\n");
    CHECK(m.kind == "stochastic");
    CHECK(m.name == "x");
    CHECK(m.matrix(0, 1) == 0.5);
    CHECK(m.matrix(1, 0) == 1.0);
  }

  TEST_CASE("json without n") {
    const auto m = parse_matrix_json(R"({"rows": [[1, 2], [3, 4]]})");
    CHECK(m.matrix(1, 0) == 3.0);
    CHECK_FALSE(m.kind);
  }

  TEST_CASE("non-square and empty are format errors") {
    CHECK_THROWS_AS(parse_matrix_csv("1,2\n"), FormatError);
    CHECK_THROWS_AS(parse_matrix_csv(""), FormatError);
    CHECK_THROWS_AS(parse_matrix_json(R"({"rows": []})"), FormatError);
    CHECK_THROWS_AS(parse_matrix_json(R"({"rows": [["1"]]})"), FormatError);
    CHECK_THROWS_AS(parse_matrix_json("[1]"), FormatError);
  }
}
