// Drives the installed CLI binary end to end through temp files. The binary
// path comes from the build system.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "exppoly/json_io.hpp"
#include "test_support.hpp"

namespace {

using exppoly::Cx;
namespace io = exppoly::io;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("exppoly_cli_test_" + name)).string();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = temp_path("stdout.json");
  const std::string cmd = std::string(EXPPOLY_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.stdout_text = buf.str();
  return result;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("cli: regress passes and exits zero") {
  const RunResult r = run_cli("regress");
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["all_pass"].get<bool>());
  for (const auto& row : j["rows"]) CHECK(row["pass"].get<bool>());
}

TEST_CASE("cli: verify an exact solution from a file") {
  const exppoly::OdeSpec spec = testsup::pure_derivative_spec(1, Cx(1.0), Cx(2.0));
  const exppoly::ExpSum f =
      exppoly::add(exppoly::make({{Cx(1.0), Cx(2.0), 0}}), exppoly::from_const(Cx(1.0)));
  io::json input{{"spec", io::to_json(spec)}, {"f", io::to_json(f)}, {"phi", io::to_json(Cx(-2.0))}};
  const std::string path = temp_path("verify_in.json");
  write_file(path, input.dump());
  const RunResult r = run_cli("verify --input " + path);
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["pass"].get<bool>());
  CHECK_FALSE(j["phi_inferred"].get<bool>());
}

TEST_CASE("cli: verify with phi omitted infers and echoes it") {
  const exppoly::OdeSpec spec = testsup::pure_derivative_spec(1, Cx(1.0), Cx(2.0));
  const exppoly::ExpSum f =
      exppoly::add(exppoly::make({{Cx(1.0), Cx(2.0), 0}}), exppoly::from_const(Cx(1.0)));
  io::json input{{"spec", io::to_json(spec)}, {"f", io::to_json(f)}};
  const std::string path = temp_path("verify_infer.json");
  write_file(path, input.dump());
  const RunResult r = run_cli("verify --input " + path);
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["pass"].get<bool>());
  CHECK(j["phi_inferred"].get<bool>());
  CHECK(std::abs(io::cx_from_json(j["phi"], "phi") - Cx(-2.0)) < 1e-10);
}

TEST_CASE("cli: classify then re-verify every verified candidate") {
  const exppoly::OdeSpec spec = testsup::pure_derivative_spec(2, Cx(2.0), Cx(5.0));
  io::json input{{"spec", io::to_json(spec)}};
  const std::string path = temp_path("classify_in.json");
  write_file(path, input.dump());
  const RunResult r = run_cli("classify --input " + path);
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  REQUIRE(j.contains("candidates"));
  int verified = 0;
  for (const auto& cand : j["candidates"]) {
    if (!cand["verified"].get<bool>()) continue;
    ++verified;
    io::json vin{{"spec", io::to_json(spec)}, {"f", cand["f"]}, {"phi", cand["phi"]}};
    const std::string vpath = temp_path("roundtrip_in.json");
    write_file(vpath, vin.dump());
    const RunResult vr = run_cli("verify --input " + vpath);
    CHECK(vr.exit_code == 0);
    CHECK(io::json::parse(vr.stdout_text)["pass"].get<bool>());
  }
  CHECK(verified >= 3);  // two characteristic roots, the product family, C6
}

TEST_CASE("cli: zeros subcommand with a rectangle flag") {
  const exppoly::ExpSum f = exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(-1.0), Cx(0.0), 0}});
  io::json input{{"f", io::to_json(f)}};
  const std::string path = temp_path("zeros_in.json");
  write_file(path, input.dump());
  const RunResult r = run_cli("zeros --input " + path + " --rect -1 -1 1 1");
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["total_count"].get<int>() == 1);
}

TEST_CASE("cli: malformed input exits 2 with a machine-readable error") {
  const std::string path = temp_path("bad.json");
  write_file(path, "{ not json");
  const RunResult r = run_cli("verify --input " + path);
  CHECK(r.exit_code == 2);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["error"]["type"].get<std::string>() == "invalid_input");

  // schema violation: leading coefficient not 1
  io::json input{{"spec",
                  {{"k", 1},
                   {"a_coeffs", io::json::array({io::json::array({0.0, 0.0}),
                                                 io::json::array({2.0, 0.0})})},
                   {"a", io::json::array({0.0, 0.0})},
                   {"b", io::json::array({1.0, 0.0})},
                   {"phi", nullptr}}},
                 {"f", io::to_json(exppoly::make({{Cx(1.0), Cx(1.0), 0}}))}};
  write_file(path, input.dump());
  const RunResult r2 = run_cli("verify --input " + path);
  CHECK(r2.exit_code == 2);
}

TEST_CASE("cli: verify report carries the seeded pointwise cross-check") {
  const exppoly::OdeSpec spec = testsup::pure_derivative_spec(1, Cx(1.0), Cx(2.0));
  const exppoly::ExpSum f =
      exppoly::add(exppoly::make({{Cx(1.0), Cx(2.0), 0}}), exppoly::from_const(Cx(1.0)));
  io::json input{{"spec", io::to_json(spec)}, {"f", io::to_json(f)}, {"phi", io::to_json(Cx(-2.0))}};
  const std::string path = temp_path("verify_sample.json");
  write_file(path, input.dump());
  const RunResult r = run_cli("verify --input " + path + " --points 16 --seed 5");
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  REQUIRE(j.contains("sample"));
  CHECK(j["sample"]["points"].get<int>() == 16);
  CHECK(j["sample"]["residual_max"].get<double>() <=
        1e-6 * j["sample"]["scale"].get<double>());
}

TEST_CASE("cli: numeric failure exits 3") {
  // evaluation of e^{1000 z} overflows all over the rectangle
  io::json input{{"f", io::to_json(exppoly::make({{Cx(1.0), Cx(1000.0), 0}}))}};
  const std::string path = temp_path("overflow.json");
  write_file(path, input.dump());
  const RunResult r = run_cli("zeros --input " + path + " --rect -1 -1 1 1");
  CHECK(r.exit_code == 3);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["error"]["type"].get<std::string>() == "numeric_failure");
}

TEST_CASE("cli: identical inputs produce byte-identical output") {
  const exppoly::OdeSpec spec = testsup::pure_derivative_spec(3, Cx(1.0), Cx(2.0));
  io::json input{{"spec", io::to_json(spec)}};
  const std::string path = temp_path("det_in.json");
  write_file(path, input.dump());
  const RunResult r1 = run_cli("classify --input " + path);
  const RunResult r2 = run_cli("classify --input " + path);
  CHECK(r1.exit_code == 0);
  CHECK(r1.stdout_text == r2.stdout_text);
  CHECK(!r1.stdout_text.empty());
}

TEST_CASE("cli: classify of a family-free equation exits success with an empty list") {
  const RunResult r = run_cli(
      "classify --input "
      "'{\"spec\":{\"k\":1,\"a_coeffs\":[[1,0],[1,0]],\"a\":[0.5,0],\"b\":[2,0],\"phi\":null}}'");
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["candidates"].empty());
}

TEST_CASE("cli: inline JSON input") {
  const RunResult r = run_cli(
      "classify --input "
      "'{\"spec\":{\"k\":1,\"a_coeffs\":[[0,0],[1,0]],\"a\":[1,0],\"b\":[2,0],\"phi\":null}}'");
  CHECK(r.exit_code == 0);
  const auto j = io::json::parse(r.stdout_text);
  CHECK(j["candidates"].size() >= 2);
}
