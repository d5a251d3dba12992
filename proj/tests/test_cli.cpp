#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QENT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream is(report);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(key + " ", 0) == 0) {
      const auto pos = line.find_first_not_of(' ', key.size());
      return pos == std::string::npos ? "" : line.substr(pos);
    }
  }
  return "<missing>";
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("prepare nosuchstate").code == 1);
  CHECK(run("project w3 --v 1,1,0,0").code == 1);
  CHECK(run("sweep --init C01=1 --grid 1:0").code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("data errors exit 2") {
  const auto path = temp("qent_cli_bad.json");
  std::ofstream(path) << "{\"n\": 1, \"amplitudes\": [[1, 0], [1, 0]]}";
  CHECK(run("gme " + path.string()).code == 2);
  CHECK(run("gme /nonexistent/state.json").code == 2);
  CHECK(run("sweep --init C01=1 --init C10=1").code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("prepare chi4") {
  const auto r = run("prepare chi4");
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "target") == "chi4");
  CHECK(value_of(r.out, "fidelity") == "1.000000");
  CHECK(value_of(r.out, "E") == "0.500000");
  CHECK(value_of(r.out, "success_probability") == "1.060660");
  CHECK(value_of(r.out, "kraus_probability") == "0.750000");
}

TEST_CASE("prepare w3 and ghz3") {
  const auto w = run("prepare w3");
  REQUIRE(w.code == 0);
  CHECK(value_of(w.out, "fidelity") == "1.000000");
  CHECK(value_of(w.out, "E") == "0.442809");
  const auto g = run("prepare ghz3");
  REQUIRE(g.code == 0);
  CHECK(value_of(g.out, "E") == "0.500000");
  CHECK(value_of(g.out, "success_probability") == "1.000000");
}

TEST_CASE("project chi4 onto W3") {
  const auto r = run("project chi4 --qubit 0 --v 1,0,0,0 --outcome 0");
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "probability") == "0.500000");
  CHECK(value_of(r.out, "identified") == "w3");
  CHECK(value_of(r.out, "class") == "W-class");
}

TEST_CASE("gme on a catalog state and on a stored biseparable state") {
  const auto s = run("gme singlet4");
  REQUIRE(s.code == 0);
  CHECK(value_of(s.out, "E") == "0.500000");
  const auto path = temp("qent_cli_bisep.json");
  REQUIRE(run("prepare biseparable3 --seed 4 --out " + path.string()).code == 0);
  const auto b = run("gme " + path.string() + " --verbose");
  REQUIRE(b.code == 0);
  CHECK(value_of(b.out, "E") == "0.000000");
  CHECK(value_of(b.out, "negativity 0|12") != "<missing>");
  std::filesystem::remove(path);
}

TEST_CASE("sweep output") {
  const auto one = run("sweep --init C001=1 --grid 0:0:0.01");
  REQUIRE(one.code == 0);
  CHECK(one.out == "gt,E\n0.000000,0.000000\n");
  const auto r = run("sweep --init C001=1 --grid 0:0.2:0.1 --threads 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("gt,E\n0.000000,0.000000\n0.100000,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("seeded output is reproducible") {
  const auto a = run("prepare biseparable4 --seed 9");
  const auto b = run("prepare biseparable4 --seed 9");
  const auto c = run("prepare biseparable4 --seed 10");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("catalog lists states and recipes") {
  const auto r = run("catalog --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("name,qubits\n", 0) == 0);
  CHECK(r.out.find("chi4,4\n") != std::string::npos);
}

}
