// End-to-end tests of the command-line front end.  The binary path arrives
// in the SL2REP_CLI environment variable; each case runs it as a subprocess
// and inspects stdout, stderr, and the exit code.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI with the given arguments; stderr is folded into stdout so
// error messages are observable through the same channel.
RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("SL2REP_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "SL2REP_CLI must point at the built binary");
  std::string command = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("eval prints the closed-form values from the contract") {
  RunResult r1 = run_cli("eval --q 1 --l 2 --m 5 --theta 0 --y 1");
  CHECK(r1.exit_code == 0);
  // exp(-1/2), printed with 17 significant digits.
  CHECK(contains(r1.output, "0.60653065971263342+0i"));

  // The confluent series truncates after two terms: exp(-1/2) * (1 - 2/5).
  RunResult r2 = run_cli("eval --q 1 --l 2 --m 9 --theta 0 --y 1");
  CHECK(r2.exit_code == 0);
  CHECK(contains(r2.output, "0.36391839582758007+0i"));
}

TEST_CASE("eval rejects an inadmissible index naming the congruence class") {
  RunResult r = run_cli("eval --q 0 --l 2 --m 5");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "congruence class"));
  CHECK(contains(r.output, "= 0"));
}

TEST_CASE("eval emits parseable JSON with a jet") {
  RunResult r = run_cli("--no-timestamp eval --q 1 --l 2 --m 5 --json --jet");
  CHECK(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc["value"]["re"].get<double>() == doctest::Approx(0.60653065971263342).epsilon(1e-15));
  CHECK(doc["value"]["im"].get<double>() == 0.0);
  // d_theta = -i m / 2 times the value.
  CHECK(doc["jet"]["d_theta"]["im"].get<double>() ==
        doctest::Approx(-2.5 * 0.60653065971263342).epsilon(1e-12));
  CHECK(doc.contains("timestamp") == false);
}

TEST_CASE("verify symbolic: six exact checks, deterministic bytes") {
  RunResult r1 = run_cli("--no-timestamp verify symbolic");
  CHECK(r1.exit_code == 0);
  json doc = json::parse(r1.output);
  REQUIRE(doc["results"].size() == 6);
  for (const json& rec : doc["results"]) {
    CHECK(rec["status"] == "PASS");
    CHECK(rec["metric"].get<double>() == 0.0);
    CHECK(rec["tolerance"].get<double>() == 0.0);
  }
  CHECK(doc["inputs"]["suite"] == "symbolic");
  CHECK(doc["version"] == "0.1.0");
  CHECK(doc["ledger"].size() > 0);

  RunResult r2 = run_cli("--no-timestamp verify symbolic");
  CHECK(r1.output == r2.output);

  // The flag is accepted after the subcommand too, with identical bytes.
  RunResult r3 = run_cli("verify symbolic --no-timestamp");
  CHECK(r3.exit_code == 0);
  CHECK(r1.output == r3.output);
}

TEST_CASE("corrupted tolerances flip the exit code") {
  RunResult r1 = run_cli("--no-timestamp verify symbolic --tol casimir_closed_form=-1");
  CHECK(r1.exit_code == 1);
  json doc = json::parse(r1.output);
  bool failed = false;
  for (const json& rec : doc["results"])
    if (rec["name"] == "casimir_closed_form") {
      CHECK(rec["status"] == "FAIL");
      CHECK(rec["tolerance"].get<double>() == -1.0);
      failed = true;
    }
  CHECK(failed);

  RunResult r2 = run_cli("verify special --tol kummer_ode=1e-30");
  CHECK(r2.exit_code == 1);
}

TEST_CASE("verify tdreduce presets") {
  RunResult rz = run_cli("--no-timestamp verify tdreduce --preset zero");
  CHECK(rz.exit_code == 0);
  json dz = json::parse(rz.output);
  bool saw_identity = false;
  for (const json& rec : dz["results"]) {
    CHECK_FALSE(contains(rec["name"].get<std::string>(), "harmonic"));
    if (rec["name"] == "transform_zero_identity") {
      CHECK(rec["status"] == "PASS");
      saw_identity = true;
    }
  }
  CHECK(saw_identity);
  CHECK(dz["inputs"]["preset"] == "zero");

  // The printed multiplier is a finding, not a failure: the record says
  // DISCREPANCY and the exit code stays zero.
  RunResult rh = run_cli("--no-timestamp verify tdreduce --preset harmonic");
  CHECK(rh.exit_code == 0);
  json dh = json::parse(rh.output);
  bool saw_discrepancy = false;
  for (const json& rec : dh["results"])
    if (rec["name"] == "transform_harmonic_verbatim") {
      CHECK(rec["status"] == "DISCREPANCY");
      CHECK(rec.contains("detail"));
      saw_discrepancy = true;
    }
  CHECK(saw_discrepancy);
}

TEST_CASE("verify rejects unknown suites and misplaced presets") {
  CHECK(run_cli("verify bogus").exit_code == 1);
  RunResult r = run_cli("verify symbolic --preset zero");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "tdreduce"));
}

TEST_CASE("structure reports the even chain and rejects tiny windows") {
  RunResult r = run_cli("--no-timestamp structure --q 0");
  CHECK(r.exit_code == 0);
  json doc = json::parse(r.output);
  REQUIRE(doc["chain"].size() == 2);
  CHECK(doc["chain"][0]["invariant"] == true);
  CHECK(doc["chain"][1]["invariant"] == true);
  CHECK(doc["chain"][0]["dim_in_window"] == 29);
  CHECK(doc["chain"][1]["dim_in_window"] == 102);
  for (const json& sq : doc["subquotients"]) CHECK(sq["irreducible_interior"] == true);

  RunResult small = run_cli("structure --q 1 --lmax 1");
  CHECK(small.exit_code == 1);
  CHECK(contains(small.output, "window too small"));
}

TEST_CASE("table lists admissible weights with exact eigenvalues and flags") {
  RunResult r = run_cli("table --q 1 --lmax 2 --mbound 9");
  CHECK(r.exit_code == 0);
  std::vector<std::string> rows = lines_of(r.output);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "q,l,m,lambda,lowest,highest");
  CHECK(contains(r.output, "1,2,5,1,true,false"));
  CHECK(contains(r.output, "1,0,1,0,true,false"));

  RunResult empty = run_cli("table --q 1 --mbound 0");
  CHECK(empty.exit_code == 0);
  CHECK(lines_of(empty.output).size() == 1);

  // Even parity classes carry no extremal weights.
  RunResult even = run_cli("table --q 0");
  CHECK(even.exit_code == 0);
  CHECK_FALSE(contains(even.output, "true"));
}

TEST_CASE("transform is the identity on the zero potential") {
  RunResult r = run_cli(
      "--no-timestamp transform --potential \"T=1\" --q 1 --l 0 --m 1 "
      "--grid \"-0.4:0.4:81,-1:1:81\" --csv /tmp/sl2rep_cli_zero.csv");
  CHECK(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc["results"][0]["status"] == "PASS");
  CHECK(doc["results"][0]["metric"].get<double>() <= 1e-5);
  CHECK(doc["profile"].size() >= 5);

  std::ifstream csv("/tmp/sl2rep_cli_zero.csv");
  REQUIRE(csv.good());
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,x,re,im");
  int rows = 0;
  bool center_checked = false;
  while (std::getline(csv, line)) {
    ++rows;
    double t, x, re, im;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &x, &re, &im) == 4);
    if (t == 0.0 && x == 0.0) {
      // Psi_{1,0,1} transported to (0,0): (1)^{-1/4} * e^0 * 1F1(0,...) = 1.
      CHECK(re == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(im == doctest::Approx(0.0).epsilon(1e-12));
      center_checked = true;
    }
  }
  CHECK(rows == 81 * 81);
  CHECK(center_checked);
}

TEST_CASE("transform rejects constraint violations") {
  RunResult bad = run_cli("transform --potential \"g1=1; lambda=1; T=1\" --q 1 --l 2 --m 5");
  CHECK(bad.exit_code == 1);
  CHECK(contains(bad.output, "lambda"));

  RunResult mismatch = run_cli("transform --potential \"lambda=2; T=1\" --q 1 --l 2 --m 5");
  CHECK(mismatch.exit_code == 1);
  CHECK(contains(mismatch.output, "eigenvalue"));
}

TEST_CASE("transform carries a K-type onto the oscillator potential") {
  RunResult r = run_cli(
      "--no-timestamp transform --potential \"g2=harmonic; lambda=1; T=1.4\" "
      "--q 1 --l 2 --m 5 --mode corrected --grid \"-0.5:0.5:201,0.3:2.3:401\" "
      "--csv /tmp/sl2rep_cli_harm.csv");
  CHECK(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc["results"][0]["status"] == "PASS");
  CHECK(doc["inputs"]["mode"] == "corrected");
}
