#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#ifndef JACKMC_CLI_PATH
#error "JACKMC_CLI_PATH must point at the jackmc binary"
#endif

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CmdResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out_path = "cli_stdout.txt";
  const std::string err_path = "cli_stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + JACKMC_CLI_PATH +
                          " " + args + " >" + out_path + " 2>" + err_path;
  const int rc = std::system(cmd.c_str());
  CmdResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("verify command: pair identity passes end to end") {
  const CmdResult r = run_cli(
      "verify --identity A.3a --N 2 --z 0.5,0 --w 0.3,0 --samples 1000000 "
      "--seed 42");
  INFO(r.out << r.err);
  CHECK(r.exit_code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].rfind("identity,pass,threshold", 0) == 0);
  const auto row = fields(lines[1]);
  CHECK(row[0] == "A.3a");
  CHECK(row[1] == "1");
}

TEST_CASE("verify command: SM2 residual mode") {
  const CmdResult r = run_cli("verify --identity SM2 --alpha 2 --Nvars 2 --p 2");
  INFO(r.out << r.err);
  CHECK(r.exit_code == 0);
  const auto row = fields(data_lines(r.out).at(1));
  CHECK(row[0] == "SM2");
  CHECK(row[1] == "1");
  // the exact_value column reports the worst residual
  CHECK(std::abs(std::stod(row[4])) < 1e-9);
}

TEST_CASE("verify command: malformed inputs exit 2, empty budget exits 3") {
  const CmdResult bad_z = run_cli(
      "verify --identity A.3a --N 2 --z 0.5,,oops --w 0.3 --samples 1000");
  CHECK(bad_z.exit_code == 2);
  CHECK(bad_z.err.find("complex") != std::string::npos);

  const CmdResult bad_id =
      run_cli("verify --identity nope --z 0.5 --w 0.3 --samples 1000");
  CHECK(bad_id.exit_code == 2);

  const CmdResult tiny =
      run_cli("verify --identity A.3a --N 1 --z 0.5 --w 0.3 --samples 10");
  CHECK(tiny.exit_code == 3);
  CHECK(tiny.err.find("budget") != std::string::npos);
}

TEST_CASE("ratio command: K1 table converges and is monotone") {
  const CmdResult r = run_cli("ratio --identity K1 --k 1 --z 0.5 --Nmax 50");
  INFO(r.out << r.err);
  CHECK(r.exit_code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "N,|z|,finite_N_ratio,prediction,rel_err");
  double prev = 1e300;
  double last = 0.0;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto row = fields(lines[i]);
    REQUIRE(row.size() == 5);
    last = std::stod(row[4]);
    CHECK(last <= prev);
    prev = last;
  }
  CHECK(last < 0.05);
}

TEST_CASE("ratio command: GE1 prediction column is identically 1") {
  const CmdResult r = run_cli("ratio --identity GE1 --k 2 --z 0.3");
  INFO(r.out << r.err);
  CHECK(r.exit_code == 0);
  const auto lines = data_lines(r.out);
  for (size_t i = 1; i < lines.size(); ++i)
    CHECK(std::stod(fields(lines[i])[3]) == 1.0);
}

TEST_CASE("ratio command: spherical exponent fit lands near -2") {
  const CmdResult r = run_cli("ratio --identity K1x --k 1 --K 12");
  INFO(r.out << r.err);
  CHECK(r.exit_code == 0);
  const std::string tag = "# fitted_exponent=";
  const auto pos = r.out.find(tag);
  REQUIRE(pos != std::string::npos);
  const double exponent = std::stod(r.out.substr(pos + tag.size()));
  CHECK(std::abs(exponent - (-2.0)) < 0.1);
}

TEST_CASE("ratio command: |z| >= 1 rejected for the Gaussian family") {
  const CmdResult r = run_cli("ratio --identity K1 --k 1 --z 1.0 --Nmax 10");
  CHECK(r.exit_code == 2);
}

TEST_CASE("eval command: closed-form spot values") {
  const CmdResult en = run_cli("eval EN --N 2 --x 1");
  CHECK(en.exit_code == 0);
  CHECK(data_lines(en.out).at(0) == "2.5");

  const CmdResult sel = run_cli("eval selberg --beta 4 --n 1 --a 0");
  CHECK(sel.exit_code == 0);
  CHECK(std::stod(data_lines(sel.out).at(0)) == doctest::Approx(1.0));

  // the direct evaluation is cross-printed against the all-ones closed form
  const CmdResult jack = run_cli("eval jack --kappa 2 --alpha 2 --x 1,1");
  CHECK(jack.exit_code == 0);
  const double direct = std::stod(data_lines(jack.out).at(0));
  const std::string tag = "# at_ones_closed_form=";
  const auto pos = jack.out.find(tag);
  REQUIRE(pos != std::string::npos);
  CHECK(direct == doctest::Approx(std::stod(jack.out.substr(pos + tag.size())))
                      .epsilon(1e-12));

  const CmdResult unknown = run_cli("eval nosuch --x 1");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("same seed gives byte-identical stdout and report files") {
  const std::string args =
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000 --seed 7 "
      "--json --out cli_report.json";
  const CmdResult one = run_cli(args);
  const std::string file_one = slurp("cli_report.json");
  const CmdResult two = run_cli(args);
  const std::string file_two = slurp("cli_report.json");
  CHECK(one.exit_code == 0);
  CHECK(one.out == two.out);
  CHECK(file_one == file_two);
  CHECK(!file_one.empty());

  // a different seed must change the sampled values
  const CmdResult other = run_cli(
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000 --seed 8 "
      "--json");
  CHECK(other.out != one.out);
}

TEST_CASE("JSON report embeds schema, version, config hash, and estimates") {
  const CmdResult r = run_cli(
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000 --seed 7 "
      "--json --out cli_report.json");
  CHECK(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("version") == "0.1.0");
  CHECK(doc.at("config_hash").get<std::string>().rfind("0x", 0) == 0);
  CHECK(doc.at("report").at("identity") == "A.3c");
  CHECK(doc.at("report").at("pass") == true);
  CHECK(doc.at("report").at("lhs_mc").at("n_samples") == 20000);
  // the --out file carries the same document
  const nlohmann::json file_doc = nlohmann::json::parse(slurp("cli_report.json"));
  CHECK(file_doc == doc);

  // the CSV header embeds the same provenance
  const CmdResult csv = run_cli(
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000 --seed 7");
  CHECK(csv.out.find("# jackmc 0.1.0 schema=1 config=0x") == 0);
}

TEST_CASE("config files round-trip and reject unknown keys") {
  const CmdResult dump = run_cli(
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000 --seed 7 "
      "--dump-config");
  CHECK(dump.exit_code == 0);
  {
    std::ofstream out("cli_config.ini", std::ios::binary);
    out << dump.out;
  }
  const CmdResult redump = run_cli("--config cli_config.ini");
  CHECK(redump.exit_code == 0);
  CHECK(redump.out == dump.out);

  {
    std::ofstream out("cli_config_run.ini", std::ios::binary);
    size_t pos = 0;
    std::string text = dump.out;
    if ((pos = text.find("dump-config=true")) != std::string::npos)
      text.replace(pos, 16, "dump-config=false");
    out << text;
  }
  const CmdResult run = run_cli("--config cli_config_run.ini");
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("A.3c,1,") != std::string::npos);

  {
    std::ofstream out("cli_config_bad.ini", std::ios::binary);
    out << "[verify]\nidentity=\"A.3c\"\nz=\"0.5\"\nw=\"0.3\"\nmystery=1\n";
  }
  const CmdResult bad = run_cli("--config cli_config_bad.ini");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("environment variable supplies the default seed") {
  const CmdResult env_run = run_cli(
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000",
      "JACKMC_SEED=9");
  const CmdResult flag_run = run_cli(
      "verify --identity A.3c --N 1 --z 0.5 --w 0.3 --samples 20000 --seed 9");
  CHECK(env_run.exit_code == 0);
  CHECK(env_run.out == flag_run.out);
}
