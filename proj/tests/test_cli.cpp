#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qhaar/correlators.hpp"
#include "qhaar/weingarten.hpp"

using namespace qhaar;
using json = nlohmann::ordered_json;

namespace {

struct RunOutput {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// runs the binary under a shell so env-var prefixes work
RunOutput run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag =
      std::to_string(static_cast<long long>(::getpid())) + "_" + std::to_string(counter++);
  const auto out_file = dir / ("qhaar_cli_out_" + tag);
  const auto err_file = dir / ("qhaar_cli_err_" + tag);
  std::string cmd = env_prefix;
  if (!cmd.empty()) cmd += " ";
  cmd += "\"" QHAAR_CLI_PATH "\" " + args + " > \"" + out_file.string() + "\" 2> \"" +
         err_file.string() + "\"";
  const int rc = std::system(cmd.c_str());
  RunOutput res;
  res.exit_code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  std::filesystem::remove(out_file);
  std::filesystem::remove(err_file);
  return res;
}

// JSONL output: data rows plus the trailing meta object
struct Parsed {
  std::vector<json> rows;
  json meta;
};

Parsed parse_jsonl(const std::string& text) {
  Parsed p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json obj = json::parse(line);
    if (obj.contains("meta"))
      p.meta = obj["meta"];
    else
      p.rows.push_back(std::move(obj));
  }
  return p;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("wg table lists every cycle type of the requested order") {
  const auto res = run_cli("wg --n 3 --q 6,9 --format json");
  REQUIRE(res.exit_code == 0);
  const auto parsed = parse_jsonl(res.out);
  REQUIRE(parsed.rows.size() == 6);  // 3 cycle types x 2 q values

  const WeingartenTable tbl = WeingartenTable::build(3, 6.0L);
  for (const auto& row : parsed.rows) {
    if (row["q"] != 6) continue;
    const std::string type = row["cycle_type"].get<std::string>();
    CycleType key;
    if (type == "3")
      key = {3};
    else if (type == "2+1")
      key = {2, 1};
    else if (type == "1+1+1")
      key = {1, 1, 1};
    REQUIRE(!key.empty());
    CHECK(row["wg"].get<double>() ==
          doctest::Approx(static_cast<double>(tbl.by_type(key))).epsilon(1e-12));
    const int moved = 3 - static_cast<int>(key.size());
    CHECK(row["order"].get<int>() == 3 + moved);
  }
  CHECK(parsed.meta["seed"] == 0);
}

TEST_CASE("scaling sweep matches the library row by row") {
  const auto res = run_cli("scaling --times 0,1,0,1 --q 4,8,16 --mode exact --format json");
  REQUIRE(res.exit_code == 0);
  const auto parsed = parse_jsonl(res.out);
  REQUIRE(parsed.rows.size() == 3);

  const auto expect =
      scaling_probe(canonicalize({0, 1, 0, 1}), {4, 8, 16}, ProbeMode::exact);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parsed.rows[i]["q"].get<int>() == expect[i].q);
    CHECK(parsed.rows[i]["re"].get<double>() ==
          doctest::Approx(expect[i].value.real()).epsilon(1e-14));
    // compensated column approaches -q^2/(q^2-1) -> -1
    const int q = expect[i].q;
    CHECK(parsed.rows[i]["re_times_q2"].get<double>() ==
          doctest::Approx(-static_cast<double>(q * q) / (q * q - 1)).epsilon(1e-12));
  }
}

TEST_CASE("csv output: header order, footer, quoting of diagram text") {
  const auto res = run_cli("scaling --times 0,1,0,1 --q 4,8 --mode exact");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "q,re,im,re_times_q2");
  CHECK(lines[3].substr(0, 2) == "# ");
  CHECK(lines[3].find("seed=0") != std::string::npos);
  CHECK(lines[3].find("config=") != std::string::npos);

  const auto cob = run_cli("cobweb --diagram \"4; 0-2, 1-3\"");
  REQUIRE(cob.exit_code == 0);
  const auto cob_lines = lines_of(cob.out);
  REQUIRE(cob_lines.size() == 3);
  CHECK(cob_lines[0] == "diagram,e,loops,crossings,e_prime,removed_parallel,removed_bubble,q,value");
  // the diagram text holds commas, so the field arrives quoted
  CHECK(cob_lines[1] == "\"4; 0-2, 1-3\",2,1,1,2,0,0,,");
}

TEST_CASE("cobweb rows carry loop counts and reduction summaries") {
  const auto res = run_cli("cobweb --diagram \"4; 0-3, 1-2\" --q 3,5 --format json");
  REQUIRE(res.exit_code == 0);
  const auto parsed = parse_jsonl(res.out);
  REQUIRE(parsed.rows.size() == 2);
  for (const auto& row : parsed.rows) {
    CHECK(row["loops"] == 3);          // nested pair: N = E + 1
    CHECK(row["crossings"] == 0);
    CHECK(row["e_prime"] == 0);        // fully reducible
    CHECK(row["removed_bubble"] == 2);
  }
  CHECK(parsed.rows[0]["value"] == 27);  // 3^3
  CHECK(parsed.rows[1]["value"] == 125); // 5^3
}

TEST_CASE("correlator average through the CLI equals the library value") {
  const auto res = run_cli("avg-corr --times 0,1,0,1 --q 4 --format json");
  REQUIRE(res.exit_code == 0);
  const auto parsed = parse_jsonl(res.out);
  REQUIRE(parsed.rows.size() == 1);
  const double expect =
      avg_correlator_exact(canonicalize({0, 1, 0, 1}), 4, default_z(4)).real();
  CHECK(parsed.rows[0]["re"].get<double>() == doctest::Approx(expect).epsilon(1e-14));
  CHECK(parsed.rows[0]["mode"] == "exact");
  CHECK(parsed.rows[0]["se_re"].is_null());  // not applicable outside mc mode
}

TEST_CASE("same config and seed give byte-identical output") {
  const std::string args = "scaling --times 0,1,0,1 --q 4,8 --mode mc --n 500 --seed 42";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);

  const auto c = run_cli("scaling --times 0,1,0,1 --q 4,8 --mode mc --n 500 --seed 43");
  CHECK(c.out != a.out);  // seed enters the stream, not only the footer
}

TEST_CASE("seed can arrive through the environment") {
  const std::string args = "avg-corr --times 0,1,0,1 --q 4 --mode mc --n 64 --format json";
  const auto by_flag = run_cli(args + " --seed 123");
  const auto by_env = run_cli(args, "QHAAR_SEED=123");
  REQUIRE(by_flag.exit_code == 0);
  REQUIRE(by_env.exit_code == 0);
  CHECK(by_flag.out == by_env.out);
  const auto other = run_cli(args + " --seed 124");
  CHECK(other.out != by_flag.out);
}

TEST_CASE("bad input exits nonzero with a diagnostic") {
  const auto repeated = run_cli("avg-corr --times 0,0,1 --q 4");
  CHECK(repeated.exit_code == 1);
  CHECK(repeated.err.substr(0, 6) == "error:");

  const auto odd_q = run_cli("avg-corr --times 0,1,0,1 --q 5");  // default Z needs even q
  CHECK(odd_q.exit_code == 1);
  CHECK(odd_q.err.substr(0, 6) == "error:");

  const auto unknown = run_cli("no-such-command");
  CHECK(unknown.exit_code != 0);
  CHECK(!unknown.err.empty());

  const auto missing = run_cli("wg");
  CHECK(missing.exit_code != 0);
  CHECK(!missing.err.empty());

  const auto bad_diagram = run_cli("cobweb --diagram \"4; 0-2\"");
  CHECK(bad_diagram.exit_code == 1);
  CHECK(bad_diagram.err.substr(0, 6) == "error:");
}

TEST_CASE("verify subcommand reports per-check rows and exit status") {
  const auto res = run_cli("verify cobweb --samples 40 --seed 3 --format json");
  REQUIRE(res.exit_code == 0);
  const auto parsed = parse_jsonl(res.out);
  REQUIRE(parsed.rows.size() == 1);
  CHECK(parsed.rows[0]["check"] == "cobweb-engine");
  CHECK(parsed.rows[0]["passed"] == true);
  CHECK(parsed.rows[0]["seconds"].get<double>() >= 0.0);
  CHECK(!parsed.rows[0]["detail"].get<std::string>().empty());

  const auto bad_suite = run_cli("verify no-such-suite");
  CHECK(bad_suite.exit_code == 1);
  CHECK(bad_suite.err.substr(0, 6) == "error:");
}
