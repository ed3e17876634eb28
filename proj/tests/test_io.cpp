#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhaar/io.hpp"

using namespace qhaar;

TEST_CASE("csv field quoting") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("") == "");
  CHECK(csv_escape("3.25") == "3.25");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_escape("cr\rhere") == "\"cr\rhere\"");
  CHECK(csv_escape(" outer") == "\" outer\"");
  CHECK(csv_escape("outer ") == "\"outer \"");
  CHECK(csv_escape("in ner") == "in ner");
}

TEST_CASE("csv rendering: header, rows, footer") {
  Table t;
  t.columns = {"q", "label", "value"};
  t.rows.push_back({4, "4; 0-2, 1-3", 0.25});
  t.rows.push_back({8, Cell(), -3});
  const RunMetadata meta{99, "demo q=4,8"};
  const std::string text = render_csv(t, meta);

  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "q,label,value");
  CHECK(lines[1] == "4,\"4; 0-2, 1-3\",0.25");
  CHECK(lines[2] == "8,,-3");  // null cell renders empty
  CHECK(lines[3].substr(0, 10) == "# seed=99 ");
  CHECK(lines[3].find("version=1.0.0") != std::string::npos);
  const auto pos = lines[3].find("config=");
  REQUIRE(pos != std::string::npos);
  CHECK(lines[3].substr(pos + 7).size() == 16);  // fixed-width hash
  CHECK(text.back() == '\n');
}

TEST_CASE("jsonl rendering: one object per row plus meta trailer") {
  Table t;
  t.columns = {"q", "re", "note"};
  t.rows.push_back({2, 0.5, Cell()});
  t.rows.push_back({16, -1.25, "x"});
  const RunMetadata meta{7, "demo"};
  const std::string text = render_jsonl(t, meta);

  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);

  const auto row0 = nlohmann::ordered_json::parse(lines[0]);
  CHECK(row0["q"] == 2);
  CHECK(row0["re"] == 0.5);
  CHECK(row0["note"].is_null());
  // column order preserved in the serialized object
  CHECK(lines[0].find("\"q\"") < lines[0].find("\"re\""));
  CHECK(lines[0].find("\"re\"") < lines[0].find("\"note\""));

  const auto row1 = nlohmann::ordered_json::parse(lines[1]);
  CHECK(row1["note"] == "x");

  const auto meta_obj = nlohmann::ordered_json::parse(lines[2]);
  REQUIRE(meta_obj.contains("meta"));
  CHECK(meta_obj["meta"]["seed"] == 7);
  CHECK(meta_obj["meta"]["version"] == "1.0.0");
  CHECK(meta_obj["meta"]["config"].get<std::string>().size() == 16);
}

TEST_CASE("config hash: deterministic, sensitive to the text") {
  CHECK(fnv1a("abc") == fnv1a("abc"));
  CHECK(fnv1a("abc") != fnv1a("abd"));
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);  // FNV-1a offset basis

  Table t;
  t.columns = {"a"};
  t.rows.push_back({1});
  const std::string one = render_csv(t, RunMetadata{0, "config one"});
  const std::string two = render_csv(t, RunMetadata{0, "config two"});
  CHECK(one != two);
  CHECK(render_csv(t, RunMetadata{0, "config one"}) == one);
}

TEST_CASE("row width must match the header") {
  Table t;
  t.columns = {"a", "b"};
  t.rows.push_back({1});
  CHECK_THROWS_AS(render_csv(t, RunMetadata{}), std::invalid_argument);
  CHECK_THROWS_AS(render_jsonl(t, RunMetadata{}), std::invalid_argument);
}
