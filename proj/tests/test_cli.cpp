#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "malleable/cli.hpp"
#include "test_support.hpp"

using nlohmann::json;
using testing_support::data_path;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = malleable::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "malleable_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_text(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("info") {
  const auto r = run({"info", data_path("typewriter.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["base_V"]["H_X"] == 3.0);
  CHECK(j["base_V"]["H_Y_given_X"] == 1.5);
  CHECK(j["p_X"][0] == "1/8");
  CHECK(r.out.find("1/2") != std::string::npos);
  CHECK(r.out.find("3/8") != std::string::npos);
  CHECK(r.out.find("7/24") != std::string::npos);
}

TEST_CASE("scheme") {
  auto r = run({"scheme", data_path("huffman_example.json"), "--scheme", "huffman"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["triple"]["K"] == "7/4");
  CHECK(j["triple"]["M"] == "3/8");
  CHECK(j["M_lower_bound"] == "3/8");

  r = run({"scheme", data_path("typewriter.json"), "--scheme", "ppm"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["metric"] == "hamming");
  CHECK(j["triple"]["K"] == "8");
  CHECK(j["triple"]["M"] == "1");

  r = run({"scheme", data_path("typewriter.json"), "--scheme", "ppm", "--samples", "2000", "--seed", "4"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["triple"]["seed"] == 4);
  CHECK(j["triple"]["exact"] == false);

  CHECK(run({"scheme", data_path("typewriter.json"), "--scheme", "identity"}).code == 2);
  CHECK(run({"scheme", data_path("typewriter.json"), "--scheme", "bogus"}).code == 2);
}

TEST_CASE("malformed input") {
  const auto bad_sum = write_text("bad_sum.json", R"({"alphabet":["a","b"],"joint":[["1/2","1/2"],["1/2","0"]],"storage_alphabet_size":2})");
  auto r = run({"info", bad_sum});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());

  const auto bad_json = write_text("bad_json.json", "{\"alphabet\": [\"a\",\n  ]");
  r = run({"info", bad_json});
  CHECK(r.code == 2);
  CHECK(r.err.find("line") != std::string::npos);

  const auto negative = write_text("negative.json", R"({"alphabet":["a","b"],"joint":[["3/2","0"],["0","-1/2"]],"storage_alphabet_size":2})");
  r = run({"info", negative});
  CHECK(r.code == 2);
  CHECK(r.err.find("joint[1][1]") != std::string::npos);

  CHECK(run({"info", scratch("missing.json").string()}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("resource and infeasibility exits") {
  CHECK(run({"block", data_path("bsc.json"), "--n", "30"}).code == 3);
  CHECK(run({"embed", data_path("typewriter.json"), "--host", "hypercube:2"}).code == 4);
  CHECK(run({"embed", data_path("typewriter.json"), "--host", "torus:3"}).code == 2);
}

TEST_CASE("embed") {
  auto r = run({"embed", data_path("editprocess2.json"), "--host", "hypercube:3"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["cost"] == "1/40");
  CHECK(j["triple"]["M"] == "19/40");
  CHECK(j["deleted_edges"].size() == 2);

  r = run({"embed", data_path("huffman_example.json"), "--host", "levgraph:3"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["metric"] == "levenshtein");
  CHECK(j["triple"]["K"] == "7/4");
  CHECK(j["triple"]["M"] == "3/8");
}

TEST_CASE("frontier") {
  auto r = run({"frontier", data_path("bernoulli_pair.json"), "--grid", "3"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "t,K_loss,L_loss,K,L");
  int rows = 0;
  while (std::getline(lines, row))
    if (!row.empty()) ++rows;
  CHECK(rows == 3);
  CHECK(r.out.find("0.221689694647") != std::string::npos);
  CHECK(r.out.find("0.167816821374") != std::string::npos);

  const auto svg = scratch("frontier.svg");
  r = run({"frontier", data_path("bernoulli_pair.json"), "--out", "svg", "--output", svg.string()});
  REQUIRE(r.code == 0);
  const auto text = slurp(svg);
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("</svg>") != std::string::npos);
}

TEST_CASE("block") {
  const auto edges = scratch("block_edges.txt");
  auto r = run({"block", data_path("identical.json"), "--n", "10", "--delta", "0.1", "--graph-out", edges.string()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["report"]["T_XY"] == 252);
  CHECK(j["report"]["edges"] == 0);
  CHECK(std::filesystem::exists(edges));
}

TEST_CASE("codebook round trip through evaluate") {
  const auto cb = scratch("incremental.json");
  auto a = run({"scheme", data_path("huffman_example.json"), "--scheme", "incremental", "--n", "2", "--codebook-out", cb.string()});
  REQUIRE(a.code == 0);
  auto b = run({"evaluate", data_path("huffman_example.json"), "--codebook", cb.string()});
  REQUIRE(b.code == 0);
  CHECK(json::parse(a.out)["triple"] == json::parse(b.out)["triple"]);

  const auto bad = write_text("bad_codebook.json", R"({"x": {"block_n": 1, "codebook": {"q": "0"}}})");
  CHECK(run({"evaluate", data_path("huffman_example.json"), "--codebook", bad}).code == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::vector<std::vector<std::string>> cases{
      {"info", data_path("editprocess2.json")},
      {"scheme", data_path("typewriter.json"), "--scheme", "ppm", "--samples", "500"},
      {"embed", data_path("editprocess2.json"), "--host", "hypercube:3", "--threads", "2"},
      {"block", data_path("bsc.json"), "--n", "8"},
  };
  for (const auto& c : cases) {
    const auto first = run(c), second = run(c);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
  }
}
