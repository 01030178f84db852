#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "berezin/cli.hpp"
#include "berezin/io.hpp"

using namespace berezin;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "berezin_cli");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("berezin_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kHeader = "ineq_id,trial,n,alpha,r,s,lhs,rhs,gap,satisfied";

}  // namespace

TEST_CASE("eval on the antidiagonal example") {
  TempDir tmp;
  save_matrix(tmp.file("antidiag4.json"), ComplexMatrix::antidiagonal(4));
  const Run r = cli({"eval", "--model", "finite:4", "--matrix", tmp.file("antidiag4.json")});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["ber"]["value"] == 0.0);
  CHECK(j["berezin_norm"]["value"] == 1.0);
  CHECK(j["exact"] == true);
  CHECK(j["numerical_radius"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["operator_norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["symbol_samples"].size() == 4);
  CHECK(j["model"]["kind"] == "finite");
}

TEST_CASE("eval on the identity") {
  TempDir tmp;
  save_matrix(tmp.file("identity.json"), ComplexMatrix::identity(2));
  const Run r = cli({"eval", "--model", "finite:2", "--matrix", tmp.file("identity.json"), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "quantity,value\nber,1\nberezin_norm,1\nnumerical_radius,1\noperator_norm,1\n");
}

TEST_CASE("eval on a continuous model echoes the level") {
  TempDir tmp;
  ComplexMatrix shift(16, 16);
  for (std::size_t i = 0; i + 1 < 16; ++i) shift(i + 1, i) = 1.0;
  save_matrix(tmp.file("shift16.json"), shift);
  const Run r = cli({"eval", "--model", "hardy:15:0.95", "--matrix", tmp.file("shift16.json"), "--level", "1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["exact"] == false);
  CHECK(j["level"] == 1);
  CHECK(j["ber"]["level"] == 1);
  CHECK(j["ber"]["value"].get<double>() <= j["operator_norm"].get<double>() + 1e-9);
  CHECK(j["symbol_samples"].size() == 129);
}

TEST_CASE("eval exit codes") {
  TempDir tmp;
  save_matrix(tmp.file("id3.json"), ComplexMatrix::identity(3));
  CHECK(cli({"eval", "--model", "finite:2", "--matrix", tmp.file("id3.json")}).code == 3);
  CHECK(cli({"eval", "--model", "finite:2", "--matrix", tmp.file("missing.json")}).code == 2);
  std::ofstream(tmp.file("bad.json")) << "{\"rows\": 2}";
  CHECK(cli({"eval", "--model", "finite:2", "--matrix", tmp.file("bad.json")}).code == 2);
  CHECK(cli({"eval", "--model", "circle:2", "--matrix", tmp.file("id3.json")}).code == 2);
  CHECK(cli({"eval", "--matrix", tmp.file("id3.json")}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("check lem3 by hand") {
  const Run r = cli({"check", "--ineq", "lem3", "--a", "1", "--b", "4", "--alpha", "0.5", "--r", "0", "--s", "1"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == kHeader);
  CHECK(ls[1] == "lem3,0,2,0.5,0,1,2,2.5,0.5,true");
}

TEST_CASE("check prop1 with files") {
  TempDir tmp;
  const Run r = cli({"check", "--ineq", "prop1", "--gen", "positive", "--n", "6", "--trials", "200",
                     "--seed", "7", "--out", tmp.file("p.csv")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto ls = lines(slurp(tmp.file("p.csv")));
  CHECK(ls.size() == 1 + 2 * 200);
  CHECK(ls[0] == kHeader);
  const json summary = json::parse(slurp(tmp.file("p.csv.summary.json")));
  CHECK(summary["violation_count"] == 0);
  CHECK(summary["seed"] == 7);
  CHECK(summary["gap_stats"].contains("prop1"));
  CHECK(summary["gap_stats"]["prop1"]["count"] == 200);
}

TEST_CASE("check on supplied matrices") {
  TempDir tmp;
  save_matrix(tmp.file("a.json"), ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}));
  const Run r = cli({"check", "--ineq", "eql1", "--matrix", "A=" + tmp.file("a.json"), "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["evaluations"] == 2);
  CHECK(j["gap_stats"]["eql1"]["max"] == 0.0);

  save_matrix(tmp.file("b3.json"), ComplexMatrix::identity(3));
  CHECK(cli({"check", "--ineq", "thm3half", "--matrix", "A=" + tmp.file("a.json"), "--matrix",
             "B=" + tmp.file("b3.json")})
            .code == 3);
  const std::vector<double> d{1.0, -1.0};
  save_matrix(tmp.file("indef.json"), ComplexMatrix::diagonal(d));
  CHECK(cli({"check", "--ineq", "prop1", "--matrix", tmp.file("indef.json")}).code == 4);
}

TEST_CASE("check and fuzz config errors") {
  CHECK(cli({"check"}).code == 2);
  CHECK(cli({"check", "--ineq", "thm9"}).code == 2);
  CHECK(cli({"check", "--ineq", "eql1", "--trials", "x"}).code == 2);
  CHECK(cli({"check", "--ineq", "eql1", "--gen", "gaussian"}).code == 2);
  CHECK(cli({"check", "--ineq", "cor5", "--r", "0.5"}).code == 2);
  CHECK(cli({"check", "--ineq", "eql1", "--format", "xml"}).code == 2);
  CHECK(cli({"fuzz", "--suite", "eql1", "--trials", "0"}).code == 2);
  CHECK(cli({"fuzz", "--suite", "eql1", "--model", "finite:3", "--n", "2"}).code == 2);
}

TEST_CASE("fuzz writes one row per entry, trial, sweep point and display") {
  TempDir tmp;
  const Run r = cli({"fuzz", "--suite", "all", "--trials", "2", "--seed", "1", "--n", "2,3", "--out",
                     tmp.file("f.csv")});
  CHECK(r.code == 0);
  const auto ls = lines(slurp(tmp.file("f.csv")));
  const json summary = json::parse(slurp(tmp.file("f.csv.summary.json")));
  CHECK(ls.size() == 1 + summary["evaluations"].get<std::size_t>());
  CHECK(summary["certified"] == true);
  CHECK(summary["violation_count"] == 0);
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(ls[i].ends_with(",true"));

  // Same seed, same bytes.
  const Run again = cli({"fuzz", "--suite", "all", "--trials", "2", "--seed", "1", "--n", "2,3"});
  CHECK(again.out == slurp(tmp.file("f.csv")));
}

TEST_CASE("config file merges under flags") {
  TempDir tmp;
  std::ofstream(tmp.file("cfg.json")) << R"({"ineq": "lem3", "a": 1, "b": 4, "alpha": [0.5], "r": [0], "s": [1, 2]})";
  Run r = cli({"check", "--config", tmp.file("cfg.json")});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 3);
  r = cli({"check", "--config", tmp.file("cfg.json"), "--s", "1"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1] == "lem3,0,2,0.5,0,1,2,2.5,0.5,true");

  std::ofstream(tmp.file("bad.json")) << R"({"ineq": "lem3", "colour": "blue"})";
  CHECK(cli({"check", "--config", tmp.file("bad.json")}).code == 2);
  std::ofstream(tmp.file("notjson.json")) << "ineq=lem3";
  CHECK(cli({"check", "--config", tmp.file("notjson.json")}).code == 2);
  CHECK(cli({"check", "--config", tmp.file("nowhere.json")}).code == 2);
}

TEST_CASE("report histograms") {
  TempDir tmp;
  // Missing input.
  CHECK(cli({"report", "--in", tmp.file("none.csv")}).code == 2);
  CHECK(cli({"report"}).code == 2);

  // Header only and fully empty files give an empty set.
  std::ofstream(tmp.file("empty.csv")) << kHeader << '\n';
  Run r = cli({"report", "--in", tmp.file("empty.csv")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["histograms"].empty());
  std::ofstream(tmp.file("zero.csv")).flush();
  r = cli({"report", "--in", tmp.file("zero.csv")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["histograms"].empty());

  // A single row lands in one bin.
  std::ofstream(tmp.file("one.csv")) << kHeader << "\nlem3,0,2,0.5,0,1,2,2.5,0.5,true\n";
  r = cli({"report", "--in", tmp.file("one.csv")});
  REQUIRE(r.code == 0);
  json h = json::parse(r.out)["histograms"]["lem3"];
  CHECK(h["counts"] == json::array({1}));
  CHECK(h["edges"][0].get<double>() == doctest::Approx(0.2));

  // Counts are conserved on a real report.
  CHECK(cli({"check", "--ineq", "eql1,cor5", "--trials", "125", "--n", "2,3,4,6", "--out", tmp.file("big.csv")}).code == 0);
  r = cli({"report", "--in", tmp.file("big.csv"), "--bins", "7", "--out", tmp.file("hist.json")});
  REQUIRE(r.code == 0);
  const json all = json::parse(slurp(tmp.file("hist.json")));
  std::size_t total = 0;
  for (const auto& [label, hist] : all["histograms"].items()) {
    std::size_t sum = 0;
    for (const auto& c : hist["counts"]) sum += c.get<std::size_t>();
    CHECK(sum == hist["total"].get<std::size_t>());
    CHECK(hist["edges"].size() == hist["counts"].size() + 1);
    total += sum;
  }
  CHECK(total == all["rows"].get<std::size_t>());
  CHECK(total == lines(slurp(tmp.file("big.csv"))).size() - 1);
  CHECK(all["histograms"]["eql1"]["total"] == 500);

  std::ofstream(tmp.file("junk.csv")) << "a,b,c\n1,2,3\n";
  CHECK(cli({"report", "--in", tmp.file("junk.csv")}).code == 2);
}

TEST_CASE("logs stay off the data stream") {
  const Run r = cli({"check", "--ineq", "eql1", "--n", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("[berezin]") == std::string::npos);
  CHECK(r.err.find("[berezin]") != std::string::npos);
}
