#include "berezin/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "berezin/berezin.hpp"
#include "berezin/error.hpp"
#include "berezin/fuzz.hpp"
#include "berezin/inequalities.hpp"
#include "berezin/io.hpp"
#include "berezin/linalg.hpp"

namespace berezin {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDimension = 3;
constexpr int kExitNumerical = 4;

constexpr std::string_view kCsvHeader = "ineq_id,trial,n,alpha,r,s,lhs,rhs,gap,satisfied";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
      return kExitDimension;
    case ErrorCode::NotHermitian:
    case ErrorCode::NotPositive:
    case ErrorCode::NotCommuting:
    case ErrorCode::NoConvergence:
      return kExitNumerical;
    default:
      return kExitBadInput;
  }
}

struct FlagSpec {
  const char* name;
  const char* help;
};

const FlagSpec kFlags[] = {
    {"model", "finite:N, hardy[:N[:rho]], bergman[:N[:rho]], fock[:N[:R]] or a model .json"},
    {"matrix", "operand matrix file, NAME=path or path (repeatable)"},
    {"ineq", "comma-separated catalog ids, or 'all'"},
    {"suite", "comma-separated catalog ids, or 'all' (default)"},
    {"gen", "generator kind: general, hermitian, positive, unitary, commuting-positive-pair, rank-deficient"},
    {"scale", "generator scale (default 1)"},
    {"n", "comma-separated dimensions (default 2,3,4,6)"},
    {"trials", "trials per entry and dimension"},
    {"seed", "master seed (default 0)"},
    {"alpha", "comma-separated alpha values"},
    {"r", "comma-separated r values"},
    {"s", "comma-separated s values"},
    {"a", "lem3 scalar a"},
    {"b", "lem3 scalar b"},
    {"level", "grid refinement level for continuous models (default 0)"},
    {"tol", "inequality tolerance (default 1e-9)"},
    {"out", "output path (default stdout)"},
    {"summary", "summary JSON path (default <out>.summary.json)"},
    {"format", "json or csv"},
    {"in", "input CSV report"},
    {"bins", "histogram bins per id (default 20)"},
    {"config", "JSON file of flag values; flags given on the command line win"},
};

const std::map<std::string, std::set<std::string>> kCommandFlags{
    {"eval", {"model", "matrix", "level", "out", "format", "config"}},
    {"check",
     {"model", "matrix", "ineq", "gen", "scale", "n", "trials", "seed", "alpha", "r", "s", "a", "b",
      "level", "tol", "out", "summary", "format", "config"}},
    {"fuzz",
     {"model", "suite", "ineq", "gen", "scale", "n", "trials", "seed", "alpha", "r", "s", "a", "b",
      "level", "tol", "out", "summary", "format", "config"}},
    {"report", {"in", "out", "bins", "config"}},
};

class BadConfig : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values after merging the command line with --config.
class Settings {
 public:
  std::string command;
  std::map<std::string, std::string> values;
  std::vector<std::string> matrices;

  bool has(const std::string& key) const { return values.contains(key); }
  std::string get(const std::string& key, std::string fallback = {}) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
  std::string require(const std::string& key) const {
    if (!has(key)) throw BadConfig("--" + key + " is required for '" + command + "'");
    return get(key);
  }
};

template <class T>
T parse_number(std::string_view text, const std::string& what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw BadConfig("bad value for --" + what + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    std::string part(text.substr(start, pos - start));
    part.erase(0, part.find_first_not_of(' '));
    part.erase(part.find_last_not_of(' ') + 1);
    if (!part.empty()) parts.push_back(part);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  for (const std::string& p : split(text, ',')) out.push_back(parse_number<T>(p, what));
  if (out.empty()) throw BadConfig("--" + what + " needs at least one value");
  return out;
}

std::string json_scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw BadConfig("config key '" + key + "' has an unsupported value");
}

void merge_config(Settings& s) {
  const std::string path = s.get("config");
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw BadConfig(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw BadConfig("config must be a JSON object");
  const std::set<std::string>& allowed = kCommandFlags.at(s.command);
  for (const auto& [key, value] : j.items()) {
    if (key == "config" || !allowed.contains(key)) {
      throw BadConfig("config: unknown key '" + key + "' for '" + s.command + "'");
    }
    if (key == "matrix") {
      if (!s.matrices.empty()) continue;
      if (value.is_object()) {
        for (const auto& [name, p] : value.items()) s.matrices.push_back(name + "=" + json_scalar_text(p, key));
      } else if (value.is_array()) {
        for (const json& p : value) s.matrices.push_back(json_scalar_text(p, key));
      } else {
        s.matrices.push_back(json_scalar_text(value, key));
      }
      continue;
    }
    if (s.has(key)) continue;
    if (value.is_array()) {
      std::string joined;
      for (const json& v : value) joined += (joined.empty() ? "" : ",") + json_scalar_text(v, key);
      s.values[key] = joined;
    } else {
      s.values[key] = json_scalar_text(value, key);
    }
  }
}

std::map<std::string, ComplexMatrix> load_operands(const Settings& s) {
  std::map<std::string, ComplexMatrix> ops;
  for (const std::string& spec : s.matrices) {
    const std::size_t eq = spec.find('=');
    const std::string name = eq == std::string::npos ? "A" : spec.substr(0, eq);
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    if (ops.contains(name)) throw BadConfig("operand " + name + " given twice");
    ops.emplace(name, load_matrix(path));
  }
  return ops;
}

// Output stream: a file when --out is given, else stdout.
class Output {
 public:
  Output(const Settings& s, std::ostream& fallback) : stream_(&fallback) {
    if (s.has("out")) {
      file_ = std::make_unique<std::ofstream>(s.get("out"), std::ios::binary);
      if (!*file_) throw BadConfig("cannot write '" + s.get("out") + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string output_format(const Settings& s, const char* fallback) {
  const std::string f = s.get("format", fallback);
  if (f != "json" && f != "csv") throw BadConfig("--format must be json or csv");
  return f;
}

json point_json(const KernelModel& model, const KernelPoint& p) {
  if (model.is_finite()) return {{"index", p.index}};
  return {{"re", p.z.real()}, {"im", p.z.imag()}};
}

json estimate_json(const KernelModel& model, const SupEstimate& e) {
  json j{{"value", e.value}, {"exact", e.exact}, {"level", e.level}, {"point", point_json(model, e.point)}};
  if (e.second) j["second"] = point_json(model, *e.second);
  return j;
}

int cmd_eval(const Settings& s, std::ostream& out, std::ostream& err) {
  const KernelModel model = parse_model(s.require("model"));
  if (s.matrices.size() != 1) throw BadConfig("eval takes exactly one --matrix");
  const ComplexMatrix a = load_operands(s).begin()->second;
  const int level = s.has("level") ? parse_number<int>(s.get("level"), "level") : 0;
  const std::string format = output_format(s, "json");
  if (!a.is_square() || a.rows() != model.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " but the model has dimension " + std::to_string(model.dimension()));
  }
  err << "[berezin] eval on " << model.describe() << " at level " << level << '\n';

  const SupEstimate ber = berezin_number(model, a, level);
  const SupEstimate norm = berezin_norm(model, a, level);
  const double w = numerical_radius(a);
  const double op = operator_norm(a);

  Output sink(s, out);
  std::ostream& os = sink.stream();
  if (format == "csv") {
    os << "quantity,value\n"
       << "ber," << format_double(ber.value) << '\n'
       << "berezin_norm," << format_double(norm.value) << '\n'
       << "numerical_radius," << format_double(w) << '\n'
       << "operator_norm," << format_double(op) << '\n';
    return kExitOk;
  }
  json samples = json::array();
  for (const BerezinEvaluation& e : berezin_set_sample(model, a, default_grid(model, 0))) {
    samples.push_back({{"point", point_json(model, e.point)}, {"re", e.value.real()}, {"im", e.value.imag()}});
  }
  const json report{
      {"model", model_to_json(model)},
      {"level", level},
      {"exact", ber.exact && norm.exact},
      {"ber", estimate_json(model, ber)},
      {"berezin_norm", estimate_json(model, norm)},
      {"numerical_radius", w},
      {"operator_norm", op},
      {"symbol_samples", samples},
  };
  os << report.dump(2) << '\n';
  return kExitOk;
}

std::vector<std::string> parse_ids(const std::string& text) {
  if (text == "all") return {};
  std::vector<std::string> ids = split(text, ',');
  if (ids.empty()) throw BadConfig("no inequality ids given");
  for (const std::string& id : ids) find_entry(id);
  return ids;
}

SuiteRequest build_request(const Settings& s) {
  SuiteRequest req;
  const bool fuzz = s.command == "fuzz";
  const std::string ids_text = fuzz ? s.get("suite", s.get("ineq", "all")) : s.require("ineq");
  req.ids = parse_ids(ids_text);
  req.suite_id = (fuzz ? "fuzz:" : "check:") + ids_text;
  req.operands = load_operands(s);

  if (s.has("n")) req.dims = parse_list<std::size_t>(s.get("n"), "n");
  if (s.has("model")) {
    const KernelModel model = parse_model(s.get("model"));
    if (model.is_finite()) {
      if (s.has("n") && req.dims != std::vector<std::size_t>{model.dimension()}) {
        throw BadConfig("--n disagrees with the finite model size");
      }
      req.dims = {model.dimension()};
      if (!req.operands.empty()) req.model = model;
    } else {
      req.model = model;
    }
  }
  if (s.has("gen")) {
    req.gen.kind = parse_generator_kind(s.get("gen"));
    req.gen_explicit = true;
  }
  if (s.has("scale")) req.gen.scale = parse_number<double>(s.get("scale"), "scale");
  req.trials = s.has("trials") ? parse_number<std::size_t>(s.get("trials"), "trials") : (fuzz ? 1000 : 1);
  if (s.has("seed")) req.gen.seed = parse_number<std::uint64_t>(s.get("seed"), "seed");
  if (s.has("alpha")) req.sweep.alphas = parse_list<double>(s.get("alpha"), "alpha");
  if (s.has("r")) req.sweep.rs = parse_list<double>(s.get("r"), "r");
  if (s.has("s")) req.sweep.ss = parse_list<double>(s.get("s"), "s");
  if (s.has("a")) req.a = parse_number<double>(s.get("a"), "a");
  if (s.has("b")) req.b = parse_number<double>(s.get("b"), "b");
  if (s.has("level")) req.grid_level = parse_number<int>(s.get("level"), "level");
  if (s.has("tol")) req.tolerance = parse_number<double>(s.get("tol"), "tol");
  return req;
}

json gap_stats_json(const std::map<std::string, GapStats>& stats) {
  json j = json::object();
  for (const auto& [label, g] : stats) {
    j[label] = {{"count", g.count}, {"min", g.min}, {"median", g.median}, {"max", g.max}, {"mean", g.mean}};
  }
  return j;
}

json params_json(const Params& p) {
  json j = json::object();
  if (!std::isnan(p.alpha)) j["alpha"] = p.alpha;
  if (!std::isnan(p.r)) j["r"] = p.r;
  if (!std::isnan(p.s)) j["s"] = p.s;
  return j;
}

constexpr std::size_t kListedViolations = 100;

json summary_json(const SuiteRequest& req, const TrialReport& rep) {
  json violations = json::array();
  for (std::size_t i = 0; i < std::min(rep.violations.size(), kListedViolations); ++i) {
    const Violation& v = rep.violations[i];
    violations.push_back({{"ineq_id", v.result.label()}, {"trial", v.trial}, {"n", v.n},
                          {"params", params_json(v.result.params)}, {"lhs", v.result.lhs},
                          {"rhs", v.result.rhs}, {"gap", v.result.gap}, {"marginal", v.result.marginal}});
  }
  return {
      {"suite_id", rep.suite_id},
      {"model", rep.model},
      {"seed", req.gen.seed},
      {"tolerance", req.tolerance},
      {"certified", rep.certified},
      {"total_trials", rep.total_trials},
      {"evaluations", rep.evaluations},
      {"violation_count", rep.violations.size()},
      {"violations", violations},
      {"marginal_retries", rep.marginal_retries},
      {"runtime_seconds", rep.runtime_seconds},
      {"gap_stats", gap_stats_json(rep.gap_stats)},
  };
}

void write_row(std::ostream& os, const SuiteRow& row) {
  const InequalityResult& r = row.result;
  std::string line = r.label();
  line += ',';
  line += std::to_string(row.trial);
  line += ',';
  line += std::to_string(row.n);
  for (double v : {r.params.alpha, r.params.r, r.params.s, r.lhs, r.rhs, r.gap}) {
    line += ',';
    line += format_double(v);
  }
  line += r.satisfied ? ",true\n" : ",false\n";
  os << line;
}

int cmd_suite(const Settings& s, std::ostream& out, std::ostream& err) {
  const SuiteRequest req = build_request(s);
  const std::string format = output_format(s, "csv");
  Output sink(s, out);
  std::ostream& os = sink.stream();

  err << "[berezin] " << s.command << ": " << (req.ids.empty() ? catalog().size() : req.ids.size())
      << " entries, " << req.trials << " trials, seed " << req.gen.seed << ", " << worker_threads()
      << " threads\n";

  RowSink rows;
  if (format == "csv") {
    os << kCsvHeader << '\n';
    rows = [&os](const SuiteRow& row) { write_row(os, row); };
  }
  const TrialReport rep = run_suite(req, rows);
  const json summary = summary_json(req, rep);

  if (format == "json") {
    os << summary.dump(2) << '\n';
  } else if (s.has("summary") || s.has("out")) {
    const std::string path = s.get("summary", s.get("out") + ".summary.json");
    std::ofstream sf(path, std::ios::binary);
    if (!sf) throw BadConfig("cannot write '" + path + "'");
    sf << summary.dump(2) << '\n';
  }
  os.flush();

  err << "[berezin] " << rep.evaluations << " evaluations, " << rep.violations.size()
      << " violations, " << rep.marginal_retries << " marginal retries, "
      << format_double(rep.runtime_seconds) << " s\n";
  if (rep.violations.empty()) return kExitOk;
  if (!rep.certified) {
    err << "[berezin] warning: violations on a grid-estimated model are not certified failures\n";
    return kExitOk;
  }
  return kExitViolations;
}

struct HistogramInput {
  std::map<std::string, std::vector<double>> gaps;
  std::size_t rows = 0;
};

HistogramInput read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open '" + path + "'");
  HistogramInput data;
  std::string line;
  if (!std::getline(in, line)) return data;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw BadConfig("'" + path + "' does not start with the report header");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      f.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (f.size() != 10) throw BadConfig("line " + std::to_string(lineno) + ": expected 10 fields");
    const double rhs = parse_number<double>(f[7], "rhs");
    const double gap = parse_number<double>(f[8], "gap");
    data.gaps[f[0]].push_back(gap / std::max(1.0, rhs));
    ++data.rows;
  }
  return data;
}

json histogram_json(std::vector<double> values, std::size_t bins) {
  std::sort(values.begin(), values.end());
  const double lo = values.front(), hi = values.back();
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  if (lo == hi) {
    edges = {lo, hi};
    counts = {values.size()};
  } else {
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) edges.push_back(lo + width * static_cast<double>(i));
    edges.back() = hi;
    counts.assign(bins, 0);
    for (double v : values) {
      auto k = static_cast<std::size_t>((v - lo) / width);
      ++counts[std::min(k, bins - 1)];
    }
  }
  return {{"edges", edges}, {"counts", counts}, {"total", values.size()}};
}

int cmd_report(const Settings& s, std::ostream& out, std::ostream& err) {
  const std::size_t bins = s.has("bins") ? parse_number<std::size_t>(s.get("bins"), "bins") : 20;
  if (bins == 0) throw BadConfig("--bins must be >= 1");
  const HistogramInput data = read_report_csv(s.require("in"));
  json hist = json::object();
  for (const auto& [label, values] : data.gaps) hist[label] = histogram_json(values, bins);
  const json report{{"quantity", "gap / max(1, rhs)"}, {"bins", bins}, {"rows", data.rows}, {"histograms", hist}};
  Output sink(s, out);
  sink.stream() << report.dump(2) << '\n';
  err << "[berezin] report: " << data.rows << " rows, " << data.gaps.size() << " ids\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Berezin number and Berezin norm inequality toolkit", "berezin_cli"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> descriptions{
      {"eval", "Berezin number, Berezin norm, numerical radius and operator norm of a matrix"},
      {"check", "Evaluate catalog inequalities on given or generated operands"},
      {"fuzz", "Run a randomized suite over the catalog"},
      {"report", "Histogram the relative gaps of a CSV report"},
  };
  std::map<std::string, std::string> raw;
  std::vector<std::string> matrices;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [command, flags] : kCommandFlags) {
    CLI::App* sub = app.add_subcommand(command, descriptions.at(command));
    subs[command] = sub;
    for (const FlagSpec& f : kFlags) {
      if (!flags.contains(f.name)) continue;
      const std::string flag = std::string("--") + f.name;
      if (std::string(f.name) == "matrix") {
        sub->add_option(flag, matrices, f.help);
      } else {
        options.emplace_back(f.name, sub->add_option(flag, raw[f.name], f.help));
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  Settings settings;
  for (const auto& [command, sub] : subs) {
    if (sub->parsed()) settings.command = command;
  }
  for (const auto& [name, opt] : options) {
    if (opt->count() > 0) settings.values[name] = raw[name];
  }
  settings.matrices = matrices;

  try {
    if (settings.has("config")) merge_config(settings);
    if (settings.command == "eval") return cmd_eval(settings, out, err);
    if (settings.command == "report") return cmd_report(settings, out, err);
    return cmd_suite(settings, out, err);
  } catch (const BadConfig& e) {
    err << "[berezin] error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const Error& e) {
    err << "[berezin] error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "[berezin] error: " << e.what() << '\n';
    return kExitBadInput;
  }
}

}  // namespace berezin
