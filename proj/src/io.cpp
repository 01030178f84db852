#include "berezin/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "berezin/error.hpp"

namespace berezin {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return {};
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const cplx& z : m.data()) data.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

namespace {

std::size_t positive_size(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
    throw Error(ErrorCode::BadInput, std::string("matrix JSON: '") + key + "' must be a positive integer");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadInput, "matrix JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "rows" && key != "cols" && key != "data") {
      throw Error(ErrorCode::BadInput, "matrix JSON: unknown key '" + key + "'");
    }
  }
  const std::size_t rows = positive_size(j, "rows");
  const std::size_t cols = positive_size(j, "cols");
  if (!j.contains("data") || !j["data"].is_array()) {
    throw Error(ErrorCode::BadInput, "matrix JSON: 'data' must be an array");
  }
  std::vector<cplx> entries;
  entries.reserve(j["data"].size());
  for (const json& e : j["data"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorCode::BadInput, "matrix JSON: entries must be [re, im] pairs");
    }
    entries.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

std::string write_matrix_json(const ComplexMatrix& m) { return matrix_to_json(m).dump(); }

ComplexMatrix read_matrix_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadInput, std::string("matrix JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ComplexMatrix load_matrix(const std::string& path) { return read_matrix_json(read_file(path)); }

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write '" + path + "'");
  out << write_matrix_json(m) << '\n';
}

json model_to_json(const KernelModel& model) {
  switch (model.kind()) {
    case ModelKind::FiniteDiagonal:
      return {{"kind", "finite"}, {"n", model.dimension()}};
    case ModelKind::HardyTruncated:
      return {{"kind", "hardy"}, {"degree", model.degree()}, {"rho", model.radius_cap()}};
    case ModelKind::BergmanTruncated:
      return {{"kind", "bergman"}, {"degree", model.degree()}, {"rho", model.radius_cap()}};
    case ModelKind::FockTruncated:
      return {{"kind", "fock"}, {"degree", model.degree()}, {"R", model.radius_cap()}};
  }
  return {};
}

namespace {

std::size_t size_field(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
    throw Error(ErrorCode::BadInput, std::string("model JSON: '") + key + "' must be a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

double real_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw Error(ErrorCode::BadInput, std::string("model JSON: '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

}  // namespace

KernelModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorCode::BadInput, "model JSON needs a string 'kind'");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "n" && key != "degree" && key != "rho" && key != "R") {
      throw Error(ErrorCode::BadInput, "model JSON: unknown key '" + key + "'");
    }
  }
  const std::string kind = j["kind"];
  if (kind == "finite") {
    if (!j.contains("n")) throw Error(ErrorCode::BadInput, "model JSON: finite model needs 'n'");
    return KernelModel::finite(size_field(j, "n", 0));
  }
  const std::size_t degree = size_field(j, "degree", kDefaultDegree);
  if (kind == "hardy") return KernelModel::hardy(degree, real_field(j, "rho", kDefaultDiskCap));
  if (kind == "bergman") return KernelModel::bergman(degree, real_field(j, "rho", kDefaultDiskCap));
  if (kind == "fock") return KernelModel::fock(degree, real_field(j, "R", kDefaultFockCap));
  throw Error(ErrorCode::BadInput, "unknown model kind '" + kind + "'");
}

namespace {

template <class T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::BadInput, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

KernelModel parse_model(std::string_view text) {
  if (text.ends_with(".json")) {
    json j;
    try {
      j = json::parse(read_file(std::string(text)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::BadInput, std::string("model JSON: ") + e.what());
    }
    return model_from_json(j);
  }

  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    fields.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const std::string_view kind = fields[0];
  if (fields.size() > 3) throw Error(ErrorCode::BadInput, "bad model '" + std::string(text) + "'");
  if (kind == "finite") {
    if (fields.size() != 2) throw Error(ErrorCode::BadInput, "finite model needs a size, e.g. finite:4");
    return KernelModel::finite(parse_number<std::size_t>(fields[1], "model size"));
  }
  const std::size_t degree =
      fields.size() > 1 ? parse_number<std::size_t>(fields[1], "model degree") : kDefaultDegree;
  const bool has_cap = fields.size() > 2;
  const double cap = has_cap ? parse_number<double>(fields[2], "model radius") : 0.0;
  if (kind == "hardy") return KernelModel::hardy(degree, has_cap ? cap : kDefaultDiskCap);
  if (kind == "bergman") return KernelModel::bergman(degree, has_cap ? cap : kDefaultDiskCap);
  if (kind == "fock") return KernelModel::fock(degree, has_cap ? cap : kDefaultFockCap);
  throw Error(ErrorCode::BadInput, "unknown model kind '" + std::string(kind) + "'");
}

}  // namespace berezin
