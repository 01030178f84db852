#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "berezin/matrix.hpp"
#include "berezin/rkhs.hpp"

namespace berezin {

/// Shortest decimal form that parses back to the same double (at most 17
/// significant digits). NaN is written as an empty string.
std::string format_double(double x);

/// {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);  // throws BadInput

/// Serialized text; doubles are printed in shortest round-trip form.
std::string write_matrix_json(const ComplexMatrix& m);
ComplexMatrix read_matrix_json(std::string_view text);
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m);

/// {"kind": "finite|hardy|bergman|fock", "n", "degree", "rho", "R"}.
nlohmann::json model_to_json(const KernelModel& model);
KernelModel model_from_json(const nlohmann::json& j);

/// "finite:4", "hardy", "hardy:15", "bergman:15:0.9", "fock:15:3", or a path
/// to a model descriptor JSON file.
KernelModel parse_model(std::string_view text);

}  // namespace berezin
