#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "berezin/matrix.hpp"
#include "berezin/result.hpp"
#include "berezin/rkhs.hpp"

namespace berezin {

inline constexpr double kDefaultIneqTolerance = 1e-9;

/// One instance of a catalog entry. Operators are looked up by name
/// ("A".."D", "X", "Y"); the lemma checks use the vectors x, y and scalars a, b.
struct InequalityCase {
  std::string ineq_id;
  std::map<std::string, ComplexMatrix> operands;
  Params params;
  KernelModel model = KernelModel::finite(1);
  double tolerance = kDefaultIneqTolerance;
  int grid_level = 0;
  CVector x;
  CVector y;
  double a = 0.0;
  double b = 0.0;
};

enum class OperandClass {
  General,            // any square operators
  Positive,           // every operator positive semidefinite
  CommutingPositive,  // positive and mutually commuting
  Scalars,            // lem3: a, b >= 0
};

enum class AlphaUse { None, Closed, Interior };

struct CatalogEntry {
  std::string_view id;
  std::string_view operands;  // operator names, e.g. "ABCDXY"
  OperandClass operand_class;
  AlphaUse alpha;
  bool uses_r;
  bool uses_s;
  bool model_free;     // operator-norm remarks and the lemmas
  bool needs_vectors;  // lem1, lem2
  std::vector<InequalityResult> (*evaluate)(const InequalityCase&);
};

/// The catalog, in reporting order.
std::span<const CatalogEntry> catalog();
const CatalogEntry& find_entry(std::string_view id);  // throws UnknownIneqId
std::vector<std::string> catalog_ids();

/// Validates the case against its catalog entry and evaluates every display
/// registered under case.ineq_id.
std::vector<InequalityResult> check(const InequalityCase& c);

// Grouped checks: each evaluates all catalog ids derived from one result and
// returns their results concatenated (the case's ineq_id is ignored).
std::vector<InequalityResult> check_thm1(const InequalityCase& c);
std::vector<InequalityResult> check_cor1(const InequalityCase& c);       // cor1, eqn1
std::vector<InequalityResult> check_sharpness_eqn1_vs_eqn2(const InequalityCase& c);
std::vector<InequalityResult> check_cor3(const InequalityCase& c);       // eq1, ceb
std::vector<InequalityResult> check_cor4(const InequalityCase& c);
std::vector<InequalityResult> check_cor5(const InequalityCase& c);
std::vector<InequalityResult> check_cor11(const InequalityCase& c);      // eqn21, reim
std::vector<InequalityResult> check_cor6(const InequalityCase& c);
std::vector<InequalityResult> check_cor7(const InequalityCase& c);       // eqn3, eqn4, eqn5
std::vector<InequalityResult> check_ab_product(const InequalityCase& c);
std::vector<InequalityResult> check_cor8(const InequalityCase& c);       // cor8, eqn6, eql1
std::vector<InequalityResult> check_thm2(const InequalityCase& c);
std::vector<InequalityResult> check_cor9(const InequalityCase& c);       // eqn11..eqn13
std::vector<InequalityResult> check_thm3(const InequalityCase& c);       // thm3, thm3half
std::vector<InequalityResult> check_remark_opnorm(const InequalityCase& c);  // rmk_i..rmk_iv

bool check_lemma1(const ComplexMatrix& p, std::span<const cplx> x, double r,
                  double tol = kDefaultIneqTolerance);
bool check_lemma2(const ComplexMatrix& a, std::span<const cplx> x, std::span<const cplx> y,
                  double alpha, double tol = kDefaultIneqTolerance);
bool check_lemma3(double a, double b, double alpha, double r, double s,
                  double tol = kDefaultIneqTolerance);

/// Weighted power mean (alpha a^r + (1-alpha) b^r)^{1/r}; r = 0 is the
/// weighted geometric mean a^alpha b^{1-alpha}.
double power_mean(double a, double b, double alpha, double r);

}  // namespace berezin
