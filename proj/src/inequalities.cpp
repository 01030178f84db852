#include "berezin/inequalities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "berezin/berezin.hpp"
#include "berezin/error.hpp"
#include "berezin/linalg.hpp"

namespace berezin {

namespace {

double sq(double x) { return x * x; }

// x^{1/r}, exact for r = 1.
double root(double x, double r) { return r == 1.0 ? x : std::pow(x, 1.0 / r); }

// x^e for x >= 0, exact for e = 1.
double power(double x, double e) { return e == 1.0 ? x : std::pow(x, e); }

ComplexMatrix adj(const ComplexMatrix& m) { return adjoint(m); }

ComplexMatrix average(const ComplexMatrix& x, const ComplexMatrix& y) { return (x + y) * 0.5; }

// Operands, model quantities and result construction for one case.
class Evaluation {
 public:
  explicit Evaluation(const InequalityCase& c) : case_(c) {}

  const ComplexMatrix& op(const char* name) const {
    const auto it = case_.operands.find(name);
    if (it == case_.operands.end()) {
      throw Error(ErrorCode::BadInput, case_.ineq_id + ": missing operand " + name);
    }
    return it->second;
  }
  bool has(const char* name) const { return case_.operands.contains(name); }

  std::size_t n() const { return op_dimension_; }
  void set_dimension(std::size_t n) { op_dimension_ = n; }

  ComplexMatrix identity() const { return ComplexMatrix::identity(op_dimension_); }

  double ber(const ComplexMatrix& m) const {
    return berezin_number(case_.model, m, case_.grid_level).value;
  }
  double bnorm(const ComplexMatrix& m) const {
    return berezin_norm(case_.model, m, case_.grid_level).value;
  }

  double alpha() const { return case_.params.alpha; }
  double r() const { return case_.params.r; }
  double s() const { return case_.params.s; }

  InequalityResult result(const char* id, const char* part, double lhs, double rhs) const {
    return make_result(id, part, echoed_, lhs, rhs, case_.tolerance);
  }

  void set_echo(const Params& p) { echoed_ = p; }
  const InequalityCase& source() const { return case_; }

 private:
  const InequalityCase& case_;
  Params echoed_;
  std::size_t op_dimension_ = 0;
};

// Averaged operators appearing in the general two-factor bound:
//   left  = ((B*|X|^{2a} B)^r + (D*|Y|^{2a} D)^r) / 2
//   right = ((A*|X*|^{2(1-a)} A)^s + (C*|Y*|^{2(1-a)} C)^s) / 2
struct FactorPair {
  ComplexMatrix left;
  ComplexMatrix right;
};

FactorPair general_factors(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                           const ComplexMatrix& d, const ComplexMatrix& x, const ComplexMatrix& y,
                           double alpha, double r, double s) {
  const ComplexMatrix bxb = hermitian_part(adj(b) * abs_power(x, 2.0 * alpha) * b);
  const ComplexMatrix dyd = hermitian_part(adj(d) * abs_power(y, 2.0 * alpha) * d);
  const ComplexMatrix axa = hermitian_part(adj(a) * abs_power(adj(x), 2.0 * (1.0 - alpha)) * a);
  const ComplexMatrix cyc = hermitian_part(adj(c) * abs_power(adj(y), 2.0 * (1.0 - alpha)) * c);
  return {average(positive_power(bxb, r), positive_power(dyd, r)),
          average(positive_power(axa, s), positive_power(cyc, s))};
}

// (A^a B^{1-a} + A^{1-a} B^a) / 2 for positive A, B.
ComplexMatrix mixed_mean(const ComplexMatrix& a, const ComplexMatrix& b, double alpha) {
  return average(positive_power(a, alpha) * positive_power(b, 1.0 - alpha),
                 positive_power(a, 1.0 - alpha) * positive_power(b, alpha));
}

// (P^{2a r} + P^{2(1-a) r}) / 2 for positive P.
ComplexMatrix split_power_mean(const ComplexMatrix& p, double alpha, double r) {
  return average(positive_power(p, 2.0 * alpha * r), positive_power(p, 2.0 * (1.0 - alpha) * r));
}

// ---- catalog evaluators -------------------------------------------------

std::vector<InequalityResult> eval_thm1(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B"), &C = e.op("C"), &D = e.op("D"), &X = e.op("X"),
             &Y = e.op("Y");
  e.set_echo({c.params.alpha, c.params.r, c.params.s});
  const double lhs = sq(e.bnorm((adj(A) * X * B + adj(C) * Y * D) * 0.5));
  const FactorPair f = general_factors(A, B, C, D, X, Y, e.alpha(), e.r(), e.s());
  const double rhs = root(e.ber(f.left), e.r()) * root(e.ber(f.right), e.s());
  return {e.result("thm1", "", lhs, rhs)};
}

struct AbsSums {
  ComplexMatrix direct;   // |A|^{2 a r} + |B|^{2 a r}
  ComplexMatrix adjoint;  // |A*|^{2(1-a) s} + |B*|^{2(1-a) s}
};

AbsSums cor1_sums(const ComplexMatrix& A, const ComplexMatrix& B, double alpha, double r,
                  double s) {
  return {abs_power(A, 2.0 * alpha * r) + abs_power(B, 2.0 * alpha * r),
          abs_power(adj(A), 2.0 * (1.0 - alpha) * s) + abs_power(adj(B), 2.0 * (1.0 - alpha) * s)};
}

std::vector<InequalityResult> eval_cor1(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, c.params.r, c.params.s});
  const double lhs = sq(e.bnorm(average(A, B)));
  const AbsSums sums = cor1_sums(A, B, e.alpha(), e.r(), e.s());
  const double rhs =
      root(e.ber(sums.direct * 0.5), e.r()) * root(e.ber(sums.adjoint * 0.5), e.s());
  return {e.result("cor1", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_eqn1(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, c.params.r, kUnusedParam});
  const double r = e.r();
  const double lhs = power(e.bnorm(A + B), r);
  const AbsSums sums = cor1_sums(A, B, e.alpha(), r, r);
  const double rhs =
      std::pow(2.0, r - 1.0) * std::sqrt(e.ber(sums.direct)) * std::sqrt(e.ber(sums.adjoint));
  return {e.result("eqn1", "", lhs, rhs)};
}

// The two-factor bound is dominated by the additive bound via AM-GM:
// 2^{r-1} sqrt(x y) <= 2^{r-2} (x + y).
std::vector<InequalityResult> eval_eqn2cmp(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, c.params.r, kUnusedParam});
  const double r = e.r();
  const AbsSums sums = cor1_sums(A, B, e.alpha(), r, r);
  const double x = e.ber(sums.direct);
  const double y = e.ber(sums.adjoint);
  const double product_form = std::pow(2.0, r - 1.0) * std::sqrt(x) * std::sqrt(y);
  const double additive_form = std::pow(2.0, r - 2.0) * (x + y);
  return {e.result("eqn2cmp", "", product_form, additive_form)};
}

// ber^{1/r}((|A|^{2r} + |C|^{2r})/2) * ber^{1/s}((|B|^{2s} + |D|^{2s})/2)
double cor3_rhs(const Evaluation& e, const ComplexMatrix& A, const ComplexMatrix& B,
                const ComplexMatrix& C, const ComplexMatrix& D, double r, double s) {
  const ComplexMatrix left = average(abs_power(A, 2.0 * r), abs_power(C, 2.0 * r));
  const ComplexMatrix right = average(abs_power(B, 2.0 * s), abs_power(D, 2.0 * s));
  return root(e.ber(left), r) * root(e.ber(right), s);
}

std::vector<InequalityResult> eval_eq1(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B"), &C = e.op("C"), &D = e.op("D");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double lhs = sq(e.bnorm((adj(A) * B + adj(C) * D) * 0.5));
  return {e.result("eq1", "", lhs, cor3_rhs(e, A, B, C, D, e.r(), e.s()))};
}

std::vector<InequalityResult> eval_ceb(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B"), &C = e.op("C"), &D = e.op("D");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const ComplexMatrix m = (adj(A) * B + adj(C) * D) * 0.5;
  const double ber_sq = sq(e.ber(m));
  const double norm_sq = sq(e.bnorm(m));
  return {e.result("ceb", "", ber_sq, cor3_rhs(e, A, B, C, D, e.r(), e.s())),
          e.result("ceb", "chain", ber_sq, norm_sq)};
}

std::vector<InequalityResult> eval_cor4(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B"), &C = e.op("C"), &D = e.op("D");
  e.set_echo({kUnusedParam, c.params.r, kUnusedParam});
  const double r = e.r();
  const double lhs = power(e.bnorm((adj(A) * B + adj(C) * D) * 0.5), 2.0 * r);
  const double rhs = e.ber(average(abs_power(A, 2.0 * r), abs_power(C, 2.0 * r))) *
                     e.ber(average(abs_power(B, 2.0 * r), abs_power(D, 2.0 * r)));
  return {e.result("cor4", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_prop1(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  const ComplexMatrix& X = e.has("X") ? e.op("X") : A;
  const ComplexMatrix gram = hermitian_part(adj(X) * X);
  return {e.result("prop1", "", e.bnorm(A), e.ber(A)),
          e.result("prop1", "eql2", e.bnorm(gram), e.ber(gram))};
}

std::vector<InequalityResult> eval_cor5(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double r = e.r(), s = e.s();
  const ComplexMatrix sym = adj(A) * B + adj(B) * A;
  const double half_norm = e.bnorm(sym * 0.5);
  const ComplexMatrix mean_r = average(abs_power(A, 2.0 * r), abs_power(B, 2.0 * r));
  const ComplexMatrix mean_s = average(abs_power(A, 2.0 * s), abs_power(B, 2.0 * s));
  const double ber_r = e.ber(mean_r);
  const ComplexMatrix gram_sum = hermitian_part(adj(A) * A + adj(B) * B);
  const double gram_ber = e.ber(gram_sum);
  return {
      e.result("cor5", "i", sq(half_norm), root(ber_r, r) * root(e.ber(mean_s), s)),
      e.result("cor5", "ii", power(half_norm, r), ber_r),
      e.result("cor5", "r1", e.bnorm(sym), gram_ber),
      e.result("cor5", "eq", e.bnorm(gram_sum), gram_ber),
  };
}

std::vector<InequalityResult> eval_eqn21(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({kUnusedParam, c.params.r, kUnusedParam});
  const double r = e.r();
  const ComplexMatrix gram_sum = hermitian_part(adj(A) * A + adj(B) * B);
  const double gram_ber = e.ber(gram_sum);
  return {
      e.result("eqn21", "", power(e.bnorm(average(A, B)), 2.0 * r),
               e.ber(average(abs_power(A, 2.0 * r), abs_power(B, 2.0 * r)))),
      e.result("eqn21", "r1", sq(e.bnorm(A + B)), 2.0 * gram_ber),
      e.result("eqn21", "eq", e.bnorm(gram_sum), gram_ber),
  };
}

std::vector<InequalityResult> eval_reim(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  e.set_echo({kUnusedParam, c.params.r, kUnusedParam});
  const double r = e.r();
  const ComplexMatrix re = re_part(A);
  const ComplexMatrix im = im_part(A);
  const double cartesian =
      std::pow(2.0, 2.0 * r - 1.0) * e.ber(abs_power(re, 2.0 * r) + abs_power(im, 2.0 * r));
  const double symmetric = e.ber(average(abs_power(A, 2.0 * r), abs_power(adj(A), 2.0 * r)));
  return {
      e.result("reim", "", power(e.bnorm(A), 2.0 * r), cartesian),
      e.result("reim", "re", power(e.bnorm(re), 2.0 * r), symmetric),
      e.result("reim", "im", power(e.bnorm(im), 2.0 * r), symmetric),
  };
}

std::vector<InequalityResult> eval_cor6(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double r = e.r(), s = e.s();
  const ComplexMatrix squares = A * A + B * B;
  const double half_norm = e.bnorm(squares * 0.5);
  const double direct_r = e.ber(average(abs_power(A, 2.0 * r), abs_power(B, 2.0 * r)));
  const double adjoint_s = e.ber(average(abs_power(adj(A), 2.0 * s), abs_power(adj(B), 2.0 * s)));
  const double adjoint_r = e.ber(average(abs_power(adj(A), 2.0 * r), abs_power(adj(B), 2.0 * r)));
  const ComplexMatrix gram = hermitian_part(adj(A) * A + adj(B) * B);
  const ComplexMatrix cogram = hermitian_part(A * adj(A) + B * adj(B));
  const double gram_ber = e.ber(gram), cogram_ber = e.ber(cogram);
  return {
      e.result("cor6", "i", sq(half_norm), root(direct_r, r) * root(adjoint_s, s)),
      e.result("cor6", "ii", power(half_norm, 2.0 * r), direct_r * adjoint_r),
      e.result("cor6", "r1", sq(e.bnorm(squares)), gram_ber * cogram_ber),
      e.result("cor6", "eq", e.bnorm(gram) * e.bnorm(cogram), gram_ber * cogram_ber),
  };
}

// ber((|M|^{2p} + I)/2)
double shifted_abs_ber(const Evaluation& e, const ComplexMatrix& m, double p) {
  return e.ber(average(abs_power(m, 2.0 * p), e.identity()));
}

std::vector<InequalityResult> eval_eqn3(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_dimension(A.rows());
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double lhs = sq(e.bnorm(average(A, B)));
  const double rhs =
      root(shifted_abs_ber(e, A, e.r()), e.r()) * root(shifted_abs_ber(e, adj(B), e.s()), e.s());
  return {e.result("eqn3", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_eqn4(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  e.set_dimension(A.rows());
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double rhs =
      root(shifted_abs_ber(e, A, e.r()), e.r()) * root(shifted_abs_ber(e, adj(A), e.s()), e.s());
  return {e.result("eqn4", "", sq(e.bnorm(A)), rhs)};
}

std::vector<InequalityResult> eval_eqn5(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  e.set_dimension(A.rows());
  e.set_echo({kUnusedParam, c.params.r, kUnusedParam});
  const double r = e.r();
  const double rhs = shifted_abs_ber(e, A, r) * shifted_abs_ber(e, adj(A), r);
  return {e.result("eqn5", "", power(e.bnorm(A), 2.0 * r), rhs)};
}

std::vector<InequalityResult> eval_abprod(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double r = e.r(), s = e.s();
  const double norm_ab = e.bnorm(A * B);
  const double left_r = e.ber(abs_power(adj(A), 2.0 * r));
  const double right_s = e.ber(abs_power(B, 2.0 * s));
  const double right_r = e.ber(abs_power(B, 2.0 * r));
  const ComplexMatrix cogram = hermitian_part(A * adj(A));
  const ComplexMatrix gram = hermitian_part(adj(B) * B);
  const double cogram_ber = e.ber(cogram), gram_ber = e.ber(gram);
  return {
      e.result("abprod", "i", sq(norm_ab),
               std::pow(2.0, 2.0 - 1.0 / r - 1.0 / s) * root(left_r, r) * root(right_s, s)),
      e.result("abprod", "ii", power(norm_ab, 2.0 * r),
               std::pow(2.0, 2.0 * r - 2.0) * left_r * right_r),
      e.result("abprod", "r1", norm_ab, std::sqrt(cogram_ber) * std::sqrt(gram_ber)),
      e.result("abprod", "eq", std::sqrt(e.bnorm(cogram)) * std::sqrt(e.bnorm(gram)),
               std::sqrt(cogram_ber) * std::sqrt(gram_ber)),
  };
}

std::vector<InequalityResult> eval_cor8(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double r = e.r(), s = e.s();
  const double direct_r = e.ber(average(abs_power(A, 2.0 * r), abs_power(B, 2.0 * r)));
  const double adjoint_s = e.ber(average(abs_power(adj(A), 2.0 * s), abs_power(adj(B), 2.0 * s)));
  const double adjoint_r = e.ber(average(abs_power(adj(A), 2.0 * r), abs_power(adj(B), 2.0 * r)));
  const ComplexMatrix ab = A * B, ba = B * A;
  const double plus = e.bnorm((ab + ba) * 0.5);
  const double minus = e.bnorm((ab - ba) * 0.5);
  const double rhs_i = root(direct_r, r) * root(adjoint_s, s);
  const double rhs_ii = direct_r * adjoint_r;
  return {
      e.result("cor8", "i+", sq(plus), rhs_i),
      e.result("cor8", "i-", sq(minus), rhs_i),
      e.result("cor8", "ii+", power(plus, 2.0 * r), rhs_ii),
      e.result("cor8", "ii-", power(minus, 2.0 * r), rhs_ii),
  };
}

std::vector<InequalityResult> eval_eqn6(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  e.set_echo({kUnusedParam, c.params.r, kUnusedParam});
  const double r = e.r();
  const ComplexMatrix gram = hermitian_part(adj(A) * A);
  const ComplexMatrix cogram = hermitian_part(A * adj(A));
  const double rhs =
      std::pow(2.0, r - 1.0) * e.ber(positive_power(gram, r) + positive_power(cogram, r));
  return {
      e.result("eqn6", "+", power(e.bnorm(cogram + gram), r), rhs),
      e.result("eqn6", "-", power(e.bnorm(cogram - gram), r), rhs),
  };
}

std::vector<InequalityResult> eval_eql1(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  const ComplexMatrix gram = hermitian_part(adj(A) * A);
  const ComplexMatrix cogram = hermitian_part(A * adj(A));
  const ComplexMatrix sum = gram + cogram;
  const double sum_ber = e.ber(sum);
  return {
      e.result("eql1", "", e.bnorm(cogram - gram), sum_ber),
      e.result("eql1", "eq", e.bnorm(sum), sum_ber),
  };
}

std::vector<InequalityResult> eval_thm2(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, c.params.r, c.params.s});
  const double al = e.alpha(), r = e.r(), s = e.s();
  const double lhs = sq(e.bnorm(mixed_mean(A, B, al)));
  const double rhs =
      root(e.ber(split_power_mean(A, al, r)), r) * root(e.ber(split_power_mean(B, al, s)), s);
  return {e.result("thm2", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_eqn11(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, c.params.r, kUnusedParam});
  const double al = e.alpha(), r = e.r();
  const double lhs = power(e.bnorm(mixed_mean(A, B, al) * 2.0), 2.0 * r);
  const double rhs = std::pow(2.0, 2.0 * r - 2.0) * e.ber(split_power_mean(A, al, r) * 2.0) *
                     e.ber(split_power_mean(B, al, r) * 2.0);
  return {e.result("eqn11", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_eqn12(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  const double lhs = e.bnorm(positive_sqrt(A) * positive_sqrt(B));
  return {e.result("eqn12", "", lhs, std::sqrt(e.ber(A)) * std::sqrt(e.ber(B)))};
}

std::vector<InequalityResult> eval_eqn13(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  const ComplexMatrix root_ab = positive_sqrt(hermitian_part(A * B));
  const double norm = e.bnorm(root_ab);
  return {
      e.result("eqn13", "", norm, std::sqrt(e.ber(A)) * std::sqrt(e.ber(B))),
      e.result("eqn13", "eq", norm, e.ber(root_ab)),
  };
}

std::vector<InequalityResult> eval_thm3(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, kUnusedParam, kUnusedParam});
  const double al = e.alpha();
  const double lhs = sq(e.bnorm(A * al + B * (1.0 - al)));
  const ComplexMatrix weighted =
      hermitian_part(adj(A) * A * (al * al) + adj(B) * B * ((1.0 - al) * (1.0 - al)));
  const double rhs = e.ber(weighted) + 2.0 * al * (1.0 - al) * e.ber(adj(B) * A);
  return {e.result("thm3", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_thm3half(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  const double lhs = sq(e.bnorm(A + B));
  const double rhs =
      e.ber(hermitian_part(adj(A) * A + adj(B) * B)) + 2.0 * e.ber(adj(B) * A);
  return {e.result("thm3half", "", lhs, rhs)};
}

// Operator-norm analogues; no kernel model involved.
std::vector<InequalityResult> eval_rmk_i(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B"), &C = e.op("C"), &D = e.op("D"), &X = e.op("X"),
             &Y = e.op("Y");
  e.set_echo({c.params.alpha, c.params.r, c.params.s});
  const double lhs = sq(operator_norm((adj(A) * X * B + adj(C) * Y * D) * 0.5));
  const FactorPair f = general_factors(A, B, C, D, X, Y, e.alpha(), e.r(), e.s());
  const double rhs = root(operator_norm(f.left), e.r()) * root(operator_norm(f.right), e.s());
  return {e.result("rmk_i", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_rmk_ii(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B"), &C = e.op("C"), &D = e.op("D");
  e.set_echo({kUnusedParam, c.params.r, c.params.s});
  const double r = e.r(), s = e.s();
  const double lhs = sq(operator_norm((adj(A) * B + adj(C) * D) * 0.5));
  const ComplexMatrix left = average(positive_power(hermitian_part(adj(B) * B), r),
                                     positive_power(hermitian_part(adj(D) * D), r));
  const ComplexMatrix right = average(positive_power(hermitian_part(adj(A) * A), s),
                                      positive_power(hermitian_part(adj(C) * C), s));
  return {e.result("rmk_ii", "", lhs, root(operator_norm(left), r) * root(operator_norm(right), s))};
}

std::vector<InequalityResult> eval_rmk_iii(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, c.params.r, c.params.s});
  const double al = e.alpha(), r = e.r(), s = e.s();
  const double lhs = sq(operator_norm(mixed_mean(A, B, al)));
  const double rhs = root(operator_norm(split_power_mean(A, al, r)), r) *
                     root(operator_norm(split_power_mean(B, al, s)), s);
  return {e.result("rmk_iii", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_rmk_iv(const InequalityCase& c) {
  Evaluation e(c);
  const auto &A = e.op("A"), &B = e.op("B");
  e.set_echo({c.params.alpha, kUnusedParam, kUnusedParam});
  const double al = e.alpha();
  const double lhs = sq(operator_norm(A * al + B * (1.0 - al)));
  const ComplexMatrix weighted =
      hermitian_part(adj(A) * A * (al * al) + adj(B) * B * ((1.0 - al) * (1.0 - al)));
  const double rhs =
      operator_norm(weighted) + 2.0 * al * (1.0 - al) * numerical_radius(adj(B) * A);
  return {e.result("rmk_iv", "", lhs, rhs)};
}

double quadratic_form(const ComplexMatrix& m, std::span<const cplx> x) {
  return inner(m * x, x).real();
}

std::vector<InequalityResult> eval_lem1(const InequalityCase& c) {
  Evaluation e(c);
  const auto& P = e.op("A");
  e.set_echo({kUnusedParam, c.params.r, kUnusedParam});
  const double r = e.r();
  const double lhs = power(std::max(0.0, quadratic_form(P, c.x)), r);
  const double rhs = quadratic_form(positive_power(P, r), c.x);
  return {e.result("lem1", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_lem2(const InequalityCase& c) {
  Evaluation e(c);
  const auto& A = e.op("A");
  e.set_echo({c.params.alpha, kUnusedParam, kUnusedParam});
  const double al = e.alpha();
  const double lhs = std::norm(inner(A * std::span<const cplx>(c.x), c.y));
  const double rhs = quadratic_form(abs_power(A, 2.0 * al), c.x) *
                     quadratic_form(abs_power(adj(A), 2.0 * (1.0 - al)), c.y);
  return {e.result("lem2", "", lhs, rhs)};
}

std::vector<InequalityResult> eval_lem3(const InequalityCase& c) {
  Evaluation e(c);
  e.set_echo({c.params.alpha, c.params.r, c.params.s});
  return {e.result("lem3", "", power_mean(c.a, c.b, c.params.alpha, c.params.r),
                   power_mean(c.a, c.b, c.params.alpha, c.params.s))};
}

using O = OperandClass;
using AU = AlphaUse;

// id, operands, class, alpha, r, s, model_free, vectors, evaluator
const std::array<CatalogEntry, 32> kCatalog{{
    {"thm1", "ABCDXY", O::General, AU::Closed, true, true, false, false, eval_thm1},
    {"cor1", "AB", O::General, AU::Closed, true, true, false, false, eval_cor1},
    {"eqn1", "AB", O::General, AU::Closed, true, false, false, false, eval_eqn1},
    {"eqn2cmp", "AB", O::General, AU::Interior, true, false, false, false, eval_eqn2cmp},
    {"eq1", "ABCD", O::General, AU::None, true, true, false, false, eval_eq1},
    {"ceb", "ABCD", O::General, AU::None, true, true, false, false, eval_ceb},
    {"cor4", "ABCD", O::General, AU::None, true, false, false, false, eval_cor4},
    {"prop1", "A", O::Positive, AU::None, false, false, false, false, eval_prop1},
    {"cor5", "AB", O::General, AU::None, true, true, false, false, eval_cor5},
    {"eqn21", "AB", O::General, AU::None, true, false, false, false, eval_eqn21},
    {"reim", "A", O::General, AU::None, true, false, false, false, eval_reim},
    {"cor6", "AB", O::General, AU::None, true, true, false, false, eval_cor6},
    {"eqn3", "AB", O::General, AU::None, true, true, false, false, eval_eqn3},
    {"eqn4", "A", O::General, AU::None, true, true, false, false, eval_eqn4},
    {"eqn5", "A", O::General, AU::None, true, false, false, false, eval_eqn5},
    {"abprod", "AB", O::General, AU::None, true, true, false, false, eval_abprod},
    {"cor8", "AB", O::General, AU::None, true, true, false, false, eval_cor8},
    {"eqn6", "A", O::General, AU::None, true, false, false, false, eval_eqn6},
    {"eql1", "A", O::General, AU::None, false, false, false, false, eval_eql1},
    {"thm2", "AB", O::Positive, AU::Closed, true, true, false, false, eval_thm2},
    {"eqn11", "AB", O::Positive, AU::Closed, true, false, false, false, eval_eqn11},
    {"eqn12", "AB", O::Positive, AU::None, false, false, false, false, eval_eqn12},
    {"eqn13", "AB", O::CommutingPositive, AU::None, false, false, false, false, eval_eqn13},
    {"thm3", "AB", O::General, AU::Closed, false, false, false, false, eval_thm3},
    {"thm3half", "AB", O::General, AU::None, false, false, false, false, eval_thm3half},
    {"rmk_i", "ABCDXY", O::General, AU::Closed, true, true, true, false, eval_rmk_i},
    {"rmk_ii", "ABCD", O::General, AU::None, true, true, true, false, eval_rmk_ii},
    {"rmk_iii", "AB", O::Positive, AU::Closed, true, true, true, false, eval_rmk_iii},
    {"rmk_iv", "AB", O::General, AU::Closed, false, false, true, false, eval_rmk_iv},
    {"lem1", "A", O::Positive, AU::None, true, false, true, true, eval_lem1},
    {"lem2", "A", O::General, AU::Closed, false, false, true, true, eval_lem2},
    {"lem3", "", O::Scalars, AU::Interior, true, true, true, false, eval_lem3},
}};

void require_param(bool ok, const std::string& id, const char* what) {
  if (!ok) throw Error(ErrorCode::ParamOutOfRange, id + ": " + what);
}

void validate(const CatalogEntry& entry, const InequalityCase& c) {
  const std::string id(entry.id);
  const Params& p = c.params;
  switch (entry.alpha) {
    case AlphaUse::None: break;
    case AlphaUse::Closed:
      require_param(p.alpha >= 0.0 && p.alpha <= 1.0, id, "alpha must lie in [0, 1]");
      break;
    case AlphaUse::Interior:
      require_param(p.alpha > 0.0 && p.alpha < 1.0, id, "alpha must lie in (0, 1)");
      break;
  }
  if (entry.operand_class == OperandClass::Scalars) {
    require_param(std::isfinite(p.r) && std::isfinite(p.s), id, "r and s must be finite");
    require_param(p.r <= p.s, id, "requires r <= s");
    require_param(c.a >= 0.0 && c.b >= 0.0 && std::isfinite(c.a) && std::isfinite(c.b), id,
                  "requires a, b >= 0");
    return;
  }
  if (entry.uses_r) require_param(p.r >= 1.0 && std::isfinite(p.r), id, "r must be >= 1");
  if (entry.uses_s) require_param(p.s >= 1.0 && std::isfinite(p.s), id, "s must be >= 1");
  require_param(c.tolerance >= 0.0, id, "tolerance must be >= 0");

  std::size_t n = entry.model_free ? 0 : c.model.dimension();
  for (const char name : entry.operands) {
    const auto it = c.operands.find(std::string(1, name));
    if (it == c.operands.end()) {
      throw Error(ErrorCode::BadInput, id + ": missing operand " + std::string(1, name));
    }
    if (n == 0) n = it->second.rows();
    require_square(it->second, n, (id + " operand " + name).c_str());
  }
  for (const auto& [name, m] : c.operands) require_square(m, n, (id + " operand " + name).c_str());

  if (entry.operand_class == OperandClass::Positive ||
      entry.operand_class == OperandClass::CommutingPositive) {
    for (const char name : entry.operands) {
      if (!is_positive(c.operands.at(std::string(1, name)), 1e-8)) {
        throw Error(ErrorCode::NotPositive, id + ": operand " + name + " is not positive");
      }
    }
  }
  if (entry.operand_class == OperandClass::CommutingPositive) {
    const ComplexMatrix& a = c.operands.at("A");
    const ComplexMatrix& b = c.operands.at("B");
    const ComplexMatrix ab = a * b;
    const double scale = std::max(1.0, operator_norm(a) * operator_norm(b));
    if (operator_norm(ab - b * a) > 1e-10 * scale) {
      throw Error(ErrorCode::NotCommuting, id + ": AB != BA");
    }
    if (!is_positive(ab, 1e-8)) throw Error(ErrorCode::NotPositive, id + ": AB is not positive");
  }
  if (entry.needs_vectors) {
    require_param(c.x.size() == n, id, "x has the wrong length");
    if (entry.id == "lem1") {
      require_param(std::abs(vector_norm(c.x) - 1.0) <= 1e-10, id, "x must be a unit vector");
    } else {
      require_param(c.y.size() == n, id, "y has the wrong length");
    }
  }
}

std::vector<InequalityResult> check_group(const InequalityCase& c,
                                          std::initializer_list<std::string_view> ids) {
  std::vector<InequalityResult> out;
  InequalityCase sub = c;
  for (std::string_view id : ids) {
    sub.ineq_id = std::string(id);
    std::vector<InequalityResult> part = check(sub);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace

std::span<const CatalogEntry> catalog() { return kCatalog; }

const CatalogEntry& find_entry(std::string_view id) {
  for (const CatalogEntry& e : kCatalog) {
    if (e.id == id) return e;
  }
  throw Error(ErrorCode::UnknownIneqId, "unknown inequality id '" + std::string(id) + "'");
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const CatalogEntry& e : kCatalog) ids.emplace_back(e.id);
  return ids;
}

std::vector<InequalityResult> check(const InequalityCase& c) {
  const CatalogEntry& entry = find_entry(c.ineq_id);
  validate(entry, c);
  return entry.evaluate(c);
}

std::vector<InequalityResult> check_thm1(const InequalityCase& c) { return check_group(c, {"thm1"}); }
std::vector<InequalityResult> check_cor1(const InequalityCase& c) {
  return check_group(c, {"cor1", "eqn1"});
}
std::vector<InequalityResult> check_sharpness_eqn1_vs_eqn2(const InequalityCase& c) {
  return check_group(c, {"eqn2cmp"});
}
std::vector<InequalityResult> check_cor3(const InequalityCase& c) {
  return check_group(c, {"eq1", "ceb"});
}
std::vector<InequalityResult> check_cor4(const InequalityCase& c) { return check_group(c, {"cor4"}); }
std::vector<InequalityResult> check_cor5(const InequalityCase& c) { return check_group(c, {"cor5"}); }
std::vector<InequalityResult> check_cor11(const InequalityCase& c) {
  return check_group(c, {"eqn21", "reim"});
}
std::vector<InequalityResult> check_cor6(const InequalityCase& c) { return check_group(c, {"cor6"}); }
std::vector<InequalityResult> check_cor7(const InequalityCase& c) {
  return check_group(c, {"eqn3", "eqn4", "eqn5"});
}
std::vector<InequalityResult> check_ab_product(const InequalityCase& c) {
  return check_group(c, {"abprod"});
}
std::vector<InequalityResult> check_cor8(const InequalityCase& c) {
  return check_group(c, {"cor8", "eqn6", "eql1"});
}
std::vector<InequalityResult> check_thm2(const InequalityCase& c) { return check_group(c, {"thm2"}); }
std::vector<InequalityResult> check_cor9(const InequalityCase& c) {
  return check_group(c, {"eqn11", "eqn12", "eqn13"});
}
std::vector<InequalityResult> check_thm3(const InequalityCase& c) {
  return check_group(c, {"thm3", "thm3half"});
}
std::vector<InequalityResult> check_remark_opnorm(const InequalityCase& c) {
  return check_group(c, {"rmk_i", "rmk_ii", "rmk_iii", "rmk_iv"});
}

double power_mean(double a, double b, double alpha, double r) {
  if (r == 0.0) return std::pow(a, alpha) * std::pow(b, 1.0 - alpha);
  if (r < 0.0 && (a == 0.0 || b == 0.0)) return 0.0;
  return std::pow(alpha * std::pow(a, r) + (1.0 - alpha) * std::pow(b, r), 1.0 / r);
}

bool check_lemma1(const ComplexMatrix& p, std::span<const cplx> x, double r, double tol) {
  InequalityCase c;
  c.ineq_id = "lem1";
  c.operands.emplace("A", p);
  c.params.r = r;
  c.x.assign(x.begin(), x.end());
  c.tolerance = tol;
  return check(c).front().satisfied;
}

bool check_lemma2(const ComplexMatrix& a, std::span<const cplx> x, std::span<const cplx> y,
                  double alpha, double tol) {
  InequalityCase c;
  c.ineq_id = "lem2";
  c.operands.emplace("A", a);
  c.params.alpha = alpha;
  c.x.assign(x.begin(), x.end());
  c.y.assign(y.begin(), y.end());
  c.tolerance = tol;
  return check(c).front().satisfied;
}

bool check_lemma3(double a, double b, double alpha, double r, double s, double tol) {
  InequalityCase c;
  c.ineq_id = "lem3";
  c.a = a;
  c.b = b;
  c.params = {alpha, r, s};
  c.tolerance = tol;
  return check(c).front().satisfied;
}

}  // namespace berezin
