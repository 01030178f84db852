#include "berezin/fuzz.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>

#include "berezin/berezin.hpp"
#include "berezin/error.hpp"
#include "berezin/linalg.hpp"
#include "berezin/rng.hpp"

namespace berezin {

namespace {

constexpr std::array<std::pair<GeneratorKind, std::string_view>, 6> kKindNames{{
    {GeneratorKind::General, "general"},
    {GeneratorKind::Hermitian, "hermitian"},
    {GeneratorKind::Positive, "positive"},
    {GeneratorKind::Unitary, "unitary"},
    {GeneratorKind::CommutingPositivePair, "commuting-positive-pair"},
    {GeneratorKind::RankDeficient, "rank-deficient"},
}};

constexpr std::string_view kOperandNames = "ABCDXY";

ComplexMatrix gaussian(std::size_t n, double scale, std::uint64_t seed) {
  CounterRng rng(seed);
  ComplexMatrix g(n, n);
  for (cplx& z : g.data()) z = rng.complex_normal() * scale;
  return g;
}

// Modified Gram-Schmidt on the columns, applied twice.
ComplexMatrix orthonormalize_columns(ComplexMatrix q) {
  const std::size_t n = q.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj{};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
    }
  }
  return q;
}

// U diag(d) U*, exactly Hermitian.
ComplexMatrix conjugate_diagonal(const ComplexMatrix& u, std::span<const double> d) {
  return hermitian_part(u * ComplexMatrix::diagonal(d) * adjoint(u));
}

ComplexMatrix positive_sample(std::size_t n, double scale, std::uint64_t seed) {
  const ComplexMatrix g = gaussian(n, scale, seed);
  return hermitian_part(adjoint(g) * g * (1.0 / static_cast<double>(n)));
}

void require_dimension(const GeneratorSpec& spec) {
  if (spec.n == 0) throw Error(ErrorCode::ParamOutOfRange, "generator dimension must be >= 1");
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw Error(ErrorCode::ParamOutOfRange, "generator scale must be > 0");
  }
}

// ---- per-trial evaluation -----------------------------------------------

std::uint64_t operand_seed(std::uint64_t trial_seed, std::size_t k) {
  return mix64(trial_seed + k + 1);
}

GeneratorKind kind_for(const CatalogEntry& entry, const SuiteRequest& req) {
  const GeneratorKind user = req.gen.kind;
  switch (entry.operand_class) {
    case OperandClass::General:
    case OperandClass::Scalars:
      return req.gen_explicit ? user : GeneratorKind::General;
    case OperandClass::Positive:
      if (req.gen_explicit &&
          (user == GeneratorKind::Positive || user == GeneratorKind::RankDeficient ||
           user == GeneratorKind::CommutingPositivePair)) {
        return user;
      }
      return GeneratorKind::Positive;
    case OperandClass::CommutingPositive:
      return GeneratorKind::CommutingPositivePair;
  }
  return GeneratorKind::General;
}

struct Plan {
  const CatalogEntry* entry;
  std::vector<Params> points;
  GeneratorKind kind;
  std::size_t model_count = 0;  // scalar entries run on the first dimension only
};

InequalityCase build_case(const Plan& plan, const SuiteRequest& req, const KernelModel& model,
                          std::size_t n, std::size_t trial) {
  const std::uint64_t trial_seed = req.gen.seed ^ static_cast<std::uint64_t>(trial);
  InequalityCase c;
  c.ineq_id = std::string(plan.entry->id);
  c.model = model;
  c.tolerance = req.tolerance;
  c.grid_level = req.grid_level;

  const std::string_view names = plan.entry->operands;
  if (!req.operands.empty()) {
    c.operands = req.operands;
  } else if (req.identity_override) {
    for (const char name : names) c.operands.emplace(std::string(1, name), ComplexMatrix::identity(n));
  } else if (plan.kind == GeneratorKind::CommutingPositivePair) {
    // Consecutive operands share an eigenbasis pairwise: (A, B), (C, D), (X, Y).
    for (std::size_t k = 0; k < names.size(); k += 2) {
      auto [p, q] = gen_commuting_pair({plan.kind, n, req.gen.scale, operand_seed(trial_seed, k)});
      c.operands.emplace(std::string(1, names[k]), std::move(p));
      if (k + 1 < names.size()) c.operands.emplace(std::string(1, names[k + 1]), std::move(q));
    }
  } else {
    for (std::size_t k = 0; k < names.size(); ++k) {
      const std::size_t slot = kOperandNames.find(names[k]);
      c.operands.emplace(std::string(1, names[k]),
                         gen_matrix({plan.kind, n, req.gen.scale, operand_seed(trial_seed, slot)}));
    }
  }

  if (plan.entry->needs_vectors) {
    c.x = plan.entry->id == "lem1" ? gen_unit_vector(n, operand_seed(trial_seed, 6))
                                   : gen_vector(n, operand_seed(trial_seed, 6));
    c.y = gen_vector(n, operand_seed(trial_seed, 7));
  }
  if (plan.entry->operand_class == OperandClass::Scalars) {
    CounterRng rng(operand_seed(trial_seed, 8));
    const double ra = 4.0 * rng.uniform();
    const double rb = 4.0 * rng.uniform();
    // Every tenth trial puts a zero in one slot to exercise the boundary cases.
    const bool zero_a = trial % 10 == 3, zero_b = trial % 10 == 7;
    if (req.identity_override) {
      c.a = c.b = 1.0;
    } else {
      c.a = req.a.value_or(zero_a ? 0.0 : ra);
      c.b = req.b.value_or(zero_b ? 0.0 : rb);
    }
  }
  return c;
}

bool near_miss(const InequalityResult& r) {
  return r.lhs <= r.rhs + 10.0 * r.tolerance * std::max(1.0, r.rhs);
}

// All sweep points of one trial. Near-miss violations are re-evaluated at
// the tight eigensolver tolerance and flagged marginal.
std::vector<InequalityResult> evaluate_trial(const Plan& plan, InequalityCase c,
                                             std::size_t& retries) {
  std::vector<InequalityResult> out;
  for (const Params& p : plan.points) {
    c.params = p;
    std::vector<InequalityResult> results = check(c);
    const bool retry = std::any_of(results.begin(), results.end(), [](const InequalityResult& r) {
      return !r.satisfied && std::isfinite(r.lhs) && std::isfinite(r.rhs) && near_miss(r);
    });
    if (retry) {
      ++retries;
      std::vector<bool> was_marginal;
      for (const InequalityResult& r : results) was_marginal.push_back(!r.satisfied);
      ScopedJacobiTolerance tight(kTightJacobiTolerance);
      results = check(c);
      for (std::size_t i = 0; i < results.size(); ++i) results[i].marginal = was_marginal[i];
    }
    for (InequalityResult& r : results) out.push_back(std::move(r));
  }
  return out;
}

class ReportBuilder {
 public:
  ReportBuilder(const SuiteRequest& req, const RowSink& sink) : sink_(sink) {
    report_.suite_id = req.suite_id;
    report_.certified = !req.model || req.model->is_finite();
    report_.model = req.model ? req.model->describe() : "finite:n";
    start_ = std::chrono::steady_clock::now();
  }

  void add(const InequalityResult& r, std::size_t trial, std::size_t n) {
    ++report_.evaluations;
    gaps_[r.label()].push_back(r.relative_gap());
    if (!r.satisfied) report_.violations.push_back({r, trial, n});
    if (sink_) sink_(SuiteRow{r, trial, n});
  }

  void add_trials(std::size_t count) { report_.total_trials += count; }
  void add_retries(std::size_t count) { report_.marginal_retries += count; }

  TrialReport finish() {
    for (auto& [label, g] : gaps_) {
      GapStats s;
      s.count = g.size();
      double sum = 0.0;
      for (double v : g) sum += v;
      s.mean = sum / static_cast<double>(g.size());
      std::sort(g.begin(), g.end());
      s.min = g.front();
      s.max = g.back();
      const std::size_t mid = g.size() / 2;
      s.median = g.size() % 2 == 1 ? g[mid] : 0.5 * (g[mid - 1] + g[mid]);
      report_.gap_stats.emplace(label, s);
    }
    report_.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  const RowSink& sink_;
  TrialReport report_;
  std::map<std::string, std::vector<double>> gaps_;
  std::chrono::steady_clock::time_point start_;
};

struct Layout {
  std::vector<Plan> plans;
  std::vector<std::pair<KernelModel, std::size_t>> models;  // (model, n)
};

Layout plan_suite(const SuiteRequest& req) {
  if (req.trials == 0) throw Error(ErrorCode::ParamOutOfRange, "trials must be >= 1");
  if (!(req.tolerance >= 0.0)) throw Error(ErrorCode::ParamOutOfRange, "tolerance must be >= 0");
  Layout layout;
  const std::vector<std::string> ids = req.ids.empty() ? catalog_ids() : req.ids;
  for (const std::string& id : ids) {
    const CatalogEntry& entry = find_entry(id);
    Plan plan{&entry, req.sweep.points_for(entry), kind_for(entry, req)};
    if (plan.points.empty()) {
      throw Error(ErrorCode::ParamOutOfRange, id + ": no valid parameter values in the sweep");
    }
    layout.plans.push_back(std::move(plan));
  }
  if (!req.operands.empty()) {
    const std::size_t n = req.operands.begin()->second.rows();
    layout.models.emplace_back(req.model.value_or(KernelModel::finite(n)), n);
  } else if (req.model) {
    layout.models.emplace_back(*req.model, req.model->dimension());
  } else {
    if (req.dims.empty()) throw Error(ErrorCode::ParamOutOfRange, "no dimensions requested");
    for (std::size_t n : req.dims) {
      if (n == 0) throw Error(ErrorCode::ParamOutOfRange, "dimension must be >= 1");
      layout.models.emplace_back(KernelModel::finite(n), n);
    }
  }
  for (Plan& plan : layout.plans) {
    plan.model_count = plan.entry->operand_class == OperandClass::Scalars ? 1 : layout.models.size();
  }
  return layout;
}

// Trials per parallel block; bounds the buffered rows.
constexpr std::size_t kBlockTasks = 512;

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "general";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::BadInput, "unknown generator kind '" + std::string(name) + "'");
}

ComplexMatrix gen_matrix(const GeneratorSpec& spec) {
  require_dimension(spec);
  const std::size_t n = spec.n;
  switch (spec.kind) {
    case GeneratorKind::General:
      return gaussian(n, spec.scale, spec.seed);
    case GeneratorKind::Hermitian:
      return hermitian_part(gaussian(n, spec.scale, spec.seed));
    case GeneratorKind::Positive:
      return positive_sample(n, spec.scale, spec.seed);
    case GeneratorKind::Unitary:
      return orthonormalize_columns(gaussian(n, 1.0, spec.seed));
    case GeneratorKind::CommutingPositivePair:
      return gen_commuting_pair(spec).first;
    case GeneratorKind::RankDeficient: {
      const HermitianEigenSystem es = herm_eig(positive_sample(n, spec.scale, spec.seed));
      std::vector<double> d = es.eigenvalues;
      for (std::size_t i = 0; i < (n + 1) / 2; ++i) d[i] = 0.0;
      for (double& v : d) v = std::max(v, 0.0);
      return conjugate_diagonal(es.eigenvectors, d);
    }
  }
  return gaussian(n, spec.scale, spec.seed);
}

std::pair<ComplexMatrix, ComplexMatrix> gen_commuting_pair(const GeneratorSpec& spec) {
  require_dimension(spec);
  const std::size_t n = spec.n;
  const ComplexMatrix u = orthonormalize_columns(gaussian(n, 1.0, spec.seed));
  CounterRng rng(mix64(spec.seed ^ 0xC0FFEEULL));
  std::vector<double> p(n), q(n);
  for (double& v : p) v = spec.scale * std::norm(rng.complex_normal());
  for (double& v : q) v = spec.scale * std::norm(rng.complex_normal());
  return {conjugate_diagonal(u, p), conjugate_diagonal(u, q)};
}

CVector gen_vector(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  CVector v(n);
  for (cplx& z : v) z = rng.complex_normal();
  return v;
}

CVector gen_unit_vector(std::size_t n, std::uint64_t seed) {
  CVector v = gen_vector(n, seed);
  const double norm = vector_norm(v);
  for (cplx& z : v) z /= norm;
  return v;
}

std::vector<Params> ParameterSweep::points_for(const CatalogEntry& entry) const {
  std::vector<double> alpha_values{kUnusedParam};
  if (entry.alpha == AlphaUse::Closed) {
    alpha_values.clear();
    for (double a : alphas) {
      if (a >= 0.0 && a <= 1.0) alpha_values.push_back(a);
    }
  } else if (entry.alpha == AlphaUse::Interior) {
    alpha_values.clear();
    for (double a : alphas) {
      if (a > 0.0 && a < 1.0) alpha_values.push_back(a);
    }
  }

  const bool scalars = entry.operand_class == OperandClass::Scalars;
  std::vector<double> r_values{kUnusedParam}, s_values{kUnusedParam};
  if (scalars) {
    r_values = rs;
    if (std::find(r_values.begin(), r_values.end(), 0.0) == r_values.end()) {
      r_values.insert(r_values.begin(), 0.0);
    }
    s_values = ss;
  } else {
    if (entry.uses_r) {
      r_values.clear();
      for (double r : rs) {
        if (r >= 1.0 && std::isfinite(r)) r_values.push_back(r);
      }
    }
    if (entry.uses_s) {
      s_values.clear();
      for (double s : ss) {
        if (s >= 1.0 && std::isfinite(s)) s_values.push_back(s);
      }
    }
  }

  std::vector<Params> points;
  for (double a : alpha_values) {
    for (double r : r_values) {
      for (double s : s_values) {
        if (scalars && !(std::isfinite(r) && std::isfinite(s) && r <= s)) continue;
        points.push_back({a, r, s});
      }
    }
  }
  return points;
}

namespace {
int g_threads = 0;
}

void set_worker_threads(int threads) { g_threads = std::max(0, threads); }

int worker_threads() {
  if (g_threads > 0) return g_threads;
  if (const char* env = std::getenv("BEREZIN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return omp_get_max_threads();
}

TrialReport run_suite(const SuiteRequest& req, const RowSink& sink) {
  const Layout layout = plan_suite(req);
  ReportBuilder builder(req, sink);
  const int threads = worker_threads();
  const std::size_t per_model = req.trials;

  for (const Plan& plan : layout.plans) {
    const std::size_t tasks = plan.model_count * per_model;
    for (std::size_t first = 0; first < tasks; first += kBlockTasks) {
      const std::size_t count = std::min(kBlockTasks, tasks - first);
      std::vector<std::vector<InequalityResult>> results(count);
      std::vector<std::exception_ptr> errors(count);
      std::atomic<std::size_t> retries{0};

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t task = first + i;
        const auto& [model, n] = layout.models[task / per_model];
        const std::size_t trial = task % per_model;
        try {
          std::size_t local = 0;
          results[i] = evaluate_trial(plan, build_case(plan, req, model, n, trial), local);
          retries += local;
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }

      for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t task = first + i;
        const std::size_t n = layout.models[task / per_model].second;
        for (const InequalityResult& r : results[i]) builder.add(r, task % per_model, n);
      }
      builder.add_trials(count);
      builder.add_retries(retries.load());
    }
  }
  return builder.finish();
}

namespace reference {

TrialReport run_suite(const SuiteRequest& req, const RowSink& sink) {
  const Layout layout = plan_suite(req);
  ReportBuilder builder(req, sink);
  for (const Plan& plan : layout.plans) {
    for (std::size_t m = 0; m < plan.model_count; ++m) {
      const auto& [model, n] = layout.models[m];
      for (std::size_t trial = 0; trial < req.trials; ++trial) {
        std::size_t retries = 0;
        for (const InequalityResult& r :
             evaluate_trial(plan, build_case(plan, req, model, n, trial), retries)) {
          builder.add(r, trial, n);
        }
        builder.add_trials(1);
        builder.add_retries(retries);
      }
    }
  }
  return builder.finish();
}

}  // namespace reference

CounterexampleReport counterexample_check(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::ParamOutOfRange, "counterexample size must be >= 1");
  const std::size_t dim = 2 * n;
  const ComplexMatrix a = ComplexMatrix::antidiagonal(dim);
  const KernelModel model = KernelModel::finite(dim);
  CounterexampleReport rep;
  rep.dimension = dim;
  rep.ber = berezin_number(model, a).value;
  rep.berezin_norm = berezin_norm(model, a).value;
  rep.numerical_radius = numerical_radius(a);
  rep.operator_norm = operator_norm(a);
  rep.hermitian = a == adjoint(a);
  rep.reproduced = rep.ber == 0.0 && rep.berezin_norm == 1.0 && rep.hermitian &&
                   std::abs(rep.numerical_radius - 1.0) <= 1e-9 &&
                   std::abs(rep.operator_norm - 1.0) <= 1e-9;
  return rep;
}

}  // namespace berezin
