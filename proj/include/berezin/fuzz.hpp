#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "berezin/inequalities.hpp"
#include "berezin/matrix.hpp"
#include "berezin/result.hpp"
#include "berezin/rkhs.hpp"

namespace berezin {

enum class GeneratorKind { General, Hermitian, Positive, Unitary, CommutingPositivePair, RankDeficient };

std::string_view to_string(GeneratorKind kind);
/// Accepts the names printed by to_string ("general", "commuting-positive-pair", ...).
GeneratorKind parse_generator_kind(std::string_view name);  // throws BadInput

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::General;
  std::size_t n = 2;
  double scale = 1.0;
  std::uint64_t seed = 0;
};

/// Deterministic sample. For the commuting kind this is the first of the pair.
ComplexMatrix gen_matrix(const GeneratorSpec& spec);
/// Two positive matrices sharing a random eigenbasis.
std::pair<ComplexMatrix, ComplexMatrix> gen_commuting_pair(const GeneratorSpec& spec);
CVector gen_vector(std::size_t n, std::uint64_t seed);
CVector gen_unit_vector(std::size_t n, std::uint64_t seed);

struct ParameterSweep {
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> rs{1.0, 1.5, 2.0, 3.0};
  std::vector<double> ss{1.0, 1.5, 2.0, 3.0};

  /// Sweep points valid for the entry, alpha-major then r then s. Unused
  /// parameters are NaN. lem3 also sweeps r = 0 and keeps only r <= s.
  std::vector<Params> points_for(const CatalogEntry& entry) const;
};

struct SuiteRequest {
  std::string suite_id = "custom";
  std::vector<std::string> ids;  // empty: the whole catalog
  /// Unset: FiniteDiagonal(n) for each n in dims. Set: that model, at its own
  /// dimension.
  std::optional<KernelModel> model;
  std::vector<std::size_t> dims{2, 3, 4, 6};
  /// kind is used for entries it satisfies; seed is the master seed.
  GeneratorSpec gen;
  bool gen_explicit = false;
  std::size_t trials = 1000;
  ParameterSweep sweep;
  double tolerance = kDefaultIneqTolerance;
  int grid_level = 0;
  bool identity_override = false;
  std::optional<double> a;  // lem3 scalars; random when unset
  std::optional<double> b;
  /// Fixed operands (by name); when non-empty every trial uses them.
  std::map<std::string, ComplexMatrix> operands;
};

struct SuiteRow {
  const InequalityResult& result;
  std::size_t trial;
  std::size_t n;
};

/// Rows arrive in (entry, n, trial, sweep point, part) order regardless of
/// the number of worker threads.
using RowSink = std::function<void(const SuiteRow&)>;

struct GapStats {
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct Violation {
  InequalityResult result;
  std::size_t trial = 0;
  std::size_t n = 0;
};

struct TrialReport {
  std::string suite_id;
  std::string model;  // describe() of the model, or "finite:n"
  std::size_t total_trials = 0;
  std::size_t evaluations = 0;
  std::vector<Violation> violations;
  std::map<std::string, GapStats> gap_stats;  // keyed by result label, relative gaps
  double runtime_seconds = 0.0;
  /// False on continuous models, where suprema are grid estimates.
  bool certified = true;
  std::size_t marginal_retries = 0;

  bool clean() const { return violations.empty(); }
};

/// Worker threads for run_suite: the value passed to set_worker_threads if
/// positive, else BEREZIN_THREADS if set, else the OpenMP default.
void set_worker_threads(int threads);
int worker_threads();

/// Trial t uses seed (master ^ t); operand k of "ABCDXY" uses
/// mix64(trial_seed + k + 1). Trials run in parallel.
TrialReport run_suite(const SuiteRequest& request, const RowSink& sink = {});

namespace reference {
/// Serial version of run_suite; produces identical rows and report.
TrialReport run_suite(const SuiteRequest& request, const RowSink& sink = {});
}  // namespace reference

struct CounterexampleReport {
  std::size_t dimension = 0;
  double ber = 0.0;
  double berezin_norm = 0.0;
  double numerical_radius = 0.0;
  double operator_norm = 0.0;
  bool hermitian = false;
  bool reproduced = false;
};

/// The 2n x 2n antidiagonal matrix on FiniteDiagonal(2n): ber = 0 while
/// ||A||_ber = w(A) = ||A|| = 1.
CounterexampleReport counterexample_check(std::size_t n);

}  // namespace berezin
