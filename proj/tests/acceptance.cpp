// Acceptance run: one PASS/FAIL line per criterion; exit 0 iff all pass.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <streambuf>
#include <string>
#include <vector>

#include <json.hpp>

#include "berezin/berezin.hpp"
#include "berezin/cli.hpp"
#include "berezin/fuzz.hpp"
#include "berezin/inequalities.hpp"
#include "berezin/io.hpp"
#include "berezin/linalg.hpp"
#include "berezin/rng.hpp"

using namespace berezin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// Streams bytes into a 64-bit FNV-1a hash without storing them.
class HashBuf : public std::streambuf {
 public:
  std::uint64_t hash() const { return hash_; }
  std::uint64_t bytes() const { return bytes_; }

 protected:
  int_type overflow(int_type ch) override {
    if (ch != traits_type::eof()) add(static_cast<unsigned char>(ch));
    return ch;
  }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    for (std::streamsize i = 0; i < n; ++i) add(static_cast<unsigned char>(s[i]));
    return n;
  }

 private:
  void add(unsigned char c) {
    hash_ = (hash_ ^ c) * 0x100000001B3ULL;
    ++bytes_;
  }
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
  std::uint64_t bytes_ = 0;
};

std::vector<cplx> unit_vector(CounterRng& rng, std::size_t n) {
  std::vector<cplx> x(n);
  double norm = 0.0;
  for (cplx& v : x) {
    v = rng.complex_normal();
    norm += std::norm(v);
  }
  norm = std::sqrt(norm);
  for (cplx& v : x) v /= norm;
  return x;
}

Outcome counterexample() {
  Outcome o;
  const auto t0 = Clock::now();
  for (std::size_t n : {1, 2, 3, 5}) {
    const KernelModel m = KernelModel::finite(2 * n);
    const ComplexMatrix a = ComplexMatrix::antidiagonal(2 * n);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    o.require(berezin_number(m, a).value == 0.0, tag + "ber != 0");
    o.require(std::abs(berezin_norm(m, a).value - 1.0) <= 1e-12, tag + "berezin norm != 1");
    o.require(std::abs(numerical_radius(a) - 1.0) <= 1e-9, tag + "w != 1");
    o.require(std::abs(operator_norm(a) - 1.0) <= 1e-9, tag + "operator norm != 1");
    o.require(counterexample_check(n).reproduced, tag + "counterexample_check not reproduced");
  }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + std::to_string(t) + " s");
  if (o.pass) o.detail = std::to_string(t) + " s";
  return o;
}

Outcome positive_equality() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t n : {2, 4, 6, 8}) {
    const KernelModel m = KernelModel::finite(n);
    for (std::uint64_t t = 0; t < 1000; ++t) {
      const ComplexMatrix a = gen_matrix({GeneratorKind::Positive, n, 1.0, mix64(n * 1000003 + t)});
      const double ber = berezin_number(m, a).value;
      const double diff = std::abs(berezin_norm(m, a).value - ber) / std::max(1.0, ber);
      worst = std::max(worst, diff);
      o.require(diff <= 1e-9, "n=" + std::to_string(n) + " trial " + std::to_string(t));
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 30.0, "runtime " + std::to_string(t) + " s");
  if (o.pass) o.detail = "max relative diff " + format_double(worst) + ", " + std::to_string(t) + " s";
  return o;
}

struct SuiteRun {
  int code = -1;
  std::uint64_t hash = 0;
  std::uint64_t bytes = 0;
  double seconds = 0.0;
  nlohmann::json summary;
};

SuiteRun default_suite(const std::string& threads) {
  const std::string summary =
      (std::filesystem::temp_directory_path() / ("berezin_acceptance_" + std::to_string(::getpid()) + ".json"))
          .string();
  ::setenv("BEREZIN_THREADS", threads.c_str(), 1);
  set_worker_threads(0);
  const std::vector<std::string> args{"berezin_cli", "fuzz", "--suite", "all", "--trials", "1000",
                                      "--seed", "0", "--tol", "1e-9", "--summary", summary};
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  HashBuf buf;
  std::ostream out(&buf);
  std::ostringstream err;
  SuiteRun run;
  const auto t0 = Clock::now();
  run.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  run.seconds = seconds_since(t0);
  run.hash = buf.hash();
  run.bytes = buf.bytes();
  std::ifstream in(summary);
  if (in) run.summary = nlohmann::json::parse(in, nullptr, false);
  std::filesystem::remove(summary);
  ::unsetenv("BEREZIN_THREADS");
  if (run.code != 0) std::cerr << err.str();
  return run;
}

Outcome certification(const SuiteRun& run) {
  Outcome o;
  o.require(run.code == 0, "exit code " + std::to_string(run.code));
  o.require(run.summary.is_object(), "summary not written");
  if (!o.pass) return o;
  const auto violations = run.summary["violation_count"].get<std::size_t>();
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(run.summary["certified"] == true, "suite not certified");
  o.require(run.seconds < 600.0, "runtime " + std::to_string(run.seconds) + " s");
  if (o.pass) {
    o.detail = std::to_string(run.summary["evaluations"].get<std::size_t>()) + " evaluations, " +
               std::to_string(run.summary["marginal_retries"].get<std::size_t>()) + " marginal retries, " +
               std::to_string(run.seconds) + " s";
  }
  return o;
}

Outcome sharpness() {
  Outcome o;
  const std::vector<double> alphas{0.25, 0.5, 0.75};
  const std::vector<double> rs{1.0, 1.5, 2.0, 3.0};
  std::size_t strict = 0;
  const std::size_t trials = 1000;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + t % 5;
    InequalityCase c;
    c.ineq_id = "eqn2cmp";
    c.model = KernelModel::finite(n);
    c.operands = {{"A", gen_matrix({GeneratorKind::General, n, 1.0, mix64(2 * t + 1)})},
                  {"B", gen_matrix({GeneratorKind::General, n, 1.0, mix64(2 * t + 2)})}};
    c.params = {alphas[t % 3], rs[(t / 3) % 4], kUnusedParam};
    const InequalityResult r = check_sharpness_eqn1_vs_eqn2(c).front();
    o.require(r.lhs <= r.rhs + 1e-10 * std::max(1.0, r.rhs), "trial " + std::to_string(t));
    if (r.lhs < r.rhs) ++strict;
  }
  const double share = static_cast<double>(strict) / static_cast<double>(trials);
  o.require(share >= 0.99, "strict in only " + std::to_string(share * 100.0) + "%");
  if (o.pass) o.detail = "strict in " + std::to_string(strict) + "/" + std::to_string(trials);
  return o;
}

Outcome lemmas() {
  Outcome o;
  const std::size_t trials = 10000;
  CounterRng rng(0x1E33A5);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + t % 6;
    const ComplexMatrix p = gen_matrix({GeneratorKind::Positive, n, 1.0 + rng.uniform(), mix64(3 * t)});
    const auto x = unit_vector(rng, n);
    const double r = 1.0 + 3.0 * rng.uniform();
    o.require(check_lemma1(p, x, r), "lemma 1 trial " + std::to_string(t));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + t % 6;
    const ComplexMatrix a = gen_matrix({GeneratorKind::General, n, 1.0, mix64(3 * t + 1)});
    const auto x = unit_vector(rng, n);
    const auto y = unit_vector(rng, n);
    const double alpha = t % 10 == 0 ? static_cast<double>(t % 20 == 0) : rng.uniform();
    o.require(check_lemma2(a, x, y, alpha), "lemma 2 trial " + std::to_string(t));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const double a = t % 17 == 0 ? 0.0 : 4.0 * rng.uniform();
    const double b = t % 19 == 0 ? 0.0 : 4.0 * rng.uniform();
    const double alpha = 0.01 + 0.98 * rng.uniform();
    double r = 4.0 * rng.uniform(), s = 4.0 * rng.uniform();
    if (r > s) std::swap(r, s);
    if (t % 7 == 0) r = 0.0;
    o.require(check_lemma3(a, b, alpha, r, s), "lemma 3 trial " + std::to_string(t));
  }
  // Dense (r, s) grid with r <= s, r = 0 included.
  std::size_t grid = 0;
  const std::vector<double> scalars{0.0, 0.1, 0.5, 1.0, 2.0, 3.7};
  for (int i = 0; i <= 40; ++i) {
    for (int j = i; j <= 40; ++j) {
      const double r = 0.1 * i, s = 0.1 * j;
      for (double alpha : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        for (double a : scalars) {
          for (double b : scalars) {
            o.require(check_lemma3(a, b, alpha, r, s), "lemma 3 grid r=" + std::to_string(r) + " s=" + std::to_string(s));
            ++grid;
          }
        }
      }
    }
  }
  if (o.pass) o.detail = "3 x " + std::to_string(trials) + " random trials, " + std::to_string(grid) + " grid points";
  return o;
}

Outcome radius() {
  Outcome o;
  for (std::uint64_t t = 0; t < 500; ++t) {
    const std::size_t n = 1 + t % 8;
    const ComplexMatrix u = gen_matrix({GeneratorKind::Unitary, n, 1.0, mix64(5 * t)});
    CounterRng rng(mix64(5 * t + 1));
    std::vector<cplx> d(n);
    double rho = 0.0;
    for (cplx& z : d) {
      z = rng.complex_normal();
      rho = std::max(rho, std::abs(z));
    }
    const ComplexMatrix a = u * ComplexMatrix::diagonal(d) * adjoint(u);
    o.require(std::abs(numerical_radius(a) - rho) <= 1e-8, "normal trial " + std::to_string(t));
  }
  for (std::uint64_t t = 0; t < 500; ++t) {
    const std::size_t n = 1 + t % 8;
    const ComplexMatrix a = gen_matrix({GeneratorKind::General, n, 1.0, mix64(5 * t + 2)});
    const double w = numerical_radius(a), op = operator_norm(a);
    o.require(0.5 * op - 1e-8 <= w && w <= op + 1e-8, "general trial " + std::to_string(t));
  }
  const double w = numerical_radius(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}));
  o.require(std::abs(w - 0.5) <= 1e-10, "nilpotent w = " + std::to_string(w));
  return o;
}

Outcome grid_monotone() {
  Outcome o;
  const KernelModel h = KernelModel::hardy(15, 0.95);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const ComplexMatrix a = gen_matrix({GeneratorKind::General, h.dimension(), 1.0, mix64(7 * t)});
    const double op = operator_norm(a);
    double prev = 0.0;
    for (int level = 0; level <= 2; ++level) {
      const double ber = berezin_number(h, a, level).value;
      const std::string tag = "operator " + std::to_string(t) + " level " + std::to_string(level);
      o.require(ber >= prev, tag + " decreased");
      o.require(ber <= op + 1e-9, tag + " exceeds the operator norm");
      prev = ber;
    }
  }
  return o;
}

Outcome determinism(const SuiteRun& a, const SuiteRun& b) {
  Outcome o;
  o.require(a.code == 0 && b.code == 0, "a run failed");
  o.require(a.bytes == b.bytes, "sizes differ");
  o.require(a.hash == b.hash, "hashes differ");
  if (o.pass) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(a.hash));
    o.detail = std::to_string(a.bytes) + " bytes, fnv1a " + hex + " at 1 and 2 threads";
  }
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << ")";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
  };

  report(1, "counterexample", counterexample);
  report(2, "positive equality", positive_equality);
  SuiteRun first, second;
  report(3, "full catalog", [&] {
    first = default_suite("1");
    return certification(first);
  });
  report(4, "sharpness", sharpness);
  report(5, "lemmas", lemmas);
  report(6, "numerical radius", radius);
  report(7, "grid monotonicity", grid_monotone);
  report(8, "determinism", [&] {
    second = default_suite("2");
    return determinism(first, second);
  });
  return all ? 0 : 1;
}
