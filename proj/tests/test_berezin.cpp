#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numbers>

#include "berezin/berezin.hpp"
#include "berezin/error.hpp"
#include "berezin/fuzz.hpp"
#include "berezin/linalg.hpp"
#include "oracles.hpp"

using namespace berezin;

namespace {

const cplx I1{0.0, 1.0};

ComplexMatrix sample(GeneratorKind kind, std::size_t n, std::uint64_t seed) {
  return gen_matrix({kind, n, 1.0, seed});
}

// The forward shift on span{1, z, ..., z^N}.
ComplexMatrix shift(std::size_t dim) {
  ComplexMatrix s(dim, dim);
  for (std::size_t i = 0; i + 1 < dim; ++i) s(i + 1, i) = 1.0;
  return s;
}

// |<A k_l, k_l>| at a point, computed from the kernel formula directly.
double hardy_symbol_modulus(const ComplexMatrix& a, cplx lambda) {
  const std::size_t dim = a.rows();
  CVector k(dim);
  double norm2 = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    k[j] = std::pow(std::conj(lambda), static_cast<int>(j));
    norm2 += std::norm(k[j]);
  }
  cplx v{};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) v += a(i, j) * k[j] * std::conj(k[i]);
  return std::abs(v) / norm2;
}

}  // namespace

TEST_CASE("symbol on the finite model is the diagonal") {
  const KernelModel m = KernelModel::finite(2);
  const ComplexMatrix a = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(berezin_symbol(m, a, KernelPoint::at_index(1)).value == cplx(1.0, 0.0));

  const std::vector<cplx> d{1.0, I1};
  const auto samples = berezin_set_sample(m, ComplexMatrix::diagonal(d), default_grid(m, 0));
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].value == cplx(1.0, 0.0));
  CHECK(samples[1].value == I1);
  for (const auto& s : berezin_set_sample(m, ComplexMatrix::zero(2), default_grid(m, 0))) {
    CHECK(s.value == cplx(0.0, 0.0));
  }
}

TEST_CASE("identity has symbol 1 on every model") {
  for (const KernelModel& m : {KernelModel::finite(3), KernelModel::hardy(), KernelModel::bergman(),
                               KernelModel::fock()}) {
    const ComplexMatrix id = ComplexMatrix::identity(m.dimension());
    for (const auto& s : berezin_set_sample(m, id, default_grid(m, 0))) {
      CHECK(std::abs(s.value - 1.0) < 1e-14);
    }
    CHECK(berezin_number(m, id).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(berezin_norm(m, id).value == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("finite model quantities match entry oracles") {
  const KernelModel m = KernelModel::finite(2);
  const ComplexMatrix a = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const SupEstimate ber = berezin_number(m, a);
  CHECK(ber.value == 4.0);
  CHECK(ber.exact);
  CHECK(ber.point.index == 2);
  const SupEstimate norm = berezin_norm(m, a);
  CHECK(norm.value == 4.0);
  REQUIRE(norm.second.has_value());
  CHECK(norm.point.index == 2);
  CHECK(norm.second->index == 2);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const ComplexMatrix g = sample(GeneratorKind::General, n, seed);
    const KernelModel fm = KernelModel::finite(n);
    CHECK(berezin_number(fm, g).value == oracle::finite_ber(g));
    CHECK(berezin_norm(fm, g).value == oracle::finite_bnorm(g));
  }
}

TEST_CASE("antidiagonal example") {
  for (std::size_t n : {1, 2, 3, 5}) {
    const KernelModel m = KernelModel::finite(2 * n);
    const ComplexMatrix a = ComplexMatrix::antidiagonal(2 * n);
    for (std::size_t i = 1; i <= 2 * n; ++i) {
      CHECK(berezin_symbol(m, a, KernelPoint::at_index(i)).value == cplx(0.0, 0.0));
    }
    CHECK(berezin_number(m, a).value == 0.0);
    CHECK(berezin_norm(m, a).value == 1.0);
  }
}

TEST_CASE("operator must match the model") {
  try {
    (void)berezin_number(KernelModel::finite(3), ComplexMatrix::identity(2));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(berezin_norm(KernelModel::hardy(), ComplexMatrix::identity(4)), Error);
}

TEST_CASE("numerical radius") {
  CHECK(numerical_radius(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})) ==
        doctest::Approx(0.5).epsilon(1e-12));
  const std::vector<cplx> d{1.0, I1};
  CHECK(numerical_radius(ComplexMatrix::diagonal(d)) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix h = sample(GeneratorKind::Hermitian, 4, seed);
    const auto ev = herm_eigenvalues(h);
    const double rho = std::max(std::abs(ev.front()), std::abs(ev.back()));
    CHECK(numerical_radius(h) == doctest::Approx(rho).epsilon(1e-10));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix g = sample(GeneratorKind::General, 3, seed);
    CHECK(numerical_radius(g) == doctest::Approx(oracle::numerical_radius(g)).epsilon(1e-7));
  }
}

TEST_CASE("berezin quantities are dominated by w and the operator norm") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix g = sample(GeneratorKind::General, 16, seed);
    const KernelModel h = KernelModel::hardy();
    const double ber = berezin_number(h, g).value;
    const double norm = berezin_norm(h, g).value;
    const double w = numerical_radius(g);
    const double op = operator_norm(g);
    CHECK(ber <= w + 1e-9);
    CHECK(ber <= norm + 1e-9);
    CHECK(norm <= op + 1e-9);
  }
}

TEST_CASE("hardy symbol samples are bounded by the operator norm") {
  const KernelModel h = KernelModel::hardy();
  const ComplexMatrix s = shift(16);
  const auto samples = berezin_set_sample(h, s, default_grid(h, 0));
  CHECK(samples.size() == 129);
  const double op = operator_norm(s);
  for (const auto& e : samples) {
    CHECK(std::abs(e.value) <= op + 1e-12);
    CHECK(std::abs(e.value) == doctest::Approx(hardy_symbol_modulus(s, e.point.z)).epsilon(1e-12));
  }
}

TEST_CASE("continuous estimates approach a brute-force supremum") {
  const KernelModel h = KernelModel::hardy(15, 0.95);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const ComplexMatrix g = sample(GeneratorKind::General, 16, 100 + seed);
    double brute = 0.0;
    for (int i = 0; i <= 400; ++i) {
      for (int j = 0; j < 800; ++j) {
        const cplx z = std::polar(0.95 * i / 400.0, 2.0 * std::numbers::pi * j / 800.0);
        brute = std::max(brute, hardy_symbol_modulus(g, z));
      }
    }
    const SupEstimate est = berezin_number(h, g, 1);
    CHECK_FALSE(est.exact);
    CHECK(est.level == 1);
    CHECK(est.value >= brute - 1e-3 * brute);
    CHECK(est.value <= operator_norm(g) + 1e-9);
    CHECK(hardy_symbol_modulus(g, est.point.z) == doctest::Approx(est.value).epsilon(1e-12));
  }
}

TEST_CASE("estimates are monotone in the grid level") {
  const KernelModel b = KernelModel::bergman(8, 0.9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexMatrix g = sample(GeneratorKind::General, 9, seed);
    double prev_ber = 0.0, prev_norm = 0.0;
    for (int level = 0; level <= 2; ++level) {
      const double ber = berezin_number(b, g, level).value;
      const double norm = berezin_norm(b, g, level).value;
      CHECK(ber >= prev_ber);
      CHECK(norm >= prev_norm);
      prev_ber = ber;
      prev_norm = norm;
    }
  }
}

TEST_CASE("parallel grid kernels agree with the serial reference") {
  const KernelModel f = KernelModel::fock(12, 3.0);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const ComplexMatrix g = sample(GeneratorKind::General, 13, seed);
      const OmegaGrid grid = default_grid(f, 2);
      const auto par = berezin_set_sample(f, g, grid);
      const auto ser = reference::berezin_set_sample(f, g, grid);
      REQUIRE(par.size() == ser.size());
      bool same = true;
      for (std::size_t i = 0; i < par.size(); ++i) same = same && par[i].value == ser[i].value;
      CHECK(same);
      const SupEstimate pn = grid_berezin_number(f, g, grid);
      const SupEstimate sn = reference::grid_berezin_number(f, g, grid);
      CHECK(pn.value == sn.value);
      CHECK(pn.point == sn.point);
      const OmegaGrid small = default_grid(f, 0);
      const SupEstimate pm = grid_berezin_norm(f, g, small);
      const SupEstimate sm = reference::grid_berezin_norm(f, g, small);
      CHECK(pm.value == sm.value);
      CHECK(pm.point == sm.point);
      CHECK(*pm.second == *sm.second);
    }
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("positive operators have equal berezin number and norm") {
  const KernelModel m = KernelModel::finite(2);
  const InequalityResult r = verify_positive_equality(m, ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}}));
  CHECK(r.lhs == 2.0);
  CHECK(r.rhs == 2.0);
  CHECK(r.satisfied);
  CHECK(verify_positive_equality(m, ComplexMatrix::identity(2)).satisfied);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix y = sample(GeneratorKind::General, 6, seed);
    const ComplexMatrix p = hermitian_part(adjoint(y) * y);
    CHECK(verify_positive_equality(KernelModel::finite(6), p, 1e-8).satisfied);
  }
  try {
    (void)verify_positive_equality(m, ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    FAIL("expected NotPositive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositive);
  }
}
