#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "blochdf/dfcore.hpp"
#include "blochdf/errors.hpp"
#include "blochdf/rng.hpp"

using namespace blochdf;

namespace {

CMatrix random_orbitals(Index rows, Index cols, std::uint64_t seed) {
  CounterRng rng(seed, RngStream::eigen_init);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return m;
}

}  // namespace

TEST_CASE("single orbital sketch is its squared modulus", "[sketch]") {
  const CMatrix u = random_orbitals(1, 16, 1);
  FittingConfig cfg;
  const SketchMatrix s = random_fourier_compress(u, 1, cfg);
  REQUIRE(s.r == 1);
  REQUIRE(s.M.rows() == 1);
  CHECK(std::abs(std::abs(s.eta(0)) - 1.0) < 1e-15);
  CHECK((s.M.row(0).transpose() - u.row(0).cwiseAbs2().transpose().cast<Complex>())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("diagonal sketch rows are real and nonnegative", "[sketch][property]") {
  const CMatrix u = random_orbitals(24, 20, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FittingConfig cfg;
    cfg.seed = seed;
    const SketchMatrix s = random_fourier_compress(u, 4, cfg);
    for (Index i = 0; i < s.r; ++i) {
      const auto row = s.M.row(i * s.r + i);
      CHECK(row.imag().cwiseAbs().maxCoeff() == 0.0);
      CHECK(row.real().minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("sketch rows are bilinear combinations of pair densities", "[sketch]") {
  const Index nk = 6, ng = 16;
  const CMatrix u = random_orbitals(nk, ng, 3);
  FittingConfig cfg;
  cfg.seed = 5;
  cfg.rows = 4;
  const SketchMatrix s = random_fourier_compress(u, 3, cfg);
  REQUIRE(s.r == 4);
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index i = 0; i < s.r; ++i)
    for (Index j = 0; j < s.r; ++j) {
      const double xi_i = static_cast<double>(s.xi[static_cast<std::size_t>(i)]);
      const double xi_j = static_cast<double>(s.xi[static_cast<std::size_t>(j)]);
      CVector want = CVector::Zero(ng);
      for (Index a = 0; a < nk; ++a)
        for (Index b = 0; b < nk; ++b) {
          const Complex w = std::polar(1.0, two_pi * (a * xi_i - b * xi_j) / nk) *
                            std::conj(s.eta(a)) * s.eta(b);
          want += w * (u.row(a).conjugate().array() * u.row(b).array()).matrix().transpose();
        }
      CHECK((s.M.row(i * s.r + j).transpose() - want).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("sampled rows are distinct and the draw is deterministic", "[sketch]") {
  const CMatrix u = random_orbitals(40, 12, 4);
  FittingConfig cfg;
  cfg.seed = 77;
  const SketchMatrix a = random_fourier_compress(u, 10, cfg);
  const SketchMatrix b = random_fourier_compress(u, 10, cfg);
  CHECK(a.r == 19);  // round(6 sqrt(10))
  CHECK(a.M.rows() == a.r * a.r);
  const std::set<Index> distinct(a.xi.begin(), a.xi.end());
  CHECK(static_cast<Index>(distinct.size()) == a.r);
  for (Index x : a.xi) CHECK((x >= 0 && x < 40));
  CHECK(a.xi == b.xi);
  CHECK(a.eta == b.eta);
  CHECK(a.M == b.M);
  cfg.seed = 78;
  CHECK(random_fourier_compress(u, 10, cfg).xi != a.xi);
}

TEST_CASE("sketch size grows linearly in N", "[sketch][property]") {
  FittingConfig cfg;
  for (int n : {1, 4, 9, 16, 25}) {
    const Index r = sketch_rows(10000, n, cfg);
    CHECK(r == 6 * static_cast<Index>(std::lround(std::sqrt(n))));
    CHECK(r * r == 36 * n);
  }
}

TEST_CASE("sketch row count rules", "[sketch]") {
  FittingConfig cfg;
  CHECK(sketch_rows(4, 4, cfg) == 4);  // 12 clamped to N K
  cfg.rows = 5;
  CHECK_THROWS_AS(sketch_rows(4, 4, cfg), ConfigError);
  cfg.rows = 3;
  CHECK(sketch_rows(4, 4, cfg) == 3);
  FittingConfig bad;
  bad.c_oversample = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = FittingConfig{};
  bad.tol = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
