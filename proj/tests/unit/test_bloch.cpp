#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "blochdf/bloch.hpp"
#include "blochdf/errors.hpp"
#include "blochdf/lobpcg.hpp"
#include "blochdf/rng.hpp"

using namespace blochdf;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

KPoint kp(double a, double b) {
  KPoint k;
  k.coords.resize(2);
  k.coords << a, b;
  return k;
}

SampledPotential zero_potential(const RealGrid& g) { return {g.dim(), RVector::Zero(g.size())}; }

// Lowest n values of 1/2 |2 pi m + k|^2 over the grid's frequency set.
RVector free_bands(const RealGrid& g, const KPoint& k, int n) {
  std::vector<double> all;
  for (Index j = 0; j < g.size(); ++j) {
    double s = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
      const double q = 2 * pi * g.freq()(j, d) + k.coords(d);
      s += q * q;
    }
    all.push_back(0.5 * s);
  }
  std::sort(all.begin(), all.end());
  return Eigen::Map<RVector>(all.data(), n);
}

// Plane-wave Hamiltonian assembled by direct sums over the grid.
RVector dense_oracle(const RealGrid& g, const SampledPotential& v, const KPoint& k, int n) {
  const Index ng = g.size();
  CMatrix h = CMatrix::Zero(ng, ng);
  for (Index a = 0; a < ng; ++a)
    for (Index b = 0; b < ng; ++b) {
      Complex s = 0.0;
      for (Index x = 0; x < ng; ++x) {
        double phase = 0.0;
        for (int d = 0; d < g.dim(); ++d)
          phase -= 2 * pi * (g.freq()(a, d) - g.freq()(b, d)) * g.points()(x, d);
        s += v.values(x) * std::polar(1.0, phase);
      }
      h(a, b) = s / static_cast<double>(ng);
    }
  for (Index a = 0; a < ng; ++a) {
    double s = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
      const double q = 2 * pi * g.freq()(a, d) + k.coords(d);
      s += q * q;
    }
    h(a, a) += 0.5 * s;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().head(n);
}

CVector random_vector(Index n, std::uint64_t seed) {
  CounterRng rng(seed, RngStream::eigen_init);
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return v;
}

Complex inner(const CVector& a, const CVector& b) {
  return a.dot(b) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("free-particle action", "[bloch]") {
  const RealGrid g(2, 8);
  const SampledPotential v = zero_potential(g);
  const CVector one = CVector::Ones(g.size());
  CHECK(apply_hamiltonian(g, kp(0, 0), one, v).cwiseAbs().maxCoeff() < 1e-12);

  CVector wave(g.size());
  for (Index j = 0; j < g.size(); ++j) wave(j) = std::polar(1.0, 2 * pi * g.points()(j, 0));
  const CVector hw = apply_hamiltonian(g, kp(0, 0), wave, v);
  CHECK((hw - 2 * pi * pi * wave).cwiseAbs().maxCoeff() < 1e-10);

  const CVector hk = apply_hamiltonian(g, kp(pi, 0), one, v);
  CHECK((hk - 0.5 * pi * pi * one).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(apply_hamiltonian(g, kp(0, 0), CVector::Ones(5), v), IndexError);
}

TEST_CASE("potential enters pointwise", "[bloch]") {
  const RealGrid g(2, 8);
  SampledPotential v = zero_potential(g);
  v.values = RVector::LinSpaced(g.size(), -3, 2);
  const CVector one = CVector::Ones(g.size());
  const CVector h = apply_hamiltonian(g, kp(0, 0), one, v);
  CHECK((h - v.values.cast<Complex>()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Hamiltonian is linear and Hermitian", "[bloch][property]") {
  const RealGrid g(2, 10);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), g);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const KPoint k = kp(-pi + 0.7 * s, 0.3 * s - 1.0);
    const BlochHamiltonian h(g, v, k);
    const CVector a = random_vector(g.size(), 2 * s);
    const CVector b = random_vector(g.size(), 2 * s + 1);
    const Complex lhs = inner(b, h.apply(a));
    const Complex rhs = std::conj(inner(a, h.apply(b)));
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    const Complex c(0.3, -1.7);
    const CVector lin = h.apply(a + c * b) - h.apply(a) - c * h.apply(b);
    CHECK(lin.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("free particle at Gamma", "[bloch]") {
  const RealGrid g(2, 12);
  const SampledPotential v = zero_potential(g);
  SolverOptions opts;
  const BandSolution one = solve_bands(g, kp(0, 0), 1, v, opts);
  CHECK(std::abs(one.energies(0)) < 1e-9);
  const Complex c = one.orbitals(0, 0);
  CHECK_THAT(std::abs(c), WithinAbs(1.0, 1e-9));
  CHECK((one.orbitals.row(0).array() - c).abs().maxCoeff() < 1e-8);

  const BandSolution five = solve_bands(g, kp(0, 0), 5, v, opts);
  RVector want(5);
  want << 0, 2 * pi * pi, 2 * pi * pi, 2 * pi * pi, 2 * pi * pi;
  CHECK((five.energies - want).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("free bands at random k-points match the analytic values", "[bloch]") {
  const RealGrid g(2, 16);
  const SampledPotential v = zero_potential(g);
  CounterRng rng(3, RngStream::eigen_init);
  for (int i = 0; i < 5; ++i) {
    const KPoint k = kp(-pi + 2 * pi * rng.uniform(), -pi + 2 * pi * rng.uniform());
    SolverOptions opts;
    opts.seed = static_cast<std::uint64_t>(i);
    const BandSolution s = solve_bands(g, k, 6, v, opts);
    CHECK((s.energies - free_bands(g, k, 6)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("LOBPCG and dense agree with an independent plane-wave oracle", "[bloch]") {
  const RealGrid g(2, 8);
  for (auto id : {ExampleId::gauss_2d, ExampleId::flattop_2d}) {
    const SampledPotential v = sample_potential(paper_potential(id), g);
    for (const KPoint& k : {kp(0, 0), kp(-pi, 1.1), kp(0.4, -2.5)}) {
      const RVector want = dense_oracle(g, v, k, 6);
      SolverOptions dense;
      dense.method = SolverMethod::dense;
      const BandSolution d = solve_bands(g, k, 6, v, dense);
      const BandSolution l = solve_bands(g, k, 6, v, SolverOptions{});
      CHECK((d.energies - want).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((l.energies - want).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("LOBPCG matches dense on the Gaussian well at n = 48", "[bloch][slow]") {
  const RealGrid g(2, 48);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), g);
  SolverOptions dense;
  dense.method = SolverMethod::dense;
  const BandSolution d = solve_bands(g, kp(0, 0), 5, v, dense);
  const BandSolution l = solve_bands(g, kp(0, 0), 5, v, SolverOptions{});
  CHECK((d.energies - l.energies).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("orbitals are orthonormal with Rayleigh quotients equal to energies",
          "[bloch][property]") {
  const RealGrid g(2, 16);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::flattop_2d), g);
  const KPoint k = kp(0.9, -0.2);
  SolverOptions opts;
  const BandSolution s = solve_bands(g, k, 8, v, opts);
  const double ng = static_cast<double>(g.size());
  const CMatrix gram = s.orbitals.conjugate() * s.orbitals.transpose() / ng;
  CHECK((gram - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
  const BlochHamiltonian h(g, v, k);
  for (int n = 0; n < 8; ++n) {
    const CVector u = s.orbitals.row(n).transpose();
    const double rq = inner(u, h.apply(u)).real() / inner(u, u).real();
    CHECK(std::abs(rq - s.energies(n)) < opts.residual_tol);
    if (n > 0) CHECK(s.energies(n) >= s.energies(n - 1));
  }
}

TEST_CASE("exhausted iterations raise a convergence error", "[bloch]") {
  const RealGrid g(2, 16);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), g);
  SolverOptions opts;
  opts.max_iter = 1;
  try {
    solve_bands(g, kp(0, 0), 4, v, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residuals().size() == 4);
    CHECK(e.k_index() == -1);
  }
  try {
    solve_all({2, 16, 2}, 4, v, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.k_index() == 0);
  }
  CHECK_THROWS_AS(solve_bands(g, kp(0, 0), 0, v, SolverOptions{}), ConfigError);
  CHECK_THROWS_AS(solve_bands(g, kp(0, 0), 256, v, SolverOptions{}), ConfigError);
}

TEST_CASE("solve_all: layout, time reversal, determinism", "[bloch]") {
  const LatticeConfig lat{2, 12, 4};
  const RealGrid g = build_grid(lat);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), g);
  const BlochOrbitalSet a = solve_all(lat, 4, v, SolverOptions{});
  REQUIRE(a.U.rows() == 4 * 16);
  REQUIRE(a.U.cols() == 144);
  REQUIRE(a.energies.rows() == 4);
  REQUIRE(a.energies.cols() == 16);

  const double ng = static_cast<double>(g.size());
  for (int k = 0; k < 16; ++k) {
    const CMatrix blk = a.U.middleRows(a.row(0, k), 4);
    const CMatrix gram = blk.conjugate() * blk.transpose() / ng;
    CHECK((gram - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    for (int n = 1; n < 4; ++n) CHECK(a.energies(n, k) >= a.energies(n - 1, k));
  }

  const BlochOrbitalSet b = solve_all(lat, 4, v, SolverOptions{});
  CHECK(a.U == b.U);
  CHECK(a.energies == b.energies);

  const BlochOrbitalSet one = solve_all({2, 12, 1}, 3, v, SolverOptions{});
  SolverOptions seeded;
  seeded.seed = derive_seed(0, 0);
  const BandSolution direct = solve_bands(g, one.kmesh[0], 3, v, seeded);
  CHECK(one.U == direct.orbitals);
}

TEST_CASE("time reversal on a resolved grid", "[bloch]") {
  // The half-open frequency range is not symmetric, so E(k) = E(-k) holds
  // only up to the weight orbitals carry at the Nyquist frequency. At n = 24
  // the Gaussian well's bound states have none to speak of.
  const LatticeConfig lat{2, 24, 4};
  const SampledPotential v =
      sample_potential(paper_potential(ExampleId::gauss_2d), build_grid(lat));
  const BlochOrbitalSet a = solve_all(lat, 4, v, SolverOptions{});
  // -k folded back into [-pi, pi) is the mesh point with index (4 - j) mod 4.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const int k = i * 4 + j;
      const int mk = ((4 - i) % 4) * 4 + (4 - j) % 4;
      CHECK((a.energies.col(k) - a.energies.col(mk)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("slicing picks sub-mesh points and leading bands", "[bloch]") {
  const LatticeConfig lat{2, 8, 4};
  const RealGrid g = build_grid(lat);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), g);
  SolverOptions dense;
  dense.method = SolverMethod::dense;
  const BlochOrbitalSet fine = solve_all(lat, 5, v, dense);
  const BlochOrbitalSet coarse = solve_all({2, 8, 2}, 3, v, dense);
  const BlochOrbitalSet sliced = slice_orbitals(fine, 3, 2);
  REQUIRE(sliced.n_k() == 4);
  for (Index k = 0; k < 4; ++k)
    CHECK((sliced.kmesh[k].coords - coarse.kmesh[k].coords).norm() < 1e-14);
  CHECK((sliced.energies - coarse.energies).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(slice_orbitals(fine, 6, 2), ConfigError);
  CHECK_THROWS_AS(slice_orbitals(fine, 3, 3), ConfigError);
}

TEST_CASE("free bands along the path", "[bloch]") {
  const RealGrid g(2, 12);
  const BandPath path = band_path(2, 5);
  const BandTable t = bands_along_path(path, g, 4, zero_potential(g), SolverOptions{});
  REQUIRE(t.energies.rows() == static_cast<Index>(path.points.size()));
  CHECK(std::abs(t.energies(0, 0)) < 1e-9);
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const RVector want = free_bands(g, path.points[i].k, 4);
    CHECK((t.energies.row(static_cast<Index>(i)).transpose() - want).cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("Gaussian well band structure has bound bands below zero", "[bloch]") {
  const RealGrid g(2, 24);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), g);
  const BandTable t = bands_along_path(band_path(2, 4), g, 6, v, SolverOptions{});
  CHECK(t.energies.col(0).maxCoeff() < 0.0);
  for (Index i = 0; i < t.energies.rows(); ++i)
    for (Index n = 1; n < t.energies.cols(); ++n) CHECK(t.energies(i, n) >= t.energies(i, n - 1));
}

TEST_CASE("svqb orthonormalizes and drops dependent columns", "[bloch][lobpcg]") {
  CMatrix s(20, 3);
  for (Index i = 0; i < 20; ++i) {
    s(i, 0) = Complex(i, 1);
    s(i, 1) = Complex(1, -i * 0.5);
    s(i, 2) = 2.0 * s(i, 0) - Complex(0, 3) * s(i, 1);
  }
  const CMatrix q = svqb(s);
  CHECK(q.cols() == 2);
  CHECK((q.adjoint() * q - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}
