#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "entvar/sft.hpp"

using namespace entvar;

namespace {

TransitionMatrix full_shift(int n) {
  TransitionMatrix A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.set(i, j, 1);
  return A;
}

TransitionMatrix random_matrix(std::mt19937_64& rng, int order, double density) {
  std::bernoulli_distribution bit(density);
  TransitionMatrix A(order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) A.set(i, j, bit(rng) ? 1 : 0);
  return A;
}

TransitionMatrix random_irreducible(std::mt19937_64& rng, int order) {
  for (;;) {
    TransitionMatrix A = random_matrix(rng, order, 0.45);
    if (is_irreducible(A)) return A;
  }
}

// Reachability closure, an independent route to irreducibility.
bool reachable_everywhere(const TransitionMatrix& A) {
  const int n = A.order();
  std::vector<std::vector<bool>> R(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R[i][j] = A.at(i, j) != 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (R[i][k] && R[k][j]) R[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!R[i][j]) return false;
  return true;
}

}  // namespace

TEST_CASE("full shifts have entropy log N, both routes agreeing") {
  for (int n = 1; n <= 6; ++n) {
    const TransitionMatrix A = full_shift(n);
    const SpectralResult r = spectral_radius(A);
    CHECK(r.radius == doctest::Approx(n).epsilon(1e-12));
    CHECK(r.entropy == doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
    CHECK(oracle::perron_root(A) == doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("golden mean shift radius is the golden ratio") {
  const TransitionMatrix A{{1, 1}, {1, 0}};
  CHECK(spectral_radius(A).radius == doctest::Approx(1.6180339887498949).epsilon(1e-12));
  CHECK(oracle::perron_root(A) == doctest::Approx(1.6180339887498949).epsilon(1e-12));
}

TEST_CASE("exact characteristic polynomials match frozen expansions") {
  // 2-shift: x^2 - 2x
  CHECK(oracle::char_poly(full_shift(2)) == std::vector<std::int64_t>{0, -2, 1});
  // extension of the 2-shift with three strips: x^5 - 2x^4 - 1
  const TransitionMatrix A5{{1, 1, 1, 0, 0},
                            {1, 1, 0, 0, 0},
                            {0, 0, 0, 1, 0},
                            {0, 0, 0, 0, 1},
                            {0, 1, 0, 0, 0}};
  CHECK(oracle::char_poly(A5) == std::vector<std::int64_t>{-1, 0, 0, 0, -2, 1});
  // one-strip extension: x^3 - 2x^2 - 1
  const TransitionMatrix A3{{1, 1, 1}, {1, 1, 0}, {0, 1, 0}};
  CHECK(oracle::char_poly(A3) == std::vector<std::int64_t>{-1, 0, -2, 1});
}

TEST_CASE("oracle perron roots match frozen high-precision values") {
  const TransitionMatrix A5{{1, 1, 1, 0, 0},
                            {1, 1, 0, 0, 0},
                            {0, 0, 0, 1, 0},
                            {0, 0, 0, 0, 1},
                            {0, 1, 0, 0, 0}};
  CHECK(oracle::perron_root(A5) == doctest::Approx(2.055967396712819).epsilon(1e-12));
  const TransitionMatrix A3{{1, 1, 1}, {1, 1, 0}, {0, 1, 0}};
  CHECK(oracle::perron_root(A3) == doctest::Approx(2.2055694304005904).epsilon(1e-12));
}

TEST_CASE("irreducibility agrees with the reachability closure") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int order = 2 + static_cast<int>(rng() % 6);
    const TransitionMatrix A = random_matrix(rng, order, 0.3);
    CHECK(is_irreducible(A) == reachable_everywhere(A));
  }
}

TEST_CASE("power iteration agrees with the polynomial oracle on random matrices") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int order = 2 + static_cast<int>(rng() % 7);
    const TransitionMatrix A = random_matrix(rng, order, 0.4);
    const double viaPower = spectral_radius(A).radius;
    const double viaPoly = oracle::perron_root(A);
    CHECK(viaPower == doctest::Approx(viaPoly).epsilon(1e-9));
  }
}

TEST_CASE("principal minors of irreducible matrices lose spectral radius") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const int order = 2 + static_cast<int>(rng() % 7);
    const TransitionMatrix A = random_irreducible(rng, order);
    const double radius = spectral_radius(A).radius;
    for (int drop = 1; drop <= order; ++drop) {
      const TransitionMatrix M = principal_minor(A, drop);
      CHECK(spectral_radius(M).radius < radius - 1e-9);
    }
  }
}

TEST_CASE("decompose: the responsible component carries the entropy") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    const int order = 2 + static_cast<int>(rng() % 7);
    const TransitionMatrix A = random_matrix(rng, order, 0.3);
    const SpectralResult r = spectral_radius(A);
    const ComponentDecomposition dec = decompose(A);
    CHECK(dec.maxEntropy == doctest::Approx(r.entropy).epsilon(1e-9));
    if (dec.responsibleIndex >= 0) {
      CHECK(dec.responsibleIndex < static_cast<int>(dec.components.size()));
      CHECK(dec.componentEntropies[dec.responsibleIndex] == doctest::Approx(dec.maxEntropy));
    }
    for (const Component& c : dec.components) {
      CHECK(!c.symbols.empty());
      CHECK(c.induced.order() == static_cast<int>(c.symbols.size()));
    }
  }
}

TEST_CASE("block diagonal repeated spectra are handled") {
  // two disjoint 2-shifts: the Perron root 2 is a double eigenvalue
  TransitionMatrix A(4);
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A.set(2 * b + i, 2 * b + j, 1);
  CHECK(spectral_radius(A).radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oracle::perron_root(A) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(decompose(A).components.size() == 2);
}

TEST_CASE("nilpotent transition graphs are degenerate with entropy zero") {
  const TransitionMatrix A{{0, 1}, {0, 0}};
  const SpectralResult r = spectral_radius(A);
  CHECK(r.degenerate);
  CHECK(r.radius == 0.0);
  CHECK(r.entropy == 0.0);
}

TEST_CASE("single rectangle with a loop has entropy zero") {
  const TransitionMatrix A{{1}};
  CHECK(spectral_radius(A).entropy == 0.0);
  CHECK_FALSE(spectral_radius(A).degenerate);
}

TEST_CASE("matrix text format round-trips bit-exactly") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 20; ++trial) {
    const TransitionMatrix A = random_matrix(rng, 1 + static_cast<int>(rng() % 9), 0.5);
    CHECK(TransitionMatrix::from_text(A.to_text()) == A);
  }
  const TransitionMatrix A = random_matrix(rng, 5, 0.5);
  const std::string path = "roundtrip.mat";
  A.save(path);
  CHECK(TransitionMatrix::load(path) == A);
  std::remove(path.c_str());
}

TEST_CASE("malformed matrix text is rejected") {
  CHECK_THROWS_AS(TransitionMatrix::from_text("2\n1 0\n"), error);
  CHECK_THROWS_AS(TransitionMatrix::from_text("2\n1 0\n1 2\n"), error);
  CHECK_THROWS_AS(TransitionMatrix::from_text("junk\n"), error);
}

TEST_CASE("oracle refuses orders past its exactness cap") {
  TransitionMatrix A(9);
  for (int i = 0; i < 9; ++i) A.set(i, i, 1);
  CHECK_THROWS_AS(oracle::perron_root(A), error);
  try {
    oracle::perron_root(A);
  } catch (const error& e) {
    CHECK(e.code() == errc::config);
  }
}
