#include <doctest.h>

#include <random>

#include "padicharm/padic_core.hpp"
#include "padicharm/quad_forms.hpp"

using namespace padicharm;

namespace {
bool is_rational_square(mpq_class a) {
  if (a <= 0) return false;
  a.canonicalize();
  return mpz_perfect_square_p(a.get_num().get_mpz_t()) && mpz_perfect_square_p(a.get_den().get_mpz_t());
}

mpq_class random_rational(std::mt19937_64& rng) {
  static const int primes[] = {2, 3, 5, 7};
  mpq_class x(static_cast<long>(rng() % 7) + 1);
  if (rng() % 2) x = -x;
  for (int pr : primes) {
    int e = static_cast<int>(rng() % 4) - 1;
    for (int i = 0; i < e; ++i) x *= pr;
    for (int i = 0; i > e; --i) x /= pr;
  }
  x.canonicalize();
  return x;
}

RationalMatrix random_invertible(std::mt19937_64& rng, size_t n) {
  for (;;) {
    RationalMatrix g(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) g(i, j) = static_cast<long>(rng() % 7) - 3;
    if (g.det() != 0) return g;
  }
}

RationalMatrix random_nonsingular_symmetric(std::mt19937_64& rng, size_t n) {
  for (;;) {
    auto X = random_symmetric(n, -6, 6, rng);
    if (X.det() != 0) return X;
  }
}
}  // namespace

TEST_SUITE("quad_forms") {
  TEST_CASE("diagonalization") {
    auto d = diagonalize(RationalMatrix::identity(3));
    CHECK(d.d == std::vector<mpq_class>{1, 1, 1});

    RationalMatrix A{{2, 0}, {0, 1}};
    auto da = diagonalize(A);
    CHECK(is_rational_square(da.d[0] * da.d[1] / 2));

    RationalMatrix H{{0, 1}, {1, 0}};
    auto dh = diagonalize(H);
    CHECK(dh.P * H * dh.P.transpose() == RationalMatrix::diagonal(dh.d));
    CHECK(is_rational_square(-dh.d[0] * dh.d[1]));

    std::mt19937_64 rng(6);
    for (int it = 0; it < 30; ++it) {
      auto X = random_nonsingular_symmetric(rng, 4);
      for (auto order : {PivotOrder::Natural, PivotOrder::Reversed}) {
        auto D = diagonalize(X, order);
        CHECK(D.P * X * D.P.transpose() == RationalMatrix::diagonal(D.d));
      }
    }
    CHECK_THROWS(diagonalize(RationalMatrix{{1, 1}, {1, 1}}));
  }

  TEST_CASE("Hilbert symbol examples") {
    for (int p : {3, 5, 7})
      for (int b : {-6, -1, 2, 3, 5, 7, 10}) CHECK(hilbert_symbol(1, b, p) == 1);
    CHECK(hilbert_symbol_oracle(3, 3, 3) == -1);
    CHECK(hilbert_symbol(3, 3, 3) == -1);
    for (int p : {3, 5, 7})
      for (int u = 1; u < p; ++u)
        for (int v = 1; v < p; ++v) {
          CHECK(hilbert_symbol_oracle(u, v, p) == 1);
          CHECK(hilbert_symbol(u, v, p) == 1);
        }
    CHECK_THROWS(hilbert_symbol(3, 5, 2));
  }

  TEST_CASE("Hilbert symbol properties on 100 random pairs") {
    std::mt19937_64 rng(77);
    for (int p : {3, 5})
      for (int it = 0; it < 100; ++it) {
        mpq_class a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
        int ab = hilbert_symbol(a, b, p);
        CHECK(ab == hilbert_symbol_oracle(a, b, p));
        CHECK(ab == hilbert_symbol(b, a, p));
        CHECK(hilbert_symbol(a, b * c, p) == ab * hilbert_symbol(a, c, p));
        CHECK(hilbert_symbol(a, -a, p) == 1);
        CHECK(hilbert_symbol_oracle(a, -a, p) == 1);
      }
  }

  TEST_CASE("Hasse invariant") {
    CHECK(hasse_invariant(RationalMatrix::identity(3), 3) == 1);
    CHECK(hasse_invariant(RationalMatrix::diagonal({3, 3}), 3) == -1);
    std::mt19937_64 rng(50);
    for (int it = 0; it < 50; ++it) {
      auto X = random_nonsingular_symmetric(rng, 3);
      for (int p : {3, 5})
        CHECK(hasse_invariant(X, p, PivotOrder::Natural) == hasse_invariant(X, p, PivotOrder::Reversed));
    }
  }

  TEST_CASE("Clifford invariant") {
    CHECK(hilbert_symbol_oracle(-1, -1, 3) == 1);
    CHECK(clifford_rho(RationalMatrix::identity(3), 3) == 1);
    CHECK_THROWS(clifford_rho(RationalMatrix::identity(2), 3));
    CHECK_THROWS(clifford_rho(RationalMatrix::zero(3, 3), 3));
    std::mt19937_64 rng(31);
    for (int it = 0; it < 20; ++it) {
      auto X = random_nonsingular_symmetric(rng, 3);
      for (int p : {3, 5}) {
        int r = clifford_rho(X, p);
        mpq_class c = random_rational(rng);
        CHECK(clifford_rho(X * mpq_class(c * c), p) == r);
        auto g = random_invertible(rng, 3);
        CHECK(clifford_rho(g * X * g.transpose(), p) == r);
      }
    }
  }

  TEST_CASE("Clifford invariant is locally constant at depth p^3") {
    std::mt19937_64 rng(32);
    int done = 0;
    while (done < 40) {
      auto X = random_symmetric(3, -10, 10, rng);
      mpq_class d = X.det();
      if (d == 0 || q_valuation(d, 3) != 0) continue;
      auto Y = random_symmetric(3, -10, 10, rng);
      auto Z = X + Y * mpq_class(27);
      CHECK(clifford_rho(Z, 3) == clifford_rho(X, 3));
      ++done;
    }
  }

  TEST_CASE("Jordan-data route agrees with the rational route") {
    std::mt19937_64 rng(33);
    for (int p : {3, 5})
      for (int it = 0; it < 200; ++it) {
        auto X = random_symmetric(3, -20, 20, rng);
        mpq_class d = X.det();
        if (d == 0) continue;
        int K = 2 * q_valuation(d, p) + 3;
        long long M = ipow(p, K);
        long long e[9];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            e[i * 3 + j] = mod_pos(X(static_cast<size_t>(i), static_cast<size_t>(j)).get_num().get_si(), M);
        auto J = jordan_mod(e, 3, p, K);
        REQUIRE(J.ok);
        CHECK(clifford_rho_jordan(J, p) == clifford_rho(X, p));
      }
  }

  TEST_CASE("table-driven Clifford kernel matches the reference") {
    std::mt19937_64 rng(1);
    for (int p : {3, 5, 7})
      for (int K : {2, 3, 4}) {
        long long M = ipow(p, K);
        CliffordTables T(p, K);
        for (int it = 0; it < 5000; ++it) {
          long long z[6];
          for (auto& x : z) x = static_cast<long long>(rng() % static_cast<unsigned long long>(M));
          if (it % 3 == 0) {
            z[0] = z[0] / p * p;
            z[3] = z[3] / p * p;
          }
          long long f[9] = {z[0], z[1], z[2], z[1], z[3], z[4], z[2], z[4], z[5]};
          auto J = jordan_mod(f, 3, p, K);
          int want = J.ok ? clifford_rho_jordan(J, p, 1) : 0;
          CHECK(clifford_rho_sym_fast(z, 3, 1, T) == want);
        }
      }
  }
}
