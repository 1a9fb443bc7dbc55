#include <doctest.h>

#include <cmath>
#include <random>

#include "padicharm/fx_calculus.hpp"

using namespace padicharm;

namespace {
FxFunction random_fx(std::mt19937_64& rng, int p, int level, TailKind kind, int n, double shift) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int k_min = static_cast<int>(rng() % 4) - 2;
  int k_tail = kind == TailKind::Compact ? k_min + 3 : k_min + 2;
  FxFunction f = FxFunction::with_tail(p, level, kind, n, shift, k_min, k_tail);
  for (auto& row : f.window)
    for (auto& v : row) v = cplx(u(rng), u(rng));
  if (kind != TailKind::Compact) {
    auto terms = f.tail_terms();
    for (size_t t = 0; t < terms.size(); ++t)
      for (auto& v : f.tail_table(t)) v = cplx(u(rng), u(rng));
  }
  return f;
}

MellinData level1(int p, const RationalFunctionZ& trivial, const RationalFunctionZ& quad) {
  MellinData Z;
  Z.p = p;
  Z.level = 1;
  Z.comp.assign(static_cast<size_t>(p - 1), RationalFunctionZ());
  Z.comp[0] = trivial;
  Z.comp[static_cast<size_t>((p - 1) / 2)] = quad;
  return Z;
}

// pointwise |f - g| / max(1, |f|); tails with negative shift grow geometrically
double rel_difference(const FxFunction& f, const FxFunction& g, int k_lo, int k_hi) {
  double m = 0.0;
  for (int k = k_lo; k <= k_hi; ++k)
    for (size_t i = 0; i < f.cosets(); ++i)
      m = std::max(m, std::abs(f.value_at(k, i) - g.value_at(k, i)) / std::max(1.0, std::abs(f.value_at(k, i))));
  return m;
}

RationalFunctionZ geo(cplx a) { return RationalFunctionZ({1.0}, {1.0, -a}); }
}  // namespace

TEST_SUITE("fx_calculus") {
  TEST_CASE("Mellin transform examples") {
    auto M = mellin_transform(FxFunction::indicator_units(3));
    CHECK(approx_equal(M.at(UnitCharacter::trivial(3)), RationalFunctionZ::constant(1.0)));
    CHECK(M.at(UnitCharacter::quadratic(3)).is_zero());

    const int n = 1;
    const double c = (2.0 * n + 1.0) / 2.0;
    for (int k : {1, 2}) {
      auto f = FxFunction::normalized_unit_indicator(3, k);
      auto Mk = mellin_transform(f.times_abs_power(c));
      for (auto& chi : all_characters(3, 3)) {
        auto v = Mk.at(chi.inverse()).invert_arg();
        if (chi.conductor() <= k)
          CHECK(approx_equal(v, RationalFunctionZ::constant(1.0)));
        else
          CHECK(v.is_zero());
      }
    }

    auto g = FxFunction::with_tail(3, 1, TailKind::Plus, 1, 0.0, 2, 2);
    for (auto& v : g.a0) v = 1.0;
    auto Mg = mellin_transform(g);
    CHECK(approx_equal(Mg.at(UnitCharacter::trivial(3)), RationalFunctionZ::geometric(1.0, 1.0, 2)));
    CHECK(approx_equal(Mg.at(UnitCharacter::trivial(3)), geo(1.0) * RationalFunctionZ::monomial(1.0, 2)));
  }

  TEST_CASE("Mellin inverse examples") {
    auto Z = level1(3, geo(1.0), RationalFunctionZ());
    CHECK(std::abs(mellin_inverse(Z, 3, 1) - 1.0) < 1e-12);
    CHECK(std::abs(mellin_inverse(Z, 3, 2) - 1.0) < 1e-12);
    CHECK(std::abs(mellin_inverse(Z, -1, 1)) < 1e-12);
    auto W = level1(3, RationalFunctionZ::monomial(1.0, 2), RationalFunctionZ());
    CHECK(std::abs(mellin_inverse(W, 2, 1) - 1.0) < 1e-12);
    CHECK(std::abs(mellin_inverse(W, 1, 1)) < 1e-12);
    CHECK(std::abs(mellin_inverse(W, 3, 2)) < 1e-12);
  }

  TEST_CASE("Mellin roundtrip, 50 random functions per tail class") {
    std::mt19937_64 rng(2024);
    struct Cls {
      TailKind kind;
      int n;
      double shift;
    };
    for (Cls cls : {Cls{TailKind::Compact, 0, 0.0}, Cls{TailKind::Plus, 1, 0.0}, Cls{TailKind::Minus, 1, 0.0},
                    Cls{TailKind::Plus, 1, -2.0}}) {
      for (int it = 0; it < 50; ++it) {
        auto f = random_fx(rng, 3, 2, cls.kind, cls.n, cls.shift);
        auto back = fx_from_mellin(mellin_transform(f), cls.kind, cls.n, cls.shift);
        CHECK(rel_difference(f, back, f.k_min - 3, f.k_tail + 8) < 1e-10);
      }
    }
  }

  TEST_CASE("Mellin injectivity on the minus class") {
    auto z = FxFunction::with_tail(3, 2, TailKind::Minus, 1, 0.0, 0, 1);
    auto Mz = mellin_transform(z);
    for (auto& r : Mz.comp) CHECK(r.is_zero());
    std::mt19937_64 rng(9);
    for (int it = 0; it < 10; ++it) {
      auto f = random_fx(rng, 3, 2, TailKind::Minus, 1, 0.0);
      auto Mf = mellin_transform(f);
      bool any = false;
      for (auto& r : Mf.comp) any = any || !r.reduced().is_zero();
      CHECK(any);
    }
  }

  TEST_CASE("tail fitting") {
    std::mt19937_64 rng(3);
    auto f = random_fx(rng, 3, 1, TailKind::Plus, 1, -2.0);
    std::vector<std::vector<cplx>> shells;
    int lo = f.k_min;
    for (int k = lo; k < f.k_tail + 3; ++k) {
      std::vector<cplx> row;
      for (size_t c = 0; c < f.cosets(); ++c) row.push_back(f.value_at(k, c));
      shells.push_back(row);
    }
    auto g = fit_fx_function(3, 1, TailKind::Plus, 1, -2.0, lo, shells);
    CHECK(g.k_tail == f.k_tail);
    CHECK(rel_difference(f, g, lo - 2, f.k_tail + 10) < 1e-9);
    // one redundant shell: consistent data fits, a perturbed shell is rejected
    std::vector<cplx> extra;
    for (size_t c = 0; c < f.cosets(); ++c) extra.push_back(f.value_at(f.k_tail + 3, c));
    shells.push_back(extra);
    auto h = fit_fx_function(3, 1, TailKind::Plus, 1, -2.0, lo, shells, 1e-8, f.k_tail);
    CHECK(rel_difference(f, h, lo - 2, f.k_tail + 10) < 1e-9);
    shells.back()[0] += 0.5;
    CHECK_THROWS_AS(fit_fx_function(3, 1, TailKind::Plus, 1, -2.0, lo, shells, 1e-8, f.k_tail), InsufficientTail);
    shells.resize(4);
    CHECK_THROWS_AS(fit_fx_function(3, 1, TailKind::Plus, 1, -2.0, lo, shells, 1e-8, f.k_tail), InsufficientTail);
  }

  TEST_CASE("eta kernel, n = 0 closed form") {
    CHECK(std::abs(eta_kernel(3, 0, 1, 0, 1, 1) - 2.0 / 3.0) < 1e-12);
    cplx want = std::polar(1.0, kTwoPi / 3) * std::sqrt(3.0) * (2.0 / 3.0);
    CHECK(std::abs(eta_kernel(3, 0, 1, -1, 1, 1) - want) < 1e-12);
    CHECK_THROWS(eta_kernel(3, 1, 1, -9, 1, 1));
  }

  TEST_CASE("eta kernel, n = 1, as the limit of L(1_k)") {
    const int p = 3, n = 1;
    const double c = 1.5;
    auto Lk = fourier_L(FxFunction::normalized_unit_indicator(p, 4), n);
    auto G = unit_group(p, 4);
    for (int j = -3; j <= 3; ++j)
      for (long long u : G->elements) {
        int L = std::max(4, eta_required_level(n, j));
        cplx eta = eta_kernel(p, n, 1, j, u, L);
        CHECK(std::abs(Lk.value(j, u) - eta * std::pow(p, -j * c)) < 1e-9 * std::max(1.0, std::abs(eta)));
      }
  }

  TEST_CASE("L on 1_1 at n = 1 has Mellin data beta") {
    const int n = 1;
    auto Lf = fourier_L(FxFunction::normalized_unit_indicator(3, 1), n);
    auto M = mellin_transform(Lf.times_abs_power(-1.5));
    for (auto& chi : all_characters(3, 2)) {
      auto got = M.at(chi);
      if (chi.conductor() <= 1)
        CHECK(deviation(got, beta_factor(n, chi.inverse()).invert_arg()) < 1e-9);
      else
        CHECK(got.reduced().is_zero());
    }
  }

  TEST_CASE("L at n = 0 is the classical transform") {
    auto one_O = FxFunction::with_tail(3, 1, TailKind::Plus, 0, 0.0, 0, 0);
    for (auto& v : one_O.a0) v = 1.0;
    auto L = fourier_L(one_O, 0);
    for (int k = -3; k <= 6; ++k)
      for (long long u : {1LL, 2LL}) CHECK(std::abs(L.value(k, u) - (k >= 0 ? std::pow(3.0, -k) : 0.0)) < 1e-10);

    // 1_{1+3O}^(t) = psi(t) / 3 on 3^{-1} O, so L(f)(t) = |t| psi(t) / 3 there
    auto f = FxFunction::normalized_unit_indicator(3, 1).scaled(0.5);
    auto K = L_shell_kernel(3, 0, 1);
    for (int k = -3; k <= 3; ++k)
      for (long long u : {1LL, 2LL, 4LL, 5LL, 7LL, 8LL}) {
        PadicElement t(3, k, u, 2);
        cplx want = k >= -1 ? t.abs() * psi_eval(t) / 3.0 : cplx(0.0);
        CHECK(std::abs(pv_convolve(K, f, k, u).value - want) < 1e-8);
      }
  }

  TEST_CASE("L is linear") {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 5; ++it) {
      auto f = random_fx(rng, 3, 1, TailKind::Compact, 0, 0.0);
      auto g = random_fx(rng, 3, 1, TailKind::Compact, 0, 0.0);
      int lo = std::min(f.k_min, g.k_min), hi = std::max(f.k_tail, g.k_tail);
      f = f.with_window(lo, hi);
      g = g.with_window(lo, hi);
      cplx a(0.3, -1.2), b(2.0, 0.5);
      auto lhs = fourier_L(combine(a, f, b, g), 1);
      auto rhs = combine(a, fourier_L(f, 1), b, fourier_L(g, 1));
      CHECK(max_difference(lhs, rhs, -6, 8) < 1e-9);
    }
  }

  TEST_CASE("principal-value convolution") {
    const int n = 1;
    auto f = FxFunction::normalized_unit_indicator(3, 2);
    auto L = fourier_L(f, n);
    auto r = pv_convolve(L_shell_kernel(3, n, 1), f, 0, 1);
    CHECK(std::abs(r.value - L.value(0, 1)) < 1e-8);
    CHECK(r.stable_k >= 0);

    ShellKernel unit_shell;
    unit_shell.eval = [](int k, long long, int) { return k == 0 ? cplx(1.0) : cplx(0.0); };
    unit_shell.level = [](int) { return 1; };
    std::mt19937_64 rng(4);
    auto g = random_fx(rng, 3, 1, TailKind::Compact, 0, 0.0);
    for (int tk = g.k_min - 1; tk <= g.k_tail; ++tk) {
      // f(x / t) over x in O^x averages g over the shell -tk
      cplx avg = 0.5 * (g.value(-tk, 1) + g.value(-tk, 2));
      CHECK(std::abs(pv_convolve(unit_shell, g, tk, 1).value - avg) < 1e-12);
    }

    ShellKernel grow;
    grow.eval = [](int k, long long, int) { return cplx(std::pow(3.0, std::abs(k))); };
    grow.level = [](int) { return 1; };
    auto h = FxFunction::with_tail(3, 1, TailKind::Plus, 0, 0.0, 0, 0);
    for (auto& v : h.a0) v = 1.0;
    CHECK_THROWS_AS(pv_convolve(grow, h, 0, 1, 20), PVNotStable);
  }

  TEST_CASE("GL1 functional equation") {
    std::mt19937_64 rng(12);
    auto triv = std::vector<UnitCharacter>{UnitCharacter::trivial(3)};
    for (int it = 0; it < 3; ++it) {
      auto f = random_fx(rng, 3, 1, TailKind::Compact, 0, 0.0);
      CHECK(check_fe_gl1(f, 1, triv).max_deviation < 1e-8);
    }
    auto one_O = FxFunction::with_tail(3, 1, TailKind::Plus, 0, 0.0, 0, 0);
    for (auto& v : one_O.a0) v = 1.0;
    CHECK(check_fe_gl1(one_O, 0, triv).max_deviation < 1e-8);
    auto quad = std::vector<UnitCharacter>{UnitCharacter::quadratic(3)};
    CHECK(check_fe_gl1(FxFunction::normalized_unit_indicator(3, 2), 1, quad).max_deviation < 1e-8);
  }

  TEST_CASE("Paley-Wiener membership") {
    const double q = 3.0;
    auto sph = level1(3, geo(1.0) * geo(1.0 / q).square_arg(), RationalFunctionZ());
    CHECK(check_paley_wiener(sph, PoleClass::Plus, 1).ok);

    auto bad = level1(3, geo(q * q), RationalFunctionZ());
    auto r = check_paley_wiener(bad, PoleClass::Plus, 1);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("pole") != std::string::npos);

    auto b0 = level1(3, RationalFunctionZ(), geo(1.0));
    auto r0 = check_paley_wiener(b0, PoleClass::Plus, 1, true);
    CHECK_FALSE(r0.ok);
    CHECK(check_paley_wiener(b0, PoleClass::Plus, 1, false).ok);

    // L preserves the restricted classes
    std::mt19937_64 rng(21);
    for (int it = 0; it < 5; ++it) {
      auto f = random_fx(rng, 3, 2, TailKind::Compact, 0, 0.0);
      CHECK(check_paley_wiener(mellin_transform(f).shifted(2.0), PoleClass::Plus, 1).ok);
      auto Lf = fourier_L(f, 1);
      CHECK(check_paley_wiener(mellin_transform(Lf).shifted(-2.0), PoleClass::Minus, 1).ok);
    }
  }

  TEST_CASE("FxFunction json roundtrip") {
    std::mt19937_64 rng(1);
    auto f = random_fx(rng, 3, 2, TailKind::Plus, 1, -2.0);
    auto g = FxFunction::from_json(f.to_json());
    CHECK(max_difference(f, g, f.k_min - 1, f.k_tail + 4) == 0.0);
  }
}
