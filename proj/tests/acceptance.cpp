// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "padicharm/abelian_factors.hpp"
#include "padicharm/fx_calculus.hpp"
#include "padicharm/g_distribution.hpp"
#include "padicharm/pvs_zeta.hpp"
#include "padicharm/symplectic.hpp"

using namespace padicharm;

namespace {

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  double dev = 0.0;
  std::vector<std::string> notes;
  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
  void track(double d) { dev = std::max(dev, d); }
};

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

constexpr int kP = 3;
constexpr int kK = 3;

// lattice functions on S_3(Q_3) used by criteria 4, 5, 7, 11
struct Family {
  std::string name;
  LatticeTestFunction phi;
  bool clifford_ok;  // homothetic lattice
};

std::vector<Family> lattice_family() {
  RationalMatrix D = RationalMatrix::zero(3, 3);
  D(0, 0) = 1;
  return {
      {"unit lattice S_3(O)", LatticeTestFunction::unit_lattice(3, kP), true},
      {"shifted diag(1,0,0) + 3 S_3(O)", LatticeTestFunction::coset(3, kP, D, 1), true},
      {"dilated 3 S_3(O)", LatticeTestFunction::coset(3, kP, RationalMatrix::zero(3, 3), 1), true},
      {"unit lattice under g = diag(1,1,3)", LatticeTestFunction::unit_lattice(3, kP).act_diagonal({1, 1, 3}), false},
  };
}

struct Cache {
  std::map<std::string, FiberFunctionResult> none, cliff;
  double enum_seconds = 0.0;

  const FiberFunctionResult& F(const Family& f) {
    auto it = none.find(f.name);
    if (it != none.end()) return it->second;
    auto t0 = Clock::now();
    auto r = fiber_function(f.phi, FiberWeight::None, kK);
    enum_seconds += since(t0);
    return none.emplace(f.name, std::move(r)).first->second;
  }
  const FiberFunctionResult& G(const Family& f) {
    auto it = cliff.find(f.name);
    if (it != cliff.end()) return it->second;
    auto t0 = Clock::now();
    auto r = fiber_function(lattice_fourier(f.phi, 1), FiberWeight::Clifford, kK);
    enum_seconds += since(t0);
    return cliff.emplace(f.name, std::move(r)).first->second;
  }
  const FiberFunctionResult& F_of(const std::string& key, const LatticeTestFunction& phi) {
    auto it = none.find(key);
    if (it != none.end()) return it->second;
    auto t0 = Clock::now();
    auto r = fiber_function(phi, FiberWeight::None, kK);
    enum_seconds += since(t0);
    return none.emplace(key, std::move(r)).first->second;
  }
};

Cache cache;

std::vector<UnitCharacter> chars_e2(int p) { return characters_up_to_conductor(p, 2); }

std::string chi_name(const UnitCharacter& c) {
  return "p=" + std::to_string(c.p()) + " chi#" + std::to_string(c.index()) + "@" + std::to_string(c.level()) +
         " e=" + std::to_string(c.conductor());
}

// ---- 1
Outcome c1() {
  Outcome o;
  const std::vector<cplx> s_samples{{0.5, 0.0}, {0.3, 0.4}, {0.7, -1.1}, {0.15, 2.0}, {0.85, -0.3}};
  int count = 0;
  for (int p : {3, 5})
    for (auto& chi : chars_e2(p))
      for (cplx s : s_samples) {
        auto orc = tate_gamma_oracle(chi, s);
        cplx g = gamma_factor(chi)(z_of_s(s, p));
        double rel = std::abs(orc.ratio - g) / std::abs(g);
        o.track(std::max(rel, orc.spread));
        o.need(rel < 1e-6 && orc.spread < 1e-6, chi_name(chi));
        ++count;
      }
  o.note(std::to_string(count) + " (character, s) pairs");
  return o;
}

// ---- 2
Outcome c2() {
  Outcome o;
  int count = 0;
  for (int p : {3, 5})
    for (auto& chi : chars_e2(p)) {
      cplx sgn = chi.value(ipow(p, chi.level()) - 1);
      double m = std::abs(std::abs(epsilon_half(chi)) - 1.0);
      o.track(m);
      o.need(m < 1e-9, "|eps(1/2)| = 1 for " + chi_name(chi));
      for (double s : {-1.3, -0.2, 0.25, 0.5, 0.8, 2.1}) {
        cplx z = z_of_s(s, p);
        cplx e = epsilon_factor(chi)(z);
        cplx ei = epsilon_factor(chi.inverse())(z);
        cplx ed = epsilon_factor(chi, -1)(z);
        double d1 = std::abs(std::conj(e) - sgn * ei) / std::max(1.0, std::abs(e));
        double d2 = std::abs(e - sgn * ed) / std::max(1.0, std::abs(e));
        o.track(std::max(d1, d2));
        o.need(d1 < 1e-9, "conjugation for " + chi_name(chi));
        o.need(d2 < 1e-9, "psi inversion for " + chi_name(chi));
        ++count;
      }
    }
  o.note(std::to_string(count) + " (character, s) pairs");
  return o;
}

// ---- 3
Outcome c3() {
  Outcome o;
  // Taylor coefficients of 1/((1 - z)(1 - z^2/3))
  auto taylor = [](int j) {
    mpq_class c = 0, t = 1;
    for (int i = 0; 2 * i <= j; ++i) {
      c += t;
      t /= 3;
    }
    return c;
  };
  for (int k : {2, 3}) {
    auto t0 = Clock::now();
    auto T = det_fiber_counts(3, kP, k);
    double secs = since(t0);
    std::ostringstream line, ratio;
    line << "k=" << k << " (" << fmt(secs) << " s): shell values";
    ratio << "k=" << k << ": shell value / Taylor coefficient";
    bool literal = true;
    for (int j = 0; j <= k - 1; ++j) {
      mpq_class v = T.shell_values[static_cast<size_t>(j)], c = taylor(j);
      mpq_class r = v / c;
      line << " " << v.get_str();
      ratio << " " << r.get_str();
      if (v != c) literal = false;
      o.track(std::abs(mpq_class(v - c).get_d()));
    }
    line << " vs Taylor";
    for (int j = 0; j <= k - 1; ++j) line << " " << taylor(j).get_str();
    o.note(line.str());
    o.note(ratio.str());
    o.need(literal, "exact equality with the Taylor coefficients at k=" + std::to_string(k));
    o.need(k == 2 ? secs < 5.0 : secs < 600.0, "runtime budget at k=" + std::to_string(k));
  }
  return o;
}

// ---- 4
Outcome c4() {
  Outcome o;
  std::vector<UnitCharacter> chis{UnitCharacter::trivial(kP), UnitCharacter::quadratic(kP)};
  auto fam = lattice_family();
  for (size_t i = 0; i < 3; ++i) {
    auto rep = check_fe_pvs(cache.F(fam[i]), cache.G(fam[i]), 3, kP, chis, 1e-6);
    o.track(rep.max_deviation);
    o.note(fam[i].name + ": deviation " + fmt(rep.max_deviation));
    o.need(rep.pass, fam[i].name + " (" + rep.detail + ")");
  }
  return o;
}

std::vector<FxFunction> fiber_family_n1() {
  std::vector<FxFunction> out;
  for (auto& f : lattice_family()) out.push_back(cache.F(f).f.times_abs_power(-2.0));
  return out;
}

std::vector<FxFunction> fiber_family_n0() {
  std::vector<FxFunction> out;
  RationalMatrix one{{1}}, zero{{0}}, two{{2}};
  for (auto& phi : {LatticeTestFunction::unit_lattice(1, kP), LatticeTestFunction::coset(1, kP, one, 1),
                    LatticeTestFunction::coset(1, kP, zero, 1), LatticeTestFunction::coset(1, kP, two, 2)})
    out.push_back(fiber_function(phi, FiberWeight::None, kK).f);
  return out;
}

// ---- 5
Outcome c5() {
  Outcome o;
  auto chars = chars_e2(kP);
  for (int n : {0, 1}) {
    auto fam = n0_test_family(kP);
    auto fib = n == 0 ? fiber_family_n0() : fiber_family_n1();
    fam.insert(fam.end(), fib.begin(), fib.end());
    double worst = 0.0;
    for (size_t i = 0; i < fam.size(); ++i) {
      auto r = check_fe_gl1(fam[i], n, chars);
      worst = std::max(worst, r.max_deviation);
      o.need(r.max_deviation < 1e-8, "n=" + std::to_string(n) + " function " + std::to_string(i));
    }
    o.track(worst);
    o.note("n=" + std::to_string(n) + ": " + std::to_string(fam.size()) + " functions (" +
           std::to_string(fib.size()) + " fiber-generated) x " + std::to_string(chars.size()) +
           " characters, max deviation " + fmt(worst));
  }
  return o;
}

// ---- 6
Outcome c6() {
  Outcome o;
  // (a) pv convolution with eta |x|^{(2n+1)/2} against the Mellin route
  double da = 0.0;
  int pts = 0;
  for (int n : {0, 1}) {
    auto fam = n0_test_family(kP);
    fam.push_back(FxFunction::normalized_unit_indicator(kP, 2));
    auto K = L_shell_kernel(kP, n, 1);
    for (auto& f : fam) {
      auto Lf = fourier_L(f, n);
      auto G = unit_group(kP, Lf.level);
      for (int k = -4; k <= 4; ++k)
        for (size_t c = 0; c < Lf.cosets(); ++c) {
          auto r = pv_convolve(K, f, k, G->elements[c]);
          da = std::max(da, std::abs(r.value - Lf.value_at(k, c)));
          ++pts;
        }
    }
  }
  o.track(da);
  o.need(da < 1e-8, "(a) convolution identity");
  o.note("(a) " + std::to_string(pts) + " points, max |pv - L(f)| " + fmt(da));

  // (b) sum_l z^l avg_u eta(p^l u) chi(u) = beta(chi^{-1})(1/z), i.e. eta(chi_s) = beta(chi_s)
  const std::vector<cplx> zs{{0.2, 0.1}, {-0.15, 0.05}, {0.3, 0.0}, {0.05, -0.25}, {-0.1, -0.2}};
  double db = 0.0;
  for (int n : {0, 1}) {
    EtaEvaluator E(kP, n, 1);
    for (auto& chi : chars_e2(kP)) {
      auto B = beta_factor(n, chi.inverse()).invert_arg();
      const int l_lo = -3 * (2 * n + 1) - 2, l_hi = 90;
      std::vector<cplx> shell;
      for (int l = l_lo; l <= l_hi; ++l) {
        int L = std::max({chi.level(), eta_required_level(n, l), 1});
        auto G = unit_group(kP, L);
        auto c = chi.at_level(L);
        cplx s = 0.0;
        for (long long u : G->elements) s += E.value(l, u, L) * c.value(u);
        shell.push_back(s / static_cast<double>(G->order));
      }
      for (cplx z : zs) {
        cplx acc = 0.0;
        for (int l = l_lo; l <= l_hi; ++l) acc += shell[static_cast<size_t>(l - l_lo)] * std::pow(z, l);
        cplx want = B(z);
        double d = std::abs(acc - want) / std::max(1.0, std::abs(want));
        db = std::max(db, d);
        o.need(d < 1e-8, "(b) n=" + std::to_string(n) + " " + chi_name(chi));
      }
    }
  }
  o.track(db);
  o.note("(b) n in {0,1}, 6 characters, 5 samples: max relative deviation " + fmt(db));

  // (c) n = 0 closed form
  double dc = 0.0;
  int count = 0;
  for (int p : {3, 5})
    for (int k = -3; k <= 1; ++k)
      for (long long u : {1LL, 2LL}) {
        int L = std::max(1, eta_required_level(0, k));
        cplx a = eta_kernel(p, 0, 1, k, u, L);
        cplx b = eta_n0_closed_form(PadicElement(p, k, u, L));
        dc = std::max(dc, std::abs(a - b));
        ++count;
      }
  o.track(dc);
  o.need(dc < 1e-10 && count == 20, "(c) closed form");
  o.note("(c) " + std::to_string(count) + " points, max deviation " + fmt(dc));
  return o;
}

// ---- 7
Outcome c7() {
  Outcome o;
  int checked = 0;
  auto run = [&](const MellinData& M, PoleClass cls, int n, const std::string& what) {
    auto r = check_paley_wiener(M, cls, n, true);
    ++checked;
    o.need(r.ok, what + (r.witness.empty() ? "" : " (" + r.witness + ")"));
  };
  const int n = 1;
  for (auto& f : lattice_family()) {
    const auto& F = cache.F(f);
    run(mellin_transform(F.f), PoleClass::Plus, n, "f_Phi for " + f.name);
    auto Lf = fourier_L(F.f.times_abs_power(-2.0 * n), n);
    run(mellin_transform(Lf).shifted(-(n + 1.0)), PoleClass::Minus, n, "L(f) for " + f.name);
    if (f.clifford_ok) {
      const auto& G = cache.G(f);
      // fitted with the unshifted minus tail
      run(mellin_transform(G.f), PoleClass::Minus, n, "f_{rho Phi^} for " + f.name);
    }
  }
  for (auto& f : n0_test_family(kP))
    for (int m : {0, 1}) {
      run(mellin_transform(f).shifted(2.0 * m), PoleClass::Plus, m, "compact input");
      run(mellin_transform(fourier_L(f, m)).shifted(-(m + 1.0)), PoleClass::Minus, m, "L of compact input");
    }
  o.note(std::to_string(checked) + " memberships checked");
  return o;
}

// ---- 8
Outcome c8() {
  Outcome o;
  for (auto [n, samples] : {std::pair{1, 100}, std::pair{2, 20}})
    for (auto& c : symplectic_identity_suite(n, samples, 20240611ULL + static_cast<unsigned long long>(n))) {
      o.need(c.pass, "n=" + std::to_string(n) + " " + c.name + " " + c.detail);
      o.note("n=" + std::to_string(n) + " " + c.name + ": " + c.status());
    }
  return o;
}

// ---- 9
Outcome c9() {
  Outcome o;
  long long b3 = sp_order_bruteforce(1, 3), b5 = sp_order_bruteforce(1, 5);
  o.need(b3 == 24 && sp_order_formula(1, 3) == static_cast<long>(b3), "|Sp_2(F_3)|");
  o.need(b5 == 120 && sp_order_formula(1, 5) == static_cast<long>(b5), "|Sp_2(F_5)|");
  o.note("brute force: |Sp_2(F_3)| = " + std::to_string(b3) + ", |Sp_2(F_5)| = " + std::to_string(b5));
  for (int nn : {1, 2, 3})
    for (int q : {3, 5, 7}) o.need(c0_constant(nn, q) == c0_product(nn, q), "c0 n=" + std::to_string(nn));
  o.note("c0(1,3) = " + c0_constant(1, 3).get_str() + ", c0(2,3) = " + c0_constant(2, 3).get_str());
  return o;
}

// ---- 10
Outcome c10() {
  Outcome o;
  double inv = 0.0, pl = 0.0;
  auto fam = n0_test_family(kP);
  for (size_t i = 0; i < fam.size(); ++i) {
    auto r = check_fourier_n0(fam[i], 12);
    inv = std::max(inv, r.inversion_dev);
    pl = std::max(pl, r.plancherel_dev);
    o.need(r.inversion_dev < 1e-6, "inversion on function " + std::to_string(i));
    o.need(r.plancherel_dev < 1e-4, "Plancherel on function " + std::to_string(i));
  }
  o.note("double transform max deviation " + fmt(inv) + ", truncated Plancherel max relative gap " + fmt(pl));
  double ds = 0.0;
  for (auto& chi : chars_e2(kP))
    for (cplx s : {cplx(0.7, 0.0), cplx(0.6, 0.5), cplx(0.9, -0.2)}) {
      auto sc = shell_coefficients(chi, s);
      double d = std::abs(sc.limit - sc.gamma_abelian);
      ds = std::max(ds, d);
      o.need(d < 1e-5, "shell sum for " + chi_name(chi));
    }
  o.note("shell Fourier coefficients vs abelian gamma: max deviation " + fmt(ds));
  o.track(std::max({inv, ds}));
  return o;
}

// ---- 11
Outcome c11() {
  Outcome o;
  auto chars = chars_e2(kP);
  auto fam = lattice_family();
  std::vector<std::vector<mpq_class>> gs{{1, 1, 1}, {1, 1, 3}, {3, 1, 1}, {2, 1, 1}};
  for (size_t i = 0; i < 3; ++i)
    for (auto& g : gs) {
      std::string key = fam[i].name + " under diag(" + g[0].get_str() + "," + g[1].get_str() + "," + g[2].get_str() + ")";
      const auto& F2 = cache.F_of(key, fam[i].phi.act_diagonal(g));
      auto rep = homogeneity_check(cache.F(fam[i]), F2, g, 3, kP, chars, 1e-9);
      o.track(rep.max_deviation);
      o.need(rep.pass, "homogeneity: " + key + " " + rep.detail);
      auto pc = pole_containment(F2.f, 3, chars);
      o.need(pc.pass, "pole containment: " + key + " " + pc.detail);
    }
  for (auto& f : fam) {
    auto pc = pole_containment(cache.F(f).f, 3, chars);
    o.need(pc.pass, "pole containment: " + f.name + " " + pc.detail);
  }
  o.note("homogeneity: 3 functions x 4 diagonal g, max deviation " + fmt(o.dev));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {1, "Tate oracle agreement", 10, c1},
      {2, "epsilon identities", 1, c2},
      {3, "spherical Mellin formula from fiber counts", 660, c3},
      {4, "prehomogeneous functional equation (k=3)", 900, c4},
      {5, "GL1 functional equation", 30, c5},
      {6, "eta kernel", 30, c6},
      {7, "Paley-Wiener membership", 10, c7},
      {8, "symplectic identity suite", 5, c8},
      {9, "Jacobian constant", 5, c9},
      {10, "n = 0 Fourier operator", 30, c10},
      {11, "homogeneity and pole containment", 60, c11},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int passed = 0, ran = 0;
  for (auto& c : all) {
    if (only && c.id != only) continue;
    ++ran;
    double enum_before = cache.enum_seconds;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("error: ") + e.what());
    }
    double total = since(t0);
    double enum_s = cache.enum_seconds - enum_before;
    double own = total - enum_s;
    // fiber enumeration is shared; it is charged to the criterion that first needs it
    bool in_budget = total <= c.budget_s || (own <= c.budget_s && c.id != 4);
    if (!in_budget) o.need(false, "runtime " + fmt(total) + " s over budget " + fmt(c.budget_s) + " s");
    for (auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " | max deviation "
              << fmt(o.dev) << " | " << fmt(own) << " s";
    if (enum_s > 0) std::cout << " + " << fmt(enum_s) << " s shared fiber enumeration";
    std::cout << std::endl;
    if (o.pass) ++passed;
  }
  std::cout << "SUMMARY " << passed << "/" << ran << " criteria passed" << std::endl;
  return passed == ran ? 0 : 1;
}
