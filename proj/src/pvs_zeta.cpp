#include "padicharm/pvs_zeta.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "padicharm/quad_forms.hpp"

namespace padicharm {

namespace {

constexpr int kNoVal = 1 << 20;

struct EntryIdx {
  int i, j;
};

std::vector<EntryIdx> upper_entries(int m) {
  std::vector<EntryIdx> e;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) e.push_back({i, j});
  return e;
}

int entry_of(int m, int i, int j) {
  if (i > j) std::swap(i, j);
  int e = 0;
  for (int a = 0; a < i; ++a) e += m - a;
  return e + (j - i);
}

// residue of a rational with p-free denominator times p^shift, mod p^K
long long rational_residue(const mpq_class& a, int p, int shift, int K) {
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(K));
  mpq_class x = a;
  mpz_class pp;
  mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(shift)));
  if (shift >= 0)
    x *= mpq_class(pp);
  else
    x /= mpq_class(pp);
  x.canonicalize();
  if (x == 0) return 0;
  if (q_valuation(x, p) < 0) throw std::logic_error("rational_residue: non-integral value");
  mpz_class inv;
  mpz_class den = x.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw std::logic_error("rational_residue: denominator not invertible");
  mpz_class r = (mpz_class(x.get_num()) * inv) % mod;
  if (r < 0) r += mod;
  return r.get_si();
}

struct TermEnumeration {
  FiberEnumSpec spec;
  int j0 = 0;          // X-shell of Z-shell 0
  int rsum = 0;        // sum of R over upper entries
  cplx weight = 1.0;
};

TermEnumeration plan_term(const LatticeTerm& t, int p, int k, bool clifford) {
  const int m = t.m();
  auto E = upper_entries(m);
  const int d = static_cast<int>(E.size());
  std::vector<int> R(static_cast<size_t>(d)), tv(static_cast<size_t>(d));
  TermEnumeration te;
  te.weight = t.weight;
  for (int e = 0; e < d; ++e) {
    auto [i, j] = E[static_cast<size_t>(e)];
    R[static_cast<size_t>(e)] = t.R_at(i, j);
    const mpq_class& b = t.B(static_cast<size_t>(i), static_cast<size_t>(j));
    tv[static_cast<size_t>(e)] = std::min(R[static_cast<size_t>(e)], b == 0 ? kNoVal : q_valuation(b, p));
    te.rsum += R[static_cast<size_t>(e)];
  }
  int r0 = *std::min_element(tv.begin(), tv.end());
  std::vector<int> s(static_cast<size_t>(d)), tz(static_cast<size_t>(d));
  for (int e = 0; e < d; ++e) {
    s[static_cast<size_t>(e)] = R[static_cast<size_t>(e)] - r0;
    tz[static_cast<size_t>(e)] = tv[static_cast<size_t>(e)] - r0;
  }
  // precision of det Z: perturbing one factor of a permutation term
  std::vector<int> perm(static_cast<size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  int best = kNoVal;
  do {
    for (int i = 0; i < m; ++i) {
      int v = s[static_cast<size_t>(entry_of(m, i, perm[static_cast<size_t>(i)]))];
      for (int l = 0; l < m; ++l)
        if (l != i) v += tz[static_cast<size_t>(entry_of(m, l, perm[static_cast<size_t>(l)]))];
      best = std::min(best, v);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  int Kz = k + best;
  if (clifford) {
    int s0 = s[0];
    for (int v : s)
      if (v != s0) throw std::invalid_argument("clifford weighting needs a homothetic lattice");
    Kz = k + s0;
  }
  FiberEnumSpec& sp = te.spec;
  sp.m = m;
  sp.p = p;
  sp.k = k;
  sp.r0 = r0;
  sp.Kz = Kz;
  sp.s = s;
  sp.clifford = clifford;
  for (int e = 0; e < d; ++e) {
    auto [i, j] = E[static_cast<size_t>(e)];
    sp.base.push_back(rational_residue(t.B(static_cast<size_t>(i), static_cast<size_t>(j)), p, -r0, Kz));
  }
  // psi(tr C X) with X = p^{r0} Z
  std::vector<mpq_class> a(static_cast<size_t>(d));
  int c = 0;
  for (int e = 0; e < d; ++e) {
    auto [i, j] = E[static_cast<size_t>(e)];
    mpq_class v = t.C(static_cast<size_t>(i), static_cast<size_t>(j)) * (i == j ? 1 : 2);
    mpz_class pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(r0)));
    if (r0 >= 0)
      v *= mpq_class(pp);
    else
      v /= mpq_class(pp);
    v.canonicalize();
    a[static_cast<size_t>(e)] = v;
    if (v != 0) {
      int vv = q_valuation(v, p);
      c = std::max(c, -vv);
      if (vv + k + s[static_cast<size_t>(e)] < 0)
        throw std::runtime_error("insufficient k for the additive character of the test function");
    }
  }
  if (c > 0) {
    if (c > Kz) throw std::runtime_error("insufficient k for the additive character of the test function");
    sp.cexp = c;
    for (int e = 0; e < d; ++e) sp.cw.push_back(rational_residue(a[static_cast<size_t>(e)], p, c, c));
  }
  te.j0 = m * r0;
  return te;
}

// density at depth D per residue mod p^D
struct ShellDensity {
  int D = 0;
  std::vector<cplx> v;
};

ShellDensity coarsen(const ShellDensity& s, int D, int p) {
  if (D == s.D) return s;
  ShellDensity c;
  c.D = D;
  long long mod = ipow(p, D), fine = ipow(p, s.D), lifts = fine / mod;
  c.v.assign(static_cast<size_t>(mod), 0.0);
  for (long long r = 0; r < mod; ++r) {
    if (r % p == 0) continue;
    cplx acc = 0.0;
    for (long long i = 0; i < lifts; ++i) acc += s.v[static_cast<size_t>(r + mod * i)];
    c.v[static_cast<size_t>(r)] = acc / static_cast<double>(lifts);
  }
  return c;
}

}  // namespace

std::string FiberCountTable::to_csv() const {
  std::ostringstream o;
  o << "ord_class,unit_coset,count\n";
  for (const auto& r : rows) o << r.ord_class << "," << r.unit_coset << "," << r.count << "\n";
  return o.str();
}

nlohmann::json FiberCountTable::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  j["p"] = p;
  j["k"] = k;
  j["total"] = total;
  j["singular"] = singular;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back({{"ord_class", r.ord_class}, {"unit_coset", r.unit_coset}, {"count", r.count}});
  j["shell_values"] = nlohmann::json::array();
  for (const auto& v : shell_values) j["shell_values"].push_back(v.get_str());
  return j;
}

FiberCountTable det_fiber_counts(int m, int p, int k, bool parallel) {
  LatticeTestFunction one = LatticeTestFunction::unit_lattice(m, p);
  TermEnumeration te = plan_term(one.terms[0], p, k, false);
  te.spec.depth_cap = 1;
  FiberShellData data = enumerate_fibers(te.spec, parallel);
  FiberCountTable T;
  T.m = m;
  T.p = p;
  T.k = k;
  T.total = data.total;
  T.singular = data.singular;
  const int d = te.spec.entries();
  for (int j = 0; j < data.Kz; ++j) {
    long long tot = 0;
    for (long long u = 1; u < p; ++u) {
      long long c = data.counts[static_cast<size_t>(j)][static_cast<size_t>(u)];
      T.rows.push_back({j, u, c});
      tot += c;
    }
    // average of f over the shell: count q^{-kd} / (q^{-j} (1 - 1/q))
    mpz_class num = static_cast<long>(tot), den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k * d - j));
    mpq_class v(num * p, den * (p - 1));
    v.canonicalize();
    T.shell_values.push_back(v);
  }
  T.rows.push_back({data.Kz, 0, data.singular});
  return T;
}

FiberFunctionResult fiber_function(const LatticeTestFunction& phi, FiberWeight w, int k, bool parallel) {
  const int p = phi.p, m = phi.m;
  if (m % 2 == 0) throw std::invalid_argument("fiber_function: odd m expected");
  const int n = (m - 1) / 2;
  const int d = m * (m + 1) / 2;
  const bool cl = w == FiberWeight::Clifford;
  struct TermData {
    TermEnumeration te;
    FiberShellData data;
  };
  std::vector<TermData> terms;
  for (const auto& t : phi.terms) {
    if (t.weight == 0.0) continue;
    TermData td{plan_term(t, p, k, cl), {}};
    td.data = enumerate_fibers(td.te.spec, parallel);
    terms.push_back(std::move(td));
  }
  if (terms.empty()) throw std::invalid_argument("fiber_function: empty test function");
  int lo = kNoVal, hi = kNoVal;
  for (const auto& t : terms) {
    lo = std::min(lo, t.te.j0);
    hi = std::min(hi, t.te.j0 + t.te.spec.Kz - 1);
  }
  // combined densities per X-shell
  std::vector<ShellDensity> shells;
  for (int j = lo; j <= hi; ++j) {
    int D = kNoVal;
    for (const auto& t : terms)
      if (j >= t.te.j0) D = std::min(D, t.data.depth(j - t.te.j0));
    ShellDensity acc;
    acc.D = D;
    acc.v.assign(static_cast<size_t>(ipow(p, D)), 0.0);
    for (const auto& t : terms) {
      if (j < t.te.j0) continue;
      int jt = j - t.te.j0;
      ShellDensity sd;
      sd.D = t.data.depth(jt);
      double scale = std::pow(static_cast<double>(p), j + sd.D - k * d - t.te.rsum);
      sd.v = t.data.sums[static_cast<size_t>(jt)];
      for (auto& x : sd.v) x *= scale * t.te.weight;
      sd = coarsen(sd, D, p);
      for (size_t r = 0; r < acc.v.size(); ++r) acc.v[r] += sd.v[r];
    }
    shells.push_back(std::move(acc));
  }
  // smallest level on which every resolved shell is invariant
  int L = 1;
  for (; L <= 3; ++L) {
    bool ok = true;
    double scale = 1e-300;
    for (const auto& s : shells)
      for (auto x : s.v) scale = std::max(scale, std::abs(x));
    for (const auto& s : shells) {
      if (s.D <= L) continue;
      long long mod = ipow(p, L), fine = ipow(p, s.D);
      for (long long r = 0; r < fine && ok; ++r) {
        if (r % p == 0) continue;
        if (std::abs(s.v[static_cast<size_t>(r)] - s.v[static_cast<size_t>(r % mod)]) > 1e-9 * scale) ok = false;
      }
    }
    if (ok) break;
  }
  if (L > 3) throw std::runtime_error("fiber_function: shells not invariant at any level <= 3");
  int j_hi = lo - 1;
  for (int j = lo; j <= hi; ++j)
    if (shells[static_cast<size_t>(j - lo)].D >= L) j_hi = j;
  auto G = unit_group(p, L);
  FiberFunctionResult res;
  res.level = L;
  res.j_lo = lo;
  res.j_hi = j_hi;
  for (int j = lo; j <= j_hi; ++j) {
    ShellDensity c = coarsen(shells[static_cast<size_t>(j - lo)], L, p);
    std::vector<cplx> row(static_cast<size_t>(G->order));
    for (long long i = 0; i < G->order; ++i) row[static_cast<size_t>(i)] = c.v[static_cast<size_t>(G->elements[static_cast<size_t>(i)])];
    res.shells.push_back(std::move(row));
  }
  res.f = fit_fx_function(p, L, cl ? TailKind::Minus : TailKind::Plus, n, 0.0, lo, res.shells);
  return res;
}

RationalFunctionZ zeta_from_fibers(const FxFunction& f, const UnitCharacter& chi, double shift) {
  return mellin_transform(f).shifted(shift).at(chi) * cplx(1.0 - 1.0 / f.p);
}

namespace {

std::vector<cplx> ten_samples() {
  const auto& s = default_samples();
  return std::vector<cplx>(s.begin(), s.begin() + 10);
}

}  // namespace

CheckReport check_fe_pvs(const LatticeTestFunction& phi, const std::vector<UnitCharacter>& chars, int k, double tol,
                         bool parallel) {
  FiberFunctionResult F = fiber_function(phi, FiberWeight::None, k, parallel);
  FiberFunctionResult G = fiber_function(lattice_fourier(phi, 1), FiberWeight::Clifford, k, parallel);
  return check_fe_pvs(F, G, phi.m, phi.p, chars, tol);
}

CheckReport check_fe_pvs(const FiberFunctionResult& F, const FiberFunctionResult& G, int m, int p,
                         const std::vector<UnitCharacter>& chars, double tol) {
  const int n = (m - 1) / 2;
  const double q = p;
  CheckReport rep;
  rep.name = "fe-pvs";
  MellinData MF = mellin_transform(F.f), MG = mellin_transform(G.f);
  auto samples = ten_samples();
  std::ostringstream det;
  int compared = 0;
  for (const auto& chi : chars) {
    cplx c2 = chi.value(mod_pos(2, ipow(p, chi.level())));
    RationalFunctionZ lhs = MG.at(chi.inverse()).scale_arg(std::pow(q, -0.5)).invert_arg() * std::pow(c2, -2 * n);
    RationalFunctionZ rf = MF.at(chi);
    RationalFunctionZ rhs = rf.is_zero() ? RationalFunctionZ() : beta_factor(n, chi) * rf.scale_arg(std::pow(q, n - 0.5));
    double dv = 0.0;
    if (!(lhs.is_zero() && rhs.is_zero())) {
      dv = deviation(lhs, rhs, samples);
      ++compared;
    }
    det << "chi" << chi.index() << "@" << chi.level() << ":" << dv << " ";
    rep.max_deviation = std::max(rep.max_deviation, dv);
  }
  det << "levels " << F.level << "/" << G.level << ", compared " << compared;
  rep.detail = det.str();
  rep.pass = rep.max_deviation < tol;
  return rep;
}

CheckReport homogeneity_check(const LatticeTestFunction& phi, const std::vector<mpq_class>& g,
                              const std::vector<UnitCharacter>& chars, int k, double tol, bool parallel) {
  FiberFunctionResult F = fiber_function(phi, FiberWeight::None, k, parallel);
  FiberFunctionResult F2 = fiber_function(phi.act_diagonal(g), FiberWeight::None, k, parallel);
  return homogeneity_check(F, F2, g, phi.m, phi.p, chars, tol);
}

CheckReport homogeneity_check(const FiberFunctionResult& F, const FiberFunctionResult& F2,
                              const std::vector<mpq_class>& g, int m, int p, const std::vector<UnitCharacter>& chars,
                              double tol) {
  const double q = p;
  CheckReport rep;
  rep.name = "homogeneity";
  MellinData M1 = mellin_transform(F.f), M2 = mellin_transform(F2.f);
  mpq_class detg = 1;
  for (const auto& x : g) detg *= x;
  int v = q_valuation(detg, p);
  auto samples = ten_samples();
  std::ostringstream det;
  const double a = std::pow(q, (m - 1) / 2.0);
  for (const auto& chi : chars) {
    long long u = rational_residue(detg, p, -v, chi.level());
    cplx cu = chi.value(u);
    RationalFunctionZ lhs = M2.at(chi).scale_arg(a);
    RationalFunctionZ r1 = M1.at(chi);
    RationalFunctionZ rhs = r1.is_zero() ? RationalFunctionZ()
                                         : RationalFunctionZ::monomial(std::pow(cu, -2), -2 * v) * r1.scale_arg(a);
    double dv = (lhs.is_zero() && rhs.is_zero()) ? 0.0 : deviation(lhs, rhs, samples);
    det << "chi" << chi.index() << ":" << dv << " ";
    rep.max_deviation = std::max(rep.max_deviation, dv);
  }
  rep.detail = det.str();
  rep.pass = rep.max_deviation < tol;
  return rep;
}

CheckReport pole_containment(const FxFunction& f, int m, const std::vector<UnitCharacter>& chars) {
  const int n = (m - 1) / 2;
  CheckReport rep;
  rep.name = "pole-containment";
  rep.pass = true;
  std::ostringstream det;
  for (const auto& chi : chars) {
    RationalFunctionZ Z = zeta_from_fibers(f, chi, 1.0);
    if (Z.is_zero()) continue;
    RationalFunctionZ a = s_shift(ab_factors(m, chi).a, n + 1.0, f.p);
    PartialFractions pf = (Z / a).reduced().partial_fractions();
    if (!pf.terms.empty()) {
      rep.pass = false;
      det << "chi" << chi.index() << ": pole at z=" << 1.0 / pf.terms[0].alpha << " ";
      rep.max_deviation = std::max(rep.max_deviation, std::abs(pf.terms[0].b));
    }
  }
  rep.detail = det.str();
  return rep;
}

FxFunction dilate_by_unit(const FxFunction& f, long long u0) {
  auto G = unit_group(f.p, f.level);
  long long l0 = G->log(mod_pos(u0, G->modulus));
  long long phi = G->order;
  FxFunction h = f;
  auto perm = [&](const std::vector<cplx>& src, std::vector<cplx>& dst) {
    for (long long i = 0; i < phi; ++i) dst[static_cast<size_t>(i)] = src[static_cast<size_t>(mod_pos(i + l0, phi))];
  };
  for (size_t r = 0; r < f.window.size(); ++r) perm(f.window[r], h.window[r]);
  auto terms = f.tail_terms();
  for (size_t t = 0; t < terms.size(); ++t)
    if (!f.tail_table(t).empty()) perm(f.tail_table(t), h.tail_table(t));
  return h;
}

FxFunction fourier_L_pvs(const FxFunction& f_rho_hat, int n) {
  long long mod = ipow(f_rho_hat.p, f_rho_hat.level);
  long long u0 = mod_inverse(mod_pow(2, 2 * n, mod), mod);
  return dilate_by_unit(f_rho_hat.times_abs_power(n + 1.0), u0);
}

}  // namespace padicharm
