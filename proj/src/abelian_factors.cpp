#include "padicharm/abelian_factors.hpp"

#include <cmath>
#include <stdexcept>

namespace padicharm {

cplx z_of_s(cplx s, int q) { return std::exp(-s * std::log(static_cast<double>(q))); }

RationalFunctionZ s_shift(const RationalFunctionZ& r, double c, int q) {
  return r.scale_arg(std::pow(static_cast<double>(q), -c));
}

RationalFunctionZ s_double(const RationalFunctionZ& r) { return r.square_arg(); }

RationalFunctionZ s_reflect(const RationalFunctionZ& r, int q) {
  // R(1-s): z -> q^{-1}/z
  return r.scale_arg(1.0 / static_cast<double>(q)).invert_arg();
}

RationalFunctionZ s_negate(const RationalFunctionZ& r) { return r.invert_arg(); }

RationalFunctionZ twist_uniformizer(const RationalFunctionZ& r, cplx chi_of_p) { return r.scale_arg(chi_of_p); }

RationalFunctionZ L_factor(const UnitCharacter& chi) {
  if (chi.conductor() == 0) return RationalFunctionZ({1.0}, {1.0, -1.0});
  return RationalFunctionZ::constant(1.0);
}

cplx gauss_sum(const UnitCharacter& chi, int psi_sign) {
  int e = chi.conductor();
  if (e == 0) return 1.0;
  int p = chi.p();
  UnitCharacter c = chi.at_level(std::max(e, chi.level()));
  long long pe = ipow(p, e);
  cplx s = 0.0;
  for (long long u = 1; u < pe; ++u) {
    if (u % p == 0) continue;
    s += std::conj(c.value(u)) * psi_of_fraction(u, e, p, psi_sign);
  }
  return s;
}

cplx epsilon_half(const UnitCharacter& chi, int psi_sign) {
  int e = chi.conductor();
  if (e == 0) return 1.0;
  return std::pow(static_cast<double>(chi.p()), -0.5 * e) * gauss_sum(chi, psi_sign);
}

RationalFunctionZ epsilon_factor(const UnitCharacter& chi, int psi_sign) {
  int e = chi.conductor();
  if (e == 0) return RationalFunctionZ::constant(1.0);
  return RationalFunctionZ::monomial(std::pow(static_cast<double>(chi.p()), 0.5 * e) * epsilon_half(chi, psi_sign), e);
}

RationalFunctionZ gamma_factor(const UnitCharacter& chi, int psi_sign) {
  int q = chi.p();
  return epsilon_factor(chi, psi_sign) * s_reflect(L_factor(chi.inverse()), q) / L_factor(chi);
}

RationalFunctionZ beta_factor(int n, const UnitCharacter& chi, int psi_sign) {
  if (n < 0) throw std::invalid_argument("beta_factor: n must be >= 0");
  int q = chi.p();
  RationalFunctionZ r = s_shift(gamma_factor(chi, psi_sign), -(2.0 * n - 1.0) / 2.0, q);
  if (n == 0) return r;
  RationalFunctionZ g2 = gamma_factor(chi.pow(2), psi_sign);
  for (int k = 1; k <= n; ++k) r = r * s_double(s_shift(g2, -2.0 * n + 2.0 * k, q));
  return r;
}

ABFactors ab_factors(int m, const UnitCharacter& chi) {
  if (m < 1) throw std::invalid_argument("ab_factors: m must be >= 1");
  int q = chi.p();
  RationalFunctionZ L1 = L_factor(chi), L2 = L_factor(chi.pow(2));
  ABFactors f;
  f.a = s_shift(L1, -(m - 1) / 2.0, q);
  f.b = s_shift(L1, (m + 1) / 2.0, q);
  for (int r = 1; r <= m / 2; ++r) {
    // s_double(s_shift(R, c)) is R(2s + c)
    f.a = f.a * s_double(s_shift(L2, -m + 2.0 * r, q));
    f.b = f.b * s_double(s_shift(L2, 2.0 * r - 1.0, q));
  }
  return f;
}

namespace {

// Series sum_{k >= k0} term(k), stopped once three consecutive terms are negligible
template <class F>
cplx shell_series(int k0, F term, int max_shells, double tol, int& deepest) {
  cplx s = 0.0;
  int quiet = 0;
  for (int k = k0; k < k0 + max_shells; ++k) {
    cplx t = term(k);
    s += t;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw OracleNotStable("tate_gamma_oracle: shell sum diverges (Re s outside the strip of convergence)");
    deepest = std::max(deepest, k);
    if (std::abs(t) <= tol * std::max(std::abs(s), 1e-300) && k > 0) {
      if (++quiet >= 3) return s;
    } else {
      quiet = 0;
    }
  }
  throw OracleNotStable("tate_gamma_oracle: shell sum did not stabilize within " + std::to_string(max_shells) +
                        " shells (partial sum " + std::to_string(std::abs(s)) + ")");
}

// integral over u in a (1 + p^M O) of g(u) d*u, g constant mod p^L
template <class G>
cplx coset_average(int p, int L, long long a, int M, G g) {
  long long mod = ipow(p, L), modM = ipow(p, M);
  cplx s = 0.0;
  for (long long u = 1; u < mod; ++u) {
    if (u % p == 0 || mod_pos(u - a, modM) != 0) continue;
    s += g(u);
  }
  // d*u with vol(O^x) = 1: each residue class has volume 1/phi(p^L)
  return s / static_cast<double>(totient_pp(p, L));
}

}  // namespace

TateOracleResult tate_gamma_oracle(const UnitCharacter& chi, cplx s, int psi_sign, int max_shells, double tol) {
  const int p = chi.p();
  const int q = p;
  const int N = chi.level();
  const int M = std::max(chi.conductor(), 1);
  const long long g = universal_generator(p);
  const cplx z = z_of_s(s, q);
  const cplx zr = z_of_s(1.0 - s, q);
  UnitCharacter chinv = chi.inverse();
  TateOracleResult res;

  auto chi_at = [&](const UnitCharacter& c, long long u) { return c.value(mod_pos(u, ipow(p, c.level()))); };

  struct TestFn {
    cplx zeta;
    cplx dual;
  };
  std::vector<TestFn> fns;

  // f = 1_{c (1 + p^M O)} with c = p^v a; its transform is psi(c y) p^{-(v+M)} 1_{p^{-(v+M)} O}(y)
  for (int variant = 0; variant < 2; ++variant) {
    int v = variant;
    long long a = variant == 0 ? 1 : g;
    int L0 = std::max(M, N);
    cplx zeta = std::pow(z, v) * coset_average(p, L0, a, M, [&](long long u) { return chi_at(chi, u); });
    int depth = v + M;
    double vol = std::pow(static_cast<double>(p), -depth);
    cplx dual = shell_series(
        -depth,
        [&](int k) -> cplx {
          int L = std::max({N, -k - v, 1});
          cplx avg = coset_average(p, L, 1, 0, [&](long long u) {
            // psi(c p^k u) = psi(p^{v+k} a u)
            cplx ps = psi_of_fraction(mod_mul(a, u, ipow(p, std::max(L, 1))), -(v + k), p, psi_sign);
            return ps * chi_at(chinv, u);
          });
          return std::pow(zr, k) * vol * avg;
        },
        max_shells, tol, res.shells);
    fns.push_back({zeta, dual});
  }
  if (chi.conductor() == 0) {
    // f = 1_O, self-dual
    cplx zeta = shell_series(
        0, [&](int k) { return std::pow(z, k) * coset_average(p, N, 1, 0, [&](long long u) { return chi_at(chi, u); }); },
        max_shells, tol, res.shells);
    cplx dual = shell_series(
        0,
        [&](int k) { return std::pow(zr, k) * coset_average(p, N, 1, 0, [&](long long u) { return chi_at(chinv, u); }); },
        max_shells, tol, res.shells);
    fns.push_back({zeta, dual});
  }
  for (const auto& f : fns) {
    if (std::abs(f.zeta) < 1e-14) continue;
    res.ratios.push_back(f.dual / f.zeta);
  }
  if (res.ratios.empty()) throw OracleNotStable("tate_gamma_oracle: every test function has vanishing zeta integral");
  res.ratio = res.ratios.front();
  for (const auto& r : res.ratios) res.spread = std::max(res.spread, std::abs(r - res.ratio) / std::abs(res.ratio));
  return res;
}

}  // namespace padicharm
