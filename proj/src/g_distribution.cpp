#include "padicharm/g_distribution.hpp"

#include <cmath>
#include <sstream>

#include "padicharm/abelian_factors.hpp"
#include "padicharm/quad_forms.hpp"
#include "padicharm/symplectic.hpp"

namespace padicharm {

PadicElement padic_from_rational(const mpq_class& x, int p, int level) {
  if (x == 0) throw std::domain_error("padic_from_rational: zero");
  int v = q_valuation(x, p);
  mpz_class n = x.get_num(), d = x.get_den(), pp = p;
  while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) n /= pp;
  while (mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t())) d /= pp;
  long long mod = ipow(p, level);
  auto red = [mod](const mpz_class& z) {
    return static_cast<long long>(mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(mod)));
  };
  long long u = mod_mul(red(n), mod_inverse(red(d), mod), mod);
  return PadicElement(p, v, u, level);
}

cplx phi_rho_eval(const GPoint& g, int n, int level, int psi_sign) {
  int p = g.a.p();
  if (!is_symplectic(g.h, n)) throw std::invalid_argument("phi_rho_eval: h is not in Sp_2n");
  mpq_class d = (g.h + RationalMatrix::identity(g.h.rows())).det();
  if (d == 0) throw SingularLocus();
  int L = std::min(level, g.a.level());
  PadicElement x = g.a.with_level(L) * padic_from_rational(d, p, L);
  int need = eta_required_level(n, x.valuation());
  if (L < need)
    throw std::invalid_argument("phi_rho_eval: eta on shell " + std::to_string(x.valuation()) + " needs level " +
                                std::to_string(need) + ", have " + std::to_string(L));
  cplx eta = eta_kernel(p, n, psi_sign, x.valuation(), x.unit(), need);
  double c0 = c0_product(n, p).get_d();
  double absd = std::pow(static_cast<double>(p), -q_valuation(d, p));
  return c0 * eta * std::pow(absd, -(2.0 * n + 1.0) / 2.0);
}

cplx eta_n0_closed_form(const PadicElement& t, int psi_sign) {
  double q = t.p();
  return psi_eval(t, psi_sign) * std::sqrt(t.abs()) * (1.0 - 1.0 / q);
}

PVResult fourier_n0(const FxFunction& phi, int t_k, long long t_u, int psi_sign, int K_max) {
  if (phi.tail != TailKind::Compact) throw std::invalid_argument("fourier_n0: compactly supported input expected");
  return pv_convolve(eta_shell_kernel(phi.p, 0, psi_sign), phi, t_k, t_u, K_max);
}

FxFunction fourier_n0_function(const FxFunction& phi, int psi_sign) {
  if (phi.tail != TailKind::Compact) throw std::invalid_argument("fourier_n0: compactly supported input expected");
  // eta * phi^v = |t|^{-1/2} L(|.|^{-1/2} phi)
  return fourier_L(phi.times_abs_power(-0.5), 0, psi_sign).times_abs_power(-0.5);
}

N0Check check_fourier_n0(const FxFunction& phi, int K) {
  N0Check r;
  FxFunction g = fourier_n0_function(phi, 1);
  auto Gg = unit_group(g.p, g.level);
  size_t cg = g.cosets();
  for (int k = g.k_min - 1; k <= g.k_tail + 2; ++k)
    for (size_t c = 0; c < cg; ++c) {
      cplx pv = fourier_n0(phi, k, Gg->elements[c], 1).value;
      r.pv_vs_mellin_dev = std::max(r.pv_vs_mellin_dev, std::abs(pv - g.value_at(k, c)));
    }
  // F_{psi^{-1}} applied to g
  ShellKernel inv = eta_shell_kernel(phi.p, 0, -1);
  auto Gp = unit_group(phi.p, phi.level);
  size_t cp = phi.cosets();
  for (int k = phi.k_min - 2; k <= phi.k_tail + 2; ++k)
    for (size_t c = 0; c < cp; ++c) {
      cplx back = pv_convolve(inv, g, k, Gp->elements[c], 120, 1e-11).value;
      r.inversion_dev = std::max(r.inversion_dev, std::abs(back - phi.value_at(k, c)));
    }
  double a = 0.0, b = 0.0;
  for (int k = -K; k <= K; ++k) {
    for (size_t c = 0; c < cp; ++c) a += std::norm(phi.value_at(k, c)) / static_cast<double>(cp);
    for (size_t c = 0; c < cg; ++c) b += std::norm(g.value_at(k, c)) / static_cast<double>(cg);
  }
  r.norm_phi = std::sqrt(a);
  r.norm_F = std::sqrt(b);
  r.plancherel_dev = std::abs(a - b) / std::max(a, 1e-300);
  return r;
}

std::vector<FxFunction> n0_test_family(int p) {
  std::vector<FxFunction> fam;
  auto shell_fn = [p](int level, int k_min, int k_tail) {
    return FxFunction::with_tail(p, level, TailKind::Compact, 0, 0.0, k_min, k_tail);
  };
  auto chi_row = [p](const UnitCharacter& chi) {
    auto G = unit_group(p, chi.level());
    std::vector<cplx> v;
    for (long long i = 0; i < G->order; ++i) v.push_back(chi.value(G->elements[static_cast<size_t>(i)]));
    return v;
  };
  fam.push_back(FxFunction::indicator_units(p));
  fam.push_back(FxFunction::normalized_unit_indicator(p, 2));
  {
    auto f = shell_fn(1, 1, 2);
    for (auto& v : f.window[0]) v = 1.0;
    fam.push_back(f);
  }
  {
    auto f = shell_fn(1, -1, 0);
    for (auto& v : f.window[0]) v = 1.0;
    fam.push_back(f);
  }
  {
    auto f = shell_fn(1, 0, 1);
    f.window[0] = chi_row(UnitCharacter::quadratic(p));
    fam.push_back(f);
  }
  {
    auto f = shell_fn(1, 0, 3);
    for (auto& v : f.window[0]) v = 1.0;
    for (auto& v : f.window[2]) v = 2.0;
    fam.push_back(f);
  }
  {
    auto f = shell_fn(2, 0, 1);
    f.window[0] = chi_row(character_with_conductor(p, 2));
    fam.push_back(f);
  }
  {
    auto f = shell_fn(1, -1, 0);
    f.window[0][0] = static_cast<double>(p - 1);  // 1 + pO, normalized
    fam.push_back(f);
  }
  {
    auto f = shell_fn(2, 0, 2);
    f.window[0] = chi_row(UnitCharacter(p, 2, 1));
    for (auto& v : f.window[1]) v = cplx(0.5, -0.25);
    fam.push_back(f);
  }
  {
    auto f = shell_fn(1, 0, 3);
    for (auto& row : f.window)
      for (auto& v : row) v = 1.0;
    fam.push_back(f);
  }
  return fam;
}

ShellCoefficients shell_coefficients(const UnitCharacter& chi, cplx s, int ell_max, int psi_sign) {
  const int p = chi.p();
  const double q = p;
  ShellCoefficients out;
  cplx z = z_of_s(s, p);
  RationalFunctionZ B = beta_factor(0, chi.inverse(), psi_sign).invert_arg().reduced();
  out.gamma_abelian = B(z);
  out.radius = 1e300;
  for (cplx pole : B.poles()) out.radius = std::min(out.radius, std::abs(pole));
  if (std::abs(z) >= out.radius * (1.0 - 1e-12)) {
    std::ostringstream o;
    o << "shell_coefficients: s = " << s.real() << (s.imag() < 0 ? "" : "+") << s.imag()
      << "i lies outside the convergence half-plane Re(s) > " << -std::log(out.radius) / std::log(q);
    throw OutsideHalfPlane(o.str());
  }
  // f_ell vanishes below -max(conductor, 1)
  int ell_lo = -std::max(chi.conductor(), 1) - 1;
  cplx acc = 0.0;
  for (int ell = ell_lo; ell <= ell_max; ++ell) {
    int L = std::max({chi.level(), eta_required_level(0, ell), 1});
    auto G = unit_group(p, L);
    UnitCharacter c = chi.at_level(std::max(L, chi.level()));
    cplx sum = 0.0;
    for (long long i = 0; i < G->order; ++i) {
      long long u = G->elements[static_cast<size_t>(i)];
      sum += eta_kernel(p, 0, psi_sign, ell, u, L) * c.value(u);
    }
    cplx f = sum / static_cast<double>(G->order) * std::pow(z, ell);
    out.ell.push_back(ell);
    out.f.push_back(f);
    acc += f;
    out.partial.push_back(acc);
  }
  out.limit = acc;
  return out;
}

}  // namespace padicharm
