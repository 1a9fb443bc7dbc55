#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "padicharm/characters.hpp"
#include "padicharm/fx_calculus.hpp"
#include "padicharm/padic_core.hpp"
#include "padicharm/rational_matrix.hpp"

namespace padicharm {

// x in Q^x as p^v * unit, unit reduced mod p^level
PadicElement padic_from_rational(const mpq_class& x, int p, int level);

struct GPoint {
  PadicElement a;
  RationalMatrix h;  // in Sp_2n
};

class SingularLocus : public std::domain_error {
 public:
  SingularLocus() : std::domain_error("singular locus of Phi: det(h + I) = 0") {}
};

// c0 eta(a det(h + I)) |det(h + I)|^{-(2n+1)/2}
cplx phi_rho_eval(const GPoint& g, int n, int level, int psi_sign = 1);

// psi(t) |t|^{1/2} zeta(1)^{-1}
cplx eta_n0_closed_form(const PadicElement& t, int psi_sign = 1);

// (Phi * phi^v)(t) at n = 0 as a principal value
PVResult fourier_n0(const FxFunction& phi, int t_k, long long t_u, int psi_sign = 1, int K_max = -1);
// F(phi) as a function: pv values on the window, tail from the Mellin route
FxFunction fourier_n0_function(const FxFunction& phi, int psi_sign = 1);

struct N0Check {
  double inversion_dev = 0.0;   // max |F_{psi^-1} F_psi phi - phi| on the window
  double plancherel_dev = 0.0;  // relative gap of truncated L^2 norms
  double pv_vs_mellin_dev = 0.0;
  double norm_phi = 0.0, norm_F = 0.0;
};
N0Check check_fourier_n0(const FxFunction& phi, int K = 12);

// compactly supported functions on F^x used for the n = 0 checks
std::vector<FxFunction> n0_test_family(int p);

struct ShellCoefficients {
  std::vector<int> ell;
  std::vector<cplx> f;         // f_ell(chi_s)
  std::vector<cplx> partial;   // running sums
  cplx limit;
  cplx gamma_abelian;          // gamma(1/2 - s, chi^{-1}) from abelian_factors
  double radius = 0.0;         // series converges for |q^{-s}| < radius
};

class OutsideHalfPlane : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// f_ell(chi_s) = int_{|a| = q^-ell} Phi(a) chi_s(a) d*a at n = 0
ShellCoefficients shell_coefficients(const UnitCharacter& chi, cplx s, int ell_max = 80, int psi_sign = 1);

}  // namespace padicharm
