#pragma once

#include <string>
#include <vector>

#include "padicharm/characters.hpp"
#include "padicharm/ratfunc.hpp"

namespace padicharm {

// Substitutions in s, written in z = q^{-s}
RationalFunctionZ s_shift(const RationalFunctionZ& r, double c, int q);  // s -> s + c
RationalFunctionZ s_double(const RationalFunctionZ& r);                  // s -> 2s
RationalFunctionZ s_reflect(const RationalFunctionZ& r, int q);          // s -> 1 - s
RationalFunctionZ s_negate(const RationalFunctionZ& r);                  // s -> -s
// general chi(p) != 1: z -> chi(p) z
RationalFunctionZ twist_uniformizer(const RationalFunctionZ& r, cplx chi_of_p);

RationalFunctionZ L_factor(const UnitCharacter& chi);
// sum over u mod p^e of chi^{-1}(u) psi(u / p^e)
cplx gauss_sum(const UnitCharacter& chi, int psi_sign = 1);
cplx epsilon_half(const UnitCharacter& chi, int psi_sign = 1);
// q^{e/2} eps(1/2) z^e
RationalFunctionZ epsilon_factor(const UnitCharacter& chi, int psi_sign = 1);
RationalFunctionZ gamma_factor(const UnitCharacter& chi, int psi_sign = 1);
// gamma(s - (2n-1)/2, chi) prod_{r=1}^n gamma(2s - 2n + 2r, chi^2)
RationalFunctionZ beta_factor(int n, const UnitCharacter& chi, int psi_sign = 1);

struct ABFactors {
  RationalFunctionZ a;
  RationalFunctionZ b;
};
ABFactors ab_factors(int m, const UnitCharacter& chi);

struct TateOracleResult {
  cplx ratio;
  std::vector<cplx> ratios;  // one per test function used
  double spread = 0.0;       // max relative disagreement between test functions
  int shells = 0;            // deepest shell summed
};

class OracleNotStable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Z(1-s, f^, chi^{-1}) / Z(s, f, chi) by brute-force shell sums over several f
TateOracleResult tate_gamma_oracle(const UnitCharacter& chi, cplx s, int psi_sign = 1, int max_shells = 2000,
                                   double tol = 1e-14);

// q^{-s}
cplx z_of_s(cplx s, int q);

}  // namespace padicharm
