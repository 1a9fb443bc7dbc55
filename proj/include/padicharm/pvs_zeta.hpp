#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "padicharm/characters.hpp"
#include "padicharm/fiber_enum.hpp"
#include "padicharm/fx_calculus.hpp"
#include "padicharm/lattice.hpp"
#include "padicharm/report.hpp"

namespace padicharm {

struct FiberCountRow {
  int ord_class;       // valuation of det; Kz marks det = 0 mod p^k
  long long unit_coset;  // unit part of det mod p
  long long count;
};

struct FiberCountTable {
  int m = 3, p = 3, k = 2;
  long long total = 0;
  long long singular = 0;
  std::vector<FiberCountRow> rows;
  // f on shell j (unit lattice, Lebesgue-normalized), j < k
  std::vector<mpq_class> shell_values;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

FiberCountTable det_fiber_counts(int m, int p, int k, bool parallel = true);

enum class FiberWeight { None, Clifford };

struct FiberFunctionResult {
  FxFunction f;
  int level = 1;
  int j_lo = 0, j_hi = -1;               // exact shells
  std::vector<std::vector<cplx>> shells;  // exact shell values [j - j_lo][coset]
};

// f_Phi (None) or f_{rho Phi} (Clifford) from exhaustive enumeration with Y mod p^k
FiberFunctionResult fiber_function(const LatticeTestFunction& phi, FiberWeight w, int k, bool parallel = true);

// (1 - q^{-1}) M(f |.|^shift)(., chi)
RationalFunctionZ zeta_from_fibers(const FxFunction& f, const UnitCharacter& chi, double shift = 1.0);

// chi(2)^{-2n} M(f_{rho Phi^})(q^{-1/2}/z, chi^{-1}) against beta(z, chi) M(f_Phi)(q^{n-1/2} z, chi)
CheckReport check_fe_pvs(const LatticeTestFunction& phi, const std::vector<UnitCharacter>& chars, int k,
                         double tol = 1e-6, bool parallel = true);
// same comparison from precomputed f_Phi (F) and f_{rho Phi^} (G) of size m
CheckReport check_fe_pvs(const FiberFunctionResult& F, const FiberFunctionResult& G, int m, int p,
                         const std::vector<UnitCharacter>& chars, double tol = 1e-6);

// Z_{S_m}(s, Phi(g . g), chi) = chi^{-2}(det g) |det g|^{-2s} Z_{S_m}(s, Phi, chi), g diagonal
CheckReport homogeneity_check(const LatticeTestFunction& phi, const std::vector<mpq_class>& g,
                              const std::vector<UnitCharacter>& chars, int k, double tol = 1e-9,
                              bool parallel = true);
// F2 is the fiber function of Phi(g . g)
CheckReport homogeneity_check(const FiberFunctionResult& F, const FiberFunctionResult& F2,
                              const std::vector<mpq_class>& g, int m, int p, const std::vector<UnitCharacter>& chars,
                              double tol = 1e-9);

// Z_Phi(s, chi) / a_m(s + n + 1, chi) must be a Laurent polynomial
CheckReport pole_containment(const FxFunction& f, int m, const std::vector<UnitCharacter>& chars);

// L(f)(t) = |t|^{n+1} f_{rho Phi^}(2^{-2n} t) for f = |t|^{-2n} f_Phi
FxFunction fourier_L_pvs(const FxFunction& f_rho_hat, int n);

// f(u0 t) for a unit u0
FxFunction dilate_by_unit(const FxFunction& f, long long u0);

}  // namespace padicharm
