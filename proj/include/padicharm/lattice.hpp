#pragma once

#include <gmpxx.h>

#include <vector>

#include <json.hpp>

#include "padicharm/padic_core.hpp"
#include "padicharm/rational_matrix.hpp"

namespace padicharm {

// weight * psi(tr(C X)) * indicator{ X_ij - B_ij in p^{R_ij} O for i <= j }
struct LatticeTerm {
  cplx weight = 1.0;
  RationalMatrix B;
  std::vector<int> R;  // row-major m x m, symmetric
  RationalMatrix C;

  int m() const { return static_cast<int>(B.rows()); }
  int R_at(int i, int j) const { return R[static_cast<size_t>(i * m() + j)]; }
};

// finite linear combination of lattice terms on S_m(Q_p)
struct LatticeTestFunction {
  int m = 3;
  int p = 3;
  std::vector<LatticeTerm> terms;

  // weight * indicator(B + p^r S_m(O))
  static LatticeTestFunction coset(int m, int p, const RationalMatrix& B, int r, cplx weight = 1.0);
  static LatticeTestFunction unit_lattice(int m, int p) { return coset(m, p, RationalMatrix::zero(m, m), 0); }

  LatticeTestFunction operator+(const LatticeTestFunction& o) const;
  LatticeTestFunction scaled(cplx c) const;
  cplx eval(const RationalMatrix& X) const;
  // X -> Phi(g X g) for g = diag(g_i)
  LatticeTestFunction act_diagonal(const std::vector<mpq_class>& g) const;
  nlohmann::json to_json() const;
};

// exp(2 pi i sign frac_p(a)) for rational a
cplx psi_rational(const mpq_class& a, int p, int sign = 1);
// sum_{i<=j} multiplicities of tr(X Y) = sum_i X_ii Y_ii + 2 sum_{i<j} X_ij Y_ij
mpq_class trace_pairing(const RationalMatrix& X, const RationalMatrix& Y);

// Phi^(X) = int Phi(Y) psi(sign tr(X Y)) dY with vol(S_m(O)) = 1
LatticeTestFunction lattice_fourier(const LatticeTestFunction& f, int psi_sign = 1);

}  // namespace padicharm
