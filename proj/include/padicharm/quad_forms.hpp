#pragma once

#include <gmpxx.h>

#include <vector>

#include "padicharm/rational_matrix.hpp"

namespace padicharm {

struct Diagonalization {
  std::vector<mpq_class> d;
  RationalMatrix P;  // P X P^t = diag(d)
};

enum class PivotOrder { Natural, Reversed };

// exact congruence diagonalization; throws std::domain_error on singular input
Diagonalization diagonalize(const RationalMatrix& X, PivotOrder order = PivotOrder::Natural);

// p-adic valuation of a nonzero rational
int q_valuation(const mpq_class& a, int p);
// Legendre symbol of the unit part of a (a nonzero, p odd)
int unit_legendre(const mpq_class& a, int p);
int legendre(long long a, int p);

// tame formula, p odd
int hilbert_symbol(const mpq_class& a, const mpq_class& b, int p);
// solvability of z^2 = a x^2 + b y^2 with a primitive vector mod p^k
int hilbert_symbol_oracle(const mpq_class& a, const mpq_class& b, int p, int k = 3);

// prod_{i<j} (d_i, d_j)_p
int hasse_invariant(const RationalMatrix& X, int p, PivotOrder order = PivotOrder::Natural);
// (-1,-1)^{n(n+1)/2} ((-1)^n, det X) eps_X for X of size 2n+1
int clifford_rho(const RationalMatrix& X, int p);

// Jordan data of an integral symmetric matrix known mod p^K: diagonal entries p^{e_i} u_i
struct JordanData {
  bool ok = false;             // false if some diagonal entry vanishes mod p^K
  std::vector<int> e;
  std::vector<long long> u;    // unit parts mod p (as residues)
};
// entries row-major m x m, residues mod p^K
JordanData jordan_mod(const long long* entries, int m, int p, int K);
// the same invariants as clifford_rho, evaluated on Jordan data of X = p^shift Z
int clifford_rho_jordan(const JordanData& J, int p, int shift = 0);
int hilbert_symbol_pu(int e1, long long u1, int e2, long long u2, int p);

// lookup tables for clifford_rho_sym_fast on residues mod p^K
struct CliffordTables {
  int p = 3, K = 1;
  long long mod = 3;
  std::vector<signed char> leg;      // Legendre symbol of r mod p
  std::vector<unsigned char> val;    // valuation of r mod p^K (K for 0)
  std::vector<long long> unit_inv;   // inverse of the unit part of r mod p^{K - val}
  // packed Jordan data of [[a, b], [b, c]] at (a * mod + b) * mod + c, 0 if singular; mod <= 256 only
  std::vector<unsigned short> jordan2;
  CliffordTables(int p, int K);
};
// clifford_rho_jordan(jordan_mod(...), shift) for m <= 3 without allocation; 0 when singular mod p^K
int clifford_rho_sym_fast(const long long* upper, int m, int shift, const CliffordTables& T);
std::vector<signed char> legendre_table(int p);

}  // namespace padicharm
