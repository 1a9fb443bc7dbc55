#pragma once

#include <gmpxx.h>

#include <random>
#include <vector>

#include "padicharm/rational_matrix.hpp"
#include "padicharm/report.hpp"

namespace padicharm {

// J_n = [[0, I_n], [-I_n, 0]]
RationalMatrix symplectic_form(int n);
// throws std::invalid_argument on a size mismatch
bool is_symplectic(const RationalMatrix& g, int n);

// (h1, h2) -> element of Sp_{4n}; throws if an input is not symplectic
RationalMatrix doubling_embed(const RationalMatrix& h1, const RationalMatrix& h2, int n);

struct StandardElements {
  RationalMatrix g0, g0_inv, w_delta, w_std, J2n;
};
StandardElements standard_elements(int n);

// h = (2 J X + I)(2 J X - I)^{-1}; throws std::domain_error("Cayley pole")
RationalMatrix cayley(const RationalMatrix& X, int n);
// X = 1/2 J (I - h)^{-1} (I + h); throws std::domain_error when I - h is singular
RationalMatrix cayley_inv(const RationalMatrix& h, int n);

// n_std(X) = [[I, X], [0, I]] in Sp_{4n}
RationalMatrix siegel_unipotent(const RationalMatrix& X, int n);

struct SiegelFactorization {
  RationalMatrix h;      // cayley(X)
  RationalMatrix p_std;  // w_std n_std(X) = p_std g0 (h, I) g0^{-1}
  RationalMatrix levi;   // upper-left 2n x 2n block of p_std
};
SiegelFactorization siegel_factorize(const RationalMatrix& X, int n);

struct AbelianizationDelta {
  mpq_class det;
  int valuation = 0;      // of det at p
  int delta_q_exponent = 0;  // delta = q^{-delta_q_exponent} = |det|^{2n+1}
};
AbelianizationDelta abelianization_delta(const RationalMatrix& A, int p);

// |Sp_2n(F_q)| = q^{n^2} prod (q^{2i} - 1)
mpz_class sp_order_formula(int n, int q);
// count of 2x2 matrices over F_q with g^t J g = J (n = 1, q <= 7)
long long sp_order_bruteforce(int n, int q, bool parallel = true);
// |Sp_2n(F_q)| / q^{n(2n+1)}
mpq_class c0_constant(int n, int q);
// prod_{i=1}^n (1 - q^{-2i})
mpq_class c0_product(int n, int q);

// cayley of a random integral symmetric matrix, rejecting Cayley poles
RationalMatrix random_symplectic(int n, std::mt19937_64& rng, RationalMatrix* X_out = nullptr);

// the full identity suite with `samples` random instances
std::vector<CheckReport> symplectic_identity_suite(int n, int samples, unsigned long long seed);

}  // namespace padicharm
