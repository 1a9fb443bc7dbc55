#include "padicharm/quad_forms.hpp"

#include <algorithm>
#include <stdexcept>

#include "padicharm/padic_core.hpp"

namespace padicharm {

namespace {

void swap_rc(RationalMatrix& A, RationalMatrix& P, size_t i, size_t j) {
  size_t m = A.rows();
  for (size_t c = 0; c < m; ++c) std::swap(A(i, c), A(j, c));
  for (size_t r = 0; r < m; ++r) std::swap(A(r, i), A(r, j));
  for (size_t c = 0; c < m; ++c) std::swap(P(i, c), P(j, c));
}

// row_i += s row_j, col_i += s col_j
void add_rc(RationalMatrix& A, RationalMatrix& P, size_t i, size_t j, const mpq_class& s) {
  size_t m = A.rows();
  for (size_t c = 0; c < m; ++c) A(i, c) += s * A(j, c);
  for (size_t r = 0; r < m; ++r) A(r, i) += s * A(r, j);
  for (size_t c = 0; c < m; ++c) P(i, c) += s * P(j, c);
}

long long int_valuation_strip(mpz_class& z, int p) {
  long long v = 0;
  while (z % p == 0) {
    z /= p;
    ++v;
  }
  return v;
}

}  // namespace

Diagonalization diagonalize(const RationalMatrix& X, PivotOrder order) {
  if (!X.is_square() || !X.is_symmetric()) throw std::invalid_argument("diagonalize: symmetric matrix expected");
  size_t m = X.rows();
  if (X.det() == 0) throw std::domain_error("diagonalize: singular matrix");
  RationalMatrix R = RationalMatrix::identity(m);
  if (order == PivotOrder::Reversed) {
    R = RationalMatrix::zero(m, m);
    for (size_t i = 0; i < m; ++i) R(i, m - 1 - i) = 1;
  }
  RationalMatrix A = R * X * R.transpose();
  RationalMatrix P = R;
  for (size_t i = 0; i < m; ++i) {
    if (A(i, i) == 0) {
      size_t j = i + 1;
      while (j < m && A(j, j) == 0) ++j;
      if (j < m) {
        swap_rc(A, P, i, j);
      } else {
        j = i + 1;
        while (j < m && A(i, j) == 0) ++j;
        if (j == m) throw std::domain_error("diagonalize: singular matrix");
        add_rc(A, P, i, j, 1);
      }
    }
    for (size_t j = i + 1; j < m; ++j) {
      if (A(j, i) == 0) continue;
      mpq_class c = A(j, i) / A(i, i);
      add_rc(A, P, j, i, -c);
    }
  }
  Diagonalization D;
  for (size_t i = 0; i < m; ++i) D.d.push_back(A(i, i));
  D.P = P;
  if (P * X * P.transpose() != RationalMatrix::diagonal(D.d))
    throw std::logic_error("diagonalize: verification failed");
  return D;
}

int q_valuation(const mpq_class& a, int p) {
  if (a == 0) throw std::domain_error("valuation undefined");
  mpz_class n = a.get_num(), d = a.get_den();
  return static_cast<int>(int_valuation_strip(n, p) - int_valuation_strip(d, p));
}

int legendre(long long a, int p) {
  a = mod_pos(a, p);
  if (a == 0) return 0;
  return mod_pow(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int unit_legendre(const mpq_class& a, int p) {
  mpz_class n = a.get_num(), d = a.get_den();
  int_valuation_strip(n, p);
  int_valuation_strip(d, p);
  mpz_class nr = n % p, dr = d % p;
  return legendre(nr.get_si(), p) * legendre(dr.get_si(), p);
}

int hilbert_symbol_pu(int e1, long long u1, int e2, long long u2, int p) {
  int s = 1;
  if ((e1 & 1) && (e2 & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
  if (e2 & 1) s *= legendre(u1, p);
  if (e1 & 1) s *= legendre(u2, p);
  return s;
}

int hilbert_symbol(const mpq_class& a, const mpq_class& b, int p) {
  if (p == 2) throw std::invalid_argument("hilbert_symbol: p = 2 unsupported");
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
  int va = q_valuation(a, p), vb = q_valuation(b, p);
  int s = 1;
  if ((va & 1) && (vb & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
  if (vb & 1) s *= unit_legendre(a, p);
  if (va & 1) s *= unit_legendre(b, p);
  return s;
}

int hilbert_symbol_oracle(const mpq_class& a, const mpq_class& b, int p, int k) {
  if (p == 2) throw std::invalid_argument("hilbert_symbol: p = 2 unsupported");
  // replace a, b by integers p^{0 or 1} * unit in the same square class
  auto normal = [&](const mpq_class& x) {
    int v = q_valuation(x, p);
    mpz_class n = x.get_num(), d = x.get_den();
    int_valuation_strip(n, p);
    int_valuation_strip(d, p);
    long long mod = ipow(p, k);
    mpz_class r = n * d;  // n/d = n d / d^2
    long long u = static_cast<long long>(mpz_fdiv_ui(r.get_mpz_t(), static_cast<unsigned long>(mod)));
    return mod_mul(u, (v & 1) ? p : 1, mod);
  };
  long long mod = ipow(p, k);
  long long A = normal(a), B = normal(b);
  for (long long x = 0; x < mod; ++x)
    for (long long y = 0; y < mod; ++y) {
      long long rhs = mod_pos(mod_mul(A, mod_mul(x, x, mod), mod) + mod_mul(B, mod_mul(y, y, mod), mod), mod);
      for (long long z = 0; z < mod; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        if (mod_mul(z, z, mod) == rhs) return 1;
      }
    }
  return -1;
}

int hasse_invariant(const RationalMatrix& X, int p, PivotOrder order) {
  auto D = diagonalize(X, order);
  int s = 1;
  for (size_t i = 0; i < D.d.size(); ++i)
    for (size_t j = i + 1; j < D.d.size(); ++j) s *= hilbert_symbol(D.d[i], D.d[j], p);
  return s;
}

int clifford_rho(const RationalMatrix& X, int p) {
  if (!X.is_square() || X.rows() % 2 == 0) throw std::invalid_argument("clifford_rho: odd size expected");
  mpq_class det = X.det();
  if (det == 0) throw std::domain_error("clifford_rho: singular matrix");
  long long n = static_cast<long long>(X.rows() - 1) / 2;
  int s = 1;
  if ((n * (n + 1) / 2) % 2 == 1) s *= hilbert_symbol(-1, -1, p);
  s *= hilbert_symbol(n % 2 ? mpq_class(-1) : mpq_class(1), det, p);
  return s * hasse_invariant(X, p);
}

JordanData jordan_mod(const long long* entries, int m, int p, int K) {
  long long mod = ipow(p, K);
  std::vector<long long> A(entries, entries + m * m);
  auto at = [&](int i, int j) -> long long& { return A[static_cast<size_t>(i * m + j)]; };
  auto val = [&](long long x) {
    if (x == 0) return K;
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  };
  JordanData J;
  for (int i = 0; i < m; ++i) {
    // pivot of minimal valuation in the trailing block
    int best = K, bi = -1, bj = -1;
    for (int r = i; r < m; ++r)
      for (int c = r; c < m; ++c) best = std::min(best, val(at(r, c)));
    if (best >= K) return J;
    for (int r = i; r < m && bi < 0; ++r)
      if (val(at(r, r)) == best) bi = bj = r;
    for (int r = i; r < m && bi < 0; ++r)
      for (int c = r + 1; c < m && bi < 0; ++c)
        if (val(at(r, c)) == best) bi = r, bj = c;
    if (bi != bj) {
      // diagonal entries in the block have larger valuation: row/col bi += row/col bj
      for (int c = 0; c < m; ++c) at(bi, c) = mod_pos(at(bi, c) + at(bj, c), mod);
      for (int r = 0; r < m; ++r) at(r, bi) = mod_pos(at(r, bi) + at(r, bj), mod);
    }
    if (bi != i) {
      for (int c = 0; c < m; ++c) std::swap(at(i, c), at(bi, c));
      for (int r = 0; r < m; ++r) std::swap(at(r, i), at(r, bi));
    }
    long long piv = at(i, i);
    int v = val(piv);
    if (v >= K) return J;
    long long pv = ipow(p, v), modv = ipow(p, K - v);
    long long uinv = mod_inverse((piv / pv) % modv, modv);
    for (int j = i + 1; j < m; ++j) {
      long long a = at(j, i);
      if (a == 0) continue;
      long long c = mod_mul(a / pv, uinv, modv);  // a has valuation >= v
      for (int t = 0; t < m; ++t) at(j, t) = mod_pos(at(j, t) - mod_mul(c, at(i, t), mod), mod);
      for (int t = 0; t < m; ++t) at(t, j) = mod_pos(at(t, j) - mod_mul(c, at(t, i), mod), mod);
    }
    J.e.push_back(v);
    J.u.push_back((piv / pv) % p);
  }
  J.ok = true;
  return J;
}

int clifford_rho_jordan(const JordanData& J, int p, int shift) {
  if (!J.ok) throw std::domain_error("clifford_rho_jordan: singular Jordan data");
  int m = static_cast<int>(J.e.size());
  if (m % 2 == 0) throw std::invalid_argument("clifford_rho: odd size expected");
  int n = (m - 1) / 2;
  std::vector<int> e(J.e);
  for (auto& x : e) x += shift;
  int s = 1;
  if ((n * (n + 1) / 2) % 2 == 1) s *= hilbert_symbol_pu(0, p - 1, 0, p - 1, p);
  int edet = 0;
  long long udet = 1;
  for (int i = 0; i < m; ++i) {
    edet += e[static_cast<size_t>(i)];
    udet = mod_mul(udet, J.u[static_cast<size_t>(i)], p);
  }
  s *= hilbert_symbol_pu(0, n % 2 ? p - 1 : 1, edet, udet, p);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      s *= hilbert_symbol_pu(e[static_cast<size_t>(i)], J.u[static_cast<size_t>(i)], e[static_cast<size_t>(j)],
                             J.u[static_cast<size_t>(j)], p);
  return s;
}

std::vector<signed char> legendre_table(int p) {
  std::vector<signed char> t(static_cast<size_t>(p), 0);
  for (long long x = 1; x < p; ++x) t[static_cast<size_t>(x * x % p)] = 1;
  for (int r = 1; r < p; ++r)
    if (t[static_cast<size_t>(r)] == 0) t[static_cast<size_t>(r)] = -1;
  return t;
}

namespace {

// Jordan splitting of A (m x m, residues mod p^K) in place; false if singular mod p^K
bool jordan_small(long long* A, int m, const CliffordTables& T, int* ev, int* lu) {
  const int K = T.K, p = T.p;
  const long long mod = T.mod;
  const unsigned char* val = T.val.data();
  for (int i = 0; i < m; ++i) {
    int best = K, bi = -1, bj = -1;
    for (int r = i; r < m; ++r)
      for (int c = r; c < m; ++c) best = std::min<int>(best, val[A[r * m + c]]);
    if (best >= K) return false;
    for (int r = i; r < m && bi < 0; ++r)
      if (val[A[r * m + r]] == best) bi = bj = r;
    for (int r = i; r < m && bi < 0; ++r)
      for (int c = r + 1; c < m && bi < 0; ++c)
        if (val[A[r * m + c]] == best) bi = r, bj = c;
    if (bi != bj) {
      for (int c = 0; c < m; ++c) A[bi * m + c] = (A[bi * m + c] + A[bj * m + c]) % mod;
      for (int r = 0; r < m; ++r) A[r * m + bi] = (A[r * m + bi] + A[r * m + bj]) % mod;
    }
    if (bi != i) {
      for (int c = 0; c < m; ++c) std::swap(A[i * m + c], A[bi * m + c]);
      for (int r = 0; r < m; ++r) std::swap(A[r * m + i], A[r * m + bi]);
    }
    long long piv = A[i * m + i];
    int v = val[piv];
    if (v >= K) return false;
    long long pv = ipow(p, v), modv = mod / pv;
    long long uinv = T.unit_inv[static_cast<size_t>(piv)];
    for (int j = i + 1; j < m; ++j) {
      long long a = A[j * m + i];
      if (a == 0) continue;
      long long c = (a / pv) % modv * uinv % modv;
      for (int t = 0; t < m; ++t) A[j * m + t] = mod_pos(A[j * m + t] - c * A[i * m + t] % mod, mod);
      for (int t = 0; t < m; ++t) A[t * m + j] = mod_pos(A[t * m + j] - c * A[t * m + i] % mod, mod);
    }
    ev[i] = v;
    lu[i] = T.leg[static_cast<size_t>((piv / pv) % p)];
  }
  return true;
}

int rho_from_jordan(const int* ev, const int* lu, int m, int p, const signed char* leg) {
  const int n = (m - 1) / 2;
  const bool odd_eps = ((p - 1) / 2) % 2 == 1;
  auto pw = [](int s, int e) { return (e & 1) ? s : 1; };
  int edet = 0;
  for (int i = 0; i < m; ++i) edet += ev[i];
  // ((-1)^n, det): only the unit (-1)^n against p^edet contributes
  int s = (n % 2 == 1) ? pw(leg[p - 1], edet) : 1;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (odd_eps && (ev[i] & 1) && (ev[j] & 1)) s = -s;
      s *= pw(lu[i], ev[j]) * pw(lu[j], ev[i]);
    }
  return s;
}

}  // namespace

CliffordTables::CliffordTables(int p_, int K_) : p(p_), K(K_), mod(ipow(p_, K_)) {
  if (mod > (1LL << 22)) throw std::invalid_argument("CliffordTables: p^K too large for tables");
  leg = legendre_table(p);
  val.assign(static_cast<size_t>(mod), 0);
  unit_inv.assign(static_cast<size_t>(mod), 0);
  val[0] = static_cast<unsigned char>(K);
  for (long long r = 1; r < mod; ++r) {
    long long u = r;
    int v = 0;
    while (u % p == 0) u /= p, ++v;
    val[static_cast<size_t>(r)] = static_cast<unsigned char>(v);
    long long mv = ipow(p, K - v);
    unit_inv[static_cast<size_t>(r)] = mod_inverse(u % mv, mv);
  }
  if (mod <= 256) {
    jordan2.assign(static_cast<size_t>(mod * mod * mod), 0);
    for (long long a = 0; a < mod; ++a)
      for (long long b = 0; b < mod; ++b)
        for (long long c = 0; c < mod; ++c) {
          long long A[4] = {a, b, b, c};
          int ev[2], lu[2];
          if (!jordan_small(A, 2, *this, ev, lu)) continue;
          // bit 15 set marks nonsingular; e1, e2 in 6 bits each, Legendre signs in bits 12, 13
          jordan2[static_cast<size_t>((a * mod + b) * mod + c)] = static_cast<unsigned short>(
              0x8000 | ev[0] | (ev[1] << 6) | ((lu[0] < 0) << 12) | ((lu[1] < 0) << 13));
        }
  }
}

int clifford_rho_sym_fast(const long long* upper, int m, int shift, const CliffordTables& T) {
  long long A[9];
  for (int i = 0, e = 0; i < m; ++i)
    for (int j = i; j < m; ++j, ++e) A[i * m + j] = A[j * m + i] = upper[e];
  int ev[3], lu[3];
  bool done = false;
  if (m == 3 && !T.jordan2.empty()) {
    const long long M = T.mod;
    for (int i = 0; i < 3 && !done; ++i) {
      long long d = A[i * 3 + i];
      if (T.val[static_cast<size_t>(d)] != 0) continue;
      // unit pivot: the rest is the 2 x 2 Schur complement
      int j = (i + 1) % 3, k = (i + 2) % 3;
      if (j > k) std::swap(j, k);
      long long u = T.unit_inv[static_cast<size_t>(d)];
      long long aj = A[i * 3 + j], ak = A[i * 3 + k];
      long long s11 = mod_pos(A[j * 3 + j] - aj * aj % M * u, M);
      long long s12 = mod_pos(A[j * 3 + k] - aj * ak % M * u, M);
      long long s22 = mod_pos(A[k * 3 + k] - ak * ak % M * u, M);
      unsigned short code = T.jordan2[static_cast<size_t>((s11 * M + s12) * M + s22)];
      if (!code) return 0;
      ev[0] = 0;
      lu[0] = T.leg[static_cast<size_t>(d % T.p)];
      ev[1] = code & 63;
      ev[2] = (code >> 6) & 63;
      lu[1] = (code >> 12) & 1 ? -1 : 1;
      lu[2] = (code >> 13) & 1 ? -1 : 1;
      done = true;
    }
  }
  if (!done && !jordan_small(A, m, T, ev, lu)) return 0;
  for (int i = 0; i < m; ++i) ev[i] += shift;
  return rho_from_jordan(ev, lu, m, T.p, T.leg.data());
}

}  // namespace padicharm
