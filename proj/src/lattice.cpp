#include "padicharm/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "padicharm/quad_forms.hpp"

namespace padicharm {

cplx psi_rational(const mpq_class& a, int p, int sign) {
  if (a == 0) return 1.0;
  int v = q_valuation(a, p);
  if (v >= 0) return 1.0;
  int e = -v;
  mpz_class num = a.get_num(), den = a.get_den();
  mpz_class pe;
  mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  mpz_class dprime = den / pe;
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), dprime.get_mpz_t(), pe.get_mpz_t()) == 0)
    throw std::logic_error("psi_rational: non-invertible denominator");
  mpz_class r = (num * inv) % pe;
  if (r < 0) r += pe;
  double t = r.get_d() / pe.get_d();
  double ang = kTwoPi * sign * t;
  return {std::cos(ang), std::sin(ang)};
}

mpq_class trace_pairing(const RationalMatrix& X, const RationalMatrix& Y) {
  mpq_class s = 0;
  for (size_t i = 0; i < X.rows(); ++i)
    for (size_t j = 0; j < X.cols(); ++j) s += X(i, j) * Y(j, i);
  return s;
}

LatticeTestFunction LatticeTestFunction::coset(int m, int p, const RationalMatrix& B, int r, cplx weight) {
  if (p == 2) throw std::invalid_argument("lattice functions need p odd");
  if (!B.is_symmetric() || static_cast<int>(B.rows()) != m) throw std::invalid_argument("coset: symmetric base expected");
  LatticeTestFunction f;
  f.m = m;
  f.p = p;
  LatticeTerm t;
  t.weight = weight;
  t.B = B;
  t.R.assign(static_cast<size_t>(m * m), r);
  t.C = RationalMatrix::zero(static_cast<size_t>(m), static_cast<size_t>(m));
  f.terms.push_back(t);
  return f;
}

LatticeTestFunction LatticeTestFunction::operator+(const LatticeTestFunction& o) const {
  if (o.m != m || o.p != p) throw std::invalid_argument("lattice function mismatch");
  LatticeTestFunction f = *this;
  f.terms.insert(f.terms.end(), o.terms.begin(), o.terms.end());
  return f;
}

LatticeTestFunction LatticeTestFunction::scaled(cplx c) const {
  LatticeTestFunction f = *this;
  for (auto& t : f.terms) t.weight *= c;
  return f;
}

cplx LatticeTestFunction::eval(const RationalMatrix& X) const {
  cplx s = 0.0;
  for (const auto& t : terms) {
    bool in = true;
    for (int i = 0; i < m && in; ++i)
      for (int j = i; j < m && in; ++j) {
        mpq_class d = X(static_cast<size_t>(i), static_cast<size_t>(j)) - t.B(static_cast<size_t>(i), static_cast<size_t>(j));
        if (d != 0 && q_valuation(d, p) < t.R_at(i, j)) in = false;
      }
    if (in) s += t.weight * psi_rational(trace_pairing(t.C, X), p);
  }
  return s;
}

LatticeTestFunction LatticeTestFunction::act_diagonal(const std::vector<mpq_class>& g) const {
  if (static_cast<int>(g.size()) != m) throw std::invalid_argument("act_diagonal: size mismatch");
  std::vector<int> v;
  for (const auto& x : g) v.push_back(q_valuation(x, p));
  LatticeTestFunction f = *this;
  for (auto& t : f.terms)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        size_t a = static_cast<size_t>(i), b = static_cast<size_t>(j);
        t.B(a, b) = t.B(a, b) / (g[a] * g[b]);
        t.C(a, b) = t.C(a, b) * g[a] * g[b];
        t.R[a * static_cast<size_t>(m) + b] -= v[a] + v[b];
      }
  return f;
}

nlohmann::json LatticeTestFunction::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  j["p"] = p;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms)
    j["terms"].push_back({{"weight", {t.weight.real(), t.weight.imag()}},
                          {"B", t.B.to_string()},
                          {"R", t.R},
                          {"C", t.C.to_string()}});
  return j;
}

LatticeTestFunction lattice_fourier(const LatticeTestFunction& f, int psi_sign) {
  if (f.p == 2) throw std::invalid_argument("lattice_fourier: p = 2 unsupported");
  LatticeTestFunction g;
  g.m = f.m;
  g.p = f.p;
  for (const auto& t : f.terms) {
    LatticeTerm u;
    int rsum = 0;
    for (int i = 0; i < f.m; ++i)
      for (int j = i; j < f.m; ++j) rsum += t.R_at(i, j);
    u.weight = t.weight * std::pow(static_cast<double>(f.p), -rsum) * psi_rational(trace_pairing(t.C, t.B), f.p);
    u.B = t.C * mpq_class(-psi_sign);
    u.R = t.R;
    for (auto& r : u.R) r = -r;
    u.C = t.B * mpq_class(psi_sign);
    g.terms.push_back(u);
  }
  return g;
}

}  // namespace padicharm
