#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "padicharm/fx_calculus.hpp"

namespace padicharm {

std::string to_string(TailKind k) {
  switch (k) {
    case TailKind::Compact: return "compact";
    case TailKind::Plus: return "plus";
    case TailKind::Minus: return "minus";
  }
  return "?";
}

TailKind tail_kind_from_string(const std::string& s) {
  if (s == "compact") return TailKind::Compact;
  if (s == "plus") return TailKind::Plus;
  if (s == "minus") return TailKind::Minus;
  throw std::invalid_argument("unknown tail kind " + s);
}

size_t FxFunction::cosets() const { return static_cast<size_t>(totient_pp(p, level)); }

std::vector<TailTerm> FxFunction::tail_terms() const {
  std::vector<TailTerm> t;
  if (tail == TailKind::Compact) return t;
  if (tail == TailKind::Plus) {
    t.push_back({0.0 + tail_shift, 1});
    for (int i = 0; i < n; ++i) t.push_back({i + 0.5 + tail_shift, 1});
    for (int i = 0; i < n; ++i) t.push_back({i + 0.5 + tail_shift, -1});
  } else {
    t.push_back({static_cast<double>(n) + tail_shift, 1});
    for (int i = 0; i < n; ++i) t.push_back({static_cast<double>(i) + tail_shift, 1});
    for (int i = 0; i < n; ++i) t.push_back({static_cast<double>(i) + tail_shift, -1});
  }
  return t;
}

const std::vector<cplx>& FxFunction::tail_table(size_t term) const {
  if (term == 0) return a0;
  size_t i = term - 1;
  if (i < static_cast<size_t>(n)) return a_plus.at(i);
  return a_minus.at(i - static_cast<size_t>(n));
}

std::vector<cplx>& FxFunction::tail_table(size_t term) {
  return const_cast<std::vector<cplx>&>(static_cast<const FxFunction&>(*this).tail_table(term));
}

cplx FxFunction::tail_value(int k, size_t coset) const {
  if (tail == TailKind::Compact) return 0.0;
  cplx s = 0.0;
  auto terms = tail_terms();
  for (size_t t = 0; t < terms.size(); ++t) {
    const auto& tab = tail_table(t);
    if (tab.empty()) continue;
    double mag = std::pow(static_cast<double>(p), -k * terms[t].exponent);
    double sg = (terms[t].sign < 0 && (k % 2 != 0)) ? -1.0 : 1.0;
    s += tab[coset] * (mag * sg);
  }
  return s;
}

cplx FxFunction::value_at(int k, size_t coset) const {
  if (k < k_min) return 0.0;
  if (k < k_tail) return window[static_cast<size_t>(k - k_min)][coset];
  return tail_value(k, coset);
}

cplx FxFunction::value(int k, long long u) const {
  auto G = unit_group(p, level);
  return value_at(k, static_cast<size_t>(G->log(u)));
}

FxFunction FxFunction::zero(int p, int level) {
  FxFunction f;
  f.p = p;
  f.level = level;
  return f;
}

FxFunction FxFunction::with_tail(int p, int level, TailKind kind, int n, double shift, int k_min, int k_tail) {
  FxFunction f;
  f.p = p;
  f.level = level;
  f.tail = kind;
  f.n = n;
  f.tail_shift = shift;
  f.k_min = k_min;
  f.k_tail = k_tail;
  size_t c = f.cosets();
  f.window.assign(static_cast<size_t>(std::max(0, k_tail - k_min)), std::vector<cplx>(c, 0.0));
  if (kind != TailKind::Compact) {
    f.a0.assign(c, 0.0);
    f.a_plus.assign(static_cast<size_t>(n), std::vector<cplx>(c, 0.0));
    f.a_minus.assign(static_cast<size_t>(n), std::vector<cplx>(c, 0.0));
  }
  return f;
}

FxFunction FxFunction::normalized_unit_indicator(int p, int k) {
  if (k < 1) throw std::invalid_argument("normalized_unit_indicator: k must be >= 1");
  FxFunction f = with_tail(p, k, TailKind::Compact, 0, 0.0, 0, 1);
  f.window[0][0] = static_cast<double>(totient_pp(p, k));
  return f;
}

FxFunction FxFunction::indicator_units(int p) {
  FxFunction f = with_tail(p, 1, TailKind::Compact, 0, 0.0, 0, 1);
  for (auto& v : f.window[0]) v = 1.0;
  return f;
}

FxFunction FxFunction::at_level(int L) const {
  if (L == level) return *this;
  if (L < level) throw std::invalid_argument("FxFunction::at_level cannot lower the level");
  FxFunction g = *this;
  g.level = L;
  size_t c_old = cosets(), c_new = g.cosets();
  auto lift = [&](const std::vector<cplx>& v) {
    if (v.empty()) return v;
    std::vector<cplx> w(c_new);
    for (size_t i = 0; i < c_new; ++i) w[i] = v[i % c_old];
    return w;
  };
  for (auto& row : g.window) row = lift(row);
  g.a0 = lift(a0);
  for (auto& t : g.a_plus) t = lift(t);
  for (auto& t : g.a_minus) t = lift(t);
  return g;
}

FxFunction FxFunction::scaled(cplx c) const {
  FxFunction g = *this;
  for (auto& row : g.window)
    for (auto& v : row) v *= c;
  for (auto& v : g.a0) v *= c;
  for (auto& t : g.a_plus)
    for (auto& v : t) v *= c;
  for (auto& t : g.a_minus)
    for (auto& v : t) v *= c;
  return g;
}

FxFunction FxFunction::times_abs_power(double c) const {
  FxFunction g = *this;
  for (int k = k_min; k < k_tail; ++k) {
    double f = std::pow(static_cast<double>(p), -k * c);
    for (auto& v : g.window[static_cast<size_t>(k - k_min)]) v *= f;
  }
  g.tail_shift += c;
  return g;
}

FxFunction FxFunction::with_window(int k_lo, int k_hi) const {
  int lo = std::min(k_lo, k_min), hi = std::max(k_hi + 1, k_tail);
  FxFunction g = *this;
  g.k_min = lo;
  g.k_tail = hi;
  size_t c = cosets();
  g.window.assign(static_cast<size_t>(hi - lo), std::vector<cplx>(c, 0.0));
  for (int k = lo; k < hi; ++k)
    for (size_t i = 0; i < c; ++i) g.window[static_cast<size_t>(k - lo)][i] = value_at(k, i);
  return g;
}

FxFunction combine(cplx a, const FxFunction& f, cplx b, const FxFunction& g) {
  if (f.p != g.p) throw std::invalid_argument("combine: prime mismatch");
  int L = std::max(f.level, g.level);
  FxFunction F = f.at_level(L), G = g.at_level(L);
  const FxFunction* shape = &F;
  if (F.tail == TailKind::Compact) shape = &G;
  if (F.tail != TailKind::Compact && G.tail != TailKind::Compact &&
      (F.tail != G.tail || F.n != G.n || std::abs(F.tail_shift - G.tail_shift) > 1e-12))
    throw std::invalid_argument("combine: incompatible tails");
  int lo = std::min(F.k_min, G.k_min), hi = std::max(F.k_tail, G.k_tail);
  FxFunction r = FxFunction::with_tail(F.p, L, shape->tail, shape->n, shape->tail_shift, lo, hi);
  size_t c = r.cosets();
  for (int k = lo; k < hi; ++k)
    for (size_t i = 0; i < c; ++i)
      r.window[static_cast<size_t>(k - lo)][i] = a * F.value_at(k, i) + b * G.value_at(k, i);
  if (r.tail != TailKind::Compact) {
    size_t T = r.tail_terms().size();
    for (size_t t = 0; t < T; ++t)
      for (size_t i = 0; i < c; ++i) {
        cplx v = 0.0;
        if (F.tail != TailKind::Compact) v += a * F.tail_table(t)[i];
        if (G.tail != TailKind::Compact) v += b * G.tail_table(t)[i];
        r.tail_table(t)[i] = v;
      }
  }
  return r;
}

double max_difference(const FxFunction& f, const FxFunction& g, int k_lo, int k_hi) {
  int L = std::max(f.level, g.level);
  FxFunction F = f.at_level(L), G = g.at_level(L);
  double m = 0.0;
  for (int k = k_lo; k <= k_hi; ++k)
    for (size_t i = 0; i < F.cosets(); ++i) m = std::max(m, std::abs(F.value_at(k, i) - G.value_at(k, i)));
  return m;
}

FxFunction fit_fx_function(int p, int level, TailKind kind, int n, double shift, int k_lo,
                           const std::vector<std::vector<cplx>>& shells, double residual_tol,
                           std::optional<int> tail_start) {
  int S = static_cast<int>(shells.size());
  if (kind == TailKind::Compact) {
    FxFunction f = FxFunction::with_tail(p, level, kind, n, shift, k_lo, k_lo + S);
    for (int k = 0; k < S; ++k) f.window[static_cast<size_t>(k)] = shells[static_cast<size_t>(k)];
    return f;
  }
  int T = 2 * n + 1;
  if (S < T)
    throw InsufficientTail("insufficient k for tail: " + std::to_string(S) + " exact shells, " + std::to_string(T) +
                           " needed");
  int k_tail = tail_start ? *tail_start : k_lo + S - T;
  int R = k_lo + S - k_tail;  // shells in the tail region
  if (k_tail < k_lo || R < T)
    throw InsufficientTail("insufficient k for tail: " + std::to_string(std::max(R, 0)) + " tail shells, " +
                           std::to_string(T) + " needed");
  FxFunction f = FxFunction::with_tail(p, level, kind, n, shift, k_lo, k_tail);
  for (int k = k_lo; k < k_tail; ++k) f.window[static_cast<size_t>(k - k_lo)] = shells[static_cast<size_t>(k - k_lo)];
  auto terms = f.tail_terms();
  // columns scaled by their size at the first tail shell, rows by the row maximum
  Eigen::MatrixXcd A(R, T);
  Eigen::VectorXd rs(R);
  for (int r = 0; r < R; ++r) {
    int k = k_tail + r;
    for (int c = 0; c < T; ++c) {
      double mag = std::pow(static_cast<double>(p), -(k - k_tail) * terms[static_cast<size_t>(c)].exponent);
      double sg = (terms[static_cast<size_t>(c)].sign < 0 && (k % 2 != 0)) ? -1.0 : 1.0;
      A(r, c) = mag * sg;
    }
    rs(r) = A.row(r).cwiseAbs().maxCoeff();
    A.row(r) /= rs(r);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
  if (qr.rank() < T) throw InsufficientTail("insufficient k for tail: singular fit system");
  for (size_t i = 0; i < f.cosets(); ++i) {
    Eigen::VectorXcd b(R);
    for (int r = 0; r < R; ++r) b(r) = shells[static_cast<size_t>(k_tail - k_lo + r)][i] / rs(r);
    Eigen::VectorXcd x = qr.solve(b);
    double res = (A * x - b).norm() / std::max(1.0, b.norm());
    if (res > residual_tol)
      throw InsufficientTail("insufficient k for tail: residual " + std::to_string(res));
    for (int t = 0; t < T; ++t) {
      double back = std::pow(static_cast<double>(p), k_tail * terms[static_cast<size_t>(t)].exponent);
      f.tail_table(static_cast<size_t>(t))[i] = x(t) * back;
    }
  }
  return f;
}

nlohmann::json FxFunction::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["level"] = level;
  j["k_min"] = k_min;
  j["k_tail"] = k_tail;
  auto G = unit_group(p, level);
  j["cosets"] = G->elements;
  nlohmann::json shells = nlohmann::json::array();
  for (int k = k_min; k < k_tail; ++k)
    for (size_t i = 0; i < cosets(); ++i) {
      cplx v = window[static_cast<size_t>(k - k_min)][i];
      shells.push_back({{"k", k}, {"coset", G->elements[i]}, {"re", v.real()}, {"im", v.imag()}});
    }
  j["shells"] = shells;
  nlohmann::json t;
  t["kind"] = to_string(tail);
  t["n"] = n;
  t["shift"] = tail_shift;
  auto tab = [](const std::vector<cplx>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto c : v) a.push_back(cplx_to_json(c));
    return a;
  };
  if (tail != TailKind::Compact) {
    t["a0"] = tab(a0);
    t["a_plus"] = nlohmann::json::array();
    t["a_minus"] = nlohmann::json::array();
    for (auto& v : a_plus) t["a_plus"].push_back(tab(v));
    for (auto& v : a_minus) t["a_minus"].push_back(tab(v));
  }
  j["tail"] = t;
  return j;
}

FxFunction FxFunction::from_json(const nlohmann::json& j) {
  const auto& t = j.at("tail");
  FxFunction f = with_tail(j.at("p").get<int>(), j.at("level").get<int>(), tail_kind_from_string(t.at("kind")),
                           t.value("n", 0), t.value("shift", 0.0), j.at("k_min").get<int>(), j.at("k_tail").get<int>());
  auto G = unit_group(f.p, f.level);
  for (const auto& s : j.at("shells")) {
    int k = s.at("k").get<int>();
    if (k < f.k_min || k >= f.k_tail) throw std::invalid_argument("shell outside window");
    size_t i = static_cast<size_t>(G->log(s.at("coset").get<long long>()));
    f.window[static_cast<size_t>(k - f.k_min)][i] = {s.at("re").get<double>(), s.value("im", 0.0)};
  }
  auto read = [](const nlohmann::json& a, std::vector<cplx>& v) {
    if (a.size() != v.size()) throw std::invalid_argument("tail table size mismatch");
    for (size_t i = 0; i < v.size(); ++i) v[i] = cplx_from_json(a[i]);
  };
  if (f.tail != TailKind::Compact) {
    read(t.at("a0"), f.a0);
    for (int i = 0; i < f.n; ++i) {
      read(t.at("a_plus").at(static_cast<size_t>(i)), f.a_plus[static_cast<size_t>(i)]);
      read(t.at("a_minus").at(static_cast<size_t>(i)), f.a_minus[static_cast<size_t>(i)]);
    }
  }
  return f;
}

}  // namespace padicharm
