#include "padicharm/ratfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace padicharm {

namespace {

constexpr double kTrim = 1e-14;

double max_abs(const Poly& a) {
  double m = 0.0;
  for (const auto& c : a) m = std::max(m, std::abs(c));
  return m;
}

double abs_eval(const Poly& a, double r) {
  double s = 0.0, rp = 1.0;
  for (const auto& c : a) {
    s += std::abs(c) * rp;
    rp *= r;
  }
  return s;
}

// divide by (z - r), dropping the remainder
Poly deflate(const Poly& a, cplx r) {
  if (a.size() < 2) return {};
  size_t n = a.size() - 1;
  Poly q(n);
  cplx carry = a[n];
  for (size_t i = n; i-- > 0;) {
    q[i] = carry;
    carry = a[i] + carry * r;
  }
  return q;
}

cplx ipow_c(cplx z, int k) {
  if (k == 0) return 1.0;
  cplx base = k > 0 ? z : 1.0 / z;
  int e = k > 0 ? k : -k;
  cplx r = 1.0;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

bool poly_close(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return false;
  double s = std::max(max_abs(a), max_abs(b));
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-15 * s) return false;
  return true;
}

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

cplx poly_eval(const Poly& a, cplx z) {
  cplx s = 0.0;
  for (size_t i = a.size(); i-- > 0;) s = s * z + a[i];
  return s;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() < 2) return {};
  Poly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<double>(i);
  return d;
}

std::vector<cplx> poly_roots(const Poly& a) {
  Poly p = a;
  while (!p.empty() && std::abs(p.back()) <= kTrim * max_abs(p)) p.pop_back();
  if (p.size() < 2) return {};
  size_t n = p.size() - 1;
  std::vector<cplx> roots;
  if (n == 1) {
    roots.push_back(-p[0] / p[1]);
  } else {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (size_t i = 1; i < n; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (size_t i = 0; i < n; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -p[i] / p[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("poly_roots: eigen solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()(i));
  }
  Poly dp = poly_derivative(p);
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx f = poly_eval(p, r), d = poly_eval(dp, r);
      if (std::abs(d) < 1e-8 * abs_eval(dp, std::abs(r)) || std::abs(f) == 0.0) break;
      cplx nr = r - f / d;
      if (std::abs(nr - r) > 1e-6 * std::max(1.0, std::abs(r))) break;
      r = nr;
    }
  }
  return roots;
}

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots) {
  size_t n = roots.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double scale = std::max({std::abs(roots[i]), std::abs(roots[j]), 1e-300});
      double d = std::abs(roots[i] - roots[j]) / scale;
      if (d < 1e-6) {
        parent[find(i)] = find(j);
      } else if (d < 1e-4) {
        throw IllConditionedPoles("ill-conditioned poles: roots " + std::to_string(std::abs(roots[i])) +
                                  " and " + std::to_string(std::abs(roots[j])) + " nearly collide");
      }
    }
  }
  std::vector<RootCluster> out;
  std::vector<long> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.push_back({0.0, 0});
    }
    auto& c = out[static_cast<size_t>(slot[r])];
    c.root += roots[i];
    c.multiplicity += 1;
  }
  for (auto& c : out) c.root /= static_cast<double>(c.multiplicity);
  return out;
}

RationalFunctionZ::RationalFunctionZ() : num_(), den_{1.0}, shift_(0) {}

RationalFunctionZ::RationalFunctionZ(Poly num, Poly den, int shift)
    : num_(std::move(num)), den_(std::move(den)), shift_(shift) {
  normalize();
}

void RationalFunctionZ::normalize() {
  auto trim_high = [](Poly& p) {
    double m = max_abs(p);
    while (!p.empty() && std::abs(p.back()) <= kTrim * m) p.pop_back();
  };
  trim_high(num_);
  trim_high(den_);
  if (den_.empty()) throw std::domain_error("RationalFunctionZ: zero denominator");
  if (num_.empty()) {
    den_ = {1.0};
    shift_ = 0;
    return;
  }
  auto strip_low = [](Poly& p) {
    double m = max_abs(p);
    size_t k = 0;
    while (k < p.size() && std::abs(p[k]) <= kTrim * m) ++k;
    p.erase(p.begin(), p.begin() + static_cast<long>(k));
    return static_cast<int>(k);
  };
  shift_ += strip_low(num_);
  shift_ -= strip_low(den_);
  cplx d0 = den_[0];
  for (auto& c : num_) c /= d0;
  for (auto& c : den_) c /= d0;
}

RationalFunctionZ RationalFunctionZ::constant(cplx c) { return RationalFunctionZ({c}, {1.0}, 0); }

RationalFunctionZ RationalFunctionZ::monomial(cplx c, int k) { return RationalFunctionZ({c}, {1.0}, k); }

RationalFunctionZ RationalFunctionZ::geometric(cplx alpha, cplx b, int start) {
  if (alpha == 0.0) return start == 0 ? constant(b) : RationalFunctionZ();
  return RationalFunctionZ({b * ipow_c(alpha, start)}, {1.0, -alpha}, start);
}

RationalFunctionZ RationalFunctionZ::from_laurent(int low, const std::vector<cplx>& coeffs) {
  return RationalFunctionZ(coeffs, {1.0}, low);
}

cplx RationalFunctionZ::operator()(cplx z) const {
  if (num_.empty()) return 0.0;
  return ipow_c(z, shift_) * poly_eval(num_, z) / poly_eval(den_, z);
}

std::vector<cplx> RationalFunctionZ::laurent_coeffs(int m0, int m1) const {
  std::vector<cplx> out;
  if (m1 < m0) return out;
  out.assign(static_cast<size_t>(m1 - m0 + 1), 0.0);
  if (num_.empty()) return out;
  int top = m1 - shift_;
  if (top < 0) return out;
  std::vector<cplx> c(static_cast<size_t>(top + 1), 0.0);
  for (int k = 0; k <= top; ++k) {
    cplx s = k < static_cast<int>(num_.size()) ? num_[static_cast<size_t>(k)] : 0.0;
    int lim = std::min<int>(k, static_cast<int>(den_.size()) - 1);
    for (int i = 1; i <= lim; ++i) s -= den_[static_cast<size_t>(i)] * c[static_cast<size_t>(k - i)];
    c[static_cast<size_t>(k)] = s / den_[0];
  }
  for (int m = m0; m <= m1; ++m) {
    int k = m - shift_;
    if (k >= 0) out[static_cast<size_t>(m - m0)] = c[static_cast<size_t>(k)];
  }
  return out;
}

cplx RationalFunctionZ::laurent_coeff(int m) const { return laurent_coeffs(m, m)[0]; }

RationalFunctionZ RationalFunctionZ::scale_arg(cplx c) const {
  if (num_.empty()) return *this;
  if (c == 0.0) throw std::domain_error("scale_arg: zero scale");
  Poly n = num_, d = den_;
  cplx cp = 1.0;
  for (size_t i = 0; i < std::max(n.size(), d.size()); ++i) {
    if (i < n.size()) n[i] *= cp;
    if (i < d.size()) d[i] *= cp;
    cp *= c;
  }
  cplx f = ipow_c(c, shift_);
  for (auto& x : n) x *= f;
  return RationalFunctionZ(std::move(n), std::move(d), shift_);
}

RationalFunctionZ RationalFunctionZ::square_arg() const {
  if (num_.empty()) return *this;
  Poly n(2 * num_.size() - 1, 0.0), d(2 * den_.size() - 1, 0.0);
  for (size_t i = 0; i < num_.size(); ++i) n[2 * i] = num_[i];
  for (size_t i = 0; i < den_.size(); ++i) d[2 * i] = den_[i];
  return RationalFunctionZ(std::move(n), std::move(d), 2 * shift_);
}

RationalFunctionZ RationalFunctionZ::invert_arg() const {
  if (num_.empty()) return *this;
  Poly n(num_.rbegin(), num_.rend()), d(den_.rbegin(), den_.rend());
  int dn = static_cast<int>(num_.size()) - 1, dd = static_cast<int>(den_.size()) - 1;
  return RationalFunctionZ(std::move(n), std::move(d), -shift_ - dn + dd);
}

RationalFunctionZ RationalFunctionZ::operator+(const RationalFunctionZ& o) const {
  if (num_.empty()) return o;
  if (o.num_.empty()) return *this;
  const RationalFunctionZ* a = this;
  const RationalFunctionZ* b = &o;
  if (a->shift_ > b->shift_) std::swap(a, b);
  int gap = b->shift_ - a->shift_;
  Poly bn(static_cast<size_t>(gap), 0.0);
  bn.insert(bn.end(), b->num_.begin(), b->num_.end());
  if (poly_close(a->den_, b->den_)) return RationalFunctionZ(poly_add(a->num_, bn), a->den_, a->shift_);
  return RationalFunctionZ(poly_add(poly_mul(a->num_, b->den_), poly_mul(bn, a->den_)),
                           poly_mul(a->den_, b->den_), a->shift_);
}

RationalFunctionZ RationalFunctionZ::operator-(const RationalFunctionZ& o) const { return *this + (-o); }

RationalFunctionZ RationalFunctionZ::operator*(const RationalFunctionZ& o) const {
  if (num_.empty() || o.num_.empty()) return {};
  return RationalFunctionZ(poly_mul(num_, o.num_), poly_mul(den_, o.den_), shift_ + o.shift_);
}

RationalFunctionZ RationalFunctionZ::operator/(const RationalFunctionZ& o) const {
  if (o.num_.empty()) throw std::domain_error("division by the zero rational function");
  if (num_.empty()) return {};
  return RationalFunctionZ(poly_mul(num_, o.den_), poly_mul(den_, o.num_), shift_ - o.shift_);
}

RationalFunctionZ RationalFunctionZ::operator*(cplx c) const {
  if (c == 0.0 || num_.empty()) return {};
  Poly n = num_;
  for (auto& x : n) x *= c;
  return RationalFunctionZ(std::move(n), den_, shift_);
}

RationalFunctionZ RationalFunctionZ::reduced(double tol) const {
  if (num_.empty() || den_.size() < 2) return *this;
  Poly n = num_, d = den_;
  auto clusters = cluster_roots(poly_roots(d));
  for (const auto& c : clusters) {
    for (int k = 0; k < c.multiplicity; ++k) {
      if (n.size() < 2) break;
      double scale = abs_eval(n, std::abs(c.root));
      if (std::abs(poly_eval(n, c.root)) > tol * scale) break;
      n = deflate(n, c.root);
      d = deflate(d, c.root);
    }
  }
  return RationalFunctionZ(std::move(n), std::move(d), shift_);
}

std::vector<cplx> RationalFunctionZ::poles(double tol) const {
  RationalFunctionZ r = reduced(tol);
  std::vector<cplx> out;
  for (const auto& c : cluster_roots(poly_roots(r.den_)))
    for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.root);
  return out;
}

bool RationalFunctionZ::is_laurent_polynomial(double tol, cplx* offending_pole) const {
  RationalFunctionZ r = reduced(tol);
  if (r.den_.size() < 2) return true;
  if (offending_pole) {
    auto roots = poly_roots(r.den_);
    *offending_pole = roots.empty() ? cplx(0.0) : roots.front();
  }
  return false;
}

PartialFractions RationalFunctionZ::partial_fractions(double tol) const {
  PartialFractions pf;
  RationalFunctionZ r = reduced(tol);
  if (r.num_.empty()) return pf;
  const int s = r.shift_;
  auto clusters = cluster_roots(poly_roots(r.den_));
  const Poly& N = r.num_;
  for (const auto& c : clusters) {
    if (c.multiplicity > 2)
      throw IllConditionedPoles("ill-conditioned poles: multiplicity " + std::to_string(c.multiplicity) +
                                " is not supported");
    cplx root = c.root;
    if (std::abs(root) == 0.0) throw std::logic_error("partial_fractions: pole at zero after normalization");
    Poly E = deflate(r.den_, root);
    if (c.multiplicity == 1) {
      // b = lim (1 - z/r) R = -(1/r) r^s N(r) / E(r)
      cplx H = ipow_c(root, s) * poly_eval(N, root) / poly_eval(E, root);
      pf.terms.push_back({1.0 / root, -H / root, 1});
    } else {
      E = deflate(E, root);
      cplx Ev = poly_eval(E, root), Nv = poly_eval(N, root);
      cplx H = ipow_c(root, s) * Nv / Ev;
      cplx dlogH = static_cast<double>(s) / root + poly_eval(poly_derivative(N), root) / Nv -
                   poly_eval(poly_derivative(E), root) / Ev;
      cplx Hp = H * dlogH;
      if (Nv == 0.0) Hp = ipow_c(root, s) * poly_eval(poly_derivative(N), root) / Ev;
      pf.terms.push_back({1.0 / root, H / (root * root), 2});
      pf.terms.push_back({1.0 / root, -Hp / root, 1});
    }
  }
  int dn = static_cast<int>(N.size()) - 1, dd = static_cast<int>(r.den_.size()) - 1;
  int lo = std::min(s, 0);
  int hi = std::max(s + dn - dd, -1);
  if (hi >= lo) {
    auto coeffs = r.laurent_coeffs(lo, hi);
    for (int m = std::max(lo, 0); m <= hi; ++m) {
      for (const auto& t : pf.terms) {
        cplx am = ipow_c(t.alpha, m);
        coeffs[static_cast<size_t>(m - lo)] -= t.power == 1 ? t.b * am : t.b * static_cast<double>(m + 1) * am;
      }
    }
    double scale = 0.0;
    for (auto& c : coeffs) scale = std::max(scale, std::abs(c));
    for (const auto& t : pf.terms) scale = std::max(scale, std::abs(t.b));
    for (auto& c : coeffs)
      if (std::abs(c) < 1e-12 * scale) c = 0.0;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    size_t k = 0;
    while (k < coeffs.size() && coeffs[k] == 0.0) ++k;
    pf.laurent_low = lo + static_cast<int>(k);
    pf.laurent.assign(coeffs.begin() + static_cast<long>(k), coeffs.end());
  }
  return pf;
}

cplx PartialFractions::eval(cplx z) const {
  cplx s = 0.0;
  for (size_t i = 0; i < laurent.size(); ++i) s += laurent[i] * ipow_c(z, laurent_low + static_cast<int>(i));
  for (const auto& t : terms) {
    cplx d = 1.0 - t.alpha * z;
    s += t.power == 1 ? t.b / d : t.b / (d * d);
  }
  return s;
}

cplx PartialFractions::coeff(int m) const {
  cplx s = 0.0;
  int idx = m - laurent_low;
  if (idx >= 0 && idx < static_cast<int>(laurent.size())) s += laurent[static_cast<size_t>(idx)];
  if (m >= 0) {
    for (const auto& t : terms) {
      cplx am = ipow_c(t.alpha, m);
      s += t.power == 1 ? t.b * am : t.b * static_cast<double>(m + 1) * am;
    }
  }
  return s;
}

const std::vector<cplx>& default_samples() {
  static const std::vector<cplx> samples = [] {
    const double radii[8] = {0.42, 0.63, 0.81, 1.23, 1.58, 2.27, 0.5, 1.9};
    std::vector<cplx> s;
    for (int k = 0; k < 20; ++k) s.push_back(std::polar(radii[k % 8], kTwoPi / 20.0 * (k + 0.25)));
    return s;
  }();
  return samples;
}

double deviation(const RationalFunctionZ& a, const RationalFunctionZ& b, const std::vector<cplx>& samples) {
  double worst = 0.0;
  for (cplx z : samples) {
    cplx A = a.is_zero() ? 0.0 : ipow_c(z, a.shift()) * poly_eval(a.num(), z) * poly_eval(b.den(), z);
    cplx B = b.is_zero() ? 0.0 : ipow_c(z, b.shift()) * poly_eval(b.num(), z) * poly_eval(a.den(), z);
    double scale = std::max(std::abs(A), std::abs(B));
    if (scale < 1e-300) continue;
    worst = std::max(worst, std::abs(A - B) / scale);
  }
  return worst;
}

bool approx_equal(const RationalFunctionZ& a, const RationalFunctionZ& b, double rel_tol) {
  return deviation(a, b) <= rel_tol;
}

nlohmann::json cplx_to_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

cplx cplx_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json RationalFunctionZ::to_json() const {
  Poly n = num_, d = den_;
  if (shift_ > 0) n.insert(n.begin(), static_cast<size_t>(shift_), 0.0);
  if (shift_ < 0) d.insert(d.begin(), static_cast<size_t>(-shift_), 0.0);
  nlohmann::json j;
  j["num"] = nlohmann::json::array();
  j["den"] = nlohmann::json::array();
  for (auto& c : n) j["num"].push_back(cplx_to_json(c));
  for (auto& c : d) j["den"].push_back(cplx_to_json(c));
  return j;
}

RationalFunctionZ RationalFunctionZ::from_json(const nlohmann::json& j) {
  Poly n, d;
  for (const auto& c : j.at("num")) n.push_back(cplx_from_json(c));
  for (const auto& c : j.at("den")) d.push_back(cplx_from_json(c));
  return RationalFunctionZ(std::move(n), std::move(d), 0);
}

}  // namespace padicharm
