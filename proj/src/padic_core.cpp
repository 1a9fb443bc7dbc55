#include "padicharm/padic_core.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace padicharm {

void LocalFieldConfig::validate() const {
  if (p == 2) throw std::invalid_argument("p = 2 is not supported");
  if (!is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  if (default_level < 1) throw std::invalid_argument("level must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

LocalFieldConfig LocalFieldConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  LocalFieldConfig c;
  if (j.contains("p")) c.p = j.at("p").get<int>();
  if (j.contains("level")) c.default_level = j.at("level").get<int>();
  if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
  c.validate();
  return c;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long long ipow(long long base, int exp) {
  if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1LL << 62) / (base < 0 ? -base : base)) throw std::overflow_error("ipow overflow");
    r *= base;
  }
  return r;
}

long long mod_pos(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long mod_mul(long long a, long long b, long long m) {
  return static_cast<long long>(static_cast<__int128>(mod_pos(a, m)) * mod_pos(b, m) % m);
}

long long mod_pow(long long a, long long e, long long m) {
  long long r = 1 % m;
  a = mod_pos(a, m);
  while (e > 0) {
    if (e & 1) r = mod_mul(r, a, m);
    a = mod_mul(a, a, m);
    e >>= 1;
  }
  return r;
}

long long mod_inverse(long long a, long long m) {
  long long g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
  while (a1 != 0) {
    long long q = g / a1;
    long long t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::domain_error("mod_inverse: not invertible");
  return mod_pos(x, m);
}

int p_valuation(long long n, int p) {
  if (n == 0) throw std::domain_error("valuation undefined");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

long long totient_pp(int p, int N) {
  if (N < 1) throw std::invalid_argument("level must be >= 1");
  return (p - 1) * ipow(p, N - 1);
}

PadicElement::PadicElement(int p, int valuation, long long unit, int level)
    : p_(p), valuation_(valuation), level_(level) {
  if (level < 1) throw std::invalid_argument("PadicElement: level must be >= 1");
  unit_ = mod_pos(unit, ipow(p, level));
  if (unit_ % p == 0) throw std::invalid_argument("PadicElement: unit part divisible by p");
}

PadicElement PadicElement::from_rational(int p, long long num, long long den, int level) {
  if (num == 0) throw std::domain_error("valuation undefined");
  if (den == 0) throw std::domain_error("zero denominator");
  int v = p_valuation(num, p) - p_valuation(den, p);
  long long n = num, d = den;
  while (n % p == 0) n /= p;
  while (d % p == 0) d /= p;
  long long m = ipow(p, level);
  return PadicElement(p, v, mod_mul(n, mod_inverse(d, m), m), level);
}

double PadicElement::abs() const { return std::pow(static_cast<double>(p_), -valuation_); }

PadicElement PadicElement::operator*(const PadicElement& o) const {
  if (o.p_ != p_) throw std::invalid_argument("prime mismatch");
  int L = std::min(level_, o.level_);
  long long m = ipow(p_, L);
  return PadicElement(p_, valuation_ + o.valuation_, mod_mul(unit_, o.unit_, m), L);
}

PadicElement PadicElement::inverse() const {
  long long m = ipow(p_, level_);
  return PadicElement(p_, -valuation_, mod_inverse(unit_, m), level_);
}

PadicElement PadicElement::operator-() const {
  return PadicElement(p_, valuation_, -unit_, level_);
}

PadicElement PadicElement::operator+(const PadicElement& o) const {
  if (o.p_ != p_) throw std::invalid_argument("prime mismatch");
  int v = std::min(valuation_, o.valuation_);
  int P = std::min(absolute_precision(), o.absolute_precision());
  if (P <= v) throw std::domain_error("insufficient precision for sum");
  long long m = ipow(p_, P - v);
  long long s = mod_pos(mod_mul(unit_, ipow(p_, valuation_ - v), m) +
                            mod_mul(o.unit_, ipow(p_, o.valuation_ - v), m),
                        m);
  if (s == 0) throw std::domain_error("sum vanishes at the available precision");
  int t = p_valuation(s, p_);
  return PadicElement(p_, v + t, s / ipow(p_, t), P - v - t);
}

PadicElement PadicElement::with_level(int level) const {
  if (level > level_) throw std::invalid_argument("cannot raise precision");
  return PadicElement(p_, valuation_, unit_, level);
}

OrdAbsAc ord_abs_ac(const PadicElement& x) {
  OrdAbsAc r{};
  r.ord = x.valuation();
  if (r.ord >= 0) {
    r.abs_num = 1;
    r.abs_den = ipow(x.p(), r.ord);
  } else {
    r.abs_num = ipow(x.p(), -r.ord);
    r.abs_den = 1;
  }
  r.ac = x.unit();
  return r;
}

FracPart frac_part(const PadicElement& x) {
  int v = x.valuation();
  if (v >= 0) return {0, 1};
  if (-v > x.level()) throw std::domain_error("insufficient precision to determine frac_p");
  long long den = ipow(x.p(), -v);
  return {mod_pos(x.unit(), den), den};
}

cplx psi_of_fraction(long long a, int e, int p, int sign) {
  if (e <= 0) return {1.0, 0.0};
  long long den = ipow(p, e);
  long long r = mod_pos(a, den);
  double t = kTwoPi * static_cast<double>(sign) * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(t), std::sin(t)};
}

cplx psi_eval(const PadicElement& x, int sign) {
  FracPart f = frac_part(x);
  if (f.num == 0) return {1.0, 0.0};
  double t = kTwoPi * static_cast<double>(sign) * static_cast<double>(f.num) / static_cast<double>(f.den);
  return {std::cos(t), std::sin(t)};
}

long long UnitGroup::log(long long u) const {
  long long r = mod_pos(u, modulus);
  int l = log_table[static_cast<size_t>(r)];
  if (l < 0) throw std::domain_error("discrete log of a non-unit");
  return l;
}

namespace {

std::vector<long long> prime_factors(long long n) {
  std::vector<long long> f;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

bool is_primitive_root(long long g, long long modulus, long long order) {
  if (std::gcd(g, modulus) != 1) return false;
  for (long long r : prime_factors(order))
    if (mod_pow(g, order / r, modulus) == 1) return false;
  return true;
}

}  // namespace

long long universal_generator(int p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("odd prime required");
  long long m = static_cast<long long>(p) * p;
  long long order = static_cast<long long>(p - 1) * p;
  for (long long g = 2; g < m; ++g)
    if (is_primitive_root(g, m, order)) return g;
  throw std::logic_error("no primitive root found");
}

std::shared_ptr<const UnitGroup> unit_group(int p, int level) {
  if (level < 1) throw std::invalid_argument("unit_group: level must be >= 1");
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("unit_group: odd prime required");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const UnitGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, level);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto G = std::make_shared<UnitGroup>();
  G->p = p;
  G->level = level;
  G->modulus = ipow(p, level);
  if (G->modulus > (1LL << 26)) throw std::invalid_argument("unit_group: modulus too large");
  G->order = totient_pp(p, level);
  G->generator = universal_generator(p) % G->modulus;
  G->elements.resize(static_cast<size_t>(G->order));
  G->log_table.assign(static_cast<size_t>(G->modulus), -1);
  long long x = 1;
  for (long long i = 0; i < G->order; ++i) {
    G->elements[static_cast<size_t>(i)] = x;
    G->log_table[static_cast<size_t>(x)] = static_cast<int>(i);
    x = mod_mul(x, G->generator, G->modulus);
  }
  cache.emplace(key, G);
  return G;
}

}  // namespace padicharm
