#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace padicharm {

using cplx = std::complex<double>;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct LocalFieldConfig {
  int p = 3;
  int default_level = 1;
  double tolerance = 1e-9;

  void validate() const;
  static LocalFieldConfig from_json_file(const std::string& path);
};

bool is_prime(long long n);
long long ipow(long long base, int exp);
long long mod_pos(long long a, long long m);
long long mod_mul(long long a, long long b, long long m);
long long mod_pow(long long a, long long e, long long m);
long long mod_inverse(long long a, long long m);
// exponent of p in n, n != 0
int p_valuation(long long n, int p);
// (p-1)p^{N-1}
long long totient_pp(int p, int N);

// x = p^valuation * unit, unit known mod p^level
class PadicElement {
 public:
  PadicElement(int p, int valuation, long long unit, int level);

  static PadicElement from_rational(int p, long long num, long long den, int level);

  int p() const { return p_; }
  int valuation() const { return valuation_; }
  long long unit() const { return unit_; }
  int level() const { return level_; }
  // ord + level: digits known in absolute terms
  int absolute_precision() const { return valuation_ + level_; }

  double abs() const;
  PadicElement operator*(const PadicElement& o) const;
  PadicElement inverse() const;
  PadicElement operator+(const PadicElement& o) const;
  PadicElement operator-() const;
  PadicElement with_level(int level) const;

 private:
  int p_;
  int valuation_;
  long long unit_;
  int level_;
};

struct OrdAbsAc {
  int ord;
  long long abs_num;  // |x| = abs_num / abs_den
  long long abs_den;
  long long ac;       // residue mod p^level
};

OrdAbsAc ord_abs_ac(const PadicElement& x);

// fractional part of x as num / p^e with 0 <= num < p^e
struct FracPart {
  long long num;
  long long den;
};
FracPart frac_part(const PadicElement& x);

// psi(x) = exp(2 pi i sign frac_p(x))
cplx psi_eval(const PadicElement& x, int sign = 1);
// psi of the rational a / p^e (a integer)
cplx psi_of_fraction(long long a, int e, int p, int sign = 1);

struct UnitGroup {
  int p;
  int level;
  long long modulus;
  long long order;
  long long generator;
  std::vector<long long> elements;   // elements[i] = g^i mod p^level
  std::vector<int> log_table;        // residue -> log, -1 for non-units

  long long log(long long u) const;
  long long exp(long long i) const { return elements[static_cast<size_t>(mod_pos(i, order))]; }
  double coset_volume() const { return 1.0 / static_cast<double>(order); }
};

// a single integer generating (Z/p^N)^x for every N (smallest primitive root mod p^2)
long long universal_generator(int p);

std::shared_ptr<const UnitGroup> unit_group(int p, int level);

}  // namespace padicharm
