#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "padicharm/padic_core.hpp"

namespace padicharm {

using Poly = std::vector<cplx>;

// b / (1 - alpha z)^power; the pole sits at z = 1/alpha
struct PoleTerm {
  cplx alpha;
  cplx b;
  int power = 1;
};

struct PartialFractions {
  int laurent_low = 0;          // exponent of laurent[0]
  std::vector<cplx> laurent;    // Laurent polynomial part
  std::vector<PoleTerm> terms;

  cplx eval(cplx z) const;
  // coefficient of z^m in the expansion at 0
  cplx coeff(int m) const;
};

class IllConditionedPoles : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// R(z) = z^shift * num(z) / den(z), den(0) = 1 after normalization
class RationalFunctionZ {
 public:
  RationalFunctionZ();
  RationalFunctionZ(Poly num, Poly den, int shift = 0);

  static RationalFunctionZ constant(cplx c);
  static RationalFunctionZ monomial(cplx c, int k);
  // b * (alpha z)^start / (1 - alpha z)
  static RationalFunctionZ geometric(cplx alpha, cplx b = 1.0, int start = 0);
  static RationalFunctionZ from_laurent(int low, const std::vector<cplx>& coeffs);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int shift() const { return shift_; }
  bool is_zero() const { return num_.empty(); }

  cplx operator()(cplx z) const;
  cplx laurent_coeff(int m) const;
  std::vector<cplx> laurent_coeffs(int m0, int m1) const;

  RationalFunctionZ scale_arg(cplx c) const;   // z -> c z
  RationalFunctionZ square_arg() const;        // z -> z^2
  RationalFunctionZ invert_arg() const;        // z -> 1/z

  RationalFunctionZ operator+(const RationalFunctionZ& o) const;
  RationalFunctionZ operator-(const RationalFunctionZ& o) const;
  RationalFunctionZ operator*(const RationalFunctionZ& o) const;
  RationalFunctionZ operator/(const RationalFunctionZ& o) const;
  RationalFunctionZ operator*(cplx c) const;
  RationalFunctionZ operator-() const { return *this * cplx(-1.0); }
  RationalFunctionZ& operator+=(const RationalFunctionZ& o) { return *this = *this + o; }
  RationalFunctionZ& operator*=(const RationalFunctionZ& o) { return *this = *this * o; }

  // cancel numerically common roots of numerator and denominator
  RationalFunctionZ reduced(double tol = 1e-8) const;
  PartialFractions partial_fractions(double tol = 1e-8) const;
  // poles (as z-locations) of the reduced function, zero excluded
  std::vector<cplx> poles(double tol = 1e-8) const;
  bool is_laurent_polynomial(double tol = 1e-8, cplx* offending_pole = nullptr) const;

  nlohmann::json to_json() const;
  static RationalFunctionZ from_json(const nlohmann::json& j);

 private:
  void normalize();
  Poly num_;
  Poly den_;
  int shift_ = 0;
};

inline RationalFunctionZ operator*(cplx c, const RationalFunctionZ& r) { return r * c; }

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
cplx poly_eval(const Poly& a, cplx z);
Poly poly_derivative(const Poly& a);
// roots of a polynomial via the companion matrix, Newton polished
std::vector<cplx> poly_roots(const Poly& a);

struct RootCluster {
  cplx root;
  int multiplicity;
};
// groups numerically coincident roots; throws IllConditionedPoles on near-collisions
std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots);

const std::vector<cplx>& default_samples();
// max over samples of the cross-multiplied relative difference
double deviation(const RationalFunctionZ& a, const RationalFunctionZ& b,
                 const std::vector<cplx>& samples = default_samples());
bool approx_equal(const RationalFunctionZ& a, const RationalFunctionZ& b, double rel_tol = 1e-8);

nlohmann::json cplx_to_json(cplx c);
cplx cplx_from_json(const nlohmann::json& j);

}  // namespace padicharm
