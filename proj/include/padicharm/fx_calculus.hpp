#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <optional>
#include <vector>

#include <json.hpp>

#include "padicharm/abelian_factors.hpp"
#include "padicharm/characters.hpp"
#include "padicharm/ratfunc.hpp"

namespace padicharm {

enum class TailKind { Compact, Plus, Minus };
std::string to_string(TailKind k);
TailKind tail_kind_from_string(const std::string& s);

class InsufficientTail : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class PoleOutsideClass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One exponential term of a tail: value table[u] * sign^k * q^{-k * exponent}
struct TailTerm {
  double exponent;
  int sign;
};

// Function on F^x invariant under 1 + p^level O. Unit cosets are indexed by the
// discrete log with respect to the universal generator.
struct FxFunction {
  int p = 3;
  int level = 1;
  TailKind tail = TailKind::Compact;
  int n = 0;                 // tail order
  double tail_shift = 0.0;   // tail multiplied by |x|^tail_shift
  int k_min = 0;
  int k_tail = 0;            // window is [k_min, k_tail)
  std::vector<std::vector<cplx>> window;        // [k - k_min][coset]
  std::vector<cplx> a0;                         // [coset]
  std::vector<std::vector<cplx>> a_plus;        // [i][coset]
  std::vector<std::vector<cplx>> a_minus;       // [i][coset]

  size_t cosets() const;
  cplx value_at(int k, size_t coset) const;
  cplx value(int k, long long u) const;         // u any integer prime to p
  cplx tail_value(int k, size_t coset) const;

  // tail terms in storage order: a0, a_plus[0..n-1], a_minus[0..n-1]
  std::vector<TailTerm> tail_terms() const;
  const std::vector<cplx>& tail_table(size_t term) const;
  std::vector<cplx>& tail_table(size_t term);

  static FxFunction zero(int p, int level);
  static FxFunction with_tail(int p, int level, TailKind kind, int n, double shift, int k_min, int k_tail);
  // (1/vol) * indicator of 1 + p^k O
  static FxFunction normalized_unit_indicator(int p, int k);
  static FxFunction indicator_units(int p);

  FxFunction at_level(int L) const;
  FxFunction scaled(cplx c) const;
  // multiply by |x|^c
  FxFunction times_abs_power(double c) const;
  // extend the window down to k_lo and up to k_hi (tail values materialized)
  FxFunction with_window(int k_lo, int k_hi) const;

  nlohmann::json to_json() const;
  static FxFunction from_json(const nlohmann::json& j);
};

// a f + b g; tails must share kind, order and shift
FxFunction combine(cplx a, const FxFunction& f, cplx b, const FxFunction& g);
// max |f - g| over shells [k_lo, k_hi] and all cosets (at the common level)
double max_difference(const FxFunction& f, const FxFunction& g, int k_lo, int k_hi);

// Fit the tail of kind/n/shift to shells[k - k_lo][coset], k in [k_lo, k_lo + shells.size()).
// The tail starts at tail_start (default: the last 2n+1 shells); extra shells past it are
// fitted by least squares and must agree to residual_tol
FxFunction fit_fx_function(int p, int level, TailKind kind, int n, double shift, int k_lo,
                           const std::vector<std::vector<cplx>>& shells, double residual_tol = 1e-8,
                           std::optional<int> tail_start = std::nullopt);

enum class PoleClass { Plus, Minus };

struct MellinData {
  int p = 3;
  int level = 1;
  std::vector<RationalFunctionZ> comp;  // by character index at `level`

  RationalFunctionZ at(const UnitCharacter& chi) const;
  // Mellin data of f |x|^c
  MellinData shifted(double c) const;
  nlohmann::json to_json() const;
};

MellinData mellin_transform(const FxFunction& f);
cplx mellin_inverse(const MellinData& Z, int k, long long u);
FxFunction fx_from_mellin(const MellinData& Z, TailKind kind, int n, double shift);

struct PWResult {
  bool ok = true;
  std::string witness;
};
// Z / (L-product of the class) must be a Laurent polynomial for every character
PWResult check_paley_wiener(const MellinData& Z, PoleClass cls, int n, bool beta_restricted = true);

// Mellin-route transform of f in S_pvs^+ (tail kind Plus, shift -2n or compact)
MellinData fourier_L_mellin(const MellinData& Mf, int n, int psi_sign = 1);
FxFunction fourier_L(const FxFunction& f, int n, int psi_sign = 1);

// kernel eta at x = p^k u, u known mod p^level; the character sum is compared at level and level + 1
cplx eta_kernel(int p, int n, int psi_sign, int k, long long u, int level);
// smallest level at which every contributing character on shell k is present
int eta_required_level(int n, int k);

// cached evaluator used by the convolution code
class EtaEvaluator {
 public:
  EtaEvaluator(int p, int n, int psi_sign);
  // unchecked sum over characters of level L (L >= eta_required_level)
  cplx value(int k, long long u, int L) const;
  cplx value_auto(int k, long long u, int u_level) const;
  int p() const { return p_; }
  int n() const { return n_; }

 private:
  struct Table;
  const Table& table(int L) const;
  int p_, n_, sign_;
  mutable std::map<int, std::shared_ptr<Table>> tables_;
  mutable std::mutex mu_;
};

struct ShellKernel {
  // kernel value at p^k u where u is a residue mod p^level
  std::function<cplx(int k, long long u, int level)> eval;
  // precision the kernel needs on shell k
  std::function<int(int k)> level;
  int order = 0;  // n, used for the default truncation bound
};

ShellKernel eta_shell_kernel(int p, int n, int psi_sign);
// eta |x|^{(2n+1)/2}, the kernel of L
ShellKernel L_shell_kernel(int p, int n, int psi_sign);

struct PVResult {
  cplx value;
  int stable_k = -1;
  std::vector<cplx> trace;  // truncations S_0, S_1, ...
};

class PVNotStable : public std::runtime_error {
 public:
  PVNotStable(const std::string& what, std::vector<cplx> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<cplx> trace;
};

// (kernel * f^v)(t) = lim_K sum_{|j| <= K} int_{p^j O^x} kernel(x) f(x / t) d*x
PVResult pv_convolve(const ShellKernel& kernel, const FxFunction& f, int t_k, long long t_u, int K_max = -1,
                     double tol = 1e-10);

struct FEReport {
  double max_deviation = 0.0;
  std::vector<double> per_character;
};
// M(L(f)|.|^{-c})(1/z, chi^{-1}) against beta(z, chi) M(f|.|^{c})(z, chi), c = (2n+1)/2
FEReport check_fe_gl1(const FxFunction& f, int n, const std::vector<UnitCharacter>& chars, int psi_sign = 1,
                      const std::vector<cplx>& samples = default_samples());

}  // namespace padicharm
