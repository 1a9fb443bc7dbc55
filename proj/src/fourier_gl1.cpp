#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "padicharm/fx_calculus.hpp"

namespace padicharm {

namespace {

double c_of(int n) { return (2.0 * n + 1.0) / 2.0; }

void require_plus_input(const FxFunction& f, int n) {
  if (f.tail == TailKind::Compact) return;
  if (f.tail != TailKind::Plus || f.n != n || std::abs(f.tail_shift + 2.0 * n) > 1e-12)
    throw PoleOutsideClass("fourier_L: input tail must be of kind plus with order n and shift -2n");
}

}  // namespace

MellinData fourier_L_mellin(const MellinData& Mf, int n, int psi_sign) {
  const double q = Mf.p;
  long long phi = static_cast<long long>(Mf.comp.size());
  MellinData out;
  out.p = Mf.p;
  out.level = Mf.level;
  cplx qc = std::pow(q, c_of(n));
  for (long long j = 0; j < phi; ++j) {
    const auto& src = Mf.comp[static_cast<size_t>(mod_pos(-j, phi))];
    if (src.is_zero()) {
      out.comp.emplace_back();
      continue;
    }
    UnitCharacter chi(Mf.p, Mf.level, j);
    RationalFunctionZ b = beta_factor(n, chi.inverse(), psi_sign).scale_arg(qc).invert_arg();
    out.comp.push_back((b * src.invert_arg()).reduced());
  }
  return out;
}

FxFunction fourier_L(const FxFunction& f, int n, int psi_sign) {
  require_plus_input(f, n);
  MellinData Mf = mellin_transform(f);
  // f |.|^{2n} must lie in the Paley-Wiener class of S^+
  PWResult pw = check_paley_wiener(Mf.shifted(2.0 * n), PoleClass::Plus, n, true);
  if (!pw.ok) throw PoleOutsideClass("fourier_L: input outside S_pvs^+: " + pw.witness);
  return fx_from_mellin(fourier_L_mellin(Mf, n, psi_sign), TailKind::Minus, n, n + 1.0);
}

int eta_required_level(int n, int k) {
  if (k >= 0) return 1;
  int d = 2 * n + 1;
  return std::max(1, (-k + d - 1) / d);
}

struct EtaEvaluator::Table {
  int L = 1;
  long long phi = 1;
  std::vector<RationalFunctionZ> B;  // beta(1/z, chi_j^{-1})
  std::vector<cplx> w;
  std::map<int, std::vector<cplx>> by_shell;  // eta on shell k for every coset
};

EtaEvaluator::EtaEvaluator(int p, int n, int psi_sign) : p_(p), n_(n), sign_(psi_sign) {
  if (n < 0) throw std::invalid_argument("EtaEvaluator: n must be >= 0");
}

const EtaEvaluator::Table& EtaEvaluator::table(int L) const {
  auto it = tables_.find(L);
  if (it != tables_.end()) return *it->second;
  auto t = std::make_shared<Table>();
  t->L = L;
  t->phi = totient_pp(p_, L);
  for (long long j = 0; j < t->phi; ++j) {
    UnitCharacter chi(p_, L, j);
    t->B.push_back(beta_factor(n_, chi.inverse(), sign_).invert_arg());
    double a = kTwoPi * static_cast<double>(j) / static_cast<double>(t->phi);
    t->w.emplace_back(std::cos(a), std::sin(a));
  }
  tables_[L] = t;
  return *t;
}

cplx EtaEvaluator::value(int k, long long u, int L) const {
  std::lock_guard<std::mutex> lock(mu_);
  const Table& T0 = table(L);
  Table& T = const_cast<Table&>(T0);
  auto it = T.by_shell.find(k);
  if (it == T.by_shell.end()) {
    std::vector<cplx> c(static_cast<size_t>(T.phi));
    for (long long j = 0; j < T.phi; ++j) c[static_cast<size_t>(j)] = T.B[static_cast<size_t>(j)].laurent_coeff(k);
    std::vector<cplx> eta(static_cast<size_t>(T.phi), 0.0);
    for (long long i = 0; i < T.phi; ++i)
      for (long long j = 0; j < T.phi; ++j) {
        if (c[static_cast<size_t>(j)] == 0.0) continue;
        eta[static_cast<size_t>(i)] +=
            c[static_cast<size_t>(j)] * T.w[static_cast<size_t>(mod_pos(-mod_mul(i, j, T.phi), T.phi))];
      }
    it = T.by_shell.emplace(k, std::move(eta)).first;
  }
  auto G = unit_group(p_, L);
  return it->second[static_cast<size_t>(G->log(mod_pos(u, G->modulus)))];
}

cplx EtaEvaluator::value_auto(int k, long long u, int u_level) const {
  int L = eta_required_level(n_, k);
  if (u_level < L)
    throw std::invalid_argument("eta: unit known mod p^" + std::to_string(u_level) + " but shell " +
                                std::to_string(k) + " needs level " + std::to_string(L));
  return value(k, u, L);
}

namespace {

std::shared_ptr<EtaEvaluator> shared_eta(int p, int n, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<EtaEvaluator>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& e = cache[{p, n, sign}];
  if (!e) e = std::make_shared<EtaEvaluator>(p, n, sign);
  return e;
}

}  // namespace

cplx eta_kernel(int p, int n, int psi_sign, int k, long long u, int level) {
  int need = eta_required_level(n, k);
  if (level < need)
    throw std::invalid_argument("eta: level " + std::to_string(level) + " too small for shell " + std::to_string(k) +
                                " (needs " + std::to_string(need) + ")");
  auto E = shared_eta(p, n, psi_sign);
  cplx a = E->value(k, u, level);
  cplx b = E->value(k, u, level + 1);
  if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
    throw std::runtime_error("eta: character sum not stabilized between levels " + std::to_string(level) + " and " +
                             std::to_string(level + 1));
  return a;
}

ShellKernel eta_shell_kernel(int p, int n, int psi_sign) {
  auto E = shared_eta(p, n, psi_sign);
  ShellKernel K;
  K.eval = [E](int k, long long u, int L) { return E->value(k, u, L); };
  K.level = [n](int k) { return eta_required_level(n, k); };
  K.order = n;
  return K;
}

ShellKernel L_shell_kernel(int p, int n, int psi_sign) {
  ShellKernel K = eta_shell_kernel(p, n, psi_sign);
  const double c = c_of(n), q = p;
  auto base = K.eval;
  K.eval = [base, c, q](int k, long long u, int L) { return base(k, u, L) * std::pow(q, -k * c); };
  return K;
}

PVResult pv_convolve(const ShellKernel& kernel, const FxFunction& f, int t_k, long long t_u, int K_max, double tol) {
  if (K_max < 0) K_max = 4 * (f.level + kernel.order + 1);
  auto Gf = unit_group(f.p, f.level);
  long long lt = Gf->log(mod_pos(t_u, Gf->modulus));
  long long phif = Gf->order;

  auto vanishes = [&](int k) {
    if (k < f.k_min) return true;
    return f.tail == TailKind::Compact && k >= f.k_tail;
  };
  // int_{p^j O^x} kernel(x) f(x / t) d*x
  auto shell = [&](int j) -> cplx {
    int fk = j - t_k;
    if (vanishes(fk)) return 0.0;
    int L = std::max(kernel.level(j), f.level);
    auto G = unit_group(f.p, L);
    cplx s = 0.0;
    for (long long i = 0; i < G->order; ++i) {
      cplx kv = kernel.eval(j, G->elements[static_cast<size_t>(i)], L);
      if (kv == 0.0) continue;
      // log_f(v / t_u) = log_L(v) - log_f(t_u) mod phi(p^f.level)
      s += kv * f.value_at(fk, static_cast<size_t>(mod_pos(i - lt, phif)));
    }
    return s / static_cast<double>(G->order);
  };

  // no stabilization test before the window of f has been swept
  const int K_start = std::max(std::abs(t_k + f.k_min), std::abs(t_k + f.k_tail)) + 1;
  K_max += K_start;
  PVResult res;
  cplx S = shell(0);
  res.trace.push_back(S);
  for (int K = 1; K <= K_max; ++K) {
    S += shell(K) + shell(-K);
    res.trace.push_back(S);
    size_t m = res.trace.size();
    if (m >= 3 && K >= K_start) {
      cplx a = res.trace[m - 3], b = res.trace[m - 2], c = res.trace[m - 1];
      double scale = std::max(1.0, std::abs(c));
      if (std::abs(a - b) <= tol * scale && std::abs(b - c) <= tol * scale) {
        res.value = c;
        res.stable_k = K - 2;
        return res;
      }
    }
  }
  std::ostringstream o;
  o << "pv_convolve: truncations did not stabilize up to K=" << K_max << " (last " << S.real() << "+" << S.imag()
    << "i)";
  throw PVNotStable(o.str(), res.trace);
}

FEReport check_fe_gl1(const FxFunction& f, int n, const std::vector<UnitCharacter>& chars, int psi_sign,
                      const std::vector<cplx>& samples) {
  const double q = f.p;
  const double c = c_of(n);
  FxFunction Lf = fourier_L(f, n, psi_sign);
  MellinData Mf = mellin_transform(f);
  MellinData MLf = mellin_transform(Lf);
  FEReport rep;
  for (const auto& chi : chars) {
    RationalFunctionZ lhs = MLf.at(chi.inverse()).scale_arg(std::pow(q, c)).invert_arg();
    RationalFunctionZ rhs;
    RationalFunctionZ m = Mf.at(chi);
    if (!m.is_zero()) rhs = beta_factor(n, chi, psi_sign) * m.scale_arg(std::pow(q, -c));
    double d;
    if (lhs.is_zero() && rhs.is_zero())
      d = 0.0;
    else
      d = deviation(lhs, rhs, samples);
    rep.per_character.push_back(d);
    rep.max_deviation = std::max(rep.max_deviation, d);
  }
  return rep;
}

}  // namespace padicharm
