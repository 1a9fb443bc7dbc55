#include <cmath>
#include <sstream>
#include <stdexcept>

#include "padicharm/fx_calculus.hpp"

namespace padicharm {

namespace {

std::vector<cplx> roots_of_unity(long long phi) {
  std::vector<cplx> w(static_cast<size_t>(phi));
  for (long long m = 0; m < phi; ++m) {
    double t = kTwoPi * static_cast<double>(m) / static_cast<double>(phi);
    w[static_cast<size_t>(m)] = {std::cos(t), std::sin(t)};
  }
  return w;
}

// (1/phi) sum_i tab[i] w^{i j}
cplx char_average(const std::vector<cplx>& tab, const std::vector<cplx>& w, long long j) {
  long long phi = static_cast<long long>(w.size());
  cplx s = 0.0;
  for (long long i = 0; i < phi; ++i) s += tab[static_cast<size_t>(i)] * w[static_cast<size_t>(mod_mul(i, j, phi))];
  return s / static_cast<double>(phi);
}

std::string zstr(cplx z) {
  std::ostringstream o;
  o.precision(6);
  o << "(" << z.real() << "," << z.imag() << ")";
  return o.str();
}

bool near(cplx a, cplx b, double rel = 1e-6) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

RationalFunctionZ MellinData::at(const UnitCharacter& chi) const {
  if (chi.p() != p) throw std::invalid_argument("MellinData::at: prime mismatch");
  if (chi.conductor() > level) return RationalFunctionZ();
  return comp.at(static_cast<size_t>(chi.at_level(level).index()));
}

MellinData MellinData::shifted(double c) const {
  MellinData out = *this;
  cplx s = std::pow(static_cast<double>(p), -c);
  for (auto& r : out.comp) r = r.scale_arg(s);
  return out;
}

nlohmann::json MellinData::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["level"] = level;
  j["components"] = nlohmann::json::array();
  for (size_t i = 0; i < comp.size(); ++i) j["components"].push_back({{"index", i}, {"value", comp[i].to_json()}});
  return j;
}

MellinData mellin_transform(const FxFunction& f) {
  MellinData Z;
  Z.p = f.p;
  Z.level = f.level;
  long long phi = static_cast<long long>(f.cosets());
  auto w = roots_of_unity(phi);
  auto terms = f.tail_terms();
  double scale = 0.0;
  for (size_t t = 0; t < terms.size(); ++t)
    for (auto v : f.tail_table(t)) scale = std::max(scale, std::abs(v));
  for (const auto& shell : f.window)
    for (auto v : shell) scale = std::max(scale, std::abs(v));
  for (long long j = 0; j < phi; ++j) {
    std::vector<cplx> coeffs;
    for (const auto& shell : f.window) {
      cplx c = char_average(shell, w, j);
      // rounding residue of a vanishing character average
      coeffs.push_back(std::abs(c) <= 1e-13 * scale ? cplx(0.0) : c);
    }
    RationalFunctionZ r = RationalFunctionZ::from_laurent(f.k_min, coeffs);
    for (size_t t = 0; t < terms.size(); ++t) {
      const auto& tab = f.tail_table(t);
      if (tab.empty()) continue;
      cplx A = char_average(tab, w, j);
      if (std::abs(A) <= 1e-13 * std::max(scale, 1e-300)) continue;
      cplx alpha = static_cast<double>(terms[t].sign) * std::pow(static_cast<double>(f.p), -terms[t].exponent);
      // sum_{k >= k_tail} A (alpha z)^k
      r += RationalFunctionZ::geometric(alpha, A, f.k_tail);
    }
    Z.comp.push_back(r);
  }
  return Z;
}

cplx mellin_inverse(const MellinData& Z, int k, long long u) {
  auto G = unit_group(Z.p, Z.level);
  long long phi = G->order;
  long long i = G->log(mod_pos(u, G->modulus));
  auto w = roots_of_unity(phi);
  cplx s = 0.0;
  for (long long j = 0; j < phi; ++j) {
    if (Z.comp[static_cast<size_t>(j)].is_zero()) continue;
    s += Z.comp[static_cast<size_t>(j)].laurent_coeff(k) * w[static_cast<size_t>(mod_pos(-mod_mul(i, j, phi), phi))];
  }
  return s;
}

FxFunction fx_from_mellin(const MellinData& Z, TailKind kind, int n, double shift) {
  long long phi = totient_pp(Z.p, Z.level);
  if (static_cast<long long>(Z.comp.size()) != phi) throw std::invalid_argument("fx_from_mellin: component count");
  auto w = roots_of_unity(phi);
  FxFunction proto = FxFunction::with_tail(Z.p, Z.level, kind, n, shift, 0, 0);
  auto terms = proto.tail_terms();
  std::vector<cplx> alphas;
  for (const auto& t : terms)
    alphas.push_back(static_cast<double>(t.sign) * std::pow(static_cast<double>(Z.p), -t.exponent));

  // per character: Laurent part and the residues matched to tail terms
  std::vector<PartialFractions> pf(static_cast<size_t>(phi));
  std::vector<std::vector<cplx>> B(static_cast<size_t>(phi), std::vector<cplx>(terms.size(), 0.0));
  int lo = 0, hi = -1;
  bool have = false;
  for (long long j = 0; j < phi; ++j) {
    const auto& r = Z.comp[static_cast<size_t>(j)];
    if (r.is_zero()) continue;
    auto& P = pf[static_cast<size_t>(j)];
    P = r.partial_fractions();
    for (const auto& term : P.terms) {
      if (term.power != 1)
        throw PoleOutsideClass("fx_from_mellin: pole of order " + std::to_string(term.power) + " at z=" +
                               zstr(1.0 / term.alpha) + " (character " + std::to_string(j) + ")");
      size_t hit = terms.size();
      for (size_t t = 0; t < terms.size(); ++t)
        if (near(term.alpha, alphas[t])) hit = t;
      if (hit == terms.size())
        throw PoleOutsideClass("fx_from_mellin: pole at z=" + zstr(1.0 / term.alpha) + " outside the " +
                               to_string(kind) + " class (character " + std::to_string(j) + ")");
      B[static_cast<size_t>(j)][hit] += term.b;
    }
    if (!P.laurent.empty()) {
      int a = P.laurent_low, b = P.laurent_low + static_cast<int>(P.laurent.size()) - 1;
      lo = have ? std::min(lo, a) : a;
      hi = have ? std::max(hi, b) : b;
      have = true;
    }
  }
  if (!have) lo = 0, hi = -1;
  bool poles = false;
  for (const auto& row : B)
    for (auto b : row) poles = poles || std::abs(b) > 0.0;
  if (poles) {
    lo = have ? std::min(lo, 0) : 0;
    hi = std::max(hi + 1, 0) - 1;
  }
  int k_tail = hi + 1;
  TailKind kk = poles ? kind : TailKind::Compact;
  FxFunction f = FxFunction::with_tail(Z.p, Z.level, kk, n, shift, lo, k_tail);
  if (kk == TailKind::Compact && kind != TailKind::Compact) {
    f.tail = kind;
    f.a0.assign(static_cast<size_t>(phi), 0.0);
    f.a_plus.assign(static_cast<size_t>(n), std::vector<cplx>(static_cast<size_t>(phi), 0.0));
    f.a_minus.assign(static_cast<size_t>(n), std::vector<cplx>(static_cast<size_t>(phi), 0.0));
  }
  for (long long i = 0; i < phi; ++i) {
    for (long long j = 0; j < phi; ++j) {
      const auto& P = pf[static_cast<size_t>(j)];
      cplx wij = w[static_cast<size_t>(mod_pos(-mod_mul(i, j, phi), phi))];
      for (size_t c = 0; c < P.laurent.size(); ++c) {
        int k = P.laurent_low + static_cast<int>(c);
        f.window[static_cast<size_t>(k - lo)][static_cast<size_t>(i)] += P.laurent[c] * wij;
      }
      if (f.tail == TailKind::Compact) continue;
      for (size_t t = 0; t < terms.size(); ++t) {
        cplx b = B[static_cast<size_t>(j)][t];
        if (b == 0.0) continue;
        // b / (1 - alpha z) = sum_{k >= 0} b alpha^k z^k; the tail reproduces k >= k_tail
        f.tail_table(t)[static_cast<size_t>(i)] += b * wij;
        for (int k = 0; k < k_tail; ++k)
          f.window[static_cast<size_t>(k - lo)][static_cast<size_t>(i)] += b * std::pow(alphas[t], k) * wij;
      }
    }
  }
  return f;
}

PWResult check_paley_wiener(const MellinData& Z, PoleClass cls, int n, bool beta_restricted) {
  const double q = Z.p;
  long long phi = static_cast<long long>(Z.comp.size());
  PWResult res;
  for (long long j = 0; j < phi; ++j) {
    const auto& r = Z.comp[static_cast<size_t>(j)];
    if (r.is_zero()) continue;
    UnitCharacter chi(Z.p, Z.level, j);
    bool triv = chi.conductor() == 0, triv2 = chi.pow(2).conductor() == 0;
    // allowed pole locations with their restriction flags
    struct Loc {
      cplx z;
      bool allowed;
      const char* what;
    };
    std::vector<Loc> locs;
    Poly P{1.0};
    if (cls == PoleClass::Plus) {
      locs.push_back({1.0, triv || !beta_restricted, "b0 term for a nontrivial character"});
      if (triv || !beta_restricted) P = poly_mul(P, {1.0, -1.0});
      for (int i = 0; i < n; ++i) {
        double a = std::pow(q, -(i + 0.5));
        bool ok = triv2 || !beta_restricted;
        locs.push_back({1.0 / a, ok, "b_i term while chi^2 is nontrivial"});
        locs.push_back({-1.0 / a, ok, "b_i term while chi^2 is nontrivial"});
        if (ok) P = poly_mul(P, {1.0, 0.0, -a * a});
      }
    } else {
      locs.push_back({std::pow(q, n), true, ""});
      P = poly_mul(P, {1.0, -std::pow(q, -n)});
      for (int i = 0; i < n; ++i) {
        double a = std::pow(q, -i);
        locs.push_back({1.0 / a, true, ""});
        locs.push_back({-1.0 / a, true, ""});
        P = poly_mul(P, {1.0, 0.0, -a * a});
      }
    }
    RationalFunctionZ Q = r * RationalFunctionZ(P, {1.0});
    cplx bad;
    if (Q.is_laurent_polynomial(1e-8, &bad)) continue;
    res.ok = false;
    std::string head = "character " + std::to_string(j) + ": ";
    for (const auto& L : locs)
      if (near(bad, L.z)) {
        if (!L.allowed)
          res.witness = head + "coefficient restriction violated, " + L.what + " (pole at z=" + zstr(bad) + ")";
        else
          res.witness = head + "pole order exceeds the class at z=" + zstr(bad);
        return res;
      }
    res.witness = head + "pole at z=" + zstr(bad) + " outside the class";
    return res;
  }
  return res;
}

}  // namespace padicharm
