#include "padicharm/fiber_enum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "padicharm/quad_forms.hpp"

namespace padicharm {

long long FiberEnumSpec::points() const {
  long long n = 1;
  long long P = ipow(p, k);
  for (int e = 0; e < entries(); ++e) {
    if (n > kEnumerationBudget / P)
      throw std::runtime_error("enumeration budget exceeded: p^(k*d) = " + std::to_string(p) + "^" +
                               std::to_string(k * entries()) + " points, budget " +
                               std::to_string(kEnumerationBudget));
    n *= P;
  }
  return n;
}

FiberShellData make_shell_data(int p, int Kz, int depth_cap) {
  FiberShellData d;
  d.p = p;
  d.Kz = Kz;
  d.depth_cap = depth_cap;
  for (int j = 0; j < Kz; ++j) {
    size_t n = static_cast<size_t>(ipow(p, d.depth(j)));
    d.sums.emplace_back(n, 0.0);
    d.counts.emplace_back(n, 0);
  }
  return d;
}

void FiberShellData::merge(const FiberShellData& o) {
  for (size_t j = 0; j < sums.size(); ++j)
    for (size_t r = 0; r < sums[j].size(); ++r) {
      sums[j][r] += o.sums[j][r];
      counts[j][r] += o.counts[j][r];
    }
  singular += o.singular;
  total += o.total;
}

long long sym_det_mod(const long long* e, int m, long long mod) {
  auto mm = [mod](long long a, long long b) { return mod_mul(a, b, mod); };
  switch (m) {
    case 1:
      return mod_pos(e[0], mod);
    case 2:
      return mod_pos(mm(e[0], e[2]) - mm(e[1], e[1]), mod);
    case 3: {
      long long a = mod_pos(mm(e[0], e[3]) - mm(e[1], e[1]), mod);
      long long b = mod_pos(-mm(e[0], mm(e[4], e[4])) + 2 * mm(e[1], mm(e[4], e[2])) - mm(e[3], mm(e[2], e[2])), mod);
      return mod_pos(mm(a, e[5]) + b, mod);
    }
    default:
      throw std::invalid_argument("sym_det_mod: m <= 3 supported");
  }
}

namespace {

struct Tables {
  long long M = 1;
  std::vector<int> shell;        // det residue -> valuation (Kz for zero)
  std::vector<long long> res;    // det residue -> unit part mod p^depth
  std::vector<cplx> phase;       // index mod p^cexp
  long long cmod = 1;
  std::shared_ptr<const CliffordTables> cliff;
};

Tables make_tables(const FiberEnumSpec& s, const FiberShellData& proto) {
  Tables t;
  t.M = ipow(s.p, s.Kz);
  t.shell.resize(static_cast<size_t>(t.M));
  t.res.resize(static_cast<size_t>(t.M));
  for (long long D = 0; D < t.M; ++D) {
    if (D == 0) {
      t.shell[0] = s.Kz;
      continue;
    }
    int j = 0;
    long long u = D;
    while (u % s.p == 0) u /= s.p, ++j;
    t.shell[static_cast<size_t>(D)] = j;
    t.res[static_cast<size_t>(D)] = u % ipow(s.p, proto.depth(j));
  }
  if (s.clifford) t.cliff = std::make_shared<const CliffordTables>(s.p, s.Kz);
  t.cmod = ipow(s.p, s.cexp);
  for (long long i = 0; i < t.cmod; ++i) {
    double a = kTwoPi * static_cast<double>(i) / static_cast<double>(t.cmod);
    t.phase.emplace_back(std::cos(a), std::sin(a));
  }
  return t;
}

void validate(const FiberEnumSpec& s) {
  if (s.m < 1 || s.m > 3) throw std::invalid_argument("fiber enumeration supports m <= 3");
  if (s.p == 2) throw std::invalid_argument("fiber enumeration needs p odd");
  int d = s.entries();
  if (static_cast<int>(s.base.size()) != d || static_cast<int>(s.s.size()) != d)
    throw std::invalid_argument("fiber enumeration: entry data size");
  if (s.cexp > 0 && static_cast<int>(s.cw.size()) != d) throw std::invalid_argument("fiber enumeration: character size");
  if (s.Kz < 1) throw std::invalid_argument("fiber enumeration: Kz >= 1 required");
  if (ipow(s.p, s.Kz) > (1LL << 30)) throw std::invalid_argument("fiber enumeration: modulus too large");
  s.points();
}

struct Point {
  const FiberEnumSpec& s;
  const Tables& t;
  FiberShellData& acc;

  void add(const long long* z, long long D, long long cidx) {
    int j = t.shell[static_cast<size_t>(D)];
    if (j >= s.Kz) {
      ++acc.singular;
      return;
    }
    size_t r = static_cast<size_t>(t.res[static_cast<size_t>(D)]);
    acc.counts[static_cast<size_t>(j)][r] += 1;
    cplx w = s.cexp > 0 ? t.phase[static_cast<size_t>(cidx)] : cplx(1.0);
    if (s.clifford) w *= static_cast<double>(clifford_rho_sym_fast(z, s.m, s.r0, *t.cliff));
    acc.sums[static_cast<size_t>(j)][r] += w;
  }
};

long long char_index(const FiberEnumSpec& s, const long long* z, long long cmod) {
  if (s.cexp == 0) return 0;
  long long c = 0;
  for (int e = 0; e < s.entries(); ++e) c = mod_pos(c + mod_mul(s.cw[static_cast<size_t>(e)], z[e] % cmod, cmod), cmod);
  return c;
}

}  // namespace

FiberShellData enumerate_fibers_reference(const FiberEnumSpec& s) {
  validate(s);
  FiberShellData acc = make_shell_data(s.p, s.Kz, s.depth_cap);
  Tables t = make_tables(s, acc);
  const int d = s.entries();
  const long long P = ipow(s.p, s.k), N = s.points();
  std::vector<long long> pw(static_cast<size_t>(d));
  for (int e = 0; e < d; ++e)
    pw[static_cast<size_t>(e)] = s.s[static_cast<size_t>(e)] >= s.Kz ? 0 : ipow(s.p, s.s[static_cast<size_t>(e)]);
  Point pt{s, t, acc};
  long long z[6];
  for (long long idx = 0; idx < N; ++idx) {
    long long rem = idx;
    for (int e = d - 1; e >= 0; --e) {
      long long y = rem % P;
      rem /= P;
      z[e] = mod_pos(s.base[static_cast<size_t>(e)] + mod_mul(pw[static_cast<size_t>(e)], y, t.M), t.M);
    }
    pt.add(z, sym_det_mod(z, s.m, t.M), char_index(s, z, t.cmod));
  }
  acc.total = N;
  return acc;
}

FiberShellData enumerate_fibers(const FiberEnumSpec& s, bool parallel) {
  validate(s);
  if (s.m < 3) return enumerate_fibers_reference(s);
  FiberShellData acc = make_shell_data(s.p, s.Kz, s.depth_cap);
  const Tables t = make_tables(s, acc);
  const long long P = ipow(s.p, s.k), M = t.M, cm = t.cmod;
  std::vector<long long> pw(6);
  for (int e = 0; e < 6; ++e)
    pw[static_cast<size_t>(e)] = s.s[static_cast<size_t>(e)] >= s.Kz ? 0 : ipow(s.p, s.s[static_cast<size_t>(e)]);
  auto zval = [&](int e, long long y) {
    return (s.base[static_cast<size_t>(e)] + pw[static_cast<size_t>(e)] * y) % M;
  };
  auto cw = [&](int e) { return s.cexp > 0 ? s.cw[static_cast<size_t>(e)] % cm : 0LL; };
  const long long outer = P * P;

#pragma omp parallel if (parallel)
  {
    FiberShellData local = make_shell_data(s.p, s.Kz, s.depth_cap);
    Point pt{s, t, local};
    long long z[6];
#pragma omp for schedule(dynamic, 1)
    for (long long o = 0; o < outer; ++o) {
      z[0] = zval(0, o / P);
      z[1] = zval(1, o % P);
      for (long long y2 = 0; y2 < P; ++y2) {
        z[2] = zval(2, y2);
        for (long long y3 = 0; y3 < P; ++y3) {
          z[3] = zval(3, y3);
          long long A = mod_pos(z[0] * z[3] - z[1] * z[1], M);
          for (long long y4 = 0; y4 < P; ++y4) {
            z[4] = zval(4, y4);
            long long B = mod_pos(-(z[0] * (z[4] * z[4] % M)) % M + 2 * (z[1] * (z[4] * z[2] % M) % M) -
                                      z[3] * (z[2] * z[2] % M) % M,
                                  M);
            long long c0 = 0;
            if (s.cexp > 0)
              c0 = (cw(0) * (z[0] % cm) + cw(1) * (z[1] % cm) + cw(2) * (z[2] % cm) + cw(3) * (z[3] % cm) +
                    cw(4) * (z[4] % cm)) %
                   cm;
            for (long long y5 = 0; y5 < P; ++y5) {
              z[5] = zval(5, y5);
              long long D = (A * z[5] + B) % M;
              long long ci = s.cexp > 0 ? (c0 + cw(5) * (z[5] % cm)) % cm : 0;
              pt.add(z, D, ci);
            }
          }
        }
      }
    }
#pragma omp critical
    acc.merge(local);
  }
  acc.total = s.points();
  return acc;
}

}  // namespace padicharm
