#pragma once

#include <cstdint>
#include <vector>

#include "padicharm/padic_core.hpp"

namespace padicharm {

// Enumeration of Z = base + p^{s_e} Y_e over Y in S_m(Z/p^k), entries in upper-triangular
// row order. Z is then known mod p^Kz. The physical matrix is X = p^{r0} Z.
struct FiberEnumSpec {
  int m = 3;
  int p = 3;
  int k = 2;
  int r0 = 0;
  int Kz = 2;
  std::vector<long long> base;  // residues mod p^Kz
  std::vector<int> s;
  // character psi(tr C X) = exp(2 pi i (sum_e cw_e Z_e mod p^cexp) / p^cexp); cexp = 0 disables it
  std::vector<long long> cw;
  int cexp = 0;
  bool clifford = false;  // multiply by rho(X)
  int depth_cap = 3;      // finest unit residue kept per shell

  int entries() const { return m * (m + 1) / 2; }
  long long points() const;  // p^{k * entries}, throws if above the budget
};

inline constexpr long long kEnumerationBudget = 1000000000LL;

// Shell j of det Z (0 <= j < Kz) with the unit part of det Z recorded mod p^{depth(j)}
struct FiberShellData {
  int p = 3;
  int Kz = 0;
  int depth_cap = 3;
  std::vector<std::vector<cplx>> sums;         // [j][residue mod p^depth]
  std::vector<std::vector<long long>> counts;  // unweighted
  long long singular = 0;                      // det = 0 mod p^Kz
  long long total = 0;

  int depth(int j) const { return std::min(Kz - j, depth_cap); }
  void merge(const FiberShellData& o);
};

FiberShellData make_shell_data(int p, int Kz, int depth_cap);

// fast kernel, OpenMP over the leading entries when parallel is true
FiberShellData enumerate_fibers(const FiberEnumSpec& spec, bool parallel = true);
// straightforward loop over all points, used as a reference in tests and benchmarks
FiberShellData enumerate_fibers_reference(const FiberEnumSpec& spec);

// det of a symmetric m x m matrix given by its upper-triangular entries, mod `mod` (m <= 3)
long long sym_det_mod(const long long* e, int m, long long mod);

}  // namespace padicharm
