#pragma once

#include <vector>

#include <json.hpp>

#include "padicharm/padic_core.hpp"

namespace padicharm {

// Character of (Z/p^N)^x, determined by chi(g) = exp(2 pi i j / phi(p^N)) for the
// universal generator g. Extended to F^x by chi(p) = 1.
class UnitCharacter {
 public:
  UnitCharacter(int p, int level, long long index);

  static UnitCharacter trivial(int p, int level = 1);
  // table indexed by residue mod p^level (non-units ignored)
  static UnitCharacter from_table(int p, int level, const std::vector<cplx>& values, double tol = 1e-9);
  // the quadratic (Legendre) character
  static UnitCharacter quadratic(int p, int level = 1);

  int p() const { return p_; }
  int level() const { return level_; }
  long long index() const { return index_; }
  long long group_order() const { return order_; }

  cplx value(long long u) const;          // u coprime to p
  cplx generator_image() const;
  int conductor() const;
  bool is_trivial() const { return index_ == 0; }
  long long order() const;                 // order in the character group

  UnitCharacter inverse() const;
  UnitCharacter pow(long long k) const;
  UnitCharacter operator*(const UnitCharacter& o) const;
  bool operator==(const UnitCharacter& o) const;
  // same character viewed at another level; lowering requires conductor <= level
  UnitCharacter at_level(int level) const;
  // value on a PadicElement: chi(ac(x))
  cplx value(const PadicElement& x) const;

  nlohmann::json to_json() const;

 private:
  int p_;
  int level_;
  long long order_;
  long long index_;
};

// all characters of (Z/p^N)^x ordered by index
std::vector<UnitCharacter> all_characters(int p, int level);
// characters with conductor <= e, realized at level max(e, 1)
std::vector<UnitCharacter> characters_up_to_conductor(int p, int e);
// some character with the given exact conductor (throws if none)
UnitCharacter character_with_conductor(int p, int e);

}  // namespace padicharm
