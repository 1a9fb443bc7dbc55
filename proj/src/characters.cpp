#include "padicharm/characters.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace padicharm {

UnitCharacter::UnitCharacter(int p, int level, long long index) : p_(p), level_(level) {
  if (level < 1) throw std::invalid_argument("UnitCharacter: level must be >= 1");
  order_ = totient_pp(p, level);
  index_ = mod_pos(index, order_);
}

UnitCharacter UnitCharacter::trivial(int p, int level) { return UnitCharacter(p, level, 0); }

UnitCharacter UnitCharacter::quadratic(int p, int level) {
  long long phi = totient_pp(p, level);
  return UnitCharacter(p, level, phi / 2);
}

UnitCharacter UnitCharacter::from_table(int p, int level, const std::vector<cplx>& values, double tol) {
  auto G = unit_group(p, level);
  if (static_cast<long long>(values.size()) != G->modulus)
    throw std::invalid_argument("character table must have p^level entries");
  for (long long a : G->elements)
    for (long long b : G->elements) {
      cplx lhs = values[static_cast<size_t>(mod_mul(a, b, G->modulus))];
      cplx rhs = values[static_cast<size_t>(a)] * values[static_cast<size_t>(b)];
      if (std::abs(lhs - rhs) > tol) throw std::invalid_argument("non-multiplicative character table");
    }
  cplx v = values[static_cast<size_t>(G->generator)];
  if (std::abs(std::abs(v) - 1.0) > tol) throw std::invalid_argument("character values must be unimodular");
  double t = std::arg(v) / kTwoPi * static_cast<double>(G->order);
  long long j = std::llround(t);
  if (std::abs(t - static_cast<double>(j)) > 1e-6) throw std::invalid_argument("non-multiplicative character table");
  return UnitCharacter(p, level, j);
}

cplx UnitCharacter::value(long long u) const {
  auto G = unit_group(p_, level_);
  long long l = G->log(u);
  long long e = mod_mul(l, index_, order_);
  double t = kTwoPi * static_cast<double>(e) / static_cast<double>(order_);
  return {std::cos(t), std::sin(t)};
}

cplx UnitCharacter::value(const PadicElement& x) const {
  int L = std::min(level_, x.level());
  if (L < conductor()) throw std::domain_error("element precision below character conductor");
  return at_level(L).value(x.unit() % ipow(p_, L));
}

cplx UnitCharacter::generator_image() const {
  double t = kTwoPi * static_cast<double>(index_) / static_cast<double>(order_);
  return {std::cos(t), std::sin(t)};
}

int UnitCharacter::conductor() const {
  if (index_ == 0) return 0;
  for (int e = 1; e <= level_; ++e)
    if (index_ % ipow(p_, level_ - e) == 0) return e;
  return level_;
}

long long UnitCharacter::order() const { return order_ / std::gcd(index_, order_); }

UnitCharacter UnitCharacter::inverse() const { return UnitCharacter(p_, level_, -index_); }

UnitCharacter UnitCharacter::pow(long long k) const {
  return UnitCharacter(p_, level_, mod_mul(index_, mod_pos(k, order_), order_));
}

UnitCharacter UnitCharacter::operator*(const UnitCharacter& o) const {
  if (o.p_ != p_) throw std::invalid_argument("character prime mismatch");
  int L = std::max(level_, o.level_);
  UnitCharacter a = at_level(L), b = o.at_level(L);
  return UnitCharacter(p_, L, a.index_ + b.index_);
}

bool UnitCharacter::operator==(const UnitCharacter& o) const {
  if (p_ != o.p_) return false;
  int L = std::max(level_, o.level_);
  return at_level(L).index_ == o.at_level(L).index_;
}

UnitCharacter UnitCharacter::at_level(int level) const {
  if (level == level_) return *this;
  if (level > level_) return UnitCharacter(p_, level, index_ * ipow(p_, level - level_));
  if (conductor() > level) throw std::domain_error("cannot restrict a character below its conductor");
  return UnitCharacter(p_, level, index_ / ipow(p_, level_ - level));
}

nlohmann::json UnitCharacter::to_json() const {
  cplx g = generator_image();
  return {{"p", p_},
          {"level", level_},
          {"index", index_},
          {"conductor", conductor()},
          {"generator", universal_generator(p_) % ipow(p_, level_)},
          {"generator_image", {g.real(), g.imag()}}};
}

std::vector<UnitCharacter> all_characters(int p, int level) {
  std::vector<UnitCharacter> out;
  long long phi = totient_pp(p, level);
  for (long long j = 0; j < phi; ++j) out.emplace_back(p, level, j);
  return out;
}

std::vector<UnitCharacter> characters_up_to_conductor(int p, int e) {
  int L = std::max(e, 1);
  std::vector<UnitCharacter> out;
  for (auto& c : all_characters(p, L))
    if (c.conductor() <= e) out.push_back(c);
  return out;
}

UnitCharacter character_with_conductor(int p, int e) {
  for (auto& c : characters_up_to_conductor(p, e))
    if (c.conductor() == e) return c;
  throw std::invalid_argument("no character with conductor " + std::to_string(e));
}

}  // namespace padicharm
