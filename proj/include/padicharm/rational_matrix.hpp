#pragma once

#include <gmpxx.h>

#include <random>
#include <string>
#include <vector>

namespace padicharm {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(size_t rows, size_t cols);
  RationalMatrix(std::initializer_list<std::initializer_list<mpq_class>> rows);

  static RationalMatrix identity(size_t n);
  static RationalMatrix zero(size_t rows, size_t cols) { return RationalMatrix(rows, cols); }
  static RationalMatrix diagonal(const std::vector<mpq_class>& d);
  // blocks[i][j], all blocks in a row share a height
  static RationalMatrix from_blocks(const std::vector<std::vector<RationalMatrix>>& blocks);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  mpq_class& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const mpq_class& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator*(const mpq_class& c) const;
  RationalMatrix operator-() const { return *this * mpq_class(-1); }
  bool operator==(const RationalMatrix& o) const;
  bool operator!=(const RationalMatrix& o) const { return !(*this == o); }

  RationalMatrix transpose() const;
  mpq_class det() const;
  // throws std::domain_error when singular
  RationalMatrix inverse() const;
  RationalMatrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  bool is_symmetric() const;
  bool is_zero() const;

  std::string to_string() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<mpq_class> a_;
};

// random integral symmetric matrix with entries in [lo, hi]
RationalMatrix random_symmetric(size_t n, int lo, int hi, std::mt19937_64& rng);

}  // namespace padicharm
