#include "padicharm/rational_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace padicharm {

RationalMatrix::RationalMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<mpq_class>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (const auto& x : r) a_.push_back(x);
  }
}

RationalMatrix RationalMatrix::identity(size_t n) {
  RationalMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::diagonal(const std::vector<mpq_class>& d) {
  RationalMatrix m(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

RationalMatrix RationalMatrix::from_blocks(const std::vector<std::vector<RationalMatrix>>& blocks) {
  size_t R = 0, C = 0;
  for (const auto& row : blocks) R += row.at(0).rows();
  for (const auto& b : blocks.at(0)) C += b.cols();
  RationalMatrix m(R, C);
  size_t r0 = 0;
  for (const auto& row : blocks) {
    size_t c0 = 0;
    for (const auto& b : row) {
      if (b.rows() != row[0].rows()) throw std::invalid_argument("from_blocks: height mismatch");
      for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
      c0 += b.cols();
    }
    if (c0 != C) throw std::invalid_argument("from_blocks: width mismatch");
    r0 += row[0].rows();
  }
  return m;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const mpq_class& x = (*this)(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
    }
  return r;
}

RationalMatrix RationalMatrix::operator*(const mpq_class& c) const {
  RationalMatrix r = *this;
  for (auto& x : r.a_) x *= c;
  return r;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix r(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

mpq_class RationalMatrix::det() const {
  if (!is_square()) throw std::invalid_argument("det of a non-square matrix");
  RationalMatrix m = *this;
  size_t n = rows_;
  mpq_class d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      d = -d;
    }
    d *= m(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      mpq_class f = m(i, c) / m(c, c);
      for (size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

RationalMatrix RationalMatrix::inverse() const {
  if (!is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  size_t n = rows_;
  RationalMatrix m = *this, inv = identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) throw std::domain_error("singular matrix");
    if (piv != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(m(c, j), m(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
    mpq_class f = 1 / m(c, c);
    for (size_t j = 0; j < n; ++j) {
      m(c, j) *= f;
      inv(c, j) *= f;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      mpq_class g = m(i, c);
      for (size_t j = 0; j < n; ++j) {
        m(i, j) -= g * m(c, j);
        inv(i, j) -= g * inv(c, j);
      }
    }
  }
  return inv;
}

RationalMatrix RationalMatrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block out of range");
  RationalMatrix b(nr, nc);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

bool RationalMatrix::is_symmetric() const { return is_square() && *this == transpose(); }

bool RationalMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

std::string RationalMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

RationalMatrix random_symmetric(size_t n, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(lo, hi);
  RationalMatrix m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      int v = dist(rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

}  // namespace padicharm
