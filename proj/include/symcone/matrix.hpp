#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "symcone/errors.hpp"
#include "symcone/rational.hpp"

namespace symcone {

/// Coordinate vector of a (co)homology class. Poincare duality is the
/// identity on coordinates, so [w] + t PD(e) is plain vector arithmetic.
class ClassVector {
 public:
  ClassVector() = default;
  explicit ClassVector(std::size_t n) : coords_(n) {}
  explicit ClassVector(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  ClassVector(std::initializer_list<Rational> coords) : coords_(coords) {}

  static ClassVector zero(std::size_t n) { return ClassVector(n); }
  static ClassVector unit(std::size_t n, std::size_t i) {
    ClassVector v(n);
    v.coords_.at(i) = 1;
    return v;
  }
  static ClassVector from_ints(std::span<const long> xs) {
    ClassVector v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v.coords_[i] = xs[i];
    return v;
  }

  std::size_t size() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }

  bool is_integral() const {
    for (const auto& c : coords_)
      if (!c.is_integer()) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& c : coords_)
      if (!c.is_zero()) return false;
    return true;
  }

  ClassVector& operator+=(const ClassVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  ClassVector& operator-=(const ClassVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  ClassVector& operator*=(const Rational& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend ClassVector operator+(ClassVector a, const ClassVector& b) { return a += b; }
  friend ClassVector operator-(ClassVector a, const ClassVector& b) { return a -= b; }
  friend ClassVector operator*(const Rational& s, ClassVector a) { return a *= s; }
  friend ClassVector operator*(ClassVector a, const Rational& s) { return a *= s; }
  friend ClassVector operator-(ClassVector a) { return a *= Rational(-1); }
  friend bool operator==(const ClassVector&, const ClassVector&) = default;

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) out += ", ";
      out += coords_[i].str();
    }
    return out + "]";
  }

 private:
  void check_same(const ClassVector& o) const {
    require(o.size() == size(), ErrorKind::MalformedInput,
            "dimension mismatch: " + std::to_string(size()) + " vs " + std::to_string(o.size()));
  }

  std::vector<Rational> coords_;
};

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      require(r.size() == cols_, ErrorKind::MalformedInput, "ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    require(a.cols_ == b.rows_, ErrorKind::MalformedInput, "matrix product dimension mismatch");
    RatMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend ClassVector operator*(const RatMatrix& a, const ClassVector& x) {
    require(a.cols_ == x.size(), ErrorKind::MalformedInput, "matrix-vector dimension mismatch");
    ClassVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend RatMatrix operator-(const RatMatrix& a) {
    RatMatrix m = a;
    for (auto& x : m.data_) x = -x;
    return m;
  }

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      out += i ? ", [" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out += ", ";
        out += (*this)(i, j).str();
      }
      out += "]";
    }
    return out + "]";
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

namespace detail {

// Common denominator of all entries, so that D*M is integral.
inline mpz_class common_denominator(const RatMatrix& m) {
  mpz_class d = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).den().get_mpz_t());
  return d;
}

inline std::vector<mpz_class> scaled_integer_entries(const RatMatrix& m, const mpz_class& d) {
  std::vector<mpz_class> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpq_class v = m(i, j).get() * d;
      out.push_back(v.get_num());
    }
  return out;
}

}  // namespace detail

/// Leading principal minors det(M[0..k, 0..k]) for k = 1..n, computed by a
/// single Bareiss pass without pivoting. The pass stops at the first zero
/// minor; the returned vector then ends with that zero.
inline std::vector<Rational> leading_principal_minors(const RatMatrix& m) {
  require(m.square(), ErrorKind::MalformedInput, "leading minors need a square matrix");
  const std::size_t n = m.rows();
  const mpz_class d = detail::common_denominator(m);
  std::vector<mpz_class> a = detail::scaled_integer_entries(m, d);
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * n + j]; };

  std::vector<Rational> minors;
  minors.reserve(n);
  mpz_class prev = 1;
  mpz_class dk = 1;  // d^(k+1): the scaling of the k-th minor
  for (std::size_t k = 0; k < n; ++k) {
    dk *= d;
    const mpz_class pivot = at(k, k);
    minors.emplace_back(mpq_class(pivot, dk));
    if (pivot == 0) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = pivot * at(i, j) - at(i, k) * at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = v;
      }
      at(i, k) = 0;
    }
    prev = pivot;
  }
  return minors;
}

/// Exact inverse by fraction-free Gauss-Jordan elimination (Bareiss) on the
/// integer matrix D*M augmented with the identity. Throws Singularity when
/// M is not invertible.
inline RatMatrix inverse(const RatMatrix& m) {
  require(m.square(), ErrorKind::MalformedInput, "inverse needs a square matrix");
  const std::size_t n = m.rows();
  const std::size_t w = 2 * n;
  const mpz_class d = detail::common_denominator(m);
  std::vector<mpz_class> src = detail::scaled_integer_entries(m, d);
  std::vector<mpz_class> a(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * w + j] = src[i * n + j];
    a[i * w + n + i] = 1;
  }
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * w + j]; };

  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && at(p, k) == 0) ++p;
    if (p == n) fail(ErrorKind::Singularity, "matrix is singular");
    if (p != k)
      for (std::size_t j = 0; j < w; ++j) std::swap(at(p, j), at(k, j));
    const mpz_class pivot = at(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const mpz_class factor = at(i, k);
      for (std::size_t j = 0; j < w; ++j) {
        if (j == k) continue;
        mpz_class v = pivot * at(i, j) - factor * at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = v;
      }
      at(i, k) = 0;
    }
    prev = pivot;
  }
  // Every row now reads det * e_i | det * (DM)^{-1}; the row swaps only
  // permute rows of the augmented system so the right block is exact.
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const mpz_class& diag = at(i, i);
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = Rational(mpq_class(at(i, n + j) * d, diag));
  }
  return inv;
}

/// Rank over Q by plain Gaussian elimination.
inline std::size_t rank(RatMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace symcone
