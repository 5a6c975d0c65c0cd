#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symcone/errors.hpp"
#include "symcone/matrix.hpp"
#include "symcone/rational.hpp"

namespace symcone {

/// Finite-rank integer Gram matrix standing in for (a sublattice of) H^2
/// with the cup product.
class IntersectionLattice {
 public:
  IntersectionLattice(std::vector<std::vector<long>> gram, std::vector<std::string> labels,
                      std::optional<ClassVector> canonical = std::nullopt,
                      std::optional<ClassVector> reference = std::nullopt)
      : gram_(std::move(gram)),
        labels_(std::move(labels)),
        canonical_(std::move(canonical)),
        reference_(std::move(reference)) {
    const std::size_t n = gram_.size();
    require(n > 0, ErrorKind::MalformedInput, "lattice rank must be positive");
    for (std::size_t i = 0; i < n; ++i)
      require(gram_[i].size() == n, ErrorKind::MalformedInput,
              "gram row " + std::to_string(i) + " has length " + std::to_string(gram_[i].size()) +
                  ", expected " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        require(gram_[i][j] == gram_[j][i], ErrorKind::MalformedInput,
                "gram is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    require(labels_.size() == n, ErrorKind::MalformedInput,
            "expected " + std::to_string(n) + " basis labels, got " + std::to_string(labels_.size()));
    if (canonical_)
      require(canonical_->size() == n, ErrorKind::MalformedInput, "canonical class has wrong length");
    if (reference_) {
      require(reference_->size() == n, ErrorKind::MalformedInput, "reference class has wrong length");
      require(pair(*reference_, *reference_).sign() > 0, ErrorKind::MalformedInput,
              "reference class must have positive square");
    }
  }

  std::size_t rank() const noexcept { return gram_.size(); }
  const std::vector<std::vector<long>>& gram() const noexcept { return gram_; }
  long gram(std::size_t i, std::size_t j) const { return gram_[i][j]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::optional<ClassVector>& canonical_class() const noexcept { return canonical_; }
  const std::optional<ClassVector>& reference_class() const noexcept { return reference_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  ClassVector basis(std::size_t i) const { return ClassVector::unit(rank(), i); }

  /// a^T * gram * b.
  Rational pair(const ClassVector& a, const ClassVector& b) const {
    const std::size_t n = rank();
    require(a.size() == n && b.size() == n, ErrorKind::MalformedInput,
            "pairing needs vectors of length " + std::to_string(n));
    Rational total;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i].is_zero()) continue;
      Rational row;
      for (std::size_t j = 0; j < n; ++j)
        if (gram_[i][j] != 0 && !b[j].is_zero()) row += Rational(gram_[i][j]) * b[j];
      total += a[i] * row;
    }
    return total;
  }

  Rational square(const ClassVector& a) const { return pair(a, a); }

  /// Gram matrix of an arbitrary family of classes.
  RatMatrix gram_of(const std::vector<ClassVector>& classes) const {
    RatMatrix m(classes.size(), classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i)
      for (std::size_t j = i; j < classes.size(); ++j) {
        Rational v = pair(classes[i], classes[j]);
        m(i, j) = v;
        m(j, i) = v;
      }
    return m;
  }

  const ClassVector& require_reference() const {
    require(reference_.has_value(), ErrorKind::Configuration, "lattice has no reference class");
    return *reference_;
  }
  const ClassVector& require_canonical() const {
    require(canonical_.has_value(), ErrorKind::Configuration, "lattice has no canonical class");
    return *canonical_;
  }

 private:
  std::vector<std::vector<long>> gram_;
  std::vector<std::string> labels_;
  std::optional<ClassVector> canonical_;
  std::optional<ClassVector> reference_;
};

inline Rational pair(const IntersectionLattice& lattice, const ClassVector& a, const ClassVector& b) {
  return lattice.pair(a, b);
}

/// Positive square and positive on the reference class.
inline bool is_positive_cone(const IntersectionLattice& lattice, const ClassVector& a) {
  const ClassVector& ref = lattice.require_reference();
  return lattice.square(a).sign() > 0 && lattice.pair(a, ref).sign() > 0;
}

/// Sylvester's criterion with signs alternating: (-1)^k * minor_k > 0.
inline bool is_negative_definite(const RatMatrix& m) {
  require(m.square(), ErrorKind::MalformedInput, "definiteness test needs a square matrix");
  require(m.symmetric(), ErrorKind::MalformedInput, "definiteness test needs a symmetric matrix");
  if (m.rows() == 0) return true;
  auto minors = leading_principal_minors(m);
  if (minors.size() != m.rows()) return false;
  for (std::size_t k = 0; k < minors.size(); ++k) {
    const int expected = (k % 2 == 0) ? -1 : 1;  // minor of size k+1
    if (minors[k].sign() != expected) return false;
  }
  return true;
}

/// -M^{-1} for symmetric negative-definite M with non-negative off-diagonal
/// entries. Every entry of the result is non-negative.
inline RatMatrix neg_inverse(const RatMatrix& m) {
  require(m.square(), ErrorKind::MalformedInput, "neg_inverse needs a square matrix");
  require(m.symmetric(), ErrorKind::MalformedInput, "neg_inverse needs a symmetric matrix");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j).sign() < 0)
        fail(ErrorKind::Precondition, "negative off-diagonal entry at (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
  require(is_negative_definite(m), ErrorKind::Definiteness, "matrix is not negative definite");
  RatMatrix result = -inverse(m);
  for (std::size_t i = 0; i < result.rows(); ++i)
    for (std::size_t j = 0; j < result.cols(); ++j)
      if (result(i, j).sign() < 0)
        fail(ErrorKind::PropertyViolation, "-M^{-1} has a negative entry; elimination bug");
  return result;
}

/// Canonical-class form of the adjunction formula: 2g - 2 = e.e + K.e.
inline bool adjunction_check(const IntersectionLattice& lattice, const ClassVector& e, long genus) {
  const ClassVector& k = lattice.require_canonical();
  return Rational(2 * genus - 2) == lattice.square(e) + lattice.pair(k, e);
}

struct ExpectedDimension {
  Rational value;          // 2(g - 1 + <c1, e>) with c1 = -K
  Rational adjunction_form;  // 2(e.e + 1 - g); agrees with value iff adjunction holds
  bool adjunctive = false;
};

/// Expected real dimension of embedded genus-g curves in class e. The value
/// is reported as computed even when (e, g) violates adjunction; the
/// discrepancy is flagged, never corrected.
inline ExpectedDimension expected_dimension_report(const IntersectionLattice& lattice, const ClassVector& e,
                                                   long genus) {
  const ClassVector& k = lattice.require_canonical();
  ExpectedDimension d;
  d.value = Rational(2) * (Rational(genus - 1) - lattice.pair(k, e));
  d.adjunction_form = Rational(2) * (lattice.square(e) + Rational(1 - genus));
  d.adjunctive = adjunction_check(lattice, e, genus);
  return d;
}

inline Rational expected_dimension(const IntersectionLattice& lattice, const ClassVector& e, long genus) {
  return expected_dimension_report(lattice, e, genus).value;
}

}  // namespace symcone
