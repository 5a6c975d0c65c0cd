#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "symcone/errors.hpp"
#include "symcone/lattice.hpp"

namespace symcone {

/// A reduced irreducible curve of negative square, recorded by class and genus.
struct CurveData {
  std::string label;
  ClassVector cls;
  long genus = 0;
};

/// A lattice together with its declared negative curves. When
/// completeness_assumed is set, the declared list is taken to be every
/// negative curve, which is what lets "positive on all curves" stand in for
/// the Kahler condition.
class CurveModel {
 public:
  CurveModel(IntersectionLattice lattice, std::vector<CurveData> curves, bool completeness_assumed,
             std::string name = {}, std::vector<std::string> notes = {})
      : lattice_(std::move(lattice)),
        curves_(std::move(curves)),
        completeness_assumed_(completeness_assumed),
        name_(std::move(name)),
        notes_(std::move(notes)) {
    std::set<std::string> seen;
    for (const auto& c : curves_) {
      require(seen.insert(c.label).second, ErrorKind::MalformedInput, "duplicate curve label " + c.label);
      require(c.cls.size() == lattice_.rank(), ErrorKind::MalformedInput,
              "curve " + c.label + " has a class of the wrong length");
      require(c.cls.is_integral(), ErrorKind::MalformedInput, "curve " + c.label + " must have an integral class");
      require(c.genus >= 0, ErrorKind::MalformedInput, "curve " + c.label + " has negative genus");
      require(lattice_.square(c.cls).sign() < 0, ErrorKind::ModelInconsistency,
              "curve " + c.label + " does not have negative square");
      if (lattice_.canonical_class())
        require(adjunction_check(lattice_, c.cls, c.genus), ErrorKind::ModelInconsistency,
                "curve " + c.label + " violates adjunction");
    }
    for (std::size_t i = 0; i < curves_.size(); ++i)
      for (std::size_t j = i + 1; j < curves_.size(); ++j)
        require(lattice_.pair(curves_[i].cls, curves_[j].cls).sign() >= 0, ErrorKind::ModelInconsistency,
                "curves " + curves_[i].label + " and " + curves_[j].label + " pair negatively");
  }

  const IntersectionLattice& lattice() const noexcept { return lattice_; }
  const std::vector<CurveData>& curves() const noexcept { return curves_; }
  const CurveData& curve(std::size_t i) const { return curves_.at(i); }
  bool completeness_assumed() const noexcept { return completeness_assumed_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  std::optional<std::size_t> curve_index(const std::string& label) const {
    for (std::size_t i = 0; i < curves_.size(); ++i)
      if (curves_[i].label == label) return i;
    return std::nullopt;
  }

  Rational pair(const ClassVector& a, const ClassVector& b) const { return lattice_.pair(a, b); }
  Rational square(const ClassVector& a) const { return lattice_.square(a); }

  /// Pairing of a class with every declared curve, in curve order.
  std::vector<Rational> curve_pairings(const ClassVector& a) const {
    std::vector<Rational> out;
    out.reserve(curves_.size());
    for (const auto& c : curves_) out.push_back(lattice_.pair(a, c.cls));
    return out;
  }

 private:
  IntersectionLattice lattice_;
  std::vector<CurveData> curves_;
  bool completeness_assumed_;
  std::string name_;
  std::vector<std::string> notes_;
};

/// Positive cone and strictly positive on every declared curve. Only
/// meaningful under the completeness assumption.
inline bool is_kahler(const CurveModel& model, const ClassVector& a) {
  require(model.completeness_assumed(), ErrorKind::Configuration,
          "Kahler predicate needs a model with completeness_assumed = true");
  if (!is_positive_cone(model.lattice(), a)) return false;
  for (const auto& c : model.curves())
    if (model.pair(a, c.cls).sign() <= 0) return false;
  return true;
}

/// An admissible set G of curve indices and M_ij = e_i . e_j.
struct ChamberDescriptor {
  std::vector<std::size_t> admissible_set;
  RatMatrix gram_restriction;

  std::vector<ClassVector> classes(const CurveModel& model) const {
    std::vector<ClassVector> out;
    for (auto i : admissible_set) out.push_back(model.curve(i).cls);
    return out;
  }
};

inline RatMatrix curve_gram(const CurveModel& model, const std::vector<std::size_t>& indices) {
  std::vector<ClassVector> cls;
  for (auto i : indices) cls.push_back(model.curve(i).cls);
  return model.lattice().gram_of(cls);
}

/// Linearly independent with a negative-definite Gram.
inline bool is_admissible(const CurveModel& model, const std::vector<std::size_t>& indices) {
  if (indices.empty()) return true;
  RatMatrix coords(indices.size(), model.lattice().rank());
  for (std::size_t r = 0; r < indices.size(); ++r)
    for (std::size_t c = 0; c < model.lattice().rank(); ++c) coords(r, c) = model.curve(indices[r]).cls[c];
  if (rank(coords) != indices.size()) return false;
  return is_negative_definite(curve_gram(model, indices));
}

/// Builds the descriptor for a set of curve indices, failing with
/// ModelInconsistency when the set is not admissible.
inline ChamberDescriptor make_descriptor(const CurveModel& model, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (auto i : indices)
    require(i < model.curves().size(), ErrorKind::MalformedInput, "curve index out of range");
  if (!is_admissible(model, indices)) {
    std::string names;
    for (auto i : indices) names += (names.empty() ? "" : ",") + model.curve(i).label;
    fail(ErrorKind::ModelInconsistency, "curve set {" + names + "} is not admissible");
  }
  return ChamberDescriptor{indices, curve_gram(model, indices)};
}

enum class ChamberTag { InteriorKahler, Chamber, Corner, MixedBoundary };

constexpr std::string_view to_string(ChamberTag tag) {
  switch (tag) {
    case ChamberTag::InteriorKahler: return "interior-Kahler";
    case ChamberTag::Chamber: return "chamber";
    case ChamberTag::Corner: return "corner";
    case ChamberTag::MixedBoundary: return "mixed-boundary";
  }
  return "unknown";
}

struct Classification {
  ChamberDescriptor descriptor;
  ChamberTag tag = ChamberTag::InteriorKahler;
  std::vector<Rational> pairings;  // with every declared curve
};

/// Places a positive-cone class in its chamber: G collects the curves on
/// which the class is non-positive.
inline Classification classify(const CurveModel& model, const ClassVector& a) {
  require(a.size() == model.lattice().rank(), ErrorKind::MalformedInput, "class has the wrong length");
  require(is_positive_cone(model.lattice(), a), ErrorKind::Domain, "class not in positive cone");
  Classification out;
  out.pairings = model.curve_pairings(a);
  std::vector<std::size_t> g;
  bool any_zero = false;
  bool any_negative = false;
  for (std::size_t i = 0; i < out.pairings.size(); ++i) {
    const int s = out.pairings[i].sign();
    if (s <= 0) g.push_back(i);
    any_zero |= s == 0;
    any_negative |= s < 0;
  }
  out.descriptor = make_descriptor(model, g);
  if (g.empty())
    out.tag = ChamberTag::InteriorKahler;
  else if (!any_negative)
    out.tag = ChamberTag::Corner;
  else if (!any_zero)
    out.tag = ChamberTag::Chamber;
  else
    out.tag = ChamberTag::MixedBoundary;
  return out;
}

/// R_e(a) = a - 2 (a.e / e.e) e.
inline ClassVector reflect(const IntersectionLattice& lattice, const ClassVector& a, const ClassVector& e) {
  const Rational ee = lattice.square(e);
  require(!ee.is_zero(), ErrorKind::Singularity, "cannot reflect along a class of square zero");
  return a - (Rational(2) * lattice.pair(a, e) / ee) * e;
}

struct CornerPoint {
  ClassVector point;
  std::vector<Rational> shifts;  // t = -M^{-1} v, all positive
};

inline ClassVector combination(const CurveModel& model, const std::vector<std::size_t>& indices,
                               const std::vector<Rational>& coeffs) {
  ClassVector out = ClassVector::zero(model.lattice().rank());
  for (std::size_t i = 0; i < indices.size(); ++i) out += coeffs[i] * model.curve(indices[i]).cls;
  return out;
}

inline std::vector<Rational> apply_matrix(const RatMatrix& m, const std::vector<Rational>& v) {
  ClassVector r = m * ClassVector(v);
  return r.coords();
}

/// Pushes a class that is positive on G onto the G-corner:
/// a' = a + sum t_i e_i with t = -M^{-1} v, v_i = a.e_i.
inline CornerPoint corner_point(const CurveModel& model, const ClassVector& a, const ChamberDescriptor& g) {
  std::vector<Rational> v;
  for (auto i : g.admissible_set) {
    v.push_back(model.pair(a, model.curve(i).cls));
    require(v.back().sign() > 0, ErrorKind::Precondition,
            "class must pair positively with " + model.curve(i).label);
  }
  const RatMatrix neg_inv = neg_inverse(g.gram_restriction);
  CornerPoint out;
  out.shifts = apply_matrix(neg_inv, v);
  out.point = a + combination(model, g.admissible_set, out.shifts);
  for (auto i : g.admissible_set)
    require(model.pair(out.point, model.curve(i).cls).is_zero(), ErrorKind::PropertyViolation,
            "corner point does not vanish on " + model.curve(i).label);
  for (const auto& t : out.shifts)
    require(t.sign() > 0, ErrorKind::PropertyViolation, "corner shift is not positive");
  require(model.square(out.point) >= model.square(a), ErrorKind::PropertyViolation, "corner point lost volume");
  return out;
}

struct ChamberPoint {
  ClassVector point;
  Rational epsilon;              // the epsilon actually used after halving
  std::vector<Rational> shifts;  // s = -M^{-1} (1, ..., 1)
};

/// Moves a corner class into the open chamber: a' + eps * sum s_i e_i pairs
/// to exactly -eps with every curve of G. eps is halved (at most 64 times)
/// until the result is in the positive cone.
inline ChamberPoint chamber_point(const CurveModel& model, const ClassVector& corner, const ChamberDescriptor& g,
                                  const Rational& epsilon) {
  require(epsilon.sign() > 0, ErrorKind::Precondition, "epsilon must be positive");
  for (auto i : g.admissible_set)
    require(model.pair(corner, model.curve(i).cls).is_zero(), ErrorKind::Precondition,
            "class is not in the corner of " + model.curve(i).label);
  const RatMatrix neg_inv = neg_inverse(g.gram_restriction);
  std::vector<Rational> ones(g.admissible_set.size(), Rational(1));
  ChamberPoint out;
  out.shifts = apply_matrix(neg_inv, ones);
  const ClassVector dir = combination(model, g.admissible_set, out.shifts);
  Rational eps = epsilon;
  for (int step = 0; step <= 64; ++step) {
    ClassVector candidate = corner + eps * dir;
    if (is_positive_cone(model.lattice(), candidate)) {
      out.point = std::move(candidate);
      out.epsilon = eps;
      return out;
    }
    eps /= Rational(2);
  }
  fail(ErrorKind::SearchFailure, "no epsilon keeps the chamber point in the positive cone");
}

struct BoundaryShift {
  std::vector<Rational> s;  // s = -M^{-1} v
  Rational r_max_hint;      // largest dyadic r <= 1 with a - r sum s_i e_i Kahler
};

/// Shift off a boundary (corner) class into the Kahler cone: with
/// s = -M^{-1} v one has sum_i s_i e_i.e_j = -v_j, so a - r sum s_i e_i is
/// positive on G for every r > 0, and Kahler for r small.
inline BoundaryShift boundary_to_interior(const CurveModel& model, const ClassVector& a, const ChamberDescriptor& g,
                                          const std::vector<Rational>& v) {
  require(v.size() == g.admissible_set.size(), ErrorKind::MalformedInput, "v has the wrong length");
  for (const auto& x : v) require(x.sign() > 0, ErrorKind::Precondition, "v must be positive");
  const RatMatrix neg_inv = neg_inverse(g.gram_restriction);
  BoundaryShift out;
  out.s = apply_matrix(neg_inv, v);
  for (const auto& x : out.s)
    require(x.sign() > 0, ErrorKind::ModelInconsistency, "non-positive shift; the Gram data contradicts -M^{-1} >= 0");
  const auto ms = apply_matrix(g.gram_restriction, out.s);
  for (std::size_t j = 0; j < v.size(); ++j)
    require(ms[j] == -v[j], ErrorKind::PropertyViolation, "sum s_i e_i.e_j != -v_j");
  const ClassVector dir = combination(model, g.admissible_set, out.s);
  Rational r = 1;
  for (int step = 0; step <= 64; ++step) {
    if (is_kahler(model, a - r * dir)) {
      out.r_max_hint = r;
      return out;
    }
    r /= Rational(2);
  }
  fail(ErrorKind::SearchFailure, "no dyadic r <= 1 makes the shifted class Kahler");
}

/// A rational s with a^2 + 2s|a.e| > s^2 k > 2s|a.e|, found by exact bisection.
/// Then b = a - s e satisfies b.e > |a.e|, b^2 > 0 and b.a > 0.
inline Rational single_curve_shift(const CurveModel& model, const ClassVector& a, const CurveData& e) {
  require(is_positive_cone(model.lattice(), a), ErrorKind::Precondition, "class not in positive cone");
  const Rational ae = model.pair(a, e.cls);
  require(ae.sign() < 0, ErrorKind::Precondition, "class must pair negatively with " + e.label);
  const Rational k = -model.square(e.cls);
  require(k.sign() > 0, ErrorKind::Precondition, "curve must have negative square");
  const Rational w = ae.abs();
  const Rational a2 = model.square(a);
  auto upper_ok = [&](const Rational& s) { return a2 + Rational(2) * s * w > s * s * k; };
  auto lower_ok = [&](const Rational& s) { return s * s * k > Rational(2) * s * w; };

  const Rational lo = Rational(2) * w / k;  // upper_ok(lo) holds: value a^2 > 0
  Rational step = 1;
  Rational hi = lo + step;
  while (upper_ok(hi)) {
    step *= Rational(2);
    hi = lo + step;
  }
  Rational s;
  bool found = false;
  for (int it = 0; it < 256; ++it) {
    Rational mid = (lo + hi) / Rational(2);
    if (upper_ok(mid) && lower_ok(mid)) {
      s = mid;
      found = true;
      break;
    }
    hi = mid;
  }
  require(found, ErrorKind::SearchFailure, "bisection did not find a shift");
  const ClassVector b = a - s * e.cls;
  require(model.pair(b, e.cls) > w, ErrorKind::PropertyViolation, "shifted class is not positive enough on e");
  require(model.square(b).sign() > 0, ErrorKind::PropertyViolation, "shifted class has non-positive square");
  require(model.pair(b, a).sign() > 0, ErrorKind::PropertyViolation, "shifted class pairs non-positively with a");
  return s;
}

}  // namespace symcone
