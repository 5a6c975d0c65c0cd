#pragma once

#include <array>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symcone/chambers.hpp"
#include "symcone/errors.hpp"
#include "symcone/lattice.hpp"
#include "symcone/moves.hpp"

namespace symcone {

// ---------------------------------------------------------------------------
// Ruled surfaces: S^2-bundles over a genus-g surface with sections s^{+k},
// s^{-k}; s^{+k}.s^{-k} = 0, so the Gram in that basis is diag(k, -k).
// ---------------------------------------------------------------------------

enum class Parity { Trivial, Nontrivial };

constexpr std::string_view to_string(Parity p) { return p == Parity::Trivial ? "trivial" : "nontrivial"; }

inline Parity parse_parity(std::string_view s) {
  if (s == "trivial") return Parity::Trivial;
  if (s == "nontrivial") return Parity::Nontrivial;
  fail(ErrorKind::MalformedInput, "parity must be \"trivial\" or \"nontrivial\", got \"" + std::string(s) + "\"");
}

struct RuledModel {
  long base_genus = 0;
  Parity parity = Parity::Trivial;
  long k = 1;
  IntersectionLattice lattice;

  /// Fibre class (s^{+k} - s^{-k}) / k.
  ClassVector fiber() const { return ClassVector{Rational(1, k), Rational(-1, k)}; }
  ClassVector section_plus() const { return ClassVector{1, 0}; }
  ClassVector section_minus() const { return ClassVector{0, 1}; }
};

/// Sections of the trivial bundle have even square and those of the
/// non-trivial bundle odd square, so parity must match k mod 2.
inline RuledModel build_ruled(long base_genus, long k, Parity parity) {
  require(base_genus >= 0, ErrorKind::MalformedInput, "base genus must be non-negative");
  require(k >= 1, ErrorKind::MalformedInput, "k must be positive");
  require((k % 2 == 0) == (parity == Parity::Trivial), ErrorKind::MalformedInput,
          "the trivial bundle carries even-square sections, the non-trivial one odd-square sections");
  // Adjunction: K.s^{+-k} = 2g - 2 -+ k.
  ClassVector canonical{Rational(2 * base_genus - 2 - k, k), Rational(-(2 * base_genus - 2 + k), k)};
  IntersectionLattice lat({{k, 0}, {0, -k}}, {"s+", "s-"}, canonical, ClassVector{1, 0});
  require(lat.square(RuledModel{base_genus, parity, k, lat}.fiber()).is_zero(), ErrorKind::Build,
          "fibre class does not have square zero");
  return RuledModel{base_genus, parity, k, std::move(lat)};
}

inline Parity parity_for(long k) { return k % 2 == 0 ? Parity::Trivial : Parity::Nontrivial; }

/// Strict linear conditions p*c+ + q*c- > 0 describing the classes
/// c+ PD(s^{+k}) + c- PD(s^{-k}) that carry symplectic forms.
inline std::vector<std::pair<Rational, Rational>> ruled_symplectic_conditions(const RuledModel& m) {
  if (m.parity == Parity::Trivial || m.base_genus > 0) return {{1, -1}, {1, 1}};  // c+ > |c-|
  // Sphere, odd k: a(s+) > 0 and (1-k)/(k+1) < a(s-)/a(s+) < 1, with
  // a(s+) = k c+, a(s-) = -k c-.
  return {{1, 0}, {m.k - 1, -(m.k + 1)}, {1, 1}};
}

inline bool ruled_symplectic_predicate(const RuledModel& m, const ClassVector& a) {
  require(a.size() == 2, ErrorKind::MalformedInput, "ruled classes have two coordinates");
  for (const auto& [p, q] : ruled_symplectic_conditions(m))
    if ((p * a[0] + q * a[1]).sign() <= 0) return false;
  return true;
}

struct OpenInterval {
  Rational lower;
  Rational upper;
};

/// Maximal open t-interval on the line (a/k) PD(s^{+k}) + (t - a/k) PD(s^{-k})
/// where the symplectic predicate holds.
inline OpenInterval ruled_inflation_interval(const RuledModel& m, const Rational& a) {
  require(a.sign() > 0, ErrorKind::Precondition, "area must be positive");
  const Rational c_plus = a / Rational(m.k);
  std::optional<Rational> lo, hi;
  lo = Rational(0);
  for (const auto& [p, q] : ruled_symplectic_conditions(m)) {
    // p c+ + q (t - c+) > 0  <=>  q t > (q - p) c+
    const Rational rhs = (q - p) * c_plus;
    if (q.is_zero()) {
      require(rhs.sign() < 0, ErrorKind::Precondition, "line misses the symplectic cone");
      continue;
    }
    const Rational cut = rhs / q;
    if (q.sign() > 0) {
      if (cut > *lo) lo = cut;
    } else if (!hi || cut < *hi) {
      hi = cut;
    }
  }
  require(hi.has_value() && *lo < *hi, ErrorKind::PropertyViolation, "inflation interval is empty or unbounded");
  return OpenInterval{*lo, *hi};
}

/// The ruled surface as a curve model: the only negative curve is the
/// section s^{-k} of genus g.
inline std::shared_ptr<const CurveModel> ruled_curve_model(const RuledModel& m) {
  std::ostringstream name;
  name << "ruled " << m.base_genus << " " << m.k << " " << to_string(m.parity);
  std::vector<CurveData> curves{{"s-", m.section_minus(), m.base_genus}};
  return std::make_shared<const CurveModel>(m.lattice, std::move(curves), true, name.str());
}

// ---------------------------------------------------------------------------
// Dual Hesse arrangement: 9 lines, 12 triple points, blown up.
// ---------------------------------------------------------------------------

inline const std::array<std::array<int, 3>, 12>& hesse_triples() {
  static const std::array<std::array<int, 3>, 12> triples{{{1, 2, 3},
                                                           {1, 4, 7},
                                                           {1, 5, 9},
                                                           {1, 6, 8},
                                                           {2, 4, 9},
                                                           {2, 5, 8},
                                                           {2, 6, 7},
                                                           {3, 4, 8},
                                                           {3, 5, 7},
                                                           {3, 6, 9},
                                                           {4, 5, 6},
                                                           {7, 8, 9}}};
  return triples;
}

inline std::string triple_label(const std::array<int, 3>& t) {
  return std::to_string(t[0]) + std::to_string(t[1]) + std::to_string(t[2]);
}

inline bool triple_contains(const std::array<int, 3>& t, int i) { return t[0] == i || t[1] == i || t[2] == i; }

struct HesseDual {
  std::shared_ptr<const CurveModel> model;  // basis H, E_t; curves L'_1..L'_9, E_t

  std::size_t line_index(int i) const { return static_cast<std::size_t>(i - 1); }
  const ClassVector& line_class(int i) const { return model->curve(line_index(i)).cls; }
};

inline HesseDual build_hesse_dual() {
  const auto& triples = hesse_triples();
  // Every index lies in exactly 4 triples and every pair in exactly one.
  for (int i = 1; i <= 9; ++i) {
    int count = 0;
    for (const auto& t : triples) count += triple_contains(t, i);
    require(count == 4, ErrorKind::Build, "index " + std::to_string(i) + " is not on 4 triples");
    for (int j = i + 1; j <= 9; ++j) {
      int both = 0;
      for (const auto& t : triples) both += triple_contains(t, i) && triple_contains(t, j);
      require(both == 1, ErrorKind::Build, "pair not covered exactly once");
    }
  }
  const std::size_t n = 13;
  std::vector<std::vector<long>> gram(n, std::vector<long>(n, 0));
  gram[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) gram[i][i] = -1;
  std::vector<std::string> labels{"H"};
  for (const auto& t : triples) labels.push_back("E" + triple_label(t));
  ClassVector canonical(n);
  canonical[0] = -3;
  for (std::size_t i = 1; i < n; ++i) canonical[i] = 1;
  IntersectionLattice lat(std::move(gram), labels, canonical, ClassVector::unit(n, 0));

  std::vector<CurveData> curves;
  for (int i = 1; i <= 9; ++i) {
    ClassVector c = ClassVector::unit(n, 0);
    for (std::size_t t = 0; t < triples.size(); ++t)
      if (triple_contains(triples[t], i)) c[t + 1] = -1;
    curves.push_back({"L" + std::to_string(i), c, 0});
  }
  for (std::size_t t = 0; t < triples.size(); ++t) curves.push_back({labels[t + 1], ClassVector::unit(n, t + 1), 0});

  auto model = std::make_shared<const CurveModel>(
      std::move(lat), std::move(curves), false, "hesse",
      std::vector<std::string>{"blow-up of the dual Hesse arrangement at its 12 triple points"});
  for (int i = 1; i <= 9; ++i) {
    require(model->square(model->curve(i - 1).cls) == Rational(-3), ErrorKind::Build, "L' square is not -3");
    for (int j = i + 1; j <= 9; ++j)
      require(model->pair(model->curve(i - 1).cls, model->curve(j - 1).cls).is_zero(), ErrorKind::Build,
              "strict transforms are not orthogonal");
  }
  return HesseDual{std::move(model)};
}

// ---------------------------------------------------------------------------
// Kharlamov-Kulikov curve lattice: 21 abstract generators C_1..C_9 (square -3,
// genus 4) and D_t (square -1, genus 2) with C_l.D_t = 1 iff l in t.
// ---------------------------------------------------------------------------

inline constexpr long kOmega0Square = 100;
inline constexpr long kOmega0OffGamma0 = 25;  // omega0 . e for curves outside Gamma0

struct KKModel {
  std::shared_ptr<const CurveModel> model;
  std::array<std::size_t, 4> gamma0{};  // curve indices of C1, B1 = D123, C2, B2 = D249
  std::optional<std::size_t> omega0_basis;

  ClassVector curve(std::size_t i) const { return model->curve(i).cls; }
  ClassVector omega0() const {
    require(omega0_basis.has_value(), ErrorKind::Configuration, "plain KK model has no omega0");
    return ClassVector::unit(model->lattice().rank(), *omega0_basis);
  }
  /// sum_i coeffs[i] * gamma0[i].
  ClassVector gamma0_combination(const std::array<Rational, 4>& coeffs) const {
    ClassVector out = ClassVector::zero(model->lattice().rank());
    for (std::size_t i = 0; i < 4; ++i) out += coeffs[i] * curve(gamma0[i]);
    return out;
  }
};

/// The extended variant adds an ambient basis vector omega0 with
/// omega0^2 = 100, vanishing on the four Gamma0 curves and pairing to 25
/// with the other seventeen, so omega0 sits in the Gamma0-corner.
inline KKModel build_kk_model(bool extended) {
  const auto& triples = hesse_triples();
  const std::size_t curves_n = 21;
  const std::size_t n = extended ? curves_n + 1 : curves_n;
  std::vector<std::vector<long>> gram(n, std::vector<long>(n, 0));
  std::vector<std::string> labels;
  for (int i = 1; i <= 9; ++i) labels.push_back("C" + std::to_string(i));
  for (const auto& t : triples) labels.push_back("D" + triple_label(t));
  for (std::size_t i = 0; i < 9; ++i) gram[i][i] = -3;
  for (std::size_t t = 0; t < 12; ++t) {
    gram[9 + t][9 + t] = -1;
    for (int l = 1; l <= 9; ++l)
      if (triple_contains(triples[t], l)) {
        gram[l - 1][9 + t] = 1;
        gram[9 + t][l - 1] = 1;
      }
  }
  const std::array<std::size_t, 4> gamma0{0, 9, 1, 13};  // C1, D123, C2, D249
  if (extended) {
    labels.push_back("omega0");
    gram[curves_n][curves_n] = kOmega0Square;
    for (std::size_t i = 0; i < curves_n; ++i) {
      const bool in_gamma0 = std::find(gamma0.begin(), gamma0.end(), i) != gamma0.end();
      gram[i][curves_n] = gram[curves_n][i] = in_gamma0 ? 0 : kOmega0OffGamma0;
    }
  }
  // K = (7 sum C + 12 sum D) / 3.
  ClassVector canonical(n);
  for (std::size_t i = 0; i < 9; ++i) canonical[i] = Rational(7, 3);
  for (std::size_t t = 0; t < 12; ++t) canonical[9 + t] = Rational(4);
  std::optional<ClassVector> reference = extended ? ClassVector::unit(n, curves_n) : canonical;
  IntersectionLattice lat(std::move(gram), labels, canonical, reference);

  std::vector<CurveData> curves;
  for (std::size_t i = 0; i < 9; ++i) curves.push_back({labels[i], ClassVector::unit(n, i), 4});
  for (std::size_t t = 0; t < 12; ++t) curves.push_back({labels[9 + t], ClassVector::unit(n, 9 + t), 2});

  std::vector<std::string> notes{
      "K^2 = 333, e(K) = 111; ball quotient (Miyaoka-Yau), rigid (Siu)",
      "completeness assumed: the 21 curves are taken to be all negative curves (not proven)"};
  if (extended) notes.push_back("omega0 is a chosen ambient class: omega0^2 = 100, zero on Gamma0, 25 elsewhere");
  KKModel out;
  out.model = std::make_shared<const CurveModel>(std::move(lat), std::move(curves), true,
                                                 extended ? "kk-extended" : "kk", std::move(notes));
  out.gamma0 = gamma0;
  if (extended) out.omega0_basis = curves_n;

  const auto& m = *out.model;
  require(m.square(canonical) == Rational(333), ErrorKind::Build, "K.K != 333");
  for (std::size_t i = 0; i < 21; ++i) {
    const auto& c = m.curve(i);
    require(adjunction_check(m.lattice(), c.cls, c.genus), ErrorKind::Build, "adjunction fails for " + c.label);
  }
  return out;
}

/// Base class omega0 - t (8 C1 + 21 B1 + 12 C2 + 14 B2) for the Gamma0 replay.
inline ClassVector kk_gamma0_base(const KKModel& kk, const Rational& t) {
  return kk.omega0() - t * kk.gamma0_combination({8, 21, 12, 14});
}

/// The Gamma0 corner certificate: two disjoin smoothings build S, inflate S
/// by 8t, smooth again to S', inflate S' by 4t, then B1 by t and B2 by 2t.
inline Certificate kk_gamma0_certificate(const Rational& t_scale) {
  require(t_scale.sign() > 0, ErrorKind::Precondition, "t_scale must be positive");
  KKModel kk = build_kk_model(true);
  const auto& m = *kk.model;
  const std::string c1 = m.curve(kk.gamma0[0]).label;
  const std::string b1 = m.curve(kk.gamma0[1]).label;
  const std::string c2 = m.curve(kk.gamma0[2]).label;
  const std::string b2 = m.curve(kk.gamma0[3]).label;
  Certificate cert;
  cert.model = kk.model;
  cert.model_ref = "kk-extended";
  cert.base_class = kk_gamma0_base(kk, t_scale);
  require(is_kahler(m, cert.base_class), ErrorKind::Precondition,
          "base class is not Kahler for t_scale = " + t_scale.str());
  cert.objects = {c1, b1, c2, b2};
  cert.moves = {
      SmoothAndReinstate{{b1, c1}, {b1}, "Ctilde"},
      SmoothAndReinstate{{c2, "Ctilde", b1, b2}, {c2, b1, b2}, "S"},
      Inflate{"S", Rational(8) * t_scale},
      SmoothAndReinstate{{b1, c2, b2}, {b1, b2}, "S'"},
      Inflate{"S'", Rational(4) * t_scale},
      Inflate{b1, t_scale},
      Inflate{b2, Rational(2) * t_scale},
  };
  cert.target_class = kk.omega0();
  cert.annotations = {"iterated-disjoin"};
  return cert;
}

// ---------------------------------------------------------------------------
// Configuration fixtures: declared curves plus an orthogonal ambient class.
// ---------------------------------------------------------------------------

struct CurveSpec {
  std::string label;
  long square = -2;
  long genus = 0;
};

/// Lattice spanned by the given curves (with the given pairwise edge
/// multiplicities) plus an ambient class "w" orthogonal to all of them.
inline std::shared_ptr<const CurveModel> build_configuration_model(
    std::string name, const std::vector<CurveSpec>& specs,
    const std::vector<std::tuple<std::size_t, std::size_t, long>>& edges, long ambient_square = 100) {
  const std::size_t c = specs.size();
  const std::size_t n = c + 1;
  std::vector<std::vector<long>> gram(n, std::vector<long>(n, 0));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < c; ++i) {
    gram[i][i] = specs[i].square;
    labels.push_back(specs[i].label);
  }
  for (const auto& [a, b, mult] : edges) {
    require(a < c && b < c && a != b, ErrorKind::MalformedInput, "bad edge");
    gram[a][b] = gram[b][a] = mult;
  }
  gram[c][c] = ambient_square;
  labels.push_back("w");
  IntersectionLattice lat(std::move(gram), std::move(labels), std::nullopt, ClassVector::unit(n, c));
  std::vector<CurveData> curves;
  for (std::size_t i = 0; i < c; ++i) curves.push_back({specs[i].label, ClassVector::unit(n, i), specs[i].genus});
  return std::make_shared<const CurveModel>(std::move(lat), std::move(curves), true, std::move(name));
}

/// E6 tree of (-2)-spheres: chain e1-e2-e3-e4-e5 with e6 on e3.
inline std::shared_ptr<const CurveModel> build_e6_fixture() {
  std::vector<CurveSpec> specs;
  for (int i = 1; i <= 6; ++i) specs.push_back({"e" + std::to_string(i), -2, 0});
  return build_configuration_model("e6", specs, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 5, 1}});
}

// ---------------------------------------------------------------------------
// Built-in model names: "kk", "kk-extended", "hesse", "ruled <g> <k> <parity>".
// ---------------------------------------------------------------------------

inline std::optional<std::shared_ptr<const CurveModel>> builtin_model(std::string_view name) {
  if (name == "kk") return build_kk_model(false).model;
  if (name == "kk-extended") return build_kk_model(true).model;
  if (name == "hesse") return build_hesse_dual().model;
  if (name == "e6") return build_e6_fixture();
  if (name.substr(0, 6) == "ruled ") {
    std::istringstream in{std::string(name.substr(6))};
    long g = -1, k = -1;
    std::string parity;
    in >> g >> k >> parity;
    require(!in.fail(), ErrorKind::MalformedInput, "expected \"ruled <g> <k> <parity>\"");
    return ruled_curve_model(build_ruled(g, k, parse_parity(parity)));
  }
  return std::nullopt;
}

}  // namespace symcone
