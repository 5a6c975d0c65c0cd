#pragma once

#include <memory>
#include <utility>

#include "symcone/chambers.hpp"
#include "symcone/moves.hpp"

namespace symcone {

struct ReflectedChamber {
  ClassVector reflected;
  Certificate certificate;  // base a - eps e, then one inflation along e
  Rational epsilon;
};

/// Reflection of a Kahler class across the wall of curve e_index, realised
/// by one inflation: from the Kahler class a - eps e, inflate along e with
/// t = eps + 2 (a.e)/k. Curves that are spheres of odd square are refused.
inline ReflectedChamber reflected_chamber_certificate(std::shared_ptr<const CurveModel> model, const ClassVector& a,
                                                      std::size_t e_index, const std::string& model_ref = {}) {
  require(model != nullptr, ErrorKind::Configuration, "no model");
  require(e_index < model->curves().size(), ErrorKind::MalformedInput, "curve index out of range");
  const CurveData& e = model->curve(e_index);
  const Rational k = -model->square(e.cls);
  const long kl = k.num().get_si();
  require(!(e.genus == 0 && kl % 2 == 1), ErrorKind::Precondition,
          "curve " + e.label + " is a sphere of odd square; reflection is not available");

  ReflectedChamber out;
  out.certificate.model = model;
  out.certificate.model_ref = model_ref;
  const Rational v = model->pair(a, e.cls);
  if (v.is_zero()) {
    require(is_positive_cone(model->lattice(), a), ErrorKind::Precondition, "class not in positive cone");
    out.reflected = a;
    out.certificate.base_class = a;
    out.certificate.target_class = a;
    return out;
  }
  require(is_kahler(*model, a), ErrorKind::Precondition, "class is not interior-Kahler");

  const long h = h_param(kl, e.genus);
  Rational eps = v / (Rational(2) * k);
  for (int step = 0; step <= 64; ++step, eps /= Rational(2)) {
    const ClassVector base = a - eps * e.cls;
    if (!is_kahler(*model, base)) continue;
    const Rational t = eps + Rational(2) * v / k;
    const Rational bound = Rational(2) * model->pair(base, e.cls) / Rational(h);
    require(t < bound, ErrorKind::PropertyViolation, "reflection parameter exceeds 2A/h");
    out.reflected = reflect(model->lattice(), a, e.cls);
    out.epsilon = eps;
    out.certificate.base_class = base;
    out.certificate.objects = {e.label};
    out.certificate.moves = {Inflate{e.label, t}};
    out.certificate.target_class = out.reflected;
    require(base + t * e.cls == out.reflected, ErrorKind::PropertyViolation, "inflation does not land on R_e(a)");
    return out;
  }
  fail(ErrorKind::SearchFailure, "no epsilon keeps a - eps e Kahler");
}

}  // namespace symcone
