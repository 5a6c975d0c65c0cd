#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symcone/chambers.hpp"
#include "symcone/errors.hpp"
#include "symcone/lattice.hpp"

namespace symcone {

/// h = k, except h = k + 1 for a sphere of odd k.
inline long h_param(long k, long genus) {
  require(k >= 1, ErrorKind::Precondition, "h_param needs k >= 1");
  require(genus >= 0, ErrorKind::Precondition, "genus must be non-negative");
  return (genus == 0 && k % 2 == 1) ? k + 1 : k;
}

struct SurfaceObject {
  std::string id;
  ClassVector cls;
  long genus = 0;
  bool alive = true;
};

/// Running symplectic class plus the live surfaces. Intersections between
/// distinct live surfaces are transverse and positive, so the geometric
/// count equals the homological pairing.
class ConfigurationState {
 public:
  ConfigurationState(std::shared_ptr<const IntersectionLattice> lattice, ClassVector current,
                     std::vector<SurfaceObject> objects)
      : lattice_(std::move(lattice)), current_(std::move(current)), objects_(std::move(objects)) {
    require(lattice_ != nullptr, ErrorKind::Configuration, "state needs a lattice");
    require(current_.size() == lattice_->rank(), ErrorKind::MalformedInput, "current class has the wrong length");
    std::set<std::string> seen;
    for (const auto& o : objects_) {
      require(seen.insert(o.id).second, ErrorKind::MalformedInput, "duplicate object id " + o.id);
      require(o.cls.size() == lattice_->rank() && o.cls.is_integral(), ErrorKind::MalformedInput,
              "object " + o.id + " needs an integral class of the lattice's rank");
      require(o.genus >= 0, ErrorKind::MalformedInput, "object " + o.id + " has negative genus");
    }
    for (std::size_t i = 0; i < objects_.size(); ++i)
      if (objects_[i].alive) refresh_geom(objects_[i].id);
  }

  const IntersectionLattice& lattice() const noexcept { return *lattice_; }
  const std::shared_ptr<const IntersectionLattice>& lattice_ptr() const noexcept { return lattice_; }
  const ClassVector& current_class() const noexcept { return current_; }
  const std::vector<SurfaceObject>& objects() const noexcept { return objects_; }

  bool has(const std::string& id) const { return find(id) != nullptr; }

  const SurfaceObject& object(const std::string& id) const {
    const SurfaceObject* o = find(id);
    require(o != nullptr, ErrorKind::MalformedInput, "unknown object " + id);
    return *o;
  }

  std::vector<std::string> alive_ids() const {
    std::vector<std::string> out;
    for (const auto& o : objects_)
      if (o.alive) out.push_back(o.id);
    return out;
  }

  /// Symplectic area of an object: pairing with the running class.
  Rational area(const std::string& id) const { return lattice_->pair(current_, object(id).cls); }
  Rational square(const std::string& id) const { return lattice_->square(object(id).cls); }

  long geom(const std::string& a, const std::string& b) const {
    auto it = geom_.find(key(a, b));
    return it == geom_.end() ? 0 : it->second;
  }

  // Mutators used by the move functions on private copies.
  void set_current(ClassVector c) { current_ = std::move(c); }

  void kill(const std::string& id) {
    mutable_object(id).alive = false;
    for (auto it = geom_.begin(); it != geom_.end();)
      it = (it->first.first == id || it->first.second == id) ? geom_.erase(it) : std::next(it);
  }

  void revive(const std::string& id) {
    mutable_object(id).alive = true;
    refresh_geom(id);
  }

  void add(SurfaceObject o) {
    require(!has(o.id), ErrorKind::MalformedInput, "object id " + o.id + " already in use");
    const std::string id = o.id;
    objects_.push_back(std::move(o));
    refresh_geom(id);
  }

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  const SurfaceObject* find(const std::string& id) const {
    for (const auto& o : objects_)
      if (o.id == id) return &o;
    return nullptr;
  }

  SurfaceObject& mutable_object(const std::string& id) {
    for (auto& o : objects_)
      if (o.id == id) return o;
    fail(ErrorKind::MalformedInput, "unknown object " + id);
  }

  // Sets geom rows of a live object to homological pairings (must be >= 0).
  void refresh_geom(const std::string& id) {
    const SurfaceObject& me = object(id);
    for (const auto& o : objects_) {
      if (!o.alive || o.id == id) continue;
      Rational p = lattice_->pair(me.cls, o.cls);
      require(p.sign() >= 0, ErrorKind::Positivity,
              "objects " + id + " and " + o.id + " would intersect negatively (" + p.str() + ")");
      geom_[key(id, o.id)] = p.num().get_si();
    }
  }

  std::shared_ptr<const IntersectionLattice> lattice_;
  ClassVector current_;
  std::vector<SurfaceObject> objects_;
  std::map<std::pair<std::string, std::string>, long> geom_;
};

struct Inflate {
  std::string object_id;
  Rational t;
};

struct InflateNonneg {
  std::string object_id;
  Rational t;
};

struct SmoothAndReinstate {
  std::vector<std::string> constituent_ids;
  std::vector<std::string> reinstate_ids;
  std::string new_id;
};

using Move = std::variant<Inflate, InflateNonneg, SmoothAndReinstate>;

inline std::string describe(const Move& move) {
  struct {
    std::string operator()(const Inflate& m) const { return "inflate(" + m.object_id + ", " + m.t.str() + ")"; }
    std::string operator()(const InflateNonneg& m) const {
      return "inflate_nonneg(" + m.object_id + ", " + m.t.str() + ")";
    }
    std::string operator()(const SmoothAndReinstate& m) const {
      std::string s = "smooth{";
      for (std::size_t i = 0; i < m.constituent_ids.size(); ++i) s += (i ? "," : "") + m.constituent_ids[i];
      s += "} reinstate{";
      for (std::size_t i = 0; i < m.reinstate_ids.size(); ++i) s += (i ? "," : "") + m.reinstate_ids[i];
      return s + "} -> " + m.new_id;
    }
  } visitor;
  return std::visit(visitor, move);
}

/// Largest admissible inflation parameter (exclusive) for a live object of
/// negative square: 2A/h.
inline Rational inflation_bound(const ConfigurationState& state, const std::string& id) {
  const SurfaceObject& o = state.object(id);
  const Rational sq = state.lattice().square(o.cls);
  require(sq.sign() < 0, ErrorKind::WrongMove, "object " + id + " has non-negative square; use inflate_nonneg");
  const long k = (-sq).num().get_si();
  return Rational(2) * state.area(id) / Rational(h_param(k, o.genus));
}

/// Inflation along a live surface of square -k < 0 with 0 < t < 2A/h. The
/// surface itself is consumed; every other live surface stays symplectic
/// and its area grows by t * (e . e_j) >= 0.
inline ConfigurationState inflate(const ConfigurationState& state, const std::string& id, const Rational& t) {
  const SurfaceObject& o = state.object(id);
  require(o.alive, ErrorKind::Liveness, "object " + id + " is not alive");
  const Rational sq = state.lattice().square(o.cls);
  require(sq.sign() < 0, ErrorKind::WrongMove, "object " + id + " has non-negative square; use inflate_nonneg");
  const Rational a = state.area(id);
  require(a.sign() > 0, ErrorKind::Precondition, "object " + id + " has non-positive area " + a.str());
  const Rational bound = inflation_bound(state, id);
  if (t.sign() <= 0 || t >= bound)
    fail(ErrorKind::BoundViolation, "bound 2A/h violated (t = " + t.str() + ", 2A/h = " + bound.str() + ")");
  ConfigurationState next = state;
  next.set_current(state.current_class() + t * o.cls);
  next.kill(id);
  return next;
}

/// Inflation along a surface of non-negative square; any t > 0 is allowed
/// and the surface survives.
inline ConfigurationState inflate_nonneg(const ConfigurationState& state, const std::string& id, const Rational& t) {
  const SurfaceObject& o = state.object(id);
  require(o.alive, ErrorKind::Liveness, "object " + id + " is not alive");
  require(state.lattice().square(o.cls).sign() >= 0, ErrorKind::WrongMove,
          "object " + id + " has negative square; use inflate");
  require(state.area(id).sign() > 0, ErrorKind::Precondition, "object " + id + " has non-positive area");
  require(t.sign() > 0, ErrorKind::Precondition, "t must be positive");
  ConfigurationState next = state;
  next.set_current(state.current_class() + t * o.cls);
  return next;
}

/// Genus after resolving d positive transverse double points among r
/// connected surfaces: sum g_i + d - (r - 1).
inline long smoothing_genus(const std::vector<long>& genera, long crossings) {
  long g = 0;
  for (long x : genera) g += x;
  return g + crossings - (static_cast<long>(genera.size()) - 1);
}

/// Smooths a connected configuration into one embedded surface in the sum
/// class, putting back a parallel copy of each reinstated constituent that
/// meets the rest at least -square times.
inline ConfigurationState smooth_and_reinstate(const ConfigurationState& state,
                                               const std::vector<std::string>& constituents,
                                               const std::vector<std::string>& reinstate, const std::string& new_id) {
  require(constituents.size() >= 2, ErrorKind::Precondition, "smoothing needs at least two constituents");
  std::set<std::string> cset(constituents.begin(), constituents.end());
  require(cset.size() == constituents.size(), ErrorKind::MalformedInput, "repeated constituent");
  require(!new_id.empty() && !state.has(new_id), ErrorKind::MalformedInput,
          "new object id \"" + new_id + "\" is empty or already in use");
  for (const auto& id : constituents) {
    const SurfaceObject& o = state.object(id);
    require(o.alive, ErrorKind::Liveness, "object " + id + " is not alive");
    require(state.area(id).sign() > 0, ErrorKind::Precondition, "object " + id + " has non-positive area");
  }
  // Connectivity of the dual graph under geom.
  std::set<std::string> reached{constituents.front()};
  std::vector<std::string> frontier{constituents.front()};
  while (!frontier.empty()) {
    std::string cur = frontier.back();
    frontier.pop_back();
    for (const auto& id : constituents)
      if (!reached.count(id) && state.geom(cur, id) > 0) {
        reached.insert(id);
        frontier.push_back(id);
      }
  }
  require(reached.size() == constituents.size(), ErrorKind::Connectivity, "constituents are not connected");

  ClassVector sum = ClassVector::zero(state.lattice().rank());
  std::vector<long> genera;
  long d = 0;
  for (std::size_t i = 0; i < constituents.size(); ++i) {
    const SurfaceObject& o = state.object(constituents[i]);
    sum += o.cls;
    genera.push_back(o.genus);
    for (std::size_t j = i + 1; j < constituents.size(); ++j) d += state.geom(constituents[i], constituents[j]);
  }
  std::set<std::string> rset;
  for (const auto& x : reinstate) {
    require(cset.count(x) > 0, ErrorKind::MalformedInput, "reinstated object " + x + " is not a constituent");
    require(rset.insert(x).second, ErrorKind::MalformedInput, "object " + x + " reinstated twice");
    long meets = 0;
    for (const auto& y : constituents)
      if (y != x) meets += state.geom(x, y);
    const Rational sq = state.square(x);
    require(Rational(meets) >= -sq, ErrorKind::Precondition,
            "disjoin needs " + x + " to meet the others at least " + (-sq).str() + " times, got " +
                std::to_string(meets));
    require(state.lattice().pair(state.object(x).cls, sum).sign() >= 0, ErrorKind::Positivity,
            "reinstated " + x + " pairs negatively with the smoothed class");
  }

  ConfigurationState next = state;
  for (const auto& id : constituents) next.kill(id);
  next.add(SurfaceObject{new_id, sum, smoothing_genus(genera, d), true});
  for (const auto& x : reinstate) next.revive(x);
  return next;
}

inline ConfigurationState apply_move(const ConfigurationState& state, const Move& move) {
  struct {
    const ConfigurationState& s;
    ConfigurationState operator()(const Inflate& m) const { return inflate(s, m.object_id, m.t); }
    ConfigurationState operator()(const InflateNonneg& m) const { return inflate_nonneg(s, m.object_id, m.t); }
    ConfigurationState operator()(const SmoothAndReinstate& m) const {
      return smooth_and_reinstate(s, m.constituent_ids, m.reinstate_ids, m.new_id);
    }
  } visitor{state};
  return std::visit(visitor, move);
}

/// Replayable proof that the target class carries symplectic forms: start
/// from a class that is Kahler by the model predicate and apply the moves.
struct Certificate {
  std::shared_ptr<const CurveModel> model;
  std::string model_ref;  // built-in model name, or empty when the model is inlined
  ClassVector base_class;
  std::string base_justification = "kahler-by-model-predicate";
  std::vector<std::string> objects;  // labels of model curves present initially
  std::vector<Move> moves;
  ClassVector target_class;
  std::vector<std::string> annotations;
};

struct MoveRecord {
  std::size_t index = 0;  // 1-based
  std::string move;
  bool ok = false;
  std::string message;
  ClassVector class_after;
  Rational square_after;
  std::optional<Rational> bound;  // 2A/h for inflate moves
  std::vector<std::pair<std::string, Rational>> areas;  // live objects after the move
};

struct VerificationReport {
  bool passed = false;
  std::string first_failure;  // empty on pass
  bool base_ok = false;
  Rational base_square;
  std::vector<MoveRecord> ledger;
  ClassVector final_class;
  bool final_matches_target = false;
  std::vector<std::string> annotations;
};

inline ConfigurationState initial_state(const Certificate& cert) {
  require(cert.model != nullptr, ErrorKind::Configuration, "certificate has no model");
  std::vector<SurfaceObject> objs;
  for (const auto& label : cert.objects) {
    auto idx = cert.model->curve_index(label);
    require(idx.has_value(), ErrorKind::MalformedInput, "object " + label + " is not a curve of the model");
    const CurveData& c = cert.model->curve(*idx);
    objs.push_back(SurfaceObject{c.label, c.cls, c.genus, true});
  }
  std::shared_ptr<const IntersectionLattice> lat(cert.model, &cert.model->lattice());
  return ConfigurationState(lat, cert.base_class, std::move(objs));
}

/// Exact replay of a certificate. Never throws: every failure becomes the
/// report's first_failure.
inline VerificationReport verify_certificate(const Certificate& cert) {
  VerificationReport report;
  report.annotations = cert.annotations;
  auto failed = [&](std::string why) {
    if (report.first_failure.empty()) report.first_failure = std::move(why);
    report.passed = false;
    return report;
  };
  if (!cert.model) return failed("certificate has no model");
  const CurveModel& model = *cert.model;
  const std::size_t n = model.lattice().rank();
  if (cert.base_class.size() != n) return failed("base class has the wrong length");
  if (cert.target_class.size() != n) return failed("target class has the wrong length");
  if (cert.base_justification != "kahler-by-model-predicate")
    return failed("unknown base justification " + cert.base_justification);
  if (!model.completeness_assumed()) return failed("model does not assume completeness; Kahler base unjustified");

  report.base_square = model.square(cert.base_class);
  if (!is_positive_cone(model.lattice(), cert.base_class)) return failed("base class not in the positive cone");
  for (const auto& c : model.curves())
    if (model.pair(cert.base_class, c.cls).sign() <= 0)
      return failed("base class not Kahler: pairs non-positively with " + c.label);
  report.base_ok = true;

  std::optional<ConfigurationState> state;
  try {
    state.emplace(initial_state(cert));
  } catch (const Error& e) {
    return failed(std::string("initial configuration: ") + e.what());
  }

  for (std::size_t i = 0; i < cert.moves.size(); ++i) {
    const Move& mv = cert.moves[i];
    MoveRecord rec;
    rec.index = i + 1;
    rec.move = describe(mv);
    try {
      if (const auto* inf = std::get_if<Inflate>(&mv); inf && state->has(inf->object_id) &&
                                                       state->object(inf->object_id).alive &&
                                                       model.square(state->object(inf->object_id).cls).sign() < 0)
        rec.bound = inflation_bound(*state, inf->object_id);
      ConfigurationState next = apply_move(*state, mv);
      state.emplace(std::move(next));
      rec.ok = true;
    } catch (const Error& e) {
      rec.ok = false;
      rec.message = e.what();
      rec.class_after = state->current_class();
      rec.square_after = model.square(state->current_class());
      report.ledger.push_back(rec);
      if (e.kind() == ErrorKind::BoundViolation)
        return failed("bound 2A/h violated at move " + std::to_string(i + 1) + " (" + e.what() + ")");
      return failed(std::string(to_string(e.kind())) + " at move " + std::to_string(i + 1) + ": " + e.what());
    }
    rec.class_after = state->current_class();
    rec.square_after = model.square(state->current_class());
    for (const auto& id : state->alive_ids()) rec.areas.emplace_back(id, state->area(id));
    report.ledger.push_back(rec);
    if (!is_positive_cone(model.lattice(), state->current_class()))
      return failed("class left the positive cone at move " + std::to_string(i + 1));
  }
  report.final_class = state->current_class();
  report.final_matches_target = report.final_class == cert.target_class;
  if (!report.final_matches_target) return failed("final class differs from target");
  report.passed = true;
  return report;
}

inline bool uses_iterated_disjoin(const std::vector<Move>& moves) {
  for (const auto& m : moves)
    if (const auto* s = std::get_if<SmoothAndReinstate>(&m); s && s->reinstate_ids.size() >= 2) return true;
  return false;
}

}  // namespace symcone
