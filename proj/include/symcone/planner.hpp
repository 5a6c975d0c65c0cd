#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symcone/chambers.hpp"
#include "symcone/errors.hpp"
#include "symcone/lp.hpp"
#include "symcone/moves.hpp"

namespace symcone {

// ---------------------------------------------------------------------------
// Dual graphs and Dynkin types
// ---------------------------------------------------------------------------

struct DualGraph {
  std::vector<std::size_t> vertices;            // curve indices
  std::vector<std::vector<long>> multiplicity;  // by local index
  std::vector<long> squares;
  std::vector<long> genera;

  std::size_t size() const noexcept { return vertices.size(); }
  std::size_t degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < size(); ++j)
      if (j != i && multiplicity[i][j] > 0) ++d;
    return d;
  }
  std::vector<std::size_t> neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j)
      if (j != i && multiplicity[i][j] > 0) out.push_back(j);
    return out;
  }
};

inline DualGraph dual_graph(const CurveModel& model, const std::vector<std::size_t>& vertices) {
  DualGraph g;
  g.vertices = vertices;
  const std::size_t n = vertices.size();
  g.multiplicity.assign(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const CurveData& c = model.curve(vertices[i]);
    g.squares.push_back(model.square(c.cls).num().get_si());
    g.genera.push_back(c.genus);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rational p = model.pair(c.cls, model.curve(vertices[j]).cls);
      require(p.sign() >= 0 && p.is_integer(), ErrorKind::Precondition,
              "curves " + c.label + " and " + model.curve(vertices[j]).label + " pair to " + p.str());
      g.multiplicity[i][j] = p.num().get_si();
    }
  }
  return g;
}

/// Connected components as lists of local indices, each sorted, ordered by
/// smallest member.
inline std::vector<std::vector<std::size_t>> connected_components(const DualGraph& g) {
  std::vector<int> comp(g.size(), -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> members{s}, stack{s};
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : g.neighbours(v))
        if (comp[w] < 0) {
          comp[w] = comp[s];
          members.push_back(w);
          stack.push_back(w);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

inline DualGraph subgraph(const DualGraph& g, const std::vector<std::size_t>& local) {
  DualGraph s;
  for (std::size_t i : local) {
    s.vertices.push_back(g.vertices[i]);
    s.squares.push_back(g.squares[i]);
    s.genera.push_back(g.genera[i]);
    std::vector<long> row;
    for (std::size_t j : local) row.push_back(g.multiplicity[i][j]);
    s.multiplicity.push_back(std::move(row));
  }
  return s;
}

enum class DynkinFamily { A, D, E, NotADE };

struct DynkinType {
  DynkinFamily family = DynkinFamily::NotADE;
  int n = 0;

  friend bool operator==(const DynkinType&, const DynkinType&) = default;
  std::string str() const {
    switch (family) {
      case DynkinFamily::A: return "A_" + std::to_string(n);
      case DynkinFamily::D: return "D_" + std::to_string(n);
      case DynkinFamily::E: return "E" + std::to_string(n);
      case DynkinFamily::NotADE: break;
    }
    return "NotADE";
  }
};

/// Shape classification; decorations are ignored.
inline DynkinType dynkin_classify(const DualGraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return {};
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.multiplicity[i][j] > 1) return {};
      edges += g.multiplicity[i][j];
    }
  if (edges != n - 1 || connected_components(g).size() != 1) return {};
  std::vector<std::size_t> branch;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = g.degree(i);
    if (d >= 4) return {};
    if (d == 3) branch.push_back(i);
  }
  const int ni = static_cast<int>(n);
  if (branch.empty()) return {DynkinFamily::A, ni};
  if (branch.size() > 1) return {};
  std::vector<int> legs;
  for (std::size_t start : g.neighbours(branch[0])) {
    int len = 1;
    std::size_t prev = branch[0], cur = start;
    for (;;) {
      std::optional<std::size_t> next;
      for (std::size_t w : g.neighbours(cur))
        if (w != prev) next = w;
      if (!next) break;
      prev = cur;
      cur = *next;
      ++len;
    }
    legs.push_back(len);
  }
  std::sort(legs.begin(), legs.end());
  if (legs[0] == 1 && legs[1] == 1) return {DynkinFamily::D, ni};
  if (legs[0] == 1 && legs[1] == 2 && legs[2] >= 2 && legs[2] <= 4) return {DynkinFamily::E, ni};
  return {};
}

/// Vertices of a path-shaped graph in order, starting from the endpoint
/// with the smaller local index.
inline std::vector<std::size_t> path_order(const DualGraph& g) {
  if (g.size() == 1) return {0};
  std::size_t start = g.size();
  for (std::size_t i = 0; i < g.size() && start == g.size(); ++i)
    if (g.degree(i) == 1) start = i;
  require(start < g.size(), ErrorKind::Precondition, "graph is not a path");
  std::vector<std::size_t> out{start};
  std::size_t prev = start;
  while (out.size() < g.size()) {
    std::optional<std::size_t> next;
    for (std::size_t w : g.neighbours(out.back()))
      if (w != prev && (out.size() < 2 || w != out[out.size() - 2])) next = w;
    require(next.has_value(), ErrorKind::Precondition, "graph is not a path");
    prev = out.back();
    out.push_back(*next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Obstructions: a non-negative integer vector with non-negative square
// ---------------------------------------------------------------------------

struct Admissible {};

struct Witness {
  std::vector<long> w;  // coefficients on the component, in the given order
  Rational square;
};

using Obstruction = std::variant<Admissible, Witness>;

namespace detail {

inline Rational quad(const RatMatrix& m, const std::vector<long>& w) {
  Rational s;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      if (w[i] && w[j]) s += Rational(w[i] * w[j]) * m(i, j);
  return s;
}

// Vectors with entries in [0, cap] and the given sum, lexicographically.
inline bool for_each_with_sum(std::size_t n, long sum, long cap, const std::function<bool(const std::vector<long>&)>& f) {
  std::vector<long> w(n, 0);
  std::function<bool(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i + 1 == n) {
      if (left > cap) return false;
      w[i] = left;
      return f(w);
    }
    const long rest_cap = cap * static_cast<long>(n - i - 1);
    for (long v = std::max(0L, left - rest_cap); v <= std::min(cap, left); ++v) {
      w[i] = v;
      if (rec(i + 1, left - v)) return true;
    }
    return false;
  };
  return rec(0, sum);
}

}  // namespace detail

inline constexpr long kWitnessCap = 4;
inline constexpr std::size_t kWitnessEnumerationMax = 7;

/// Admissible when the Gram of the component is negative definite; otherwise
/// a witness found by enumeration (entries <= 4, smallest sum first), or from
/// the Schur complement at the first failing leading minor.
inline Obstruction component_obstruction(const CurveModel& model, const std::vector<std::size_t>& component) {
  require(!component.empty(), ErrorKind::Precondition, "empty component");
  const DualGraph g = dual_graph(model, component);
  require(connected_components(g).size() == 1, ErrorKind::Connectivity, "component is not connected");
  const RatMatrix m = curve_gram(model, component);
  if (is_negative_definite(m)) return Admissible{};
  const std::size_t n = component.size();

  if (n <= kWitnessEnumerationMax) {
    std::optional<Witness> found;
    for (long s = 1; s <= kWitnessCap * static_cast<long>(n) && !found; ++s)
      detail::for_each_with_sum(n, s, kWitnessCap, [&](const std::vector<long>& w) {
        Rational q = detail::quad(m, w);
        if (q.sign() >= 0) found = Witness{w, q};
        return found.has_value();
      });
    if (found) return *found;
  }

  // x = (-M_k^{-1} b, 1, 0, ...) has x^T M x = det M_{k+1} / det M_k >= 0.
  const auto minors = leading_principal_minors(m);
  std::size_t k = 0;
  while (k < minors.size() && minors[k].sign() == (k % 2 == 0 ? -1 : 1)) ++k;
  require(k < n, ErrorKind::SearchFailure, "no failing leading minor although the form is not negative definite");
  std::vector<Rational> x(n);
  x[k] = 1;
  if (k > 0) {
    RatMatrix mk(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) mk(i, j) = m(i, j);
    const RatMatrix ninv = -inverse(mk);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) x[i] += ninv(i, j) * m(j, k);
  }
  mpz_class l = 1;
  for (const auto& v : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.den().get_mpz_t());
  Witness w;
  mpz_class g_all = 0;
  std::vector<mpz_class> ints;
  for (const auto& v : x) {
    mpz_class z = mpq_class(v.get() * l).get_num();
    mpz_gcd(g_all.get_mpz_t(), g_all.get_mpz_t(), z.get_mpz_t());
    ints.push_back(z);
  }
  for (auto& z : ints) {
    z /= g_all;
    require(z >= 0 && z.fits_slong_p(), ErrorKind::SearchFailure, "witness entry out of range");
    w.w.push_back(z.get_si());
  }
  w.square = detail::quad(m, w.w);
  require(w.square.sign() >= 0, ErrorKind::SearchFailure, "Schur witness has negative square");
  return w;
}

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

struct Unsupported {
  std::string reason;
};

using PlanResult = std::variant<Certificate, Unsupported>;

struct PlanOptions {
  std::size_t max_depth = 12;
  std::size_t branching = 8;
  std::size_t node_budget = 4000;
  std::string model_ref;
};

namespace detail {

struct SkelMove {
  bool inflate = true;
  std::string object;
  std::vector<std::string> constituents;
  std::vector<std::string> reinstate;
  std::string new_id;
};

struct Skeleton {
  std::vector<SkelMove> moves;
  std::string recipe;
  bool extrapolated = false;
};

struct SymObject {
  std::string id;
  ClassVector cls;
  long genus = 0;
  bool alive = true;
};

struct Step {
  bool inflate = true;
  ClassVector cls;
  long h = 1;
  std::vector<ClassVector> constituents;
};

// Class-level replay: every check of the move engine that does not depend
// on the running symplectic class.
class SymState {
 public:
  SymState(const CurveModel& model, const std::vector<std::size_t>& curves) : model_(&model) {
    for (auto i : curves) objs_.push_back({model.curve(i).label, model.curve(i).cls, model.curve(i).genus, true});
  }

  std::vector<std::string> alive() const {
    std::vector<std::string> out;
    for (const auto& o : objs_)
      if (o.alive) out.push_back(o.id);
    return out;
  }
  const SymObject* find(const std::string& id) const {
    for (const auto& o : objs_)
      if (o.id == id) return &o;
    return nullptr;
  }
  Rational pair(const ClassVector& a, const ClassVector& b) const { return model_->pair(a, b); }
  long meet(const std::string& a, const std::string& b) const {
    return pair(find(a)->cls, find(b)->cls).num().get_si();
  }

  bool connected(const std::vector<std::string>& ids) const {
    std::set<std::string> reached{ids.front()};
    std::vector<std::string> stack{ids.front()};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto& x : ids)
        if (!reached.count(x) && meet(cur, x) > 0) {
          reached.insert(x);
          stack.push_back(x);
        }
    }
    return reached.size() == ids.size();
  }

  // Greedy maximal set of constituents that can be put back.
  std::vector<std::string> max_reinstate(const std::vector<std::string>& cons) const {
    ClassVector sum = ClassVector::zero(model_->lattice().rank());
    for (const auto& c : cons) sum += find(c)->cls;
    std::vector<std::string> out;
    for (const auto& x : cons) {
      if (!can_reinstate(x, cons, sum)) continue;
      bool ok = true;
      for (const auto& y : out) ok = ok && meet(x, y) >= 0;
      if (ok) out.push_back(x);
    }
    return out;
  }

  std::optional<Step> apply(const SkelMove& mv) {
    Step st;
    st.inflate = mv.inflate;
    if (mv.inflate) {
      SymObject* o = get(mv.object);
      if (!o || !o->alive) return std::nullopt;
      const Rational sq = model_->square(o->cls);
      if (sq.sign() >= 0) return std::nullopt;
      st.cls = o->cls;
      st.h = h_param((-sq).num().get_si(), o->genus);
      o->alive = false;
      return st;
    }
    const auto& cons = mv.constituents;
    if (cons.size() < 2 || find(mv.new_id)) return std::nullopt;
    std::set<std::string> cset(cons.begin(), cons.end());
    if (cset.size() != cons.size()) return std::nullopt;
    for (const auto& c : cons)
      if (!find(c) || !find(c)->alive) return std::nullopt;
    if (!connected(cons)) return std::nullopt;
    ClassVector sum = ClassVector::zero(model_->lattice().rank());
    std::vector<long> genera;
    long d = 0;
    for (std::size_t i = 0; i < cons.size(); ++i) {
      sum += find(cons[i])->cls;
      genera.push_back(find(cons[i])->genus);
      st.constituents.push_back(find(cons[i])->cls);
      for (std::size_t j = i + 1; j < cons.size(); ++j) d += meet(cons[i], cons[j]);
    }
    for (const auto& x : mv.reinstate)
      if (!cset.count(x) || !can_reinstate(x, cons, sum)) return std::nullopt;
    for (const auto& c : cons) get(c)->alive = false;
    objs_.push_back({mv.new_id, sum, smoothing_genus(genera, d), true});
    for (const auto& x : mv.reinstate) get(x)->alive = true;
    const auto live = alive();
    for (std::size_t i = 0; i < live.size(); ++i)
      for (std::size_t j = i + 1; j < live.size(); ++j)
        if (meet(live[i], live[j]) < 0) return std::nullopt;
    return st;
  }

 private:
  SymObject* get(const std::string& id) {
    for (auto& o : objs_)
      if (o.id == id) return &o;
    return nullptr;
  }
  bool can_reinstate(const std::string& x, const std::vector<std::string>& cons, const ClassVector& sum) const {
    long meets = 0;
    for (const auto& y : cons)
      if (y != x) meets += meet(x, y);
    return Rational(meets) >= -model_->square(find(x)->cls) && pair(find(x)->cls, sum).sign() >= 0;
  }

  const CurveModel* model_;
  std::vector<SymObject> objs_;
};

inline std::optional<std::vector<Step>> structure(const CurveModel& model, const std::vector<std::size_t>& curves,
                                                  const Skeleton& sk) {
  SymState st(model, curves);
  std::vector<Step> steps;
  for (const auto& mv : sk.moves) {
    auto s = st.apply(mv);
    if (!s) return std::nullopt;
    steps.push_back(std::move(*s));
  }
  if (!st.alive().empty()) return std::nullopt;
  return steps;
}

// Affine form c + coef . tau in the inflation amounts.
struct Affine {
  std::vector<Rational> coef;
  Rational c;
};

class AmountSystem {
 public:
  AmountSystem(const CurveModel& model, const ClassVector& target, const std::vector<Step>& steps)
      : model_(model), target_(target), steps_(steps) {
    for (std::size_t p = 0; p < steps.size(); ++p)
      if (steps[p].inflate) var_of_.push_back(p);
    const std::size_t nv = var_of_.size();
    for (std::size_t v = 0; v < nv; ++v) {
      const Step& s = steps[var_of_[v]];
      Affine bound = area_before(var_of_[v], s.cls);
      for (auto& x : bound.coef) x *= Rational(2);
      bound.c *= Rational(2);
      bound.coef[v] -= Rational(s.h);
      rows_.push_back(bound);
      Affine pos{std::vector<Rational>(nv), 0};
      pos.coef[v] = 1;
      rows_.push_back(pos);
    }
    for (std::size_t p = 0; p < steps.size(); ++p)
      if (!steps[p].inflate)
        for (const auto& c : steps[p].constituents) rows_.push_back(area_before(p, c));
  }

  std::size_t vars() const { return var_of_.size(); }

  void require_positive_on(const ClassVector& e) { rows_.push_back(area_before(0, e)); }

  /// Strict feasibility via homogenisation: rows(tau') + c lambda >= 1, lambda >= 1.
  std::optional<std::vector<Rational>> strictly_feasible() const {
    const std::size_t nv = vars();
    LinearProgram lp(nv + 1);
    for (const auto& r : rows_) {
      auto coeffs = r.coef;
      coeffs.push_back(r.c);
      lp.add_row(std::move(coeffs), 1);
    }
    std::vector<Rational> lam(nv + 1);
    lam[nv] = 1;
    lp.add_row(lam, 1);
    auto sol = lp.solve();
    if (!sol) return std::nullopt;
    std::vector<Rational> tau(nv);
    for (std::size_t i = 0; i < nv; ++i) tau[i] = (*sol)[i] / (*sol)[nv];
    return tau;
  }

  /// Smallest total inflation with every row at least delta.
  std::optional<std::vector<Rational>> minimal(const Rational& delta) const {
    LinearProgram lp(vars());
    for (const auto& r : rows_) lp.add_row(r.coef, delta - r.c);
    lp.set_cost(std::vector<Rational>(vars(), Rational(1)));
    return lp.solve();
  }

  ClassVector base(const std::vector<Rational>& tau) const {
    ClassVector b = target_;
    for (std::size_t v = 0; v < vars(); ++v) b -= tau[v] * steps_[var_of_[v]].cls;
    return b;
  }

 private:
  // Pairing of cls with the running class just before step p.
  Affine area_before(std::size_t p, const ClassVector& cls) const {
    Affine a{std::vector<Rational>(vars()), model_.pair(target_, cls)};
    for (std::size_t v = 0; v < vars(); ++v)
      if (var_of_[v] >= p) a.coef[v] = -model_.pair(steps_[var_of_[v]].cls, cls);
    return a;
  }

  const CurveModel& model_;
  ClassVector target_;
  std::vector<Step> steps_;
  std::vector<std::size_t> var_of_;
  std::vector<Affine> rows_;
};

// Fresh object ids for smoothings within one component.
class IdSource {
 public:
  IdSource(const CurveModel& model, std::string prefix) : model_(&model), prefix_(std::move(prefix)) {}
  std::string next() {
    for (;;) {
      std::string id = prefix_ + std::to_string(++n_);
      if (!model_->curve_index(id)) return id;
    }
  }

 private:
  const CurveModel* model_;
  std::string prefix_;
  int n_ = 0;
};

inline std::vector<std::string> labels_of(const CurveModel& model, const std::vector<std::size_t>& curves,
                                          const std::vector<std::size_t>& order) {
  std::vector<std::string> out;
  for (auto i : order) out.push_back(model.curve(curves[i]).label);
  return out;
}

inline SkelMove inflate_move(std::string id) { return SkelMove{true, std::move(id), {}, {}, {}}; }
inline SkelMove smooth_move(std::vector<std::string> cons, std::vector<std::string> re, std::string id) {
  return SkelMove{false, {}, std::move(cons), std::move(re), std::move(id)};
}

// Smooth the chain, reinstate all but its far end, inflate; recurse.
inline Skeleton chain_from_end(std::vector<std::string> chain, IdSource ids) {
  Skeleton sk{{}, "chain-from-end", false};
  while (chain.size() >= 2) {
    std::string s = ids.next();
    std::vector<std::string> keep(chain.begin(), chain.end() - 1);
    sk.moves.push_back(smooth_move(chain, keep, s));
    sk.moves.push_back(inflate_move(s));
    chain = keep;
  }
  sk.moves.push_back(inflate_move(chain.front()));
  return sk;
}

// Smooth the chain, reinstate its interior, inflate; recurse on the interior.
inline void symmetric_chain(std::vector<std::string> chain, IdSource& ids, Skeleton& sk) {
  while (!chain.empty()) {
    if (chain.size() == 1) {
      sk.moves.push_back(inflate_move(chain.front()));
      return;
    }
    std::string s = ids.next();
    std::vector<std::string> interior(chain.begin() + 1, chain.end() - 1);
    sk.moves.push_back(smooth_move(chain, interior, s));
    sk.moves.push_back(inflate_move(s));
    chain = interior;
  }
}

inline Skeleton gamma0_skeleton(const std::vector<std::string>& p, IdSource ids) {
  const std::string t = ids.next(), s = ids.next(), s2 = ids.next();
  return Skeleton{{smooth_move({p[1], p[0]}, {p[1]}, t),
                   smooth_move({p[2], t, p[1], p[3]}, {p[2], p[1], p[3]}, s),
                   inflate_move(s),
                   smooth_move({p[1], p[2], p[3]}, {p[1], p[3]}, s2),
                   inflate_move(s2),
                   inflate_move(p[1]),
                   inflate_move(p[3])},
                  "gamma0",
                  false};
}

inline std::optional<Skeleton> greedy_skeleton(const CurveModel& model, const std::vector<std::size_t>& curves,
                                                IdSource ids, std::size_t max_moves) {
  SymState st(model, curves);
  Skeleton sk{{}, "greedy", false};
  while (!st.alive().empty()) {
    if (sk.moves.size() >= max_moves) return std::nullopt;
    auto live = st.alive();
    // First connected cluster of live objects.
    std::vector<std::string> cluster{live.front()};
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& x : live)
        if (std::find(cluster.begin(), cluster.end(), x) == cluster.end())
          for (const auto& y : cluster)
            if (st.meet(x, y) > 0) {
              cluster.push_back(x);
              grew = true;
              break;
            }
    }
    SkelMove mv;
    if (cluster.size() == 1) {
      mv = inflate_move(cluster.front());
      if (!st.apply(mv)) return std::nullopt;
      sk.moves.push_back(mv);
      continue;
    }
    auto re = st.max_reinstate(cluster);
    if (re.size() == cluster.size()) re.pop_back();
    std::string s = ids.next();
    mv = smooth_move(cluster, re, s);
    if (!st.apply(mv)) return std::nullopt;
    sk.moves.push_back(mv);
    mv = inflate_move(s);
    if (!st.apply(mv)) return std::nullopt;
    sk.moves.push_back(mv);
  }
  return sk;
}

// Recipe skeletons for a connected component, most specific first.
inline std::vector<Skeleton> recipes(const CurveModel& model, const DualGraph& g, const DynkinType& type,
                                     const std::string& prefix) {
  std::vector<Skeleton> out;
  const std::vector<std::size_t>& curves = g.vertices;
  IdSource ids(model, prefix);
  if (g.size() == 1) {
    out.push_back(Skeleton{{inflate_move(model.curve(curves[0]).label)}, "isolated", false});
    return out;
  }
  if (type.family == DynkinFamily::A) {
    auto order = path_order(g);
    auto rev = order;
    std::reverse(rev.begin(), rev.end());
    auto is_c = [&](std::size_t i) { return g.squares[i] == -3 && g.genera[i] > 0; };
    auto is_b = [&](std::size_t i) { return g.squares[i] == -1 && g.genera[i] > 0; };
    if (g.size() == 4)
      for (const auto& o : {order, rev})
        if (is_c(o[0]) && is_b(o[1]) && is_c(o[2]) && is_b(o[3]))
          out.push_back(gamma0_skeleton(labels_of(model, curves, o), ids));
    for (const auto& o : {order, rev})
      if (is_b(o[0])) out.push_back(chain_from_end(labels_of(model, curves, o), ids));
    Skeleton sym{{}, "symmetric-chain", false};
    IdSource sym_ids = ids;
    symmetric_chain(labels_of(model, curves, order), sym_ids, sym);
    out.push_back(sym);
  }
  if (type.family == DynkinFamily::D) {
    std::size_t b = 0;
    while (g.degree(b) != 3) ++b;
    // Long leg: the neighbour of b with the longest arm.
    std::vector<std::size_t> long_leg;
    for (std::size_t start : g.neighbours(b)) {
      std::vector<std::size_t> leg{start};
      std::size_t prev = b;
      for (;;) {
        std::optional<std::size_t> next;
        for (std::size_t w : g.neighbours(leg.back()))
          if (w != prev) next = w;
        if (!next) break;
        prev = leg.back();
        leg.push_back(*next);
      }
      if (leg.size() > long_leg.size()) long_leg = leg;
    }
    std::vector<std::size_t> kept{b};
    kept.insert(kept.end(), long_leg.begin(), long_leg.end() - 1);
    std::vector<std::size_t> all(g.size());
    std::iota(all.begin(), all.end(), 0);
    Skeleton sk{{}, "d-series", true};
    IdSource d_ids = ids;
    const std::string s = d_ids.next();
    sk.moves.push_back(smooth_move(labels_of(model, curves, all), labels_of(model, curves, kept), s));
    sk.moves.push_back(inflate_move(s));
    symmetric_chain(labels_of(model, curves, kept), d_ids, sk);
    out.push_back(sk);
  }
  std::vector<std::size_t> ordered(curves.size());
  std::iota(ordered.begin(), ordered.end(), 0);
  if (auto gr = greedy_skeleton(model, curves, ids, 24)) out.push_back(*gr);
  Skeleton plain{{}, "inflate-each", false};
  for (const auto& l : labels_of(model, curves, ordered)) plain.moves.push_back(inflate_move(l));
  out.push_back(plain);
  return out;
}

// Bounded depth-first search over skeletons, ordered by (move kind, ids).
inline void search_skeletons(const CurveModel& model, const std::vector<std::size_t>& curves, const PlanOptions& opt,
                             const std::string& prefix, const std::function<bool(const Skeleton&)>& accept) {
  std::size_t nodes = 0;
  bool done = false;
  Skeleton cur{{}, "search", false};
  int fresh = 0;
  std::function<void(const SymState&)> rec = [&](const SymState& st) {
    if (done || ++nodes > opt.node_budget) return;
    auto live = st.alive();
    if (live.empty()) {
      done = accept(cur);
      return;
    }
    if (cur.moves.size() >= opt.max_depth) return;
    std::vector<SkelMove> cands;
    for (const auto& id : live) cands.push_back(inflate_move(id));
    if (live.size() <= 10) {
      std::vector<std::vector<std::string>> subsets;
      for (unsigned mask = 1; mask < (1u << live.size()); ++mask) {
        if (__builtin_popcount(mask) < 2) continue;
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < live.size(); ++i)
          if (mask & (1u << i)) sub.push_back(live[i]);
        if (st.connected(sub)) subsets.push_back(std::move(sub));
      }
      std::sort(subsets.begin(), subsets.end());
      for (auto& sub : subsets) {
        auto re = st.max_reinstate(sub);
        cands.push_back(smooth_move(sub, re, {}));
      }
    }
    if (cands.size() > opt.branching) cands.resize(opt.branching);
    for (auto& mv : cands) {
      if (!mv.inflate) mv.new_id = prefix + "x" + std::to_string(++fresh);
      SymState next = st;
      if (!next.apply(mv)) continue;
      cur.moves.push_back(mv);
      rec(next);
      cur.moves.pop_back();
      if (done) return;
    }
  };
  rec(SymState(model, curves));
}

inline Certificate assemble(const std::shared_ptr<const CurveModel>& model, const std::string& model_ref,
                            const ClassVector& target, const std::vector<std::size_t>& g,
                            const std::vector<Skeleton>& parts, const std::vector<Rational>& tau,
                            const ClassVector& base) {
  Certificate cert;
  cert.model = model;
  cert.model_ref = model_ref;
  cert.base_class = base;
  for (auto i : g) cert.objects.push_back(model->curve(i).label);
  std::size_t v = 0;
  bool extrapolated = false, searched = false;
  for (const auto& sk : parts) {
    extrapolated |= sk.extrapolated;
    searched |= sk.recipe == "search";
    for (const auto& mv : sk.moves) {
      if (mv.inflate)
        cert.moves.push_back(Inflate{mv.object, tau[v++]});
      else
        cert.moves.push_back(SmoothAndReinstate{mv.constituents, mv.reinstate, mv.new_id});
    }
  }
  cert.target_class = target;
  if (uses_iterated_disjoin(cert.moves)) cert.annotations.push_back("iterated-disjoin");
  if (extrapolated) cert.annotations.push_back("extrapolated");
  if (searched) cert.annotations.push_back("search");
  return cert;
}

}  // namespace detail

/// Certificate for the target class, or the reason none is attempted.
/// Every returned certificate has passed verify_certificate.
inline PlanResult plan(const std::shared_ptr<const CurveModel>& model, const ClassVector& target,
                       const PlanOptions& opt = {}) {
  require(model != nullptr, ErrorKind::Configuration, "no model");
  require(target.size() == model->lattice().rank(), ErrorKind::MalformedInput, "target has the wrong length");
  require(is_positive_cone(model->lattice(), target), ErrorKind::Domain, "target not in positive cone");
  if (!model->completeness_assumed())
    return Unsupported{"model does not assume completeness of its curve list; no Kahler base is available"};

  std::vector<std::size_t> g;
  const auto pairings = model->curve_pairings(target);
  for (std::size_t i = 0; i < pairings.size(); ++i)
    if (pairings[i].sign() <= 0) g.push_back(i);

  if (g.empty()) {
    Certificate cert;
    cert.model = model;
    cert.model_ref = opt.model_ref;
    cert.base_class = target;
    cert.target_class = target;
    if (verify_certificate(cert).passed) return cert;
    return Unsupported{"target pairs positively with every curve but is not Kahler"};
  }

  const DualGraph graph = dual_graph(*model, g);
  const auto comps = connected_components(graph);
  for (const auto& comp : comps) {
    const DualGraph sub = subgraph(graph, comp);
    auto obs = component_obstruction(*model, sub.vertices);
    if (const auto* w = std::get_if<Witness>(&obs)) {
      std::string coeffs;
      for (std::size_t i = 0; i < w->w.size(); ++i)
        coeffs += (i ? "," : "") + std::to_string(w->w[i]);
      return Unsupported{"vanishing set is not admissible: witness (" + coeffs + ") has square " +
                         w->square.str()};
    }
    const DynkinType type = dynkin_classify(sub);
    if (type.family == DynkinFamily::E) return Unsupported{type.str() + " excluded"};
    if (sub.size() == 1 && sub.genera[0] == 0 && (-sub.squares[0]) % 2 == 1) {
      const long k = -sub.squares[0];
      return Unsupported{"sphere of odd square: " + model->curve(sub.vertices[0]).label + " has square " +
                         std::to_string(-k) + ", so inflation along it is limited to t in (0, 2A/" +
                         std::to_string(k + 1) + ")"};
    }
  }

  // Per component: first skeleton whose own constraints are strictly feasible.
  std::vector<detail::Skeleton> chosen;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const DualGraph sub = subgraph(graph, comps[ci]);
    const std::string prefix = comps.size() == 1 ? "S" : "S" + std::to_string(ci + 1) + "_";
    auto try_skeleton = [&](const detail::Skeleton& sk) {
      auto steps = detail::structure(*model, sub.vertices, sk);
      if (!steps) return false;
      detail::AmountSystem sys(*model, target, *steps);
      for (auto i : sub.vertices) sys.require_positive_on(model->curve(i).cls);
      return sys.strictly_feasible().has_value();
    };
    std::optional<detail::Skeleton> pick;
    for (const auto& sk : detail::recipes(*model, sub, dynkin_classify(sub), prefix))
      if (try_skeleton(sk)) {
        pick = sk;
        break;
      }
    if (!pick)
      detail::search_skeletons(*model, sub.vertices, opt, prefix, [&](const detail::Skeleton& sk) {
        if (!try_skeleton(sk)) return false;
        pick = sk;
        return true;
      });
    if (!pick) {
      std::string names;
      for (auto i : sub.vertices) names += (names.empty() ? "" : ",") + model->curve(i).label;
      return Unsupported{"no move sequence found for component {" + names + "}"};
    }
    chosen.push_back(*pick);
  }

  detail::Skeleton joint;
  for (const auto& sk : chosen) joint.moves.insert(joint.moves.end(), sk.moves.begin(), sk.moves.end());
  auto steps = detail::structure(*model, g, joint);
  require(steps.has_value(), ErrorKind::PropertyViolation, "component skeletons do not combine");
  detail::AmountSystem sys(*model, target, *steps);
  for (const auto& c : model->curves()) sys.require_positive_on(c.cls);

  std::string last = "joint inflation system is infeasible";
  Rational delta = 1;
  for (int attempt = 0; attempt < 16; ++attempt, delta /= Rational(8)) {
    auto tau = sys.minimal(delta);
    if (!tau) continue;
    Certificate cert = detail::assemble(model, opt.model_ref, target, g, chosen, *tau, sys.base(*tau));
    VerificationReport rep = verify_certificate(cert);
    if (rep.passed) return cert;
    last = rep.first_failure;
  }
  return Unsupported{"no verified certificate: " + last};
}

}  // namespace symcone
