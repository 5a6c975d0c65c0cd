// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "symcone/symcone.hpp"

using namespace symcone;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome ac1() {
  Outcome o;
  const auto t0 = Clock::now();
  KKModel kk = build_kk_model(true);
  const auto& m = *kk.model;
  const ClassVector base = kk_gamma0_base(kk, 1);
  const std::vector<Rational> expect{3, 1, 1, 2};
  for (std::size_t i = 0; i < 4; ++i)
    o.check(m.pair(base, kk.curve(kk.gamma0[i])) == expect[i], "base pairing with Gamma0 curve " + std::to_string(i));
  const Certificate cert = kk_gamma0_certificate(1);
  const VerificationReport rep = verify_certificate(cert);
  o.check(rep.passed, "verification: " + rep.first_failure);
  o.check(rep.ledger.size() == 7, "ledger length");
  if (rep.ledger.size() >= 3)
    o.check(rep.ledger[2].class_after == kk.omega0() - kk.gamma0_combination({0, 5, 4, 6}),
            "class after inflate(S, 8)");
  o.check(rep.final_class == kk.omega0(), "final class");
  const double s = seconds_since(t0);
  o.check(s < 1.0, "runtime");
  std::ostringstream d;
  d << "Gamma0 replay exact, " << s << " s";
  if (o.ok) o.detail = d.str();
  return o;
}

Outcome ac2() {
  Outcome o;
  KKModel kk = build_kk_model(false);
  const auto& m = *kk.model;
  o.check(m.square(*m.lattice().canonical_class()) == Rational(333), "K.K");
  for (std::size_t i = 0; i < 21; ++i) {
    const long g = i < 9 ? 4 : 2;
    o.check(m.curve(i).genus == g && adjunction_check(m.lattice(), m.curve(i).cls, g),
            "adjunction for " + m.curve(i).label);
  }
  if (o.ok) o.detail = "K.K = 333, genera 4 (C) and 2 (D)";
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> off(0, 2), diag(1, 8), size(1, 6);
  int accepted = 0, drawn = 0;
  while (accepted < 1000) {
    ++drawn;
    const std::size_t n = static_cast<std::size_t>(size(rng));
    RatMatrix mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      mat(i, i) = Rational(-diag(rng));
      for (std::size_t j = i + 1; j < n; ++j) mat(i, j) = mat(j, i) = Rational(off(rng));
    }
    if (!is_negative_definite(mat)) continue;
    ++accepted;
    const RatMatrix ni = neg_inverse(mat);
    o.check(ni * (-mat) == RatMatrix::identity(n), "inverse identity");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) o.check(ni(i, j).sign() >= 0, "negative entry in -M^-1");
  }
  const double s = seconds_since(t0);
  o.check(s < 30.0, "runtime");
  std::ostringstream d;
  d << accepted << " matrices (" << drawn << " drawn), " << s << " s";
  if (o.ok) o.detail = d.str();
  return o;
}

Outcome ac4() {
  Outcome o;
  KKModel kk = build_kk_model(true);
  const auto& m = *kk.model;
  o.check(m.square(kk.gamma0_combination({1, 2, 1, 1})) == Rational(-1), "square of C1+2B1+C2+B2");
  o.check(m.square(kk.gamma0_combination({0, 1, 1, 1})) == Rational(-1), "square of B1+C2+B2");
  // Genus from adjunction, g = 1 + (e.e + K.e)/2, cross-checked against the replay.
  const ClassVector& k = *m.lattice().canonical_class();
  auto genus = [&](const ClassVector& e) { return Rational(1) + (m.square(e) + m.pair(k, e)) / Rational(2); };
  o.check(genus(kk.gamma0_combination({1, 2, 1, 1})) == Rational(14), "genus of S");
  o.check(genus(kk.gamma0_combination({0, 1, 1, 1})) == Rational(8), "genus of S'");
  Certificate cert = kk_gamma0_certificate(1);
  ConfigurationState st = initial_state(cert);
  for (std::size_t i = 0; i < 4; ++i) st = apply_move(st, cert.moves[i]);
  o.check(st.object("S").genus == 14 && st.object("S'").genus == 8, "replayed genera");
  if (o.ok) o.detail = "squares -1, -1; genera 14, 8";
  return o;
}

Outcome ac5() {
  Outcome o;
  auto quad = [](const RatMatrix& m, const std::vector<long>& w) { return detail::quad(m, w); };
  RatMatrix bc{{-1, 1, 0, 0, 0}, {1, -3, 1, 0, 0}, {0, 1, -1, 1, 0}, {0, 0, 1, -3, 1}, {0, 0, 0, 1, -1}};
  RatMatrix cd{{-3, 1, 0, 0, 0}, {1, -1, 1, 0, 0}, {0, 1, -3, 1, 0}, {0, 0, 1, -1, 1}, {0, 0, 0, 1, -3}};
  RatMatrix loop{{-3, 1, 0, 1}, {1, -1, 1, 0}, {0, 1, -3, 1}, {1, 0, 1, -1}};
  o.check(quad(bc, {1, 1, 2, 1, 1}).is_zero(), "B-C-B-C-B vector");
  o.check(quad(cd, {1, 3, 2, 3, 1}).is_zero(), "C-D-C-D-C vector");
  o.check(quad(loop, {1, 1, 1, 1}).is_zero(), "alternating loop, a = 2");
  if (o.ok) o.detail = "three witnesses of square 0";
  return o;
}

Outcome ac6() {
  Outcome o;
  std::mt19937 rng(6);
  std::uniform_int_distribution<long> sq(1, 5), gen(0, 2), mult(0, 1), num(1, 7);
  int done = 0;
  while (done < 500) {
    const std::size_t n = 2 + static_cast<std::size_t>(done % 4);
    std::vector<CurveSpec> specs;
    for (std::size_t i = 0; i < n; ++i) specs.push_back({"e" + std::to_string(i), -sq(rng), gen(rng)});
    std::vector<std::tuple<std::size_t, std::size_t, long>> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (long mu = mult(rng)) edges.emplace_back(i, j, mu);
    auto model = build_configuration_model("random", specs, edges);
    ClassVector a = ClassVector::unit(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) a[i] = -Rational(1, 1 + static_cast<long>(num(rng) % 3));
    std::vector<SurfaceObject> objs;
    for (const auto& c : model->curves()) objs.push_back({c.label, c.cls, c.genus, true});
    std::shared_ptr<const IntersectionLattice> lat(model, &model->lattice());
    ConfigurationState s(lat, a, objs);
    const std::string id = objs[static_cast<std::size_t>(num(rng)) % n].id;
    if (s.area(id).sign() <= 0) continue;
    const Rational t = inflation_bound(s, id) * Rational(num(rng), 8);
    const Rational k = -s.square(id);
    const ConfigurationState next = inflate(s, id, t);
    o.check(lat->square(next.current_class()) == lat->square(a) + Rational(2) * t * s.area(id) - t * t * k,
            "volume identity");
    for (const auto& obj : objs)
      if (obj.id != id)
        o.check(next.area(obj.id) == s.area(obj.id) + t * lat->pair(s.object(id).cls, obj.cls), "area identity");
    ++done;
  }
  if (o.ok) o.detail = "500 inflates";
  return o;
}

Outcome ac7() {
  Outcome o;
  int cases = 0;
  for (long g = 0; g <= 2; ++g)
    for (long k = 1; k <= 6; ++k) {
      const RuledModel m = build_ruled(g, k, parity_for(k));
      for (long a = 1; a <= 5; ++a) {
        const OpenInterval iv = ruled_inflation_interval(m, a);
        o.check(iv.lower.is_zero() && iv.upper == Rational(2 * a, h_param(k, g)),
                "g=" + std::to_string(g) + " k=" + std::to_string(k) + " a=" + std::to_string(a));
        ++cases;
      }
    }
  if (o.ok) o.detail = std::to_string(cases) + " cases";
  return o;
}

Outcome ac8() {
  Outcome o;
  KKModel kk = build_kk_model(true);
  const auto& lat = kk.model->lattice();
  std::mt19937 rng(8);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 9), small(-5, 5);
  std::uniform_int_distribution<std::size_t> pick(0, 20);
  for (int i = 0; i < 1000; ++i) {
    ClassVector a(lat.rank()), b(lat.rank()), z(lat.rank());
    for (std::size_t j = 0; j < lat.rank(); ++j) {
      a[j] = Rational(num(rng), den(rng));
      b[j] = Rational(num(rng), den(rng));
      z[j] = Rational(small(rng));
    }
    const std::size_t ci = pick(rng);
    const ClassVector e = kk.curve(ci);
    o.check(reflect(lat, reflect(lat, a, e), e) == a, "involution");
    o.check(lat.pair(reflect(lat, a, e), reflect(lat, b, e)) == lat.pair(a, b), "isometry");
    // Curves of square -1 (D) keep integral classes integral.
    if (ci >= 9) o.check(reflect(lat, z, e).is_integral(), "integrality for a -1 curve");
  }
  auto m2 = build_e6_fixture();
  for (const auto& c : m2->curves()) {
    ClassVector z = m2->lattice().require_reference();
    for (const auto& d : m2->curves()) z += d.cls;
    o.check(reflect(m2->lattice(), z, c.cls).is_integral(), "integrality for a -2 curve");
  }
  const ClassVector c1 = kk.curve(0), d123 = kk.curve(9);
  const ClassVector r = reflect(lat, d123, c1);
  o.check(r == d123 + Rational(2, 3) * c1 && !r.is_integral(), "square -3 counterexample");
  if (o.ok) o.detail = "1000 classes; R_C1(D123) = D123 + 2/3 C1";
  return o;
}

Outcome ac9() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto eps = log_spaced(1e-2, 1e-5, 13);
  std::ostringstream d;
  for (int k = 1; k <= 3; ++k) {
    const auto model = LocalCurveModel::polynomial(1.0, k, {1.0});
    const ContactStudy st = order_of_contact_study({model}, eps);
    for (const auto& run : st.runs) {
      o.check(run.size() == static_cast<std::size_t>(k), "solution count for k = " + std::to_string(k));
      for (const auto& p : run) o.check(p.sign == 1, "transversality sign");
    }
    const auto& slope = st.slopes.at(0).slope;
    o.check(slope.has_value() && std::abs(*slope - 4.0 / k) <= 0.3, "slope for k = " + std::to_string(k));
    d << "k=" << k << " slope " << (slope ? *slope : 0.0) << " (" << st.admitted_eps.size() << "/" << eps.size()
      << " eps) ";
  }
  const double s = seconds_since(t0);
  o.check(s < 10.0, "runtime");
  d << s << " s";
  if (o.ok) o.detail = d.str();
  return o;
}

Outcome ac10() {
  Outcome o;
  KKModel kk = build_kk_model(true);
  const auto& m = *kk.model;
  const ClassVector base = kk_gamma0_base(kk, 1);
  int sets = 0, admissible = 0;
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = i; j < 21; ++j) {
      std::vector<std::size_t> g{i};
      if (j != i) g.push_back(j);
      ++sets;
      if (!is_admissible(m, g)) continue;
      ++admissible;
      const ChamberDescriptor desc = make_descriptor(m, g);
      const CornerPoint cp = corner_point(m, base, desc);
      for (auto c : g) o.check(m.pair(cp.point, m.curve(c).cls).is_zero(), "corner pairing");
      o.check(m.square(cp.point) >= m.square(base), "corner square decreased");
      const ChamberPoint ch = chamber_point(m, cp.point, desc, 1);
      for (auto c : g) o.check(m.pair(ch.point, m.curve(c).cls) == -ch.epsilon, "chamber pairing");
    }
  if (o.ok)
    o.detail = std::to_string(sets) + " sets (210 pairs + 21 singletons), " + std::to_string(admissible) +
               " admissible";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
  };
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
