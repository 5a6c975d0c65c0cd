#include <random>

#include <gtest/gtest.h>

#include "symcone/models.hpp"
#include "symcone/planner.hpp"

using namespace symcone;

namespace {

using Edges = std::vector<std::tuple<std::size_t, std::size_t, long>>;

std::shared_ptr<const CurveModel> graph_model(std::size_t n, const Edges& edges, long square = -2, long genus = 0) {
  std::vector<CurveSpec> specs;
  for (std::size_t i = 0; i < n; ++i) specs.push_back({"v" + std::to_string(i), square, genus});
  return build_configuration_model("graph", specs, edges);
}

std::vector<std::size_t> all_curves(const CurveModel& m) {
  std::vector<std::size_t> v(m.curves().size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

DynkinType type_of(std::size_t n, const Edges& edges) {
  auto m = graph_model(n, edges);
  return dynkin_classify(dual_graph(*m, all_curves(*m)));
}

Edges path(std::size_t n) {
  Edges e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1, 1);
  return e;
}

}  // namespace

TEST(Dynkin, Examples) {
  EXPECT_EQ(type_of(4, path(4)).str(), "A_4");
  EXPECT_EQ(type_of(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {3, 4, 1}}).str(), "D_5");
  EXPECT_EQ(type_of(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}).str(), "NotADE");
  EXPECT_EQ(type_of(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 5, 1}}).str(), "E6");
  EXPECT_EQ(type_of(1, {}).str(), "A_1");
  EXPECT_EQ(type_of(2, {{0, 1, 2}}).str(), "NotADE");
}

TEST(Dynkin, AgreesWithMinusTwoDefiniteness) {
  std::vector<std::pair<std::size_t, Edges>> finite{
      {3, path(3)},
      {6, path(6)},
      {4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}},
      {6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 5, 1}}},
      {7, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {2, 6, 1}}},
      {8, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 6, 1}, {2, 7, 1}}},
  };
  for (const auto& [n, e] : finite) {
    auto m = graph_model(n, e);
    EXPECT_NE(type_of(n, e).family, DynkinFamily::NotADE);
    EXPECT_TRUE(is_negative_definite(curve_gram(*m, all_curves(*m))));
  }
  // Affine extensions: cycle, D~4, E~6, E~7, E~8.
  std::vector<std::pair<std::size_t, Edges>> affine{
      {4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}},
      {5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}}},
      {7, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 5, 1}, {5, 6, 1}}},
      {8, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 6, 1}, {3, 7, 1}}},
      {9, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 6, 1}, {6, 7, 1}, {2, 8, 1}}},
  };
  for (const auto& [n, e] : affine) {
    auto m = graph_model(n, e);
    EXPECT_EQ(type_of(n, e).family, DynkinFamily::NotADE);
    EXPECT_FALSE(is_negative_definite(curve_gram(*m, all_curves(*m))));
  }
}

TEST(Obstruction, ZeroSquareIdentities) {
  // B-C-B-C-B path with squares -1,-3,-1,-3,-1.
  std::vector<CurveSpec> bc{{"B1", -1, 2}, {"C1", -3, 4}, {"B2", -1, 2}, {"C2", -3, 4}, {"B3", -1, 2}};
  auto m1 = build_configuration_model("bc", bc, path(5));
  EXPECT_EQ(detail::quad(curve_gram(*m1, all_curves(*m1)), {1, 1, 2, 1, 1}), Rational(0));
  // C-D-C-D-C path with squares -3,-1,-3,-1,-3.
  std::vector<CurveSpec> cd{{"Ci", -3, 4}, {"D", -1, 2}, {"Cj", -3, 4}, {"D'", -1, 2}, {"Ck", -3, 4}};
  auto m2 = build_configuration_model("cd", cd, path(5));
  EXPECT_EQ(detail::quad(curve_gram(*m2, all_curves(*m2)), {1, 3, 2, 3, 1}), Rational(0));
  // Alternating loop with a = 2.
  std::vector<CurveSpec> loop{{"C1", -3, 4}, {"D1", -1, 2}, {"C2", -3, 4}, {"D2", -1, 2}};
  auto m3 = build_configuration_model("loop", loop, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  EXPECT_EQ(detail::quad(curve_gram(*m3, all_curves(*m3)), {1, 1, 1, 1}), Rational(0));

  for (const auto& m : {m1, m2, m3}) {
    auto obs = component_obstruction(*m, all_curves(*m));
    ASSERT_TRUE(std::holds_alternative<Witness>(obs));
    const auto& w = std::get<Witness>(obs);
    EXPECT_GE(w.square, Rational(0));
    EXPECT_EQ(w.square, detail::quad(curve_gram(*m, all_curves(*m)), w.w));
  }
}

TEST(Obstruction, Gamma0IsAdmissible) {
  auto kk = build_kk_model(true);
  std::vector<std::size_t> g(kk.gamma0.begin(), kk.gamma0.end());
  EXPECT_TRUE(std::holds_alternative<Admissible>(component_obstruction(*kk.model, g)));
  EXPECT_EQ(dynkin_classify(dual_graph(*kk.model, g)).str(), "A_4");
}

TEST(Obstruction, Errors) {
  auto m = graph_model(3, {{0, 1, 1}});
  try {
    component_obstruction(*m, {0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Connectivity);
  }
  EXPECT_THROW(component_obstruction(*m, {}), Error);
}

TEST(Obstruction, AgreesWithDefinitenessOnRandomGraphs) {
  std::mt19937 rng(77);
  std::uniform_int_distribution<long> sq(1, 4), mult(0, 2);
  int witnesses = 0, admissible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Edges e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1, 1 + mult(rng) / 2);  // keeps it connected
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j)
        if (long mu = mult(rng); mu > 1) e.emplace_back(i, j, 1);
    std::vector<CurveSpec> specs;
    for (std::size_t i = 0; i < n; ++i) specs.push_back({"v" + std::to_string(i), -sq(rng), 1});
    auto m = build_configuration_model("r", specs, e);
    const auto all = all_curves(*m);
    const bool nd = is_negative_definite(curve_gram(*m, all));
    auto obs = component_obstruction(*m, all);
    EXPECT_EQ(std::holds_alternative<Admissible>(obs), nd);
    if (const auto* w = std::get_if<Witness>(&obs)) {
      ++witnesses;
      EXPECT_GE(w->square, Rational(0));
      EXPECT_TRUE(std::any_of(w->w.begin(), w->w.end(), [](long x) { return x > 0; }));
      for (long x : w->w) EXPECT_GE(x, 0);
    } else {
      ++admissible;
    }
  }
  EXPECT_GT(witnesses, 20);
  EXPECT_GT(admissible, 20);
}

TEST(Plan, Omega0) {
  auto kk = build_kk_model(true);
  auto r = plan(kk.model, kk.omega0(), {.model_ref = "kk-extended"});
  ASSERT_TRUE(std::holds_alternative<Certificate>(r)) << std::get<Unsupported>(r).reason;
  const auto& cert = std::get<Certificate>(r);
  EXPECT_TRUE(verify_certificate(cert).passed);
  EXPECT_EQ(cert.target_class, kk.omega0());
  EXPECT_LE(cert.moves.size(), 12u);
}

TEST(Plan, InteriorTargetNeedsNoMoves) {
  auto kk = build_kk_model(true);
  auto r = plan(kk.model, kk_gamma0_base(kk, 1));
  ASSERT_TRUE(std::holds_alternative<Certificate>(r));
  EXPECT_TRUE(std::get<Certificate>(r).moves.empty());
}

TEST(Plan, E6Excluded) {
  auto m = build_e6_fixture();
  // w pairs to zero with every curve.
  auto r = plan(m, m->lattice().require_reference());
  ASSERT_TRUE(std::holds_alternative<Unsupported>(r));
  EXPECT_EQ(std::get<Unsupported>(r).reason, "E6 excluded");
}

TEST(Plan, OddSphereUnsupported) {
  auto rm = build_ruled(0, 3, Parity::Nontrivial);
  auto m = ruled_curve_model(rm);
  // Beyond the wall: pairs negatively with s-.
  ClassVector target{3, Rational(1, 2)};
  ASSERT_TRUE(is_positive_cone(m->lattice(), target));
  auto r = plan(m, target);
  ASSERT_TRUE(std::holds_alternative<Unsupported>(r));
  EXPECT_EQ(std::get<Unsupported>(r).reason.rfind("sphere of odd square", 0), 0u);
}

TEST(Plan, EvenSphereCorner) {
  auto m = ruled_curve_model(build_ruled(0, 2, Parity::Trivial));
  auto r = plan(m, ClassVector{1, 0});
  ASSERT_TRUE(std::holds_alternative<Certificate>(r)) << std::get<Unsupported>(r).reason;
  EXPECT_TRUE(verify_certificate(std::get<Certificate>(r)).passed);
}

TEST(Plan, IncompleteModelAndDomain) {
  auto h = build_hesse_dual();
  auto r = plan(h.model, ClassVector::unit(13, 0));
  EXPECT_TRUE(std::holds_alternative<Unsupported>(r));
  auto kk = build_kk_model(true);
  EXPECT_THROW(plan(kk.model, kk.curve(0)), Error);
}

TEST(Plan, NonAdmissibleVanishingSet) {
  std::vector<CurveSpec> loop{{"C1", -3, 4}, {"D1", -1, 2}, {"C2", -3, 4}, {"D2", -1, 2}};
  auto m = build_configuration_model("loop", loop, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  auto r = plan(m, m->lattice().require_reference());
  ASSERT_TRUE(std::holds_alternative<Unsupported>(r));
  EXPECT_NE(std::get<Unsupported>(r).reason.find("witness"), std::string::npos);
}

TEST(Plan, KKPairsAndSingletons) {
  auto kk = build_kk_model(true);
  const auto& m = *kk.model;
  ClassVector interior = kk.omega0();
  for (const auto& c : m.curves()) interior += c.cls;
  int certified = 0, sets = 0;
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = i; j < 21; ++j) {
      std::vector<std::size_t> g{i};
      if (j != i) g.push_back(j);
      ++sets;
      ASSERT_TRUE(is_admissible(m, g));
      const ClassVector target = corner_point(m, interior, make_descriptor(m, g)).point;
      auto r = plan(kk.model, target);
      ASSERT_TRUE(std::holds_alternative<Certificate>(r)) << i << "," << j << ": " << std::get<Unsupported>(r).reason;
      EXPECT_TRUE(verify_certificate(std::get<Certificate>(r)).passed);
      ++certified;
    }
  EXPECT_EQ(sets, 231);
  EXPECT_EQ(certified, 231);
}

TEST(Plan, RandomLargerSubsetsAreSound) {
  auto kk = build_kk_model(true);
  const auto& m = *kk.model;
  ClassVector interior = kk.omega0();
  for (const auto& c : m.curves()) interior += c.cls;
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> pick(0, 20);
  int tried = 0;
  for (int t = 0; t < 100; ++t) {
    std::set<std::size_t> s;
    const std::size_t size = 3 + t % 4;
    while (s.size() < size) s.insert(pick(rng));
    std::vector<std::size_t> g(s.begin(), s.end());
    if (!is_admissible(m, g)) continue;
    ++tried;
    auto r = plan(kk.model, corner_point(m, interior, make_descriptor(m, g)).point);
    if (auto* c = std::get_if<Certificate>(&r)) {
      EXPECT_TRUE(verify_certificate(*c).passed);
    }
  }
  EXPECT_GT(tried, 10);
}
