#include <gtest/gtest.h>

#include "symcone/models.hpp"

using namespace symcone;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Build;
}

}  // namespace

TEST(Ruled, BuildAndParity) {
  auto m = build_ruled(0, 2, Parity::Trivial);
  EXPECT_EQ(m.lattice.square(m.fiber()), Rational(0));
  EXPECT_EQ(m.lattice.square(m.section_minus()), Rational(-2));
  EXPECT_EQ(kind_of([] { build_ruled(0, 2, Parity::Nontrivial); }), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { build_ruled(0, 0, Parity::Trivial); }), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { parse_parity("twisted"); }), ErrorKind::MalformedInput);
  for (long g = 0; g <= 2; ++g)
    for (long k = 1; k <= 6; ++k) {
      auto r = build_ruled(g, k, parity_for(k));
      EXPECT_TRUE(adjunction_check(r.lattice, r.section_minus(), g));
      EXPECT_TRUE(adjunction_check(r.lattice, r.section_plus(), g));
    }
}

TEST(Ruled, PredicateExamples) {
  auto even = build_ruled(0, 2, Parity::Trivial);
  EXPECT_TRUE(ruled_symplectic_predicate(even, ClassVector{2, 1}));
  EXPECT_FALSE(ruled_symplectic_predicate(even, ClassVector{1, 1}));
  EXPECT_FALSE(ruled_symplectic_predicate(even, ClassVector{1, -2}));
  auto odd = build_ruled(0, 1, Parity::Nontrivial);
  EXPECT_TRUE(ruled_symplectic_predicate(odd, ClassVector{2, -1}));
  EXPECT_FALSE(ruled_symplectic_predicate(odd, ClassVector{1, -5}));
  EXPECT_FALSE(ruled_symplectic_predicate(odd, ClassVector{1, 1}));
}

TEST(Ruled, InflationIntervalMatchesHParam) {
  for (long g = 0; g <= 2; ++g)
    for (long k = 1; k <= 6; ++k) {
      auto m = build_ruled(g, k, parity_for(k));
      for (long a = 1; a <= 5; ++a) {
        auto iv = ruled_inflation_interval(m, a);
        EXPECT_EQ(iv.lower, Rational(0));
        EXPECT_EQ(iv.upper, Rational(2 * a, h_param(k, g))) << g << " " << k << " " << a;
      }
    }
  EXPECT_EQ(kind_of([] { ruled_inflation_interval(build_ruled(0, 1, Parity::Nontrivial), 0); }),
            ErrorKind::Precondition);
}

TEST(Ruled, CurveModel) {
  auto m = ruled_curve_model(build_ruled(1, 3, Parity::Nontrivial));
  EXPECT_EQ(m->name(), "ruled 1 3 nontrivial");
  ASSERT_EQ(m->curves().size(), 1u);
  EXPECT_EQ(m->curve(0).genus, 1);
  EXPECT_TRUE(builtin_model("ruled 0 2 trivial").has_value());
  EXPECT_EQ(kind_of([] { builtin_model("ruled x"); }), ErrorKind::MalformedInput);
}

TEST(Hesse, Invariants) {
  auto h = build_hesse_dual();
  const auto& m = *h.model;
  EXPECT_EQ(m.lattice().rank(), 13u);
  EXPECT_EQ(m.curves().size(), 21u);
  EXPECT_FALSE(m.completeness_assumed());
  for (int i = 1; i <= 9; ++i) {
    EXPECT_EQ(m.square(h.line_class(i)), Rational(-3));
    EXPECT_TRUE(adjunction_check(m.lattice(), h.line_class(i), 0));
  }
  // Each line meets the four exceptional curves over its triple points.
  for (int i = 1; i <= 9; ++i) {
    int meets = 0;
    for (std::size_t e = 9; e < 21; ++e) meets += m.pair(h.line_class(i), m.curve(e).cls) == Rational(1);
    EXPECT_EQ(meets, 4);
  }
}

TEST(KK, Invariants) {
  for (bool ext : {false, true}) {
    auto kk = build_kk_model(ext);
    const auto& m = *kk.model;
    EXPECT_EQ(m.square(*m.lattice().canonical_class()), Rational(333));
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_EQ(m.curve(i).genus, 4);
      EXPECT_TRUE(adjunction_check(m.lattice(), m.curve(i).cls, 4));
    }
    for (std::size_t i = 9; i < 21; ++i) {
      EXPECT_EQ(m.curve(i).genus, 2);
      EXPECT_TRUE(adjunction_check(m.lattice(), m.curve(i).cls, 2));
    }
  }
  auto plain = build_kk_model(false);
  EXPECT_EQ(kind_of([&] { plain.omega0(); }), ErrorKind::Configuration);
}

TEST(KK, Omega0Pairings) {
  auto kk = build_kk_model(true);
  const auto& m = *kk.model;
  EXPECT_EQ(m.square(kk.omega0()), Rational(kOmega0Square));
  for (std::size_t i = 0; i < 21; ++i) {
    const bool in_g0 = std::find(kk.gamma0.begin(), kk.gamma0.end(), i) != kk.gamma0.end();
    EXPECT_EQ(m.pair(kk.omega0(), kk.curve(i)), Rational(in_g0 ? 0 : kOmega0OffGamma0));
  }
  std::vector<std::string> names;
  for (auto i : kk.gamma0) names.push_back(m.curve(i).label);
  EXPECT_EQ(names, (std::vector<std::string>{"C1", "D123", "C2", "D249"}));
}

TEST(KK, Gamma0BaseSquare) {
  auto kk = build_kk_model(true);
  for (long j = 1; j <= 16; ++j) {
    const Rational t(j, 16);
    EXPECT_EQ(kk.model->square(kk_gamma0_base(kk, t)), Rational(100) - Rational(85) * t * t);
  }
}

TEST(KK, Gamma0CertificateShape) {
  auto cert = kk_gamma0_certificate(1);
  EXPECT_EQ(cert.model_ref, "kk-extended");
  EXPECT_EQ(cert.objects, (std::vector<std::string>{"C1", "D123", "C2", "D249"}));
  ASSERT_EQ(cert.moves.size(), 7u);
  EXPECT_EQ(std::get<SmoothAndReinstate>(cert.moves[0]).new_id, "Ctilde");
  EXPECT_EQ(std::get<SmoothAndReinstate>(cert.moves[1]).new_id, "S");
  EXPECT_EQ(std::get<SmoothAndReinstate>(cert.moves[3]).new_id, "S'");
  EXPECT_EQ(cert.annotations, (std::vector<std::string>{"iterated-disjoin"}));
}

TEST(KK, DyadicScaleSweep) {
  for (long j = 1; j <= 17; ++j) {
    auto cert = kk_gamma0_certificate(Rational(j, 16));
    EXPECT_TRUE(verify_certificate(cert).passed) << j;
  }
  EXPECT_EQ(kind_of([] { kk_gamma0_certificate(Rational(18, 16)); }), ErrorKind::Precondition);
  EXPECT_EQ(kind_of([] { kk_gamma0_certificate(10); }), ErrorKind::Precondition);
  EXPECT_EQ(kind_of([] { kk_gamma0_certificate(0); }), ErrorKind::Precondition);
}

TEST(Fixtures, E6AndConfiguration) {
  auto e6 = build_e6_fixture();
  EXPECT_EQ(e6->curves().size(), 6u);
  EXPECT_EQ(e6->pair(e6->curve(2).cls, e6->curve(5).cls), Rational(1));
  EXPECT_EQ(e6->lattice().labels().back(), "w");
  EXPECT_EQ(kind_of([] { build_configuration_model("x", {{"a"}}, {{0, 0, 1}}); }), ErrorKind::MalformedInput);
  EXPECT_FALSE(builtin_model("nonsense").has_value());
}
