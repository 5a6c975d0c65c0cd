#include <gtest/gtest.h>

#include "symcone/perturb.hpp"

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

LocalCurveModel with_bound(LocalCurveModel m, double c) {
  m.c = c;
  return m;
}

}  // namespace

TEST(REpsilon, Examples) {
  auto single = with_bound(LocalCurveModel::polynomial(1.0, 1), 0.01);
  EXPECT_NEAR(r_epsilon({single}, 0.1), 0.2, 1e-15);
  auto a = LocalCurveModel::polynomial(1.0, 1), b = LocalCurveModel::polynomial(4.0, 2);
  EXPECT_NEAR(r_epsilon({a, b}, 0.1), std::sqrt(0.05), 1e-15);
}

TEST(REpsilon, Errors) {
  auto single = with_bound(LocalCurveModel::polynomial(1.0, 1), 0.01);
  try {
    r_epsilon({single}, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Range);
    EXPECT_NE(std::string(e.what()).find("eps < 1"), std::string::npos);
  }
  auto tight = LocalCurveModel::polynomial(1.0, 3, {1.0});
  try {
    r_epsilon({tight}, 1e-2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sqrt(R_eps)"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { r_epsilon({}, 0.1); }), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of([] { r_epsilon({LocalCurveModel::polynomial(1.0, 1)}, 0); }), ErrorKind::Range);
  EXPECT_EQ(kind_of([] { LocalCurveModel::polynomial(0.0, 1); }), ErrorKind::MalformedInput);
}

TEST(Perturb, PureSquare) {
  auto pts = perturbed_intersections({LocalCurveModel::polynomial(1.0, 2)}, 0.1);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(std::abs(pts[0].z - cplx(0.1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pts[1].z - cplx(-0.1, 0)), 0.0, 1e-15);
  for (const auto& p : pts) {
    EXPECT_EQ(p.sign, 1);
    EXPECT_LT(p.distance, 1e-15);
  }
}

TEST(Perturb, CubicWithQuarticTerm) {
  const double eps = 0.01;
  auto pts = perturbed_intersections({LocalCurveModel::polynomial(1.0, 3, {0.1})}, eps);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) {
    EXPECT_EQ(p.sign, 1);
    EXPECT_NEAR(std::abs(p.z), std::pow(10.0, -4.0 / 3.0), 1e-4);
    EXPECT_LT(p.distance, 10 * std::pow(eps, 4.0 / 3.0) * std::abs(p.seed));
    EXPECT_NEAR(std::abs(std::pow(p.z, 3) + 0.1 * std::pow(p.z, 4) - eps * eps), 0.0, 1e-15);
  }
  EXPECT_TRUE(all_distinct(pts));
}

TEST(Perturb, LinearWithQuadraticTerm) {
  auto pts = perturbed_intersections({LocalCurveModel::polynomial(1.0, 1, {0.05})}, 0.1);
  ASSERT_EQ(pts.size(), 1u);
  const double root = (-1.0 + std::sqrt(1.0 + 4 * 0.05 * 0.01)) / (2 * 0.05);
  EXPECT_NEAR(pts[0].z.real(), root, 1e-14);
  EXPECT_NEAR(pts[0].z.imag(), 0.0, 1e-14);
}

TEST(Perturb, NonHolomorphicRemainderKeepsPositiveSigns) {
  LocalCurveModel m = LocalCurveModel::polynomial(1.0, 2);
  m.remainder = [](cplx z) { return 0.2 * z * std::norm(z); };
  m.remainder_dz = [](cplx z) { return 0.4 * std::norm(z); };
  m.remainder_dzbar = [](cplx z) { return 0.2 * z * z; };
  m.c = 0.2;
  for (double eps : {1e-2, 1e-3}) {
    auto pts = perturbed_intersections({m}, eps);
    ASSERT_EQ(pts.size(), 2u);
    for (const auto& p : pts) EXPECT_EQ(p.sign, 1);
  }
}

TEST(Perturb, SeveralModelsAreDistinct) {
  std::vector<LocalCurveModel> ms{LocalCurveModel::polynomial(1.0, 1, {1.0}), LocalCurveModel::polynomial(2.0, 2, {1.0}),
                                  LocalCurveModel::polynomial(cplx(0, 3), 3, {0.5})};
  auto pts = perturbed_intersections(ms, 1e-3);
  EXPECT_EQ(pts.size(), 6u);
  EXPECT_TRUE(all_distinct(pts));
}

TEST(ContactStudy, SlopesMatchFourOverK) {
  const auto eps = log_spaced(1e-2, 1e-5, 13);
  for (int k = 1; k <= 3; ++k) {
    auto study = order_of_contact_study({LocalCurveModel::polynomial(1.0, k, {1.0})}, eps);
    ASSERT_EQ(study.slopes.size(), 1u);
    ASSERT_TRUE(study.slopes[0].slope.has_value());
    EXPECT_NEAR(*study.slopes[0].slope, 4.0 / k, 0.3) << "k = " << k;
    for (const auto& run : study.runs) {
      EXPECT_EQ(run.size(), static_cast<std::size_t>(k));
      for (const auto& p : run) EXPECT_EQ(p.sign, 1);
    }
    if (k == 3) {
      EXPECT_FALSE(study.notes.empty());
    }
  }
}

TEST(ContactStudy, FourPointSweeps) {
  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
  auto two = order_of_contact_study({LocalCurveModel::polynomial(1.0, 2, {1.0})}, eps);
  EXPECT_NEAR(*two.slopes[0].slope, 2.0, 0.2);
  auto one = order_of_contact_study({LocalCurveModel::polynomial(1.0, 1, {1.0})}, eps);
  EXPECT_NEAR(*one.slopes[0].slope, 4.0, 0.3);
  auto mono = order_of_contact_study({LocalCurveModel::polynomial(1.0, 2)}, eps);
  EXPECT_FALSE(mono.slopes[0].slope.has_value());
  EXPECT_EQ(mono.slopes[0].points, 0u);
  EXPECT_EQ(mono.slopes[0].notes.size(), 4u);
}

TEST(ContactStudy, Preconditions) {
  auto m = LocalCurveModel::polynomial(1.0, 1, {1.0});
  EXPECT_EQ(kind_of([&] { order_of_contact_study({m}, {1e-2, 1e-3, 1e-4}); }), ErrorKind::Precondition);
  EXPECT_EQ(kind_of([&] { order_of_contact_study({m}, {1e-2, 1e-3, 1e-3, 1e-4}); }), ErrorKind::Precondition);
}

TEST(Table, HasOneRowPerPoint) {
  auto pts = perturbed_intersections({LocalCurveModel::polynomial(1.0, 2, {1.0})}, 1e-2);
  const std::string t = intersection_table(pts, 1e-2);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 3);
}
