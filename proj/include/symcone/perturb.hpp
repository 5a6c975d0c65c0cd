#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symcone/errors.hpp"

namespace symcone {

using cplx = std::complex<double>;

/// Local model g(z) = a z^k + r(z) of a branch meeting a configuration
/// curve (the real axis of the chart) with order of contact k, where
/// |r(z)| <= c |z|^{k+1}.
struct LocalCurveModel {
  cplx a{1.0, 0.0};
  int k = 1;
  std::function<cplx(cplx)> remainder;
  std::function<cplx(cplx)> remainder_dz;
  std::function<cplx(cplx)> remainder_dzbar;  // empty when r is holomorphic
  double c = 0.0;

  /// a z^k + sum_j higher[j] z^{k+1+j}; c is the sum of |higher[j]|, valid
  /// on the unit disc.
  static LocalCurveModel polynomial(cplx a, int k, std::vector<cplx> higher = {}) {
    LocalCurveModel m;
    m.a = a;
    m.k = k;
    for (const auto& h : higher) m.c += std::abs(h);
    m.remainder = [higher, k](cplx z) {
      cplx s = 0.0, p = std::pow(z, k + 1);
      for (const auto& h : higher) {
        s += h * p;
        p *= z;
      }
      return s;
    };
    m.remainder_dz = [higher, k](cplx z) {
      cplx s = 0.0, p = std::pow(z, k);
      for (std::size_t j = 0; j < higher.size(); ++j) {
        s += double(k + 1 + static_cast<int>(j)) * higher[j] * p;
        p *= z;
      }
      return s;
    };
    m.validate();
    return m;
  }

  void validate() const {
    require(a != cplx(0.0, 0.0), ErrorKind::MalformedInput, "leading coefficient must be non-zero");
    require(k >= 1, ErrorKind::MalformedInput, "order of contact must be positive");
    require(c >= 0.0, ErrorKind::MalformedInput, "remainder bound must be non-negative");
  }

  cplx value(cplx z) const { return a * std::pow(z, k) + (remainder ? remainder(z) : cplx{}); }
  cplx dz(cplx z) const {
    return double(k) * a * std::pow(z, k - 1) + (remainder_dz ? remainder_dz(z) : cplx{});
  }
  cplx dzbar(cplx z) const { return remainder_dzbar ? remainder_dzbar(z) : cplx{}; }
};

inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr int kNewtonMaxIterations = 50;
inline constexpr double kDistinctThreshold = 1e-10;
inline constexpr double kDistanceFloor = 1e-14;

/// R_eps = max_i (2 eps / |a_i|)^{1/k_i}, subject to eps < 1 and
/// sqrt(R_eps) < min_i |a_i| / (2 c_i).
inline double r_epsilon(const std::vector<LocalCurveModel>& models, double eps) {
  require(!models.empty(), ErrorKind::MalformedInput, "no local models");
  require(eps > 0.0, ErrorKind::Range, "eps must be positive");
  require(eps < 1.0, ErrorKind::Range, "eps < 1 violated (eps = " + std::to_string(eps) + ")");
  double r = 0.0;
  double limit = std::numeric_limits<double>::infinity();
  for (const auto& m : models) {
    m.validate();
    r = std::max(r, std::pow(2.0 * eps / std::abs(m.a), 1.0 / m.k));
    if (m.c > 0.0) limit = std::min(limit, std::abs(m.a) / (2.0 * m.c));
  }
  if (!(std::sqrt(r) < limit)) {
    std::ostringstream msg;
    msg << "sqrt(R_eps) < min |a_i|/(2 c_i) violated (sqrt(R_eps) = " << std::sqrt(r) << ", bound = " << limit
        << ")";
    fail(ErrorKind::Range, msg.str());
  }
  return r;
}

struct IntersectionPoint {
  std::size_t model = 0;
  std::size_t root = 0;
  cplx z;
  int sign = 0;  // orientation of the intersection with the constant branch
  double distance = 0.0;  // to the seed (eps^2/a)^{1/k} eta
  cplx seed;
};

namespace detail {

// Solves g(z) = w by damped Newton with the real Jacobian written via
// Wirtinger derivatives: A d + B conj(d) = -F.
inline cplx newton(const LocalCurveModel& m, cplx w, cplx seed) {
  cplx z = seed;
  const double tol = kNewtonTolerance * std::max(std::abs(seed), std::numeric_limits<double>::min());
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    const cplx f = m.value(z) - w;
    const cplx A = m.dz(z), B = m.dzbar(z);
    const double det = std::norm(A) - std::norm(B);
    require(det != 0.0, ErrorKind::NumericalFailure, "singular Jacobian in Newton iteration");
    const cplx step = (std::conj(A) * (-f) - B * std::conj(-f)) / det;
    double lambda = 1.0;
    cplx next = z + step;
    for (int h = 0; h < 30 && std::abs(m.value(next) - w) > std::abs(f); ++h) {
      lambda /= 2.0;
      next = z + lambda * step;
    }
    z = next;
    if (std::abs(lambda * step) <= tol) return z;
  }
  fail(ErrorKind::NumericalFailure, "Newton did not converge within " + std::to_string(kNewtonMaxIterations) +
                                        " iterations");
}

}  // namespace detail

/// Intersections of each branch g_i with the pushed-off branch g = eps^2.
/// Each model contributes exactly k_i distinct positive points in |z| < R_eps.
inline std::vector<IntersectionPoint> perturbed_intersections(const std::vector<LocalCurveModel>& models,
                                                              double eps) {
  const double r = r_epsilon(models, eps);
  const cplx w(eps * eps, 0.0);
  std::vector<IntersectionPoint> out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    const cplx base = std::pow(w / m.a, 1.0 / m.k);
    std::vector<IntersectionPoint> mine;
    for (int j = 0; j < m.k; ++j) {
      const cplx eta = std::polar(1.0, 2.0 * std::numbers::pi * j / m.k);
      IntersectionPoint p;
      p.model = i;
      p.root = static_cast<std::size_t>(j);
      p.seed = base * eta;
      p.z = detail::newton(m, w, p.seed);
      const double det = std::norm(m.dz(p.z)) - std::norm(m.dzbar(p.z));
      p.sign = det > 0 ? 1 : (det < 0 ? -1 : 0);
      p.distance = std::abs(p.z - p.seed);
      require(std::abs(p.z) < r, ErrorKind::PropertyViolation, "solution outside the ball |z| < R_eps");
      for (const auto& q : mine)
        require(std::abs(q.z - p.z) > kDistinctThreshold, ErrorKind::PropertyViolation,
                "model " + std::to_string(i) + " has fewer than k distinct solutions");
      mine.push_back(p);
    }
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

/// Solutions from different models are pairwise distinct.
inline bool all_distinct(const std::vector<IntersectionPoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i].z - pts[j].z) <= kDistinctThreshold) return false;
  return true;
}

struct SlopeEstimate {
  std::size_t model = 0;
  std::optional<double> slope;  // empty when fewer than two usable points
  double residual = 0.0;        // RMS residual of the fit
  std::size_t points = 0;
  std::vector<std::string> notes;
};

struct ContactStudy {
  std::vector<double> admitted_eps;
  std::vector<std::vector<IntersectionPoint>> runs;  // per admitted eps
  std::vector<SlopeEstimate> slopes;
  std::vector<std::string> notes;
};

/// Log-log fit of the largest root-to-seed distance against eps, per model.
inline ContactStudy order_of_contact_study(const std::vector<LocalCurveModel>& models,
                                           const std::vector<double>& eps_list) {
  require(eps_list.size() >= 4, ErrorKind::Precondition, "need at least four eps values");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    require(eps_list[i] < eps_list[i - 1], ErrorKind::Precondition, "eps values must decrease");
  ContactStudy study;
  for (double eps : eps_list) {
    try {
      r_epsilon(models, eps);
    } catch (const Error& e) {
      std::ostringstream note;
      note << "eps = " << eps << " not admitted: " << e.what();
      study.notes.push_back(note.str());
      continue;
    }
    study.admitted_eps.push_back(eps);
    study.runs.push_back(perturbed_intersections(models, eps));
  }
  require(study.admitted_eps.size() >= 4, ErrorKind::Precondition, "fewer than four admitted eps values");
  for (std::size_t m = 0; m < models.size(); ++m) {
    SlopeEstimate est;
    est.model = m;
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < study.runs.size(); ++r) {
      double d = 0.0;
      for (const auto& p : study.runs[r])
        if (p.model == m) d = std::max(d, p.distance);
      if (d < kDistanceFloor) {
        std::ostringstream note;
        note << "eps = " << study.admitted_eps[r] << ": distance " << d << " below " << kDistanceFloor
             << ", excluded from fit";
        est.notes.push_back(note.str());
        continue;
      }
      xs.push_back(std::log(study.admitted_eps[r]));
      ys.push_back(std::log(d));
    }
    est.points = xs.size();
    if (xs.size() >= 2) {
      const double n = static_cast<double>(xs.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double icept = (sy - slope * sx) / n;
      double ss = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) ss += std::pow(ys[i] - (icept + slope * xs[i]), 2);
      est.slope = slope;
      est.residual = std::sqrt(ss / n);
    }
    study.slopes.push_back(std::move(est));
  }
  return study;
}

/// n values log-spaced from hi down to lo.
inline std::vector<double> log_spaced(double hi, double lo, std::size_t n) {
  require(n >= 2 && hi > lo && lo > 0, ErrorKind::Precondition, "bad log-spaced range");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * double(i) / double(n - 1)));
  return out;
}

/// Columns: model, eps, root, z*, distance, sign.
inline std::string intersection_table(const std::vector<IntersectionPoint>& pts, double eps) {
  std::ostringstream out;
  out << std::left << std::setw(6) << "model" << std::setw(12) << "eps" << std::setw(6) << "root" << std::setw(44)
      << "z*" << std::setw(14) << "distance" << "sign\n";
  for (const auto& p : pts) {
    std::ostringstream z;
    z << std::scientific << std::setprecision(12) << p.z.real() << (p.z.imag() < 0 ? " - " : " + ")
      << std::abs(p.z.imag()) << "i";
    out << std::left << std::setw(6) << p.model << std::setw(12) << std::scientific << std::setprecision(3) << eps
        << std::setw(6) << p.root << std::setw(44) << z.str() << std::setw(14) << std::setprecision(4) << p.distance
        << (p.sign > 0 ? "+" : "-") << "\n";
  }
  return out.str();
}

}  // namespace symcone
