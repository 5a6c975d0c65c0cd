#pragma once

#include <optional>
#include <vector>

#include "symcone/errors.hpp"
#include "symcone/rational.hpp"

namespace symcone {

/// Exact two-phase simplex with Bland's rule:
///   minimize c.x  subject to  A x >= b,  x >= 0.
/// Returns an optimal vertex, or nullopt when infeasible or unbounded.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t vars) : n_(vars), cost_(vars) {}

  void add_row(std::vector<Rational> coeffs, Rational rhs) {
    require(coeffs.size() == n_, ErrorKind::MalformedInput, "LP row has the wrong length");
    rows_.push_back(std::move(coeffs));
    rhs_.push_back(std::move(rhs));
  }
  void set_cost(std::vector<Rational> c) {
    require(c.size() == n_, ErrorKind::MalformedInput, "LP cost has the wrong length");
    cost_ = std::move(c);
  }
  std::size_t vars() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  std::optional<std::vector<Rational>> solve() const {
    const std::size_t m = rows_.size();
    // Columns: x (n), surplus (m), artificial (m), rhs.
    const std::size_t surplus0 = n_, art0 = n_ + m, rhs = n_ + 2 * m, width = rhs + 1;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width));
    std::vector<std::size_t> basis(m);
    std::vector<bool> has_art(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      const bool flip = rhs_[i].sign() < 0;
      const Rational s = flip ? Rational(-1) : Rational(1);
      for (std::size_t j = 0; j < n_; ++j) t[i][j] = s * rows_[i][j];
      t[i][surplus0 + i] = -s;
      t[i][rhs] = s * rhs_[i];
      if (flip) {
        basis[i] = surplus0 + i;  // -A x + s = -b >= 0
      } else {
        t[i][art0 + i] = 1;
        basis[i] = art0 + i;
        has_art[i] = true;
      }
    }
    std::vector<Rational> phase1(width - 1);
    for (std::size_t i = 0; i < m; ++i)
      if (has_art[i]) phase1[art0 + i] = 1;
    std::vector<bool> allowed(width - 1, true);
    for (std::size_t i = 0; i < m; ++i)
      if (!has_art[i]) allowed[art0 + i] = false;
    if (!run(t, basis, phase1, allowed)) return std::nullopt;
    Rational infeas;
    for (std::size_t i = 0; i < m; ++i) infeas += phase1[basis[i]] * t[i][rhs];
    if (!infeas.is_zero()) return std::nullopt;

    // Drive zero-level artificials out of the basis, then forbid them.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      for (std::size_t j = 0; j < art0; ++j)
        if (!t[i][j].is_zero()) {
          pivot(t, basis, i, j);
          break;
        }
    }
    for (std::size_t j = art0; j < rhs; ++j) allowed[j] = false;
    std::vector<Rational> phase2(width - 1);
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = cost_[j];
    if (!run(t, basis, phase2, allowed)) return std::nullopt;

    std::vector<Rational> x(n_);
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n_) x[basis[i]] = t[i][rhs];
    return x;
  }

 private:
  static void pivot(std::vector<std::vector<Rational>>& t, std::vector<std::size_t>& basis, std::size_t r,
                    std::size_t c) {
    const Rational p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r || t[i][c].is_zero()) continue;
      const Rational f = t[i][c];
      for (std::size_t j = 0; j < t[i].size(); ++j)
        if (!t[r][j].is_zero()) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Returns false when unbounded.
  static bool run(std::vector<std::vector<Rational>>& t, std::vector<std::size_t>& basis,
                  const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    const std::size_t m = t.size();
    if (m == 0) return true;
    const std::size_t rhs = t[0].size() - 1;
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < rhs && !enter; ++j) {
        if (!allowed[j]) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (!t[i][j].is_zero()) reduced -= cost[basis[i]] * t[i][j];
        if (reduced.sign() < 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][*enter].sign() <= 0) continue;
        Rational ratio = t[i][rhs] / t[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(t, basis, *leave, *enter);
    }
  }

  std::size_t n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<Rational> cost_;
};

}  // namespace symcone
