#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confgeo/assignment.hpp"
#include "confgeo/configuration.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/vec.hpp"

namespace confgeo {

/// A nonnegative distance value that may be infinite. The infinite state is a
/// tag, never a sentinel float, so comparisons against it are exact.
class ExtendedDistance {
 public:
  ExtendedDistance() = default;

  static ExtendedDistance infinite() {
    ExtendedDistance d;
    d.finite_ = false;
    return d;
  }

  static ExtendedDistance finite(double value) {
    if (!(value >= 0) || !std::isfinite(value))
      throw std::invalid_argument("confgeo: finite distance must be a nonnegative real");
    ExtendedDistance d;
    d.value_ = value;
    return d;
  }

  bool is_finite() const { return finite_; }
  bool is_infinite() const { return !finite_; }

  double value() const {
    if (!finite_) throw std::logic_error("confgeo: value() on an infinite distance");
    return value_;
  }

  /// min(clip, distance) with the infinite branch mapped to clip.
  double clipped(double clip) const { return finite_ ? std::min(clip, value_) : clip; }

  friend bool operator==(const ExtendedDistance& a, const ExtendedDistance& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedDistance& a, const ExtendedDistance& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }

 private:
  bool finite_ = true;
  double value_ = 0;
};

/// Witness coupling: matched index pairs plus, for the localized problem,
/// boundary exits of surplus points. squared_cost always equals the sum of the
/// recorded pair and exit squared distances.
struct Matching {
  std::vector<std::pair<int, int>> pairs;   // (index into gamma, index into omega)
  std::vector<std::pair<int, Vec>> exits;   // (index into gamma, boundary target)
  double squared_cost = 0;
};

struct TransportResult {
  ExtendedDistance distance;
  std::optional<Matching> matching;
};

namespace detail {

// Witnesses are lex-canonicalized only up to this many points per side; the
// greedy re-solve is cubic per fixed pair and golden tests are desk-scale.
inline constexpr int kLexWitnessCap = 48;

inline double tie_eps(double scale) { return 1e-9 * (1.0 + std::fabs(scale)); }

inline std::vector<std::vector<double>> squared_cost_matrix(const Configuration& rows,
                                                            const Configuration& cols) {
  std::vector<std::vector<double>> c(rows.points.size(), std::vector<double>(cols.points.size()));
  for (std::size_t i = 0; i < rows.points.size(); ++i)
    for (std::size_t j = 0; j < cols.points.size(); ++j)
      c[i][j] = dist_sq(rows.points[i], cols.points[j]);
  return c;
}

// Deterministic total order used to pick the orientation of the symmetric
// solve, so transport_distance(a,b) and transport_distance(b,a) run the
// identical computation.
inline bool canonical_before(const Configuration& a, const Configuration& b) {
  return a.points <= b.points;
}

// Residual optimum of the square problem with rows 0..i fixed and the given
// columns already used.
inline double square_residual(const std::vector<std::vector<double>>& cost, int next_row,
                              const std::vector<char>& used_col) {
  const int n = static_cast<int>(cost.size());
  std::vector<int> cols;
  for (int j = 0; j < n; ++j)
    if (!used_col[j]) cols.push_back(j);
  const int rows = n - next_row;
  if (rows == 0) return 0.0;
  std::vector<std::vector<double>> sub(rows, std::vector<double>(cols.size()));
  for (int i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub[i][j] = cost[next_row + i][cols[j]];
  return solve_assignment(sub).cost;
}

// Lexicographically smallest optimal row->col assignment of a square problem.
inline std::vector<int> lex_min_square_assignment(const std::vector<std::vector<double>>& cost,
                                                  double optimum) {
  const int n = static_cast<int>(cost.size());
  std::vector<int> fixed(n, -1);
  std::vector<char> used(n, 0);
  double acc = 0;
  const double eps = tie_eps(optimum);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      const double resid = square_residual(cost, i + 1, used);
      if (acc + cost[i][j] + resid <= optimum + eps) {
        fixed[i] = j;
        acc += cost[i][j];
        break;
      }
      used[j] = 0;
    }
    if (fixed[i] < 0) throw std::logic_error("confgeo: no optimal completion found");
  }
  return fixed;
}

}  // namespace detail

/// Squared optimal coupling cost between equal-count configurations; the
/// value-only fast path behind transport_distance.
inline ExtendedDistance transport_distance_value(const Configuration& gamma, const Configuration& omega) {
  if (gamma.dim != omega.dim) throw std::invalid_argument("confgeo: transport distance dimension mismatch");
  if (gamma.size() != omega.size()) return ExtendedDistance::infinite();
  if (gamma.is_empty()) return ExtendedDistance::finite(0.0);
  const bool keep = detail::canonical_before(gamma, omega);
  const Configuration& rows = keep ? gamma : omega;
  const Configuration& cols = keep ? omega : gamma;
  const double sq = detail::solve_assignment(detail::squared_cost_matrix(rows, cols)).cost;
  return ExtendedDistance::finite(std::sqrt(std::max(0.0, sq)));
}

/// Exact L2 transport distance between two finite configurations: infinite
/// when the point counts differ, otherwise the root of the minimal
/// perfect-matching squared cost, with a witness matching. Among equal-cost
/// matchings the witness has the lexicographically smallest pair list.
inline TransportResult transport_distance(const Configuration& gamma, const Configuration& omega) {
  if (gamma.dim != omega.dim) throw std::invalid_argument("confgeo: transport distance dimension mismatch");
  if (gamma.size() != omega.size()) return {ExtendedDistance::infinite(), std::nullopt};
  const int n = gamma.size();
  if (n == 0) return {ExtendedDistance::finite(0.0), Matching{}};

  const bool keep = detail::canonical_before(gamma, omega);
  const Configuration& rows = keep ? gamma : omega;
  const Configuration& cols = keep ? omega : gamma;
  const auto canon_cost = detail::squared_cost_matrix(rows, cols);
  const auto solved = detail::solve_assignment(canon_cost);
  const double optimum = solved.cost;

  Matching m;
  if (n <= detail::kLexWitnessCap) {
    const auto caller_cost = keep ? canon_cost : detail::squared_cost_matrix(gamma, omega);
    const auto assign = detail::lex_min_square_assignment(caller_cost, optimum);
    for (int i = 0; i < n; ++i) m.pairs.emplace_back(i, assign[i]);
  } else {
    for (int i = 0; i < n; ++i) {
      if (keep)
        m.pairs.emplace_back(i, solved.row_to_col[i]);
      else
        m.pairs.emplace_back(solved.row_to_col[i], i);
    }
    std::sort(m.pairs.begin(), m.pairs.end());
  }
  for (const auto& [gi, oi] : m.pairs) m.squared_cost += dist_sq(gamma.points[gi], omega.points[oi]);
  return {ExtendedDistance::finite(std::sqrt(std::max(0.0, optimum))), std::move(m)};
}

/// Exhaustive oracle for transport_distance; capped at 8 points per side.
inline TransportResult transport_distance_bruteforce(const Configuration& gamma, const Configuration& omega) {
  if (gamma.dim != omega.dim) throw std::invalid_argument("confgeo: transport distance dimension mismatch");
  if (gamma.size() > 8 || omega.size() > 8)
    throw std::invalid_argument("confgeo: brute-force oracle capped at 8 points per side");
  if (gamma.size() != omega.size()) return {ExtendedDistance::infinite(), std::nullopt};
  const int n = gamma.size();
  if (n == 0) return {ExtendedDistance::finite(0.0), Matching{}};

  std::vector<int> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0;
    for (int i = 0; i < n; ++i) cost += dist_sq(gamma.points[i], omega.points[perm[i]]);
    const double eps = detail::tie_eps(cost);
    if (best.empty() || cost < best_cost - eps) {
      best_cost = cost;
      best = perm;
    } else if (cost < best_cost + eps && perm < best) {
      best_cost = std::min(best_cost, cost);
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Matching m;
  for (int i = 0; i < n; ++i) m.pairs.emplace_back(i, best[i]);
  for (const auto& [gi, oi] : m.pairs) m.squared_cost += dist_sq(gamma.points[gi], omega.points[oi]);
  return {ExtendedDistance::finite(std::sqrt(best_cost)), std::move(m)};
}

namespace detail {

struct LocalizedProblem {
  std::vector<int> omega_rows;   // indices of omega points inside the ball
  std::vector<double> exit_sq;   // per gamma point: squared boundary distance if inside, else 0
  double exit_total = 0;
};

inline LocalizedProblem localized_setup(const Configuration& gamma, const Configuration& omega,
                                        const Ball& ball) {
  LocalizedProblem p;
  for (int j = 0; j < omega.size(); ++j)
    if (ball.contains(omega.points[j])) p.omega_rows.push_back(j);
  p.exit_sq.resize(gamma.points.size(), 0.0);
  for (int i = 0; i < gamma.size(); ++i) {
    if (ball.contains(gamma.points[i])) {
      const double e = distance_to_boundary(gamma.points[i], ball);
      p.exit_sq[i] = e * e;
      p.exit_total += p.exit_sq[i];
    }
  }
  return p;
}

// Optimal value of the localized subproblem over the given free rows/columns
// (row indices into omega_rows order, column indices into gamma). Includes the
// exit costs of unmatched columns. +inf when more rows than columns.
inline double localized_opt(const Configuration& gamma, const Configuration& omega,
                            const LocalizedProblem& p, const std::vector<int>& rows,
                            const std::vector<int>& cols) {
  if (rows.size() > cols.size()) return std::numeric_limits<double>::infinity();
  double base = 0;
  for (int i : cols) base += p.exit_sq[i];
  if (rows.empty()) return base;
  std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      cost[a][b] = dist_sq(omega.points[p.omega_rows[rows[a]]], gamma.points[cols[b]]) - p.exit_sq[cols[b]];
  return base + solve_assignment(cost).cost;
}

}  // namespace detail

/// Distance from gamma to the set of configurations agreeing with omega inside
/// the ball: every omega point inside the ball must be matched to a distinct
/// gamma point; surplus gamma points strictly inside pay their squared
/// boundary distance as an exit. Infinite iff gamma has fewer points than
/// omega has inside the ball.
inline TransportResult localized_distance(const Configuration& gamma, const Configuration& omega,
                                          const Ball& ball) {
  if (gamma.dim != omega.dim || gamma.dim != ball.dim())
    throw std::invalid_argument("confgeo: localized distance dimension mismatch");
  if (!(ball.radius > 0)) throw std::invalid_argument("confgeo: ball radius must be positive");

  const auto p = detail::localized_setup(gamma, omega, ball);
  const int m = static_cast<int>(p.omega_rows.size());
  const int n = gamma.size();
  if (n < m) return {ExtendedDistance::infinite(), std::nullopt};

  std::vector<int> all_rows(m), all_cols(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::iota(all_cols.begin(), all_cols.end(), 0);
  const double optimum = detail::localized_opt(gamma, omega, p, all_rows, all_cols);
  const double eps = detail::tie_eps(optimum);

  Matching witness;
  if (n <= detail::kLexWitnessCap) {
    // Greedy lex-min completion: walk gamma indices in order, matching each to
    // the smallest feasible omega index, leaving it unmatched only when no
    // match preserves optimality.
    std::vector<int> free_rows = all_rows;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      std::vector<int> rest_cols(all_cols.begin() + i + 1, all_cols.end());
      int chosen = -1;
      for (std::size_t a = 0; a < free_rows.size(); ++a) {
        std::vector<int> rows_left = free_rows;
        rows_left.erase(rows_left.begin() + static_cast<long>(a));
        const double pair_cost = dist_sq(omega.points[p.omega_rows[free_rows[a]]], gamma.points[i]);
        const double resid = detail::localized_opt(gamma, omega, p, rows_left, rest_cols);
        if (acc + pair_cost + resid <= optimum + eps) {
          chosen = static_cast<int>(a);
          acc += pair_cost;
          witness.pairs.emplace_back(i, p.omega_rows[free_rows[a]]);
          free_rows = std::move(rows_left);
          break;
        }
      }
      if (chosen < 0) {
        acc += p.exit_sq[i];
        if (p.exit_sq[i] > 0) witness.exits.emplace_back(i, nearest_boundary_point(gamma.points[i], ball));
      }
    }
  } else {
    std::vector<std::vector<double>> cost(m, std::vector<double>(n));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < n; ++b)
        cost[a][b] = dist_sq(omega.points[p.omega_rows[a]], gamma.points[b]) - p.exit_sq[b];
    const auto solved = detail::solve_assignment(cost);
    std::vector<char> matched(n, 0);
    for (int a = 0; a < m; ++a) {
      witness.pairs.emplace_back(solved.row_to_col[a], p.omega_rows[a]);
      matched[solved.row_to_col[a]] = 1;
    }
    std::sort(witness.pairs.begin(), witness.pairs.end());
    for (int i = 0; i < n; ++i)
      if (!matched[i] && p.exit_sq[i] > 0)
        witness.exits.emplace_back(i, nearest_boundary_point(gamma.points[i], ball));
  }

  for (const auto& [gi, oi] : witness.pairs) witness.squared_cost += dist_sq(gamma.points[gi], omega.points[oi]);
  for (const auto& [gi, target] : witness.exits) witness.squared_cost += dist_sq(gamma.points[gi], target);
  return {ExtendedDistance::finite(std::sqrt(std::max(0.0, optimum))), std::move(witness)};
}

/// Exhaustive oracle for localized_distance; caps: 6 omega points inside the
/// ball, 8 gamma points in total.
inline TransportResult localized_distance_bruteforce(const Configuration& gamma, const Configuration& omega,
                                                     const Ball& ball) {
  if (gamma.dim != omega.dim || gamma.dim != ball.dim())
    throw std::invalid_argument("confgeo: localized distance dimension mismatch");
  const auto p = detail::localized_setup(gamma, omega, ball);
  const int m = static_cast<int>(p.omega_rows.size());
  const int n = gamma.size();
  if (m > 6 || n > 8) throw std::invalid_argument("confgeo: localized brute-force oracle capped at 6x8");
  if (n < m) return {ExtendedDistance::infinite(), std::nullopt};

  std::vector<int> row_to_col(m, -1);
  std::vector<char> used(n, 0);
  double best_cost = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::vector<std::pair<int, int>> best_pairs, cur_pairs;

  auto leaf = [&]() {
    double cost = 0;
    cur_pairs.clear();
    for (int a = 0; a < m; ++a) {
      cost += dist_sq(omega.points[p.omega_rows[a]], gamma.points[row_to_col[a]]);
      cur_pairs.emplace_back(row_to_col[a], p.omega_rows[a]);
    }
    for (int i = 0; i < n; ++i)
      if (!used[i]) cost += p.exit_sq[i];
    std::sort(cur_pairs.begin(), cur_pairs.end());
    const double eps = detail::tie_eps(cost);
    if (!have_best || cost < best_cost - eps || (cost < best_cost + eps && cur_pairs < best_pairs)) {
      best_cost = have_best ? std::min(best_cost, cost) : cost;
      best_pairs = cur_pairs;
      have_best = true;
    }
  };

  auto rec = [&](auto&& self, int a) -> void {
    if (a == m) {
      leaf();
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      row_to_col[a] = i;
      self(self, a + 1);
      used[i] = 0;
    }
  };
  rec(rec, 0);

  Matching witness;
  witness.pairs = best_pairs;
  std::vector<char> matched(n, 0);
  for (const auto& [gi, oi] : best_pairs) matched[gi] = 1;
  for (int i = 0; i < n; ++i)
    if (!matched[i] && p.exit_sq[i] > 0)
      witness.exits.emplace_back(i, nearest_boundary_point(gamma.points[i], ball));
  for (const auto& [gi, oi] : witness.pairs) witness.squared_cost += dist_sq(gamma.points[gi], omega.points[oi]);
  for (const auto& [gi, target] : witness.exits) witness.squared_cost += dist_sq(gamma.points[gi], target);
  return {ExtendedDistance::finite(std::sqrt(std::max(0.0, best_cost))), std::move(witness)};
}

/// rho_A: infimum of the transport distance over a finite candidate set.
inline ExtendedDistance set_distance(const Configuration& gamma, const std::vector<Configuration>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("confgeo: set distance needs a nonempty candidate set");
  ExtendedDistance best = ExtendedDistance::infinite();
  for (const Configuration& omega : candidates) {
    const ExtendedDistance d = transport_distance_value(gamma, omega);
    if (d < best) best = d;
  }
  return best;
}

/// rho_{K,r}: infimum of the localized distance over a finite candidate set.
inline ExtendedDistance localized_set_distance(const Configuration& gamma,
                                               const std::vector<Configuration>& candidates,
                                               const Ball& ball) {
  if (candidates.empty()) throw std::invalid_argument("confgeo: set distance needs a nonempty candidate set");
  ExtendedDistance best = ExtendedDistance::infinite();
  for (const Configuration& omega : candidates) {
    const ExtendedDistance d = localized_distance(gamma, omega, ball).distance;
    if (d < best) best = d;
  }
  return best;
}

/// min(clip, rho_A(gamma)); 1-Lipschitz in gamma for the transport distance.
inline double clipped_set_distance(const Configuration& gamma, const std::vector<Configuration>& candidates,
                                   double clip) {
  if (!(clip > 0)) throw std::invalid_argument("confgeo: clip constant must be positive");
  return set_distance(gamma, candidates).clipped(clip);
}

}  // namespace confgeo
