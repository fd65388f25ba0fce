#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

namespace confgeo::detail {

struct AssignmentResult {
  std::vector<int> row_to_col;
  double cost = 0;
};

/// Exact min-cost assignment of every row to a distinct column (rows <= cols),
/// shortest-augmenting-path with potentials; arbitrary real costs.
inline AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int m = static_cast<int>(cost.size());
  if (m == 0) return {{}, 0.0};
  const int n = static_cast<int>(cost[0].size());
  if (m > n) throw std::invalid_argument("confgeo: assignment needs rows <= cols");
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(m + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  AssignmentResult res;
  res.row_to_col.assign(m, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) res.row_to_col[p[j] - 1] = j - 1;
  for (int i = 0; i < m; ++i) res.cost += cost[i][res.row_to_col[i]];
  return res;
}

}  // namespace confgeo::detail
