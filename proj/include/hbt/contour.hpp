#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "hbt/error.hpp"

namespace hbt {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using Polyline = std::vector<Point>;

/// Marching squares over a rectilinear grid of node values.
///
/// values[i * ys.size() + j] is the value at (xs[i], ys[j]). A node counts as
/// inside when its value is >= level; crossings are linearly interpolated along
/// cell edges and saddles are resolved with the mean of the four corners.
/// Squares touching a NaN node are skipped. Segments are stitched into
/// polylines; open chains come first, closed loops repeat their first vertex.
inline std::vector<Polyline> marching_squares(std::span<const double> xs,
                                              std::span<const double> ys,
                                              std::span<const double> values, double level) {
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  if (values.size() != nx * ny) throw InvalidParameter("grid values do not match axis sizes");
  if (nx < 2 || ny < 2) throw InvalidParameter("contouring needs at least a 2x2 grid");

  auto at = [&](std::size_t i, std::size_t j) { return values[i * ny + j]; };

  // Edge key: (direction, i, j). Direction 0 runs from (i,j) to (i+1,j),
  // direction 1 from (i,j) to (i,j+1).
  using EdgeKey = std::tuple<int, std::size_t, std::size_t>;

  auto crossing = [&](const EdgeKey& e) {
    const auto [dir, i, j] = e;
    const std::size_t i1 = dir == 0 ? i + 1 : i;
    const std::size_t j1 = dir == 1 ? j + 1 : j;
    const double v0 = at(i, j);
    const double v1 = at(i1, j1);
    const double t = (level - v0) / (v1 - v0);
    return Point{xs[i] + t * (xs[i1] - xs[i]), ys[j] + t * (ys[j1] - ys[j])};
  };

  std::vector<std::array<EdgeKey, 2>> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double c00 = at(i, j), c10 = at(i + 1, j), c11 = at(i + 1, j + 1),
                   c01 = at(i, j + 1);
      if (std::isnan(c00) || std::isnan(c10) || std::isnan(c11) || std::isnan(c01)) continue;
      const bool in00 = c00 >= level, in10 = c10 >= level, in11 = c11 >= level,
                 in01 = c01 >= level;

      // Cyclic order around the square: bottom, right, top, left.
      const std::array<EdgeKey, 4> edges{EdgeKey{0, i, j}, EdgeKey{1, i + 1, j},
                                         EdgeKey{0, i, j + 1}, EdgeKey{1, i, j}};
      const std::array<bool, 4> cut{in00 != in10, in10 != in11, in01 != in11, in00 != in01};

      std::array<std::size_t, 4> hit{};
      std::size_t count = 0;
      for (std::size_t e = 0; e < 4; ++e)
        if (cut[e]) hit[count++] = e;

      if (count == 2) {
        segments.push_back({edges[hit[0]], edges[hit[1]]});
      } else if (count == 4) {
        const bool center_in = 0.25 * (c00 + c10 + c11 + c01) >= level;
        if (center_in == in00) {
          segments.push_back({edges[0], edges[1]});
          segments.push_back({edges[2], edges[3]});
        } else {
          segments.push_back({edges[3], edges[0]});
          segments.push_back({edges[1], edges[2]});
        }
      }
    }
  }

  std::map<EdgeKey, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (const auto& e : segments[s]) incident[e].push_back(s);

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> out;

  auto walk = [&](std::size_t first, const EdgeKey& start) {
    std::vector<EdgeKey> chain{start};
    std::size_t seg = first;
    EdgeKey cur = start;
    while (true) {
      used[seg] = true;
      const EdgeKey next = segments[seg][0] == cur ? segments[seg][1] : segments[seg][0];
      chain.push_back(next);
      cur = next;
      std::size_t follow = segments.size();
      for (auto cand : incident[cur])
        if (!used[cand]) follow = cand;
      if (follow == segments.size()) break;
      seg = follow;
    }
    Polyline line;
    line.reserve(chain.size());
    for (const auto& e : chain) line.push_back(crossing(e));
    out.push_back(std::move(line));
  };

  // Open chains start at edges touched by a single segment (grid boundary or
  // next to a skipped square).
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (const auto& e : segments[s]) {
      if (incident[e].size() == 1) {
        walk(s, e);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(s, segments[s][0]);

  return out;
}

}  // namespace hbt
