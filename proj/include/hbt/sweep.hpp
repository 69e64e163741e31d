#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hbt/contour.hpp"
#include "hbt/correlator.hpp"
#include "hbt/csv.hpp"
#include "hbt/error.hpp"
#include "hbt/model.hpp"
#include "hbt/random.hpp"
#include "hbt/streams.hpp"

namespace hbt {

enum class Parameter { kSigma, kXi, kChi };

inline std::string_view to_string(Parameter p) {
  switch (p) {
    case Parameter::kSigma: return "sigma";
    case Parameter::kXi: return "xi";
    case Parameter::kChi: return "chi";
  }
  return "?";
}

inline Parameter parse_parameter(std::string_view name) {
  if (name == "sigma") return Parameter::kSigma;
  if (name == "xi") return Parameter::kXi;
  if (name == "chi") return Parameter::kChi;
  throw InvalidParameter("unknown sweep parameter '" + std::string(name) +
                         "' (expected sigma, xi or chi)");
}

inline SimParams with_parameter(const SimParams& base, Parameter p, double value) {
  switch (p) {
    case Parameter::kSigma: return base.with_sigma(value);
    case Parameter::kXi: return base.with_xi(value);
    case Parameter::kChi: return base.with_chi(value);
  }
  return base;
}

/// Inclusive linear grid over one model parameter.
struct AxisSpec {
  Parameter parameter = Parameter::kSigma;
  double start = 0.0;
  double stop = 1.0;
  std::size_t steps = 51;

  void validate() const {
    if (steps < 2) throw InvalidParameter("axis " + std::string(to_string(parameter)) +
                                          " needs at least 2 steps");
    // Reuses the SimParams checks on both endpoints.
    with_parameter(SimParams{}, parameter, start);
    with_parameter(SimParams{}, parameter, stop);
  }

  /// Node i, measured from the axis midpoint so that axes symmetric about
  /// zero have exactly mirrored nodes. Endpoints are returned verbatim.
  double value(std::size_t i) const {
    if (i == 0) return start;
    if (i + 1 == steps) return stop;
    const double last = static_cast<double>(steps - 1);
    const double offset = (2.0 * static_cast<double>(i) - last) / last;
    return 0.5 * (start + stop) + 0.5 * (stop - start) * offset;
  }

  std::vector<double> values() const {
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i) v[i] = value(i);
    return v;
  }

  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// Parses `name=start:stop:steps`.
inline AxisSpec parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw InvalidParameter("axis '" + std::string(text) + "' is not of the form name=start:stop:steps");
  AxisSpec axis;
  axis.parameter = parse_parameter(text.substr(0, eq));
  const auto parts = csv::split(text.substr(eq + 1), ':');
  if (parts.size() != 3)
    throw InvalidParameter("axis '" + std::string(text) + "' is not of the form name=start:stop:steps");
  try {
    axis.start = csv::parse_double(parts[0]);
    axis.stop = csv::parse_double(parts[1]);
    const double steps = csv::parse_double(parts[2]);
    if (!(steps >= 0) || steps != std::floor(steps))
      throw InvalidParameter("axis steps must be a non-negative integer");
    axis.steps = static_cast<std::size_t>(steps);
  } catch (const IoError&) {
    throw InvalidParameter("axis '" + std::string(text) + "' has a malformed number");
  }
  axis.validate();
  return axis;
}

inline std::string format_axis(const AxisSpec& axis) {
  return std::string(to_string(axis.parameter)) + "=" + csv::format(axis.start) + ":" +
         csv::format(axis.stop) + ":" + std::to_string(axis.steps);
}

struct CellStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t replicates = 0;
  bool missing = false;

  friend bool operator==(const CellStats&, const CellStats&) = default;
};

/// A cell whose estimator could not be evaluated.
struct CellFailure {
  std::size_t axis1_index = 0;
  std::size_t axis2_index = 0;
  std::string message;

  friend bool operator==(const CellFailure&, const CellFailure&) = default;
};

/// Result of a 1D or 2D sweep. Cells are stored axis1-major:
/// cells[i1 * axis2_steps + i2].
struct SweepGrid {
  std::vector<AxisSpec> axes;
  SimParams fixed;
  std::size_t replicates = 0;
  std::vector<CellStats> cells;
  std::vector<Polyline> contour;
  std::vector<CellFailure> failures;

  std::size_t axis1_steps() const { return axes.at(0).steps; }
  std::size_t axis2_steps() const { return axes.size() > 1 ? axes[1].steps : 1; }
  bool two_dimensional() const { return axes.size() == 2; }

  const CellStats& cell(std::size_t i1, std::size_t i2 = 0) const {
    return cells.at(i1 * axis2_steps() + i2);
  }

  /// Cell means with NaN for missing cells, same layout as `cells`.
  std::vector<double> means() const {
    std::vector<double> v;
    v.reserve(cells.size());
    for (const auto& c : cells) v.push_back(c.missing ? std::nan("") : c.mean);
    return v;
  }

  SimParams params_at(std::size_t i1, std::size_t i2) const {
    SimParams p = with_parameter(fixed, axes[0].parameter, axes[0].value(i1));
    if (two_dimensional()) p = with_parameter(p, axes[1].parameter, axes[1].value(i2));
    return p;
  }

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

inline void validate_axes(const std::vector<AxisSpec>& axes) {
  if (axes.empty() || axes.size() > 2) throw InvalidParameter("a sweep takes one or two axes");
  for (const auto& a : axes) a.validate();
  if (axes.size() == 2 && axes[0].parameter == axes[1].parameter)
    throw InvalidParameter("both sweep axes vary " + std::string(to_string(axes[0].parameter)));
}

/// Level crossings of the cell means of a 2D grid, in axis coordinates.
inline std::vector<Polyline> extract_contour(const SweepGrid& grid, double level = 0.5) {
  if (!grid.two_dimensional())
    throw InvalidParameter("contour extraction needs a 2D grid");
  const auto xs = grid.axes[0].values();
  const auto ys = grid.axes[1].values();
  const auto z = grid.means();
  return marching_squares(xs, ys, z, level);
}

struct SweepOptions {
  std::size_t jobs = 1;
  double contour_level = 0.5;
  StreamLimits limits{};
};

/// Monte Carlo sweep of g2(0) over one or two parameters.
///
/// Replicate r of cell (i1, i2) uses seed mix(master_seed, i1, i2, r), so the
/// result is identical for any number of workers. A cell with an undefined
/// estimator in any replicate is marked missing and listed in `failures`.
/// Parameter and window errors abort the sweep as SweepCellError.
inline SweepGrid run_sweep(const std::vector<AxisSpec>& axes, const SimParams& base,
                           LagWindow window, std::size_t replicates, std::uint64_t master_seed,
                           const SweepOptions& options = {}) {
  validate_axes(axes);
  if (replicates < 1) throw InvalidParameter("replicates must be >= 1");

  SweepGrid grid;
  grid.axes = axes;
  grid.fixed = base;
  grid.replicates = replicates;

  const std::size_t n2 = grid.axis2_steps();
  const std::size_t cells = grid.axis1_steps() * n2;
  const std::size_t tasks = cells * replicates;

  enum class Status : unsigned char { kOk, kEmpty, kError };
  struct Outcome {
    double value = 0.0;
    Status status = Status::kOk;
    std::string message;
  };
  std::vector<Outcome> outcomes(tasks);

  auto run_task = [&](std::size_t t) {
    const std::size_t cell = t / replicates;
    const std::size_t rep = t % replicates;
    const std::size_t i1 = cell / n2;
    const std::size_t i2 = cell % n2;
    Outcome& out = outcomes[t];
    try {
      const SimParams p = grid.params_at(i1, i2);
      const auto streams = generate_streams(p, mix(master_seed, i1, i2, rep), options.limits);
      out.value = g2_zero_estimate(streams, window);
    } catch (const EmptySidebands& e) {
      out.status = Status::kEmpty;
      out.message = e.what();
    } catch (const std::exception& e) {
      out.status = Status::kError;
      out.message = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(tasks, 1));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks; t = next++) run_task(t);
      });
  }

  grid.cells.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t i1 = c / n2;
    const std::size_t i2 = c % n2;
    const Outcome* first = &outcomes[c * replicates];
    std::optional<std::string> empty;
    for (std::size_t r = 0; r < replicates; ++r) {
      if (first[r].status == Status::kError) throw SweepCellError(i1, i2, first[r].message);
      if (first[r].status == Status::kEmpty && !empty) empty = first[r].message;
    }
    CellStats& stats = grid.cells[c];
    if (empty) {
      stats.missing = true;
      stats.mean = stats.stddev = std::nan("");
      grid.failures.push_back({i1, i2, *empty});
      continue;
    }
    double sum = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) sum += first[r].value;
    const double mean = sum / static_cast<double>(replicates);
    double sq = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) sq += (first[r].value - mean) * (first[r].value - mean);
    stats.mean = mean;
    stats.stddev = replicates > 1 ? std::sqrt(sq / static_cast<double>(replicates - 1)) : 0.0;
    stats.replicates = replicates;
  }

  if (grid.two_dimensional()) grid.contour = extract_contour(grid, options.contour_level);
  return grid;
}

/// First crossing of `level` by the cell means of a 1D grid, linearly
/// interpolated between neighbouring cells. Empty when never crossed.
inline std::optional<double> first_crossing(const SweepGrid& grid, double level = 0.5) {
  if (grid.two_dimensional()) throw InvalidParameter("first_crossing needs a 1D grid");
  const auto& axis = grid.axes[0];
  for (std::size_t i = 0; i + 1 < axis.steps; ++i) {
    const auto& lo = grid.cell(i);
    const auto& hi = grid.cell(i + 1);
    if (lo.missing || hi.missing) continue;
    if ((lo.mean < level) != (hi.mean < level)) {
      const double t = (level - lo.mean) / (hi.mean - lo.mean);
      return axis.value(i) + t * (axis.value(i + 1) - axis.value(i));
    }
  }
  return std::nullopt;
}

/// Exact-expectation twin of run_sweep: every cell holds analytic_g2_zero
/// with zero spread and one evaluation.
inline SweepGrid fill_grid_analytic(const std::vector<AxisSpec>& axes, const SimParams& base,
                                    double contour_level = 0.5) {
  validate_axes(axes);
  SweepGrid grid;
  grid.axes = axes;
  grid.fixed = base;
  grid.replicates = 1;
  const std::size_t n2 = grid.axis2_steps();
  grid.cells.resize(grid.axis1_steps() * n2);
  for (std::size_t i1 = 0; i1 < grid.axis1_steps(); ++i1)
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      try {
        grid.cells[i1 * n2 + i2] = {analytic_g2_zero(grid.params_at(i1, i2)), 0.0, 1, false};
      } catch (const std::exception& e) {
        throw SweepCellError(i1, i2, e.what());
      }
    }
  if (grid.two_dimensional()) grid.contour = extract_contour(grid, contour_level);
  return grid;
}

/// Grid CSV: axis and fixed-parameter metadata as `# key=value` lines, then
/// `axis1,axis2,g2_mean,g2_std,replicates` (axis2 omitted for 1D sweeps).
inline void write_grid_csv(std::ostream& out, const SweepGrid& grid) {
  out << "# axis1=" << format_axis(grid.axes.at(0)) << '\n';
  if (grid.two_dimensional()) out << "# axis2=" << format_axis(grid.axes[1]) << '\n';
  out << "# sigma=" << csv::format(grid.fixed.sigma()) << '\n'
      << "# xi=" << csv::format(grid.fixed.xi()) << '\n'
      << "# chi=" << csv::format(grid.fixed.chi()) << '\n'
      << "# efficiency=" << csv::format(grid.fixed.efficiency()) << '\n'
      << "# pulses=" << grid.fixed.pulses() << '\n';
  out << (grid.two_dimensional() ? "axis1,axis2,g2_mean,g2_std,replicates\n"
                                 : "axis1,g2_mean,g2_std,replicates\n");
  for (std::size_t i1 = 0; i1 < grid.axis1_steps(); ++i1)
    for (std::size_t i2 = 0; i2 < grid.axis2_steps(); ++i2) {
      const auto& c = grid.cell(i1, i2);
      out << csv::format(grid.axes[0].value(i1)) << ',';
      if (grid.two_dimensional()) out << csv::format(grid.axes[1].value(i2)) << ',';
      out << csv::format(c.missing ? std::nan("") : c.mean) << ','
          << csv::format(c.missing ? std::nan("") : c.stddev) << ',' << c.replicates << '\n';
    }
}

/// Reads a grid written by write_grid_csv. Contour and failures are not
/// stored in the file; the replicate count is the largest per-cell count.
inline SweepGrid read_grid_csv(std::istream& in) {
  const auto table = csv::read(in);
  SweepGrid grid;
  double sigma = 0, xi = 0, chi = 0, efficiency = 1;
  std::size_t pulses = SimParams::kDefaultPulses;
  std::optional<AxisSpec> axis1, axis2;
  for (const auto& [key, value] : table.meta) {
    if (key == "axis1") axis1 = parse_axis(value);
    else if (key == "axis2") axis2 = parse_axis(value);
    else if (key == "sigma") sigma = csv::parse_double(value);
    else if (key == "xi") xi = csv::parse_double(value);
    else if (key == "chi") chi = csv::parse_double(value);
    else if (key == "efficiency") efficiency = csv::parse_double(value);
    else if (key == "pulses") pulses = static_cast<std::size_t>(csv::parse_double(value));
  }
  if (!axis1) throw IoError("grid CSV lacks '# axis1=' metadata");
  grid.axes.push_back(*axis1);
  if (axis2) grid.axes.push_back(*axis2);
  grid.fixed = SimParams(sigma, xi, chi, efficiency, pulses);

  const auto im = table.column("g2_mean");
  const auto is = table.column("g2_std");
  const auto ir = table.column("replicates");
  if (table.rows.size() != grid.axis1_steps() * grid.axis2_steps())
    throw IoError("grid CSV has " + std::to_string(table.rows.size()) + " rows, axes imply " +
                  std::to_string(grid.axis1_steps() * grid.axis2_steps()));
  for (const auto& row : table.rows) {
    CellStats c;
    c.replicates = static_cast<std::size_t>(row[ir]);
    c.missing = std::isnan(row[im]);
    c.mean = row[im];
    c.stddev = row[is];
    grid.replicates = std::max(grid.replicates, c.replicates);
    grid.cells.push_back(c);
  }
  return grid;
}

/// Contour CSV: `polyline_id,axis1,axis2`.
inline void write_contour_csv(std::ostream& out, const std::vector<Polyline>& contour) {
  out << "polyline_id,axis1,axis2\n";
  for (std::size_t id = 0; id < contour.size(); ++id)
    for (const auto& p : contour[id])
      out << id << ',' << csv::format(p.x) << ',' << csv::format(p.y) << '\n';
}

}  // namespace hbt
