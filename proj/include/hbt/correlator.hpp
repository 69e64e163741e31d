#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hbt/csv.hpp"
#include "hbt/error.hpp"
#include "hbt/streams.hpp"

namespace hbt {

/// Number of pulse periods on each side of zero lag.
class LagWindow {
 public:
  static constexpr std::size_t kDefaultSidebands = 10;

  explicit LagWindow(std::size_t sidebands = kDefaultSidebands) : sidebands_(sidebands) {
    if (sidebands_ < 1) throw InvalidParameter("sidebands must be >= 1");
  }

  std::size_t sidebands() const noexcept { return sidebands_; }
  std::size_t width() const noexcept { return 2 * sidebands_ + 1; }

  void require_fits(std::size_t length) const {
    if (width() > length)
      throw WindowTooLarge("lag window of " + std::to_string(width()) +
                           " bins exceeds stream length " + std::to_string(length));
  }

 private:
  std::size_t sidebands_;
};

/// Coincidence sums and normalized g2 for lags -n..+n.
struct CorrelationResult {
  std::vector<std::int64_t> lags;
  std::vector<double> coincidences;
  std::vector<double> g2_curve;
  double g2_zero = 0.0;
  double center_counts = 0.0;
  double sideband_mean = 0.0;

  friend bool operator==(const CorrelationResult&, const CorrelationResult&) = default;
};

/// C[k] = sum_i a[i] * b[i + k] for k in [-n, n], with b zero outside its
/// range. Element j of the result is lag j - n.
inline std::vector<double> coincidence_counts(std::span<const double> a,
                                              std::span<const double> b, LagWindow window) {
  if (a.size() != b.size()) throw InvalidParameter("stream lengths differ");
  const std::size_t len = a.size();
  window.require_fits(len);
  const auto n = static_cast<std::ptrdiff_t>(window.sidebands());
  const auto size = static_cast<std::ptrdiff_t>(len);

  std::vector<double> counts(window.width(), 0.0);
  for (std::ptrdiff_t k = -n; k <= n; ++k) {
    const std::ptrdiff_t lo = k < 0 ? -k : 0;
    const std::ptrdiff_t hi = k > 0 ? size - k : size;
    double sum = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) sum += a[i] * b[i + k];
    counts[static_cast<std::size_t>(k + n)] = sum;
  }
  return counts;
}

inline std::vector<double> coincidence_counts(const PhotonStreams& streams, LagWindow window) {
  return coincidence_counts(streams.a(), streams.b(), window);
}

namespace detail {

inline double sideband_sum(const std::vector<double>& counts, std::size_t n) {
  double sum = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (j != n) sum += counts[j];
  if (!(sum > 0.0))
    throw EmptySidebands("all sideband coincidence counts are zero; g2(0) is undefined");
  return sum;
}

}  // namespace detail

/// 2n C[0] / sum_{k != 0} C[k]. One lag bin is one pulse period.
inline double g2_zero_estimate(std::span<const double> a, std::span<const double> b,
                               LagWindow window) {
  const auto counts = coincidence_counts(a, b, window);
  const std::size_t n = window.sidebands();
  return 2.0 * static_cast<double>(n) * counts[n] / detail::sideband_sum(counts, n);
}

inline double g2_zero_estimate(const PhotonStreams& streams, LagWindow window) {
  return g2_zero_estimate(streams.a(), streams.b(), window);
}

/// Full correlation record. The curve is normalized by the sideband mean, so
/// g2_curve at lag 0 equals g2_zero and the sideband average is 1.
inline CorrelationResult g2_curve(std::span<const double> a, std::span<const double> b,
                                  LagWindow window) {
  CorrelationResult r;
  r.coincidences = coincidence_counts(a, b, window);
  const std::size_t n = window.sidebands();
  const double sideband_sum = detail::sideband_sum(r.coincidences, n);
  r.center_counts = r.coincidences[n];
  r.sideband_mean = sideband_sum / static_cast<double>(2 * n);
  r.g2_zero = 2.0 * static_cast<double>(n) * r.center_counts / sideband_sum;
  r.lags.reserve(r.coincidences.size());
  r.g2_curve.reserve(r.coincidences.size());
  for (std::size_t j = 0; j < r.coincidences.size(); ++j) {
    r.lags.push_back(static_cast<std::int64_t>(j) - static_cast<std::int64_t>(n));
    r.g2_curve.push_back(j == n ? r.g2_zero : r.coincidences[j] / r.sideband_mean);
  }
  return r;
}

inline CorrelationResult g2_curve(const PhotonStreams& streams, LagWindow window) {
  return g2_curve(streams.a(), streams.b(), window);
}

/// `# key=value` summary lines followed by `lag,coincidences,g2` rows.
inline void write_correlation_csv(std::ostream& out, const CorrelationResult& r) {
  out << "# g2_zero=" << csv::format(r.g2_zero) << '\n'
      << "# center_counts=" << csv::format(r.center_counts) << '\n'
      << "# sideband_mean=" << csv::format(r.sideband_mean) << '\n'
      << "lag,coincidences,g2\n";
  for (std::size_t j = 0; j < r.lags.size(); ++j)
    out << r.lags[j] << ',' << csv::format(r.coincidences[j]) << ','
        << csv::format(r.g2_curve[j]) << '\n';
}

inline CorrelationResult read_correlation_csv(std::istream& in) {
  const auto table = csv::read(in);
  CorrelationResult r;
  for (const auto& [key, value] : table.meta) {
    if (key == "g2_zero") r.g2_zero = csv::parse_double(value);
    else if (key == "center_counts") r.center_counts = csv::parse_double(value);
    else if (key == "sideband_mean") r.sideband_mean = csv::parse_double(value);
  }
  const auto il = table.column("lag");
  const auto ic = table.column("coincidences");
  const auto ig = table.column("g2");
  for (const auto& row : table.rows) {
    r.lags.push_back(static_cast<std::int64_t>(row[il]));
    r.coincidences.push_back(row[ic]);
    r.g2_curve.push_back(row[ig]);
  }
  return r;
}

}  // namespace hbt
