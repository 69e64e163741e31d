#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hbt/csv.hpp"
#include "hbt/error.hpp"
#include "hbt/model.hpp"
#include "hbt/random.hpp"

namespace hbt {

/// Upper bound on stream length accepted by the generators.
struct StreamLimits {
  std::size_t max_pulses = std::size_t{1} << 30;
};

/// Per-pulse detector amplitudes for detectors A and B.
///
/// Index i is the i-th excitation period. Both arrays always have the same
/// length. `params` is empty for streams that did not come from the emitter
/// model (reference fixtures, externally supplied data).
class PhotonStreams {
 public:
  PhotonStreams(std::vector<double> a, std::vector<double> b,
                std::optional<SimParams> params = std::nullopt, std::uint64_t seed = 0)
      : a_(std::move(a)), b_(std::move(b)), params_(std::move(params)), seed_(seed) {
    if (a_.size() != b_.size())
      throw InvalidParameter("stream lengths differ (" + std::to_string(a_.size()) + " vs " +
                             std::to_string(b_.size()) + ")");
  }

  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  const std::optional<SimParams>& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return a_.size(); }

  friend bool operator==(const PhotonStreams&, const PhotonStreams&) = default;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  std::optional<SimParams> params_;
  std::uint64_t seed_;
};

/// Simulates an ideal single photon emitter seen through a beamsplitter and
/// two noisy detectors.
///
/// For every pulse:
///  1. If efficiency < 1 the photon is lost with probability 1 - efficiency.
///     Otherwise rho decides the arm: rho < 1/2 + xi gives A=1, B=0, else
///     A=0, B=1.
///  2. rho' < 1/2 + chi adds the noise amplitude to A; independently
///     rho'' > 1/2 + chi adds it to B.
/// The noise amplitude is sigma * efficiency so that the mean background
/// amplitude matches the dark rates of derive_rates. Each draw family comes
/// from its own engine, and rho, rho', rho'' are consumed once per pulse.
inline PhotonStreams generate_streams(const SimParams& params, std::uint64_t seed,
                                      StreamLimits limits = {}) {
  const std::size_t n = params.pulses();
  if (n > limits.max_pulses)
    throw CapacityError("pulses " + std::to_string(n) + " exceed maximum " +
                        std::to_string(limits.max_pulses));

  Engine split = make_engine(seed, DrawStream::kSignalSplit);
  Engine noise_a = make_engine(seed, DrawStream::kNoiseA);
  Engine noise_b = make_engine(seed, DrawStream::kNoiseB);
  Engine thinning = make_engine(seed, DrawStream::kEfficiency);

  const double to_a = params.signal_to_a();
  const double noise_threshold = params.noise_to_a();
  const double efficiency = params.efficiency();
  const double amplitude = params.sigma() * efficiency;
  const bool thin = efficiency < 1.0;

  std::vector<double> a(n, 0.0);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = uniform01(split);
    const bool detected = !thin || uniform01(thinning) < efficiency;
    if (detected) {
      if (rho < to_a)
        a[i] = 1.0;
      else
        b[i] = 1.0;
    }
    if (uniform01(noise_a) < noise_threshold) a[i] += amplitude;
    if (uniform01(noise_b) > noise_threshold) b[i] += amplitude;
  }
  return {std::move(a), std::move(b), params, seed};
}

/// Two independent streams of Poisson distributed event counts per period.
/// Coherent light reference: its correlation is flat at 1.
inline PhotonStreams poisson_reference_streams(double rate_a, double rate_b, std::size_t n,
                                               std::uint64_t seed, StreamLimits limits = {}) {
  if (!(rate_a >= 0.0) || !(rate_b >= 0.0) || !std::isfinite(rate_a) || !std::isfinite(rate_b))
    throw InvalidParameter("Poisson rates must be finite and >= 0");
  if (n > limits.max_pulses)
    throw CapacityError("pulses " + std::to_string(n) + " exceed maximum " +
                        std::to_string(limits.max_pulses));

  auto fill = [n](double rate, Engine engine) {
    std::vector<double> out(n, 0.0);
    if (rate == 0.0) return out;
    std::poisson_distribution<std::int64_t> dist(rate);
    for (auto& v : out) v = static_cast<double>(dist(engine));
    return out;
  };
  return {fill(rate_a, make_engine(seed, DrawStream::kPoissonA)),
          fill(rate_b, make_engine(seed, DrawStream::kPoissonB)), std::nullopt, seed};
}

/// CSV dump with header `index,a,b`.
inline void write_streams_csv(std::ostream& out, const PhotonStreams& streams) {
  out << "index,a,b\n";
  for (std::size_t i = 0; i < streams.size(); ++i)
    out << i << ',' << csv::format(streams.a()[i]) << ',' << csv::format(streams.b()[i]) << '\n';
}

inline PhotonStreams read_streams_csv(std::istream& in) {
  const auto table = csv::read(in);
  const auto ia = table.column("a");
  const auto ib = table.column("b");
  std::vector<double> a, b;
  a.reserve(table.rows.size());
  b.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    a.push_back(row[ia]);
    b.push_back(row[ib]);
  }
  return {std::move(a), std::move(b)};
}

}  // namespace hbt
