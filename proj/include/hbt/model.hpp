#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include "hbt/csv.hpp"
#include "hbt/error.hpp"

namespace hbt {

/// Scalars describing one simulated HBT run.
///
/// sigma is the ratio of the total background rate to the detected signal
/// rate, xi the signal split asymmetry, chi the background split asymmetry,
/// efficiency the detection quantum efficiency and pulses the number of
/// excitation periods. Every constructed value satisfies
///   sigma >= 0, -1/2 < xi < 1/2, -1/2 <= chi <= 1/2, 0 < efficiency <= 1,
///   pulses >= 1.
class SimParams {
 public:
  static constexpr std::size_t kDefaultPulses = 20000;

  SimParams() = default;

  SimParams(double sigma, double xi, double chi, double efficiency = 1.0,
            std::size_t pulses = kDefaultPulses)
      : sigma_(sigma), xi_(xi), chi_(chi), efficiency_(efficiency), pulses_(pulses) {
    validate();
  }

  double sigma() const noexcept { return sigma_; }
  double xi() const noexcept { return xi_; }
  double chi() const noexcept { return chi_; }
  double efficiency() const noexcept { return efficiency_; }
  std::size_t pulses() const noexcept { return pulses_; }

  SimParams with_sigma(double v) const { return {v, xi_, chi_, efficiency_, pulses_}; }
  SimParams with_xi(double v) const { return {sigma_, v, chi_, efficiency_, pulses_}; }
  SimParams with_chi(double v) const { return {sigma_, xi_, v, efficiency_, pulses_}; }
  SimParams with_pulses(std::size_t n) const { return {sigma_, xi_, chi_, efficiency_, n}; }

  /// Probability that a detected signal photon goes to detector A.
  double signal_to_a() const noexcept { return 0.5 + xi_; }
  /// Probability that a background event is registered on detector A.
  double noise_to_a() const noexcept { return 0.5 + chi_; }

  friend bool operator==(const SimParams&, const SimParams&) = default;

 private:
  void validate() const {
    if (!(sigma_ >= 0.0) || !std::isfinite(sigma_))
      throw InvalidParameter("sigma must be finite and >= 0 (got " + csv::format(sigma_) + ")");
    if (!(xi_ > -0.5 && xi_ < 0.5))
      throw InvalidParameter("xi must lie in the open interval (-1/2, 1/2) (got " +
                             csv::format(xi_) + ")");
    if (!(chi_ >= -0.5 && chi_ <= 0.5))
      throw InvalidParameter("chi must lie in the closed interval [-1/2, 1/2] (got " +
                             csv::format(chi_) + ")");
    if (!(efficiency_ > 0.0 && efficiency_ <= 1.0))
      throw InvalidParameter("efficiency must lie in (0, 1] (got " +
                             csv::format(efficiency_) + ")");
    if (pulses_ < 1) throw InvalidParameter("pulses must be >= 1");
  }

  double sigma_ = 0.0;
  double xi_ = 0.0;
  double chi_ = 0.0;
  double efficiency_ = 1.0;
  std::size_t pulses_ = kDefaultPulses;
};

/// Per-detector rates in events per pulse period.
struct DetectorRates {
  double signal_a = 0.0;
  double signal_b = 0.0;
  double dark_a = 0.0;
  double dark_b = 0.0;
};

/// Photon number of a Fock state; always >= 1.
class FockNumber {
 public:
  explicit FockNumber(std::int64_t n) : n_(n) {
    if (n < 1) throw DomainError("Fock number must be >= 1 (got " + std::to_string(n) + ")");
  }
  std::int64_t value() const noexcept { return n_; }

 private:
  std::int64_t n_;
};

/// Splits the emitter rate k_s over both detectors and adds the background,
/// whose total is sigma * efficiency * k_s.
inline DetectorRates derive_rates(const SimParams& params, double k_s) {
  if (!(k_s > 0.0) || !std::isfinite(k_s))
    throw InvalidParameter("signal rate k_s must be finite and > 0");
  const double detected = params.efficiency() * k_s;
  const double dark = params.sigma() * detected;
  return {
      .signal_a = params.signal_to_a() * detected,
      .signal_b = (0.5 - params.xi()) * detected,
      .dark_a = params.noise_to_a() * dark,
      .dark_b = (0.5 - params.chi()) * dark,
  };
}

/// g2 of the Fock state |n>: 1 - 1/n.
inline double fock_g2(FockNumber n) { return 1.0 - 1.0 / static_cast<double>(n.value()); }

inline double fock_g2(std::int64_t n) { return fock_g2(FockNumber(n)); }

/// Large-N expectation of the sideband-normalized g2(0) estimator for the
/// stream model.
///
/// With p the signal-to-A probability, q the noise-to-A probability and s the
/// noise factor, zero-lag coincidences per pulse are p(1-q)s + q(1-p)s +
/// q(1-q)s^2 and uncorrelated (sideband) coincidences are
/// (p + qs)(1 - p + (1-q)s). The efficiency scales both by its square and
/// drops out.
inline double analytic_g2_zero(const SimParams& params) {
  const double s = params.sigma();
  const double pa = 0.5 + params.xi();
  const double pb = 0.5 - params.xi();
  const double qa = 0.5 + params.chi();
  const double qb = 0.5 - params.chi();
  // Written so that swapping the detector labels permutes identical products.
  const double num = (pa * qb) * s + (qa * pb) * s + (qa * qb) * s * s;
  const double den = (pa + qa * s) * (pb + qb * s);
  if (den == 0.0) throw DegenerateDenominator("expected sideband coincidence rate is zero");
  return num / den;
}

}  // namespace hbt
