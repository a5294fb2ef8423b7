// Thermal ensembles in the trap: Maxwell-Boltzmann distribution, seeded
// phase-space sampling, ballistic time-of-flight expansion, temperature
// fitting, density estimates.
//
// The velocity-space density is used throughout (the distribution of v, not
// of p); sampling is deterministic for a fixed 64-bit seed.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/trap.hpp"

namespace ringtrap {

// Normalized 1-D Maxwell-Boltzmann velocity density, units s/m.
inline double maxwell_boltzmann_1d(double v, double temperature, const AtomSpecies& species) {
  if (!(temperature > 0.0))
    throw domain_error("maxwell_boltzmann_1d: temperature must be > 0");
  const double a = species.mass / (2.0 * boltzmann * temperature);
  return std::sqrt(a / pi) * std::exp(-a * v * v);
}

inline double thermal_velocity(double temperature, const AtomSpecies& species) {
  if (!(temperature > 0.0)) throw domain_error("thermal_velocity: temperature must be > 0");
  return std::sqrt(boltzmann * temperature / species.mass);
}

namespace detail {

// Box-Muller over mt19937_64 uniforms: identical streams on every platform
// for a fixed seed, unlike std::normal_distribution.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace detail

struct Ensemble {
  std::int64_t atom_count = 0;  // = number of samples drawn
  double temperature = 0.0;     // K
  std::uint64_t rng_seed = 0;
  std::vector<std::array<double, 3>> positions;   // m, (x=h, y=v, z=axial)
  std::vector<std::array<double, 3>> velocities;  // m/s
  std::vector<std::string> warnings;
};

// Thermal harmonic-trap sampling: position sigma_i = sqrt(kB T / (m w_i^2)),
// velocity sigma = sqrt(kB T / m) per axis.
inline Ensemble sample_ensemble(std::size_t n, double temperature, const TrapState& trap,
                                const AtomSpecies& species, std::uint64_t seed) {
  if (!(temperature > 0.0)) throw domain_error("sample_ensemble: temperature must be > 0");
  if (!(trap.depth > 0.0)) throw domain_error("sample_ensemble: trap depth must be > 0");

  Ensemble ensemble;
  ensemble.atom_count = static_cast<std::int64_t>(n);
  ensemble.temperature = temperature;
  ensemble.rng_seed = seed;
  if (boltzmann * temperature > 0.5 * trap.depth)
    ensemble.warnings.push_back(
        "temperature exceeds half the trap depth; harmonic sampling is unreliable");

  const double sigma_v = thermal_velocity(temperature, species);
  const std::array<double, 3> omegas = {trap.secular.omega_rad_h, trap.secular.omega_rad_v,
                                        trap.secular.omega_ax};
  std::array<double, 3> sigma_x{};
  for (int i = 0; i < 3; ++i) sigma_x[i] = sigma_v / omegas[i];

  detail::GaussianRng rng(seed);
  ensemble.positions.resize(n);
  ensemble.velocities.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < 3; ++i) ensemble.positions[k][i] = sigma_x[i] * rng.next();
    for (int i = 0; i < 3; ++i) ensemble.velocities[k][i] = sigma_v * rng.next();
  }
  return ensemble;
}

struct TofSeries {
  std::vector<double> times;   // s, strictly increasing
  std::vector<double> widths;  // m, Gaussian sigma of the column density

  void validate() const {
    if (times.size() != widths.size())
      throw domain_error("TofSeries: times and widths must have equal length");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i > 0 && !(times[i] > times[i - 1]))
        throw domain_error("TofSeries: times must be strictly increasing");
      if (!(widths[i] > 0.0)) throw domain_error("TofSeries: widths must be > 0");
    }
  }
};

// sigma(t) = sqrt(sigma0^2 + (kB T / m) t^2).
inline double tof_width(double t, double sigma0, double temperature,
                        const AtomSpecies& species) {
  if (t < 0.0) throw domain_error("tof_width: time must be >= 0");
  if (!(sigma0 > 0.0)) throw domain_error("tof_width: sigma0 must be > 0");
  const double vt = thermal_velocity(temperature, species);
  return std::sqrt(sigma0 * sigma0 + vt * vt * t * t);
}

struct TofFit {
  double temperature = 0.0;   // K
  double sigma0 = 0.0;        // m
  double residual_rms = 0.0;  // m, rms of width residuals
};

// Linear least squares on sigma^2 vs t^2 (the model is exactly linear there).
inline TofFit fit_temperature_tof(const TofSeries& series, const AtomSpecies& species) {
  series.validate();
  const std::size_t n = series.times.size();
  if (n < 3) throw domain_error("fit_temperature_tof: need at least 3 points");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = series.times[i] * series.times[i];
    const double y = series.widths[i] * series.widths[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw domain_error("fit_temperature_tof: degenerate time series");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  if (!(slope > 0.0))
    throw domain_error("fit_temperature_tof: non-expanding series, no temperature");

  TofFit fit;
  fit.temperature = species.mass * slope / boltzmann;
  fit.sigma0 = std::sqrt(std::max(intercept, 0.0));
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double model =
        std::sqrt(std::max(intercept, 0.0) + slope * series.times[i] * series.times[i]);
    ss += (series.widths[i] - model) * (series.widths[i] - model);
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

inline double depth_ratio(double temperature, double depth) {
  if (!(depth > 0.0)) throw domain_error("depth_ratio: depth must be > 0");
  if (temperature < 0.0) throw domain_error("depth_ratio: temperature must be >= 0");
  return boltzmann * temperature / depth;
}

// Harmonic-ensemble peak density n0 = N * prod_i(omega_i sqrt(m / 2 pi kB T)).
// The axial direction uses the envelope frequency from the Rayleigh-range
// curvature of the mode (site-averaged over the lattice), not the per-site
// secular frequency.
inline double peak_density(double atom_count, double temperature, const TrapState& trap,
                           const AtomSpecies& species) {
  if (atom_count < 0.0) throw domain_error("peak_density: atom count must be >= 0");
  if (!(temperature > 0.0)) throw domain_error("peak_density: temperature must be > 0");
  if (!(trap.depth > 0.0)) throw domain_error("peak_density: trap depth must be > 0");
  const double rayleigh_range =
      pi * trap.geometry.waist_v * trap.geometry.waist_h / trap.wavelength;
  const double omega_envelope = std::sqrt(2.0 * trap.depth / species.mass) / rayleigh_range;
  const double a = std::sqrt(species.mass / (2.0 * pi * boltzmann * temperature));
  return atom_count * omega_envelope * trap.secular.omega_rad_v * trap.secular.omega_rad_h *
         a * a * a;
}

}  // namespace ringtrap
