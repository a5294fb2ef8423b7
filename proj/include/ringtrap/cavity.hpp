// Ring-cavity optics: free spectral range, finesse, linewidth and decay
// rates, resonant power buildup, mode volume.
//
// Decay-rate convention: the stored primary quantity is the FWHM linewidth.
// Both kappa_intensity = 2*pi*FWHM and kappa_field = pi*FWHM are exposed,
// labeled, to keep the factor of 2 explicit.
#pragma once

#include <array>
#include <cmath>
#include <numeric>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"

namespace ringtrap {

struct CavityGeometry {
  double round_trip_length = 0.0;  // m
  double waist_v = 0.0;            // m
  double waist_h = 0.0;            // m
  std::array<double, 3> mirror_transmissions{};  // power transmission per mirror
  double extra_loss = 0.0;         // residual round-trip power loss (absorption/scatter)

  double total_loss() const {
    return mirror_transmissions[0] + mirror_transmissions[1] + mirror_transmissions[2] +
           extra_loss;
  }

  void validate() const {
    if (!(round_trip_length > 0.0))
      throw domain_error("CavityGeometry: round_trip_length must be > 0");
    if (!(waist_v > 0.0 && waist_h > 0.0))
      throw domain_error("CavityGeometry: waists must be > 0");
    for (double t : mirror_transmissions)
      if (!(t > 0.0 && t < 1.0))
        throw domain_error("CavityGeometry: mirror transmissions must lie in (0, 1)");
    if (extra_loss < 0.0) throw domain_error("CavityGeometry: extra_loss must be >= 0");
    if (!(total_loss() < 1.0))
      throw domain_error("CavityGeometry: total round-trip loss must be < 1");
  }
};

struct CavityCharacter {
  double finesse = 0.0;
  double fsr = 0.0;                   // Hz
  double linewidth_fwhm = 0.0;        // Hz
  double intensity_decay_rate = 0.0;  // rad/s, kappa = 2*pi*FWHM
  double field_decay_rate = 0.0;      // rad/s, kappa/2 = pi*FWHM
  double buildup = 0.0;               // finesse/pi
  double mode_volume = 0.0;           // m^3
};

inline double free_spectral_range(const CavityGeometry& geometry) {
  geometry.validate();
  return speed_of_light / geometry.round_trip_length;
}

// F = 2*pi / (sum of mirror transmissions + extra loss).
inline double finesse_from_losses(const CavityGeometry& geometry) {
  geometry.validate();
  const double loss = geometry.total_loss();
  if (!(loss > 0.0)) throw domain_error("finesse_from_losses: zero total loss");
  return two_pi / loss;
}

// Inverse of finesse_from_losses: the total round-trip loss a given finesse implies.
inline double loss_from_finesse(double finesse) {
  if (!(finesse > 0.0)) throw domain_error("loss_from_finesse: finesse must be > 0");
  return two_pi / finesse;
}

struct CavityLinewidth {
  double fwhm = 0.0;             // Hz
  double kappa_intensity = 0.0;  // rad/s
  double kappa_field = 0.0;      // rad/s
};

inline CavityLinewidth linewidth_and_decay(const CavityGeometry& geometry, double finesse) {
  if (!(finesse > 0.0)) throw domain_error("linewidth_and_decay: finesse must be > 0");
  const double fwhm = free_spectral_range(geometry) / finesse;
  return {fwhm, two_pi * fwhm, pi * fwhm};
}

inline double buildup_factor(double finesse) {
  if (!(finesse > 0.0)) throw domain_error("buildup_factor: finesse must be > 0");
  return finesse / pi;
}

// Round-trip field amplitude factor sqrt(prod(1 - T_i) * (1 - extra_loss)).
inline double round_trip_amplitude(const CavityGeometry& geometry) {
  double r2 = 1.0 - geometry.extra_loss;
  for (double t : geometry.mirror_transmissions) r2 *= 1.0 - t;
  return std::sqrt(r2);
}

// Resonant circulating power per pumped direction, Airy peak of the ring:
// P_circ = eta * P_in * T0 / (1 - g_rt)^2, which reduces to 4 T0 P / loss^2
// for small losses.
inline double circulating_power(double input_power, const CavityGeometry& geometry,
                                double mode_match) {
  geometry.validate();
  if (input_power < 0.0) throw domain_error("circulating_power: input power must be >= 0");
  if (!(mode_match >= 0.0 && mode_match <= 1.0))
    throw domain_error("circulating_power: mode_match must lie in [0, 1]");
  const double g = round_trip_amplitude(geometry);
  const double denom = 1.0 - g;
  return mode_match * input_power * geometry.mirror_transmissions[0] / (denom * denom);
}

// V = (pi/4) * L * w_v * w_h.
inline double mode_volume(const CavityGeometry& geometry) {
  geometry.validate();
  return pi / 4.0 * geometry.round_trip_length * geometry.waist_v * geometry.waist_h;
}

inline CavityCharacter characterize(const CavityGeometry& geometry) {
  CavityCharacter ch;
  ch.finesse = finesse_from_losses(geometry);
  ch.fsr = free_spectral_range(geometry);
  const CavityLinewidth lw = linewidth_and_decay(geometry, ch.finesse);
  ch.linewidth_fwhm = lw.fwhm;
  ch.intensity_decay_rate = lw.kappa_intensity;
  ch.field_decay_rate = lw.kappa_field;
  ch.buildup = buildup_factor(ch.finesse);
  ch.mode_volume = mode_volume(geometry);
  return ch;
}

}  // namespace ringtrap
