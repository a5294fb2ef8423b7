// Intracavity standing-wave dipole trap: depth, secular frequencies,
// photon scattering, higher-order transverse-mode intensity patterns.
//
// Depth model: far-detuned two-line formula with D2/D1 line weights 2:1
// (rotating wave approximation),
//   U = (pi c^2 Gamma / 2) * (2/(w2^3 D2) + 1/(w1^3 D1)) * I,
// evaluated at the standing-wave antinode.  Gravity is neglected
// (mg*w is three orders of magnitude below the depths handled here).
#pragma once

#include <cmath>
#include <cstdint>

#include "ringtrap/cavity.hpp"
#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"

namespace ringtrap {

namespace detail {

// Line-weighted detuning sums shared by depth and scattering rate:
// depth_sum = 2/(w2^3 D2) + 1/(w1^3 D1)          (signed, < 0 when red)
// rate_sum  = 2/(w2^3 D2^2) + 1/(w1^3 D1^2)      (> 0)
struct DlineSums {
  double depth_sum;
  double rate_sum;
};

inline DlineSums dline_sums(double wavelength, const AtomSpecies& species) {
  const double omega = two_pi * speed_of_light / wavelength;
  const double omega2 = species.d2_angular_frequency();
  const double omega1 = species.d1_angular_frequency();
  const double delta2 = omega - omega2;
  const double delta1 = omega - omega1;
  const double w2c = omega2 * omega2 * omega2;
  const double w1c = omega1 * omega1 * omega1;
  return {2.0 / (w2c * delta2) + 1.0 / (w1c * delta1),
          2.0 / (w2c * delta2 * delta2) + 1.0 / (w1c * delta1 * delta1)};
}

}  // namespace detail

// Peak intensity of one elliptic-Gaussian cavity beam of power P.
inline double single_beam_peak_intensity(double power, const CavityGeometry& geometry) {
  if (power < 0.0) throw domain_error("single_beam_peak_intensity: power must be >= 0");
  return 2.0 * power / (pi * geometry.waist_v * geometry.waist_h);
}

// Antinode intensity of the standing wave built from two counter-propagating
// beams: I = (sqrt(I1) + sqrt(I2))^2, i.e. 4x the single-beam peak for equal
// powers.
inline double antinode_intensity(double power_1, double power_2,
                                 const CavityGeometry& geometry) {
  const double a1 = std::sqrt(single_beam_peak_intensity(power_1, geometry));
  const double a2 = std::sqrt(single_beam_peak_intensity(power_2, geometry));
  return (a1 + a2) * (a1 + a2);
}

// Antinode trap depth for unequal pump powers in the two directions.
inline double dipole_depth_two_beams(double power_1, double power_2,
                                     const CavityGeometry& geometry, double wavelength,
                                     const AtomSpecies& species) {
  geometry.validate();
  species.validate();
  if (!(wavelength > species.d1_wavelength))
    throw domain_error(
        "dipole_depth: wavelength must be red-detuned from both D lines "
        "(blue-detuned operation is unsupported)");
  const double coeff =
      pi * speed_of_light * speed_of_light * species.gamma / 2.0 *
      detail::dline_sums(wavelength, species).depth_sum;
  return std::abs(coeff) * antinode_intensity(power_1, power_2, geometry);
}

// Antinode depth with equal circulating power per direction.  Returns |U0| in J.
inline double dipole_depth(double power_per_direction, const CavityGeometry& geometry,
                           double wavelength, const AtomSpecies& species) {
  return dipole_depth_two_beams(power_per_direction, power_per_direction, geometry,
                                wavelength, species);
}

struct SecularFrequencies {
  double omega_ax = 0.0;     // rad/s, along the standing wave
  double omega_rad_v = 0.0;  // rad/s, across the vertical waist
  double omega_rad_h = 0.0;  // rad/s, across the horizontal waist
};

// Harmonic expansion of U0 * cos^2(kz) * exp(-2x^2/w_h^2 - 2y^2/w_v^2):
// omega_ax = k sqrt(2 U0 / m), omega_rad_i = sqrt(4 U0 / (m w_i^2)).
inline SecularFrequencies secular_frequencies(double depth, double wavelength,
                                              const CavityGeometry& geometry,
                                              const AtomSpecies& species) {
  if (!(depth > 0.0)) throw domain_error("secular_frequencies: depth must be > 0");
  const double k = wavenumber(wavelength);
  const double m = species.mass;
  return {k * std::sqrt(2.0 * depth / m),
          std::sqrt(4.0 * depth / (m * geometry.waist_v * geometry.waist_v)),
          std::sqrt(4.0 * depth / (m * geometry.waist_h * geometry.waist_h))};
}

// Depth-independent identity omega_ax / sqrt(omega_rad_v * omega_rad_h)
// = k sqrt(w_v w_h) / sqrt(2).
inline double secular_ratio(double wavelength, const CavityGeometry& geometry) {
  return wavenumber(wavelength) * std::sqrt(geometry.waist_v * geometry.waist_h) /
         std::sqrt(2.0);
}

// Photon scattering rate at the antinode, same line weighting as the depth:
// Gamma_sc = (Gamma/hbar) * U0 / Delta_eff with Delta_eff = |depth_sum| / rate_sum.
inline double scattering_rate(double depth, double wavelength, const AtomSpecies& species) {
  if (depth < 0.0) throw domain_error("scattering_rate: depth must be >= 0");
  if (depth == 0.0) return 0.0;
  const auto sums = detail::dline_sums(wavelength, species);
  const double delta_eff = std::abs(sums.depth_sum) / sums.rate_sum;
  return species.gamma / planck_reduced * depth / delta_eff;
}

struct TrapState {
  double wavelength = 0.0;                     // m
  double circulating_power_per_direction = 0.0;  // W
  CavityGeometry geometry;
  double depth = 0.0;  // J
  SecularFrequencies secular;
};

inline TrapState make_trap_state(double wavelength, double power_per_direction,
                                 const CavityGeometry& geometry, const AtomSpecies& species) {
  TrapState state;
  state.wavelength = wavelength;
  state.circulating_power_per_direction = power_per_direction;
  state.geometry = geometry;
  state.depth = dipole_depth(power_per_direction, geometry, wavelength, species);
  if (state.depth > 0.0)
    state.secular = secular_frequencies(state.depth, wavelength, geometry, species);
  return state;
}

struct TransverseMode {
  int m_index = 0;      // horizontal (x) index
  int n_index = 0;      // vertical (y) index
  double waist_x = 0.0;  // m
  double waist_y = 0.0;  // m

  void validate() const {
    if (m_index < 0 || n_index < 0)
      throw domain_error("TransverseMode: indices must be >= 0");
    if (!(waist_x > 0.0 && waist_y > 0.0))
      throw domain_error("TransverseMode: waists must be > 0");
  }
};

// Hermite-Gauss TEM_mn intensity at (x, y).  `peak` fixes the overall scale
// as the peak intensity of the TEM_00 mode carrying the same power, so the
// transverse integral equals peak * pi * w_x * w_y / 2 for every (m, n).
inline double hermite_gauss_intensity(const TransverseMode& mode, double x, double y,
                                      double peak) {
  mode.validate();
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  const double xi = std::sqrt(2.0) * x / mode.waist_x;
  const double eta = std::sqrt(2.0) * y / mode.waist_y;
  const double hx = std::hermite(static_cast<unsigned>(mode.m_index), xi);
  const double hy = std::hermite(static_cast<unsigned>(mode.n_index), eta);
  const double norm_x = std::pow(2.0, mode.m_index) * factorial(mode.m_index);
  const double norm_y = std::pow(2.0, mode.n_index) * factorial(mode.n_index);
  return peak * (hx * hx / norm_x) * (hy * hy / norm_y) *
         std::exp(-2.0 * x * x / (mode.waist_x * mode.waist_x) -
                  2.0 * y * y / (mode.waist_y * mode.waist_y));
}

// Number of standing-wave antinodes an axial cloud extent covers.
inline std::int64_t antinode_count(double cloud_extent_axial, double wavelength) {
  if (cloud_extent_axial < 0.0) throw domain_error("antinode_count: extent must be >= 0");
  if (!(wavelength > 0.0)) throw domain_error("antinode_count: wavelength must be > 0");
  return static_cast<std::int64_t>(std::floor(2.0 * cloud_extent_axial / wavelength));
}

}  // namespace ringtrap
