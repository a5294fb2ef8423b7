// Physical constants, atom data and elementary laser-field conversions.
//
// All frequencies handled inside the library are angular (rad/s); the CLI
// converts to ordinary frequency at its boundaries and labels units there.
#pragma once

#include <cmath>
#include <string>

#include "ringtrap/errors.hpp"

namespace ringtrap {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 exact/recommended values.
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double planck_reduced = planck / two_pi;    // J s
inline constexpr double boltzmann = 1.380649e-23;            // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

struct PhysicalConstants {
  double c = speed_of_light;
  double hbar = planck_reduced;
  double h = planck;
  double kB = boltzmann;
  double amu = atomic_mass_unit;

  void validate() const {
    if (!(c > 0.0 && hbar > 0.0 && h > 0.0 && kB > 0.0 && amu > 0.0))
      throw domain_error("PhysicalConstants: all values must be strictly positive");
    if (std::abs(h - two_pi * hbar) > 1e-12 * h)
      throw domain_error("PhysicalConstants: h must equal 2*pi*hbar");
  }
};

// One alkali species, reduced to what the trap and probe formulas need.
// The saturation intensity follows the cycling-transition convention; the
// Raman lattice depth is sensitive to this choice.
struct AtomSpecies {
  double mass = 0.0;           // kg
  double d2_wavelength = 0.0;  // m
  double d1_wavelength = 0.0;  // m
  double gamma = 0.0;          // natural linewidth, angular (rad/s)
  double i_sat = 0.0;          // W/m^2
  std::string label;

  void validate() const {
    if (!(mass > 0.0)) throw domain_error("AtomSpecies: mass must be > 0");
    if (!(d1_wavelength > d2_wavelength))
      throw domain_error("AtomSpecies: d1_wavelength must exceed d2_wavelength");
    if (!(d2_wavelength > 0.0)) throw domain_error("AtomSpecies: wavelengths must be > 0");
    if (!(gamma > 0.0)) throw domain_error("AtomSpecies: gamma must be > 0");
    if (!(i_sat > 0.0)) throw domain_error("AtomSpecies: i_sat must be > 0");
  }

  double d2_angular_frequency() const { return two_pi * speed_of_light / d2_wavelength; }
  double d1_angular_frequency() const { return two_pi * speed_of_light / d1_wavelength; }
};

// Rb-85 D-line data (cycling-transition i_sat convention, single scalar;
// no polarization resolution).
inline AtomSpecies rb85() {
  AtomSpecies s;
  s.mass = 84.9118 * atomic_mass_unit;
  s.d2_wavelength = 780.241e-9;
  s.d1_wavelength = 794.979e-9;
  s.gamma = two_pi * 6.07e6;
  s.i_sat = 16.7;  // 1.67 mW/cm^2
  s.label = "Rb85";
  return s;
}

struct LaserLine {
  double wavelength = 0.0;      // m
  double power = 0.0;           // W
  double intensity_peak = 0.0;  // W/m^2, used for free-space beams

  void validate() const {
    if (!(wavelength > 0.0)) throw domain_error("LaserLine: wavelength must be > 0");
    if (power < 0.0) throw domain_error("LaserLine: power must be >= 0");
  }
};

inline double wavenumber(double wavelength) {
  if (!(wavelength > 0.0)) throw domain_error("wavenumber: wavelength must be > 0");
  return two_pi / wavelength;
}

// Signed angular detuning of a laser from a line; red detuning is negative.
inline double detuning_angular(double laser_freq_hz, double line_freq_hz) {
  if (!(laser_freq_hz > 0.0 && line_freq_hz > 0.0))
    throw domain_error("detuning_angular: frequencies must be > 0");
  return two_pi * (laser_freq_hz - line_freq_hz);
}

// Resonant Rabi frequency Omega = Gamma * sqrt(I / (2 I_sat)).
inline double rabi_from_intensity(double intensity, const AtomSpecies& species) {
  if (intensity < 0.0) throw domain_error("rabi_from_intensity: intensity must be >= 0");
  return species.gamma * std::sqrt(intensity / (2.0 * species.i_sat));
}

}  // namespace ringtrap
