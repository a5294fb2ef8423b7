// Recoil-induced resonance spectroscopy: Raman-beam geometry, spectrum
// synthesis from the Maxwell-Boltzmann velocity derivative, trapped-atom
// geometry factor, critical scan rates, temperature extraction.
//
// The net two-photon scattering rate is evaluated literally as
//   W(v_z = dw/q) = hbar pi/2 * Omega_R^2 * N * dPi/dv_z,
// oriented so the positive-detuning lobe is positive; output is labeled
// arbitrary units.  Trapped atoms keep only the radial momentum projection,
// q_eff = q_r = q sin(phi).
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/parallel.hpp"
#include "ringtrap/thermal.hpp"

namespace ringtrap {

struct RamanProbe {
  double wavelength = 0.0;   // m
  double theta = 0.0;        // rad, angle enclosed by the beams
  double phi = 0.0;          // rad, misalignment of q from the trap axis
  double detuning = 0.0;     // rad/s, from atomic resonance
  double intensity_1 = 0.0;  // W/m^2
  double intensity_2 = 0.0;  // W/m^2

  void validate() const {
    if (!(wavelength > 0.0)) throw domain_error("RamanProbe: wavelength must be > 0");
    if (!(theta > 0.0 && theta < pi / 2.0))
      throw domain_error("RamanProbe: theta must lie in (0, pi/2)");
    if (!(phi >= 0.0 && phi < pi / 2.0))
      throw domain_error("RamanProbe: phi must lie in [0, pi/2)");
    if (detuning == 0.0) throw domain_error("RamanProbe: detuning must be nonzero");
    if (intensity_1 < 0.0 || intensity_2 < 0.0)
      throw domain_error("RamanProbe: intensities must be >= 0");
  }
};

struct RamanWavevector {
  double q = 0.0;         // rad/m
  double q_axial = 0.0;   // q cos(phi)
  double q_radial = 0.0;  // q sin(phi)
};

// q = 2 k sin(theta/2) for equal beam wavelengths.
inline RamanWavevector raman_q(const RamanProbe& probe) {
  probe.validate();
  const double q = 2.0 * wavenumber(probe.wavelength) * std::sin(probe.theta / 2.0);
  return {q, q * std::cos(probe.phi), q * std::sin(probe.phi)};
}

// Omega_R = Omega_1 Omega_2 / (2 Delta), sign included.
inline double two_photon_rabi(double omega1, double omega2, double detuning) {
  if (detuning == 0.0) throw domain_error("two_photon_rabi: detuning must be nonzero");
  return omega1 * omega2 / (2.0 * detuning);
}

inline double two_photon_rabi(const RamanProbe& probe, const AtomSpecies& species) {
  return two_photon_rabi(rabi_from_intensity(probe.intensity_1, species),
                         rabi_from_intensity(probe.intensity_2, species), probe.detuning);
}

// Peak-to-peak depth of the moving Raman lattice: hbar |Omega_1 Omega_2 / Delta|
// (the interference term of the light shift, 4x the half-amplitude).
inline double raman_lattice_depth(const RamanProbe& probe, const AtomSpecies& species) {
  probe.validate();
  const double o1 = rabi_from_intensity(probe.intensity_1, species);
  const double o2 = rabi_from_intensity(probe.intensity_2, species);
  return planck_reduced * std::abs(o1 * o2 / probe.detuning);
}

// f = 1 / sin(phi), path-length and coherence-lifetime enhancement of a
// radially probed trapped cloud.
inline double geometry_factor(double phi) {
  if (!(phi > 0.0 && phi <= pi / 2.0))
    throw domain_error("geometry_factor: phi must lie in (0, pi/2]; phi -> 0 diverges");
  return 1.0 / std::sin(phi);
}

enum class ProbeGeometry { free_atoms, trapped };

inline double effective_q(const RamanProbe& probe, ProbeGeometry geometry) {
  const RamanWavevector qv = raman_q(probe);
  if (geometry == ProbeGeometry::free_atoms) return qv.q;
  if (!(probe.phi > 0.0))
    throw domain_error("effective_q: trapped probing requires phi > 0");
  return qv.q_radial;
}

// Signal at one detuning difference delta_omega (rad/s), arbitrary units.
inline double rir_signal(double delta_omega, double temperature, const RamanProbe& probe,
                         double atom_count, const AtomSpecies& species,
                         ProbeGeometry geometry = ProbeGeometry::free_atoms,
                         bool flip_sign = false) {
  if (!(temperature > 0.0)) throw domain_error("rir_signal: temperature must be > 0");
  const double q_eff = effective_q(probe, geometry);
  const double v = delta_omega / q_eff;
  const double omega_r = two_photon_rabi(probe, species);
  const double a = species.mass / (2.0 * boltzmann * temperature);
  // -dPi/dv = 2 a v Pi(v); the minus orients the positive lobe at positive
  // detuning.
  const double derivative = 2.0 * a * v * maxwell_boltzmann_1d(v, temperature, species);
  const double w = planck_reduced * pi / 2.0 * omega_r * omega_r * atom_count * derivative;
  return flip_sign ? -w : w;
}

struct RirSpectrum {
  std::vector<double> delta_omega;  // rad/s
  std::vector<double> signal;       // arbitrary units
  double temperature_used = 0.0;    // K
  double q = 0.0;                   // rad/m, the q the signal was generated with
};

// Uniform grid over [delta_min, delta_max].  temperature_drift adds a linear
// ramp of the sample temperature across the scan (total drift in K over the
// full scan, centered), default off.
inline RirSpectrum synthesize_rir_spectrum(double delta_min, double delta_max,
                                           std::size_t n_points, double temperature,
                                           const RamanProbe& probe, double atom_count,
                                           const AtomSpecies& species,
                                           ProbeGeometry geometry = ProbeGeometry::free_atoms,
                                           bool flip_sign = false,
                                           double temperature_drift = 0.0) {
  if (n_points < 2) throw domain_error("synthesize_rir_spectrum: need >= 2 points");
  if (!(delta_max > delta_min))
    throw domain_error("synthesize_rir_spectrum: need delta_max > delta_min");
  RirSpectrum spectrum;
  spectrum.temperature_used = temperature;
  spectrum.q = effective_q(probe, geometry);
  spectrum.delta_omega.resize(n_points);
  spectrum.signal.resize(n_points);
  const double step = (delta_max - delta_min) / static_cast<double>(n_points - 1);
  detail::parallel_for(
      n_points,
      [&](std::size_t i) {
        const double delta = delta_min + step * static_cast<double>(i);
        const double progress = static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double t_local = temperature + temperature_drift * (progress - 0.5);
        spectrum.delta_omega[i] = delta;
        spectrum.signal[i] =
            rir_signal(delta, t_local, probe, atom_count, species, geometry, flip_sign);
      },
      4096);
  return spectrum;
}

struct RirFit {
  double temperature = 0.0;              // K, least-squares fit
  double temperature_closed_form = 0.0;  // K, from peak-to-peak splitting
  double amplitude = 0.0;                // arbitrary units
  double residual_rms = 0.0;
};

// Least-squares fit of the dispersive model A * v exp(-m v^2 / 2 kB T) with
// v = delta/q; amplitude is profiled out linearly, T refined by golden
// section around the closed-form estimate T = m (pp / 2q)^2 / kB.
inline RirFit fit_temperature_rir(const RirSpectrum& spectrum, const RamanProbe& probe,
                                  const AtomSpecies& species) {
  (void)probe;  // q is taken from the spectrum itself
  const std::size_t n = spectrum.delta_omega.size();
  if (n != spectrum.signal.size() || n < 5)
    throw domain_error("fit_temperature_rir: need a sampled spectrum (>= 5 points)");
  const double q = spectrum.q;
  if (!(q > 0.0)) throw domain_error("fit_temperature_rir: spectrum carries no q");

  const auto [imin_it, imax_it] =
      std::minmax_element(spectrum.signal.begin(), spectrum.signal.end());
  const std::size_t imin = static_cast<std::size_t>(imin_it - spectrum.signal.begin());
  const std::size_t imax = static_cast<std::size_t>(imax_it - spectrum.signal.begin());
  if (!(*imax_it > 0.0) || !(*imin_it < 0.0))
    throw domain_error("fit_temperature_rir: spectrum has no dispersive extrema");
  if (imin == 0 || imax == 0 || imin == n - 1 || imax == n - 1)
    throw domain_error("fit_temperature_rir: spectrum does not span both extrema");

  const double pp = std::abs(spectrum.delta_omega[imax] - spectrum.delta_omega[imin]);
  if (!(pp > 0.0)) throw domain_error("fit_temperature_rir: degenerate extrema");
  const double v_extremum = pp / (2.0 * q);
  const double t_closed = species.mass * v_extremum * v_extremum / boltzmann;

  // Profiled sum of squares at temperature T.
  auto sse = [&](double temperature, double* amplitude_out) {
    const double a = species.mass / (2.0 * boltzmann * temperature);
    double sg = 0.0, gg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = spectrum.delta_omega[i] / q;
      const double g = v * std::exp(-a * v * v);
      sg += spectrum.signal[i] * g;
      gg += g * g;
    }
    const double amplitude = gg > 0.0 ? sg / gg : 0.0;
    if (amplitude_out) *amplitude_out = amplitude;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = spectrum.delta_omega[i] / q;
      const double r = spectrum.signal[i] - amplitude * v * std::exp(-a * v * v);
      ss += r * r;
    }
    return ss;
  };

  // Golden-section minimization in log T around the closed-form estimate.
  const double golden = 0.6180339887498949;
  double lo = std::log(t_closed / 5.0), hi = std::log(t_closed * 5.0);
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = sse(std::exp(x1), nullptr);
  double f2 = sse(std::exp(x2), nullptr);
  for (int iter = 0; iter < 120 && hi - lo > 1e-10; ++iter) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = sse(std::exp(x1), nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = sse(std::exp(x2), nullptr);
    }
  }

  RirFit fit;
  fit.temperature = std::exp((lo + hi) / 2.0);
  fit.temperature_closed_form = t_closed;
  fit.residual_rms = std::sqrt(sse(fit.temperature, &fit.amplitude) / n);
  return fit;
}

// Thermal decay time of the Raman density grating: 1/(q v_th), trapped
// probing enhanced by f.
inline double grating_lifetime(double temperature, const RamanProbe& probe,
                               const AtomSpecies& species,
                               ProbeGeometry geometry = ProbeGeometry::free_atoms) {
  const double tau = 1.0 / (raman_q(probe).q * thermal_velocity(temperature, species));
  if (geometry == ProbeGeometry::free_atoms) return tau;
  return tau * geometry_factor(probe.phi);
}

// Critical scan rate for ringing, (q v_th / 2pi)^2 in Hz/s; reduced by f^2
// for trapped probing.
inline double critical_scan_rate(double temperature, const RamanProbe& probe,
                                 const AtomSpecies& species,
                                 ProbeGeometry geometry = ProbeGeometry::free_atoms) {
  const double linewidth_hz =
      raman_q(probe).q * thermal_velocity(temperature, species) / two_pi;
  const double rate = linewidth_hz * linewidth_hz;
  if (geometry == ProbeGeometry::free_atoms) return rate;
  const double f = geometry_factor(probe.phi);
  return rate / (f * f);
}

// Velocity an axially trapped atom must have along the trap valleys to stay
// resonant: f * delta_omega / q.
inline double trapped_velocity_map(double delta_omega, const RamanProbe& probe) {
  const double f = geometry_factor(probe.phi);  // throws for phi = 0
  return f * delta_omega / raman_q(probe).q;
}

}  // namespace ringtrap
