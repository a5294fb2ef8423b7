// Derived-parameter assembly and artifact emission behind the CLI
// subcommands, including the full apparatus-reproduction report.
//
// Regenerating any artifact with an identical config (and seeds) is
// byte-identical: no timestamps, fixed iteration orders, deterministic
// number formatting.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ringtrap/bloch.hpp"
#include "ringtrap/cavity.hpp"
#include "ringtrap/config.hpp"
#include "ringtrap/constants.hpp"
#include "ringtrap/csv.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/rir.hpp"
#include "ringtrap/svg.hpp"
#include "ringtrap/thermal.hpp"
#include "ringtrap/trap.hpp"

namespace ringtrap {

inline constexpr int report_schema_version = 1;

// ---- cavity ----------------------------------------------------------

inline json cavity_report(const ExperimentConfig& config) {
  json j;
  for (const std::string pol : {"p", "s"}) {
    const CavityGeometry geometry = config.cavity.to_geometry(pol);
    const CavityCharacter ch = characterize(geometry);
    json block;
    block["finesse"] = ch.finesse;
    block["fsr_hz"] = ch.fsr;
    block["linewidth_fwhm_hz"] = ch.linewidth_fwhm;
    block["kappa_intensity_rad_s"] = ch.intensity_decay_rate;
    block["kappa_field_rad_s"] = ch.field_decay_rate;
    block["buildup_over_pi"] = ch.buildup;
    block["mode_volume_m3"] = ch.mode_volume;
    block["total_round_trip_loss"] = geometry.total_loss();
    j[pol + "_pol"] = block;
  }
  const CavityGeometry active = config.cavity.to_geometry();
  j["active_polarization"] = config.cavity.polarization;
  j["circulating_power_per_direction_w"] = circulating_power(
      config.cavity.input_power_mw * 1e-3, active, config.cavity.mode_match);
  return j;
}

inline CsvTable cavity_csv(const ExperimentConfig& config) {
  const CavityGeometry geometry = config.cavity.to_geometry();
  const CavityCharacter ch = characterize(geometry);
  CsvTable t;
  t.columns = {"finesse",          "fsr_hz",           "linewidth_fwhm_hz",
               "kappa_intensity_rad_s", "kappa_field_rad_s", "buildup_over_pi",
               "mode_volume_m3",   "circulating_power_per_direction_w"};
  t.rows = {{ch.finesse, ch.fsr, ch.linewidth_fwhm, ch.intensity_decay_rate,
             ch.field_decay_rate, ch.buildup, ch.mode_volume,
             circulating_power(config.cavity.input_power_mw * 1e-3, geometry,
                               config.cavity.mode_match)}};
  return t;
}

// ---- trap ------------------------------------------------------------

inline TrapState trap_state_from_config(const ExperimentConfig& config) {
  return make_trap_state(config.trap.wavelength_nm * 1e-9,
                         config.trap.circulating_power_per_direction_w,
                         config.cavity.to_geometry(), config.species.to_species());
}

inline json trap_report(const ExperimentConfig& config) {
  const AtomSpecies species = config.species.to_species();
  const TrapState state = trap_state_from_config(config);
  json j;
  j["wavelength_nm"] = config.trap.wavelength_nm;
  j["circulating_power_per_direction_w"] = state.circulating_power_per_direction;
  j["antinode_intensity_w_m2"] =
      antinode_intensity(state.circulating_power_per_direction,
                         state.circulating_power_per_direction, state.geometry);
  j["depth_j"] = state.depth;
  j["depth_mk"] = state.depth / boltzmann * 1e3;
  j["omega_ax_2pi_hz"] = state.secular.omega_ax / two_pi;
  j["omega_rad_v_2pi_hz"] = state.secular.omega_rad_v / two_pi;
  j["omega_rad_h_2pi_hz"] = state.secular.omega_rad_h / two_pi;
  j["axial_to_radial_ratio"] =
      state.secular.omega_ax /
      std::sqrt(state.secular.omega_rad_v * state.secular.omega_rad_h);
  j["scattering_rate_per_s"] =
      scattering_rate(state.depth, state.wavelength, species);
  j["antinodes_over_cloud"] = static_cast<std::int64_t>(
      antinode_count(config.trap.cloud_axial_extent_mm * 1e-3, state.wavelength));
  return j;
}

inline CsvTable trap_csv(const ExperimentConfig& config) {
  const json j = trap_report(config);
  CsvTable t;
  t.columns = {"depth_j",          "depth_mk",          "omega_ax_2pi_hz",
               "omega_rad_v_2pi_hz", "omega_rad_h_2pi_hz", "axial_to_radial_ratio",
               "scattering_rate_per_s", "antinodes_over_cloud"};
  t.rows = {{j["depth_j"].get<double>(), j["depth_mk"].get<double>(),
             j["omega_ax_2pi_hz"].get<double>(), j["omega_rad_v_2pi_hz"].get<double>(),
             j["omega_rad_h_2pi_hz"].get<double>(), j["axial_to_radial_ratio"].get<double>(),
             j["scattering_rate_per_s"].get<double>(),
             static_cast<double>(j["antinodes_over_cloud"].get<std::int64_t>())}};
  return t;
}

// ---- transverse modes --------------------------------------------------

inline CsvTable modes_csv(const ExperimentConfig& config, int m, int n, int grid_points,
                          double span_waists) {
  if (grid_points < 2) throw domain_error("modes: need at least a 2x2 grid");
  if (!(span_waists > 0.0)) throw domain_error("modes: span must be > 0");
  TransverseMode mode;
  mode.m_index = m;
  mode.n_index = n;
  mode.waist_x = config.cavity.waist_h_um * 1e-6;
  mode.waist_y = config.cavity.waist_v_um * 1e-6;
  mode.validate();
  CsvTable t;
  t.columns = {"x_m", "y_m", "intensity_w_m2"};
  const double half_x = span_waists * mode.waist_x;
  const double half_y = span_waists * mode.waist_y;
  for (int iy = 0; iy < grid_points; ++iy) {
    const double y = -half_y + 2.0 * half_y * iy / (grid_points - 1);
    for (int ix = 0; ix < grid_points; ++ix) {
      const double x = -half_x + 2.0 * half_x * ix / (grid_points - 1);
      t.rows.push_back({x, y, hermite_gauss_intensity(mode, x, y, 1.0)});
    }
  }
  return t;
}

// ---- thermal / TOF -----------------------------------------------------

inline json tof_fit_report(const TofSeries& series, const AtomSpecies& species) {
  const TofFit fit = fit_temperature_tof(series, species);
  json j;
  j["temperature_K"] = fit.temperature;
  j["sigma0_m"] = fit.sigma0;
  j["residual_rms_m"] = fit.residual_rms;
  j["points"] = series.times.size();
  return j;
}

inline TofSeries synthetic_tof_series(double temperature, double sigma0,
                                      const AtomSpecies& species, std::size_t points,
                                      double t_max, double noise_fraction,
                                      std::uint64_t seed) {
  if (points < 3) throw domain_error("synthetic_tof_series: need >= 3 points");
  TofSeries series;
  detail::GaussianRng rng(seed);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = t_max * static_cast<double>(i + 1) / static_cast<double>(points);
    double width = tof_width(t, sigma0, temperature, species);
    if (noise_fraction > 0.0) width *= 1.0 + noise_fraction * rng.next();
    series.times.push_back(t);
    series.widths.push_back(width);
  }
  series.validate();
  return series;
}

inline CsvTable tof_csv(const TofSeries& series) {
  CsvTable t;
  t.columns = {"t_s", "width_m"};
  for (std::size_t i = 0; i < series.times.size(); ++i)
    t.rows.push_back({series.times[i], series.widths[i]});
  return t;
}

inline TofSeries tof_series_from_csv(const CsvTable& table) {
  TofSeries series;
  const std::size_t it = table.column_index("t_s");
  const std::size_t iw = table.column_index("width_m");
  for (const auto& row : table.rows) {
    series.times.push_back(row[it]);
    series.widths.push_back(row[iw]);
  }
  series.validate();
  return series;
}

// ---- rir ---------------------------------------------------------------

inline CsvTable rir_spectrum_csv(const RirSpectrum& spectrum) {
  CsvTable t;
  t.columns = {"delta_omega_hz", "signal"};
  for (std::size_t i = 0; i < spectrum.delta_omega.size(); ++i)
    t.rows.push_back({spectrum.delta_omega[i] / two_pi, spectrum.signal[i]});
  return t;
}

// Default grid: +-4 thermal widths around zero.
inline RirSpectrum synthesize_spectrum_from_config(const ExperimentConfig& config,
                                                   double temperature,
                                                   ProbeGeometry geometry,
                                                   std::size_t points = 801,
                                                   double span_rad_s = 0.0) {
  const AtomSpecies species = config.species.to_species();
  const RamanProbe probe = config.probe.to_probe();
  if (span_rad_s <= 0.0)
    span_rad_s = 4.0 * effective_q(probe, geometry) * thermal_velocity(temperature, species);
  return synthesize_rir_spectrum(-span_rad_s, span_rad_s, points, temperature, probe,
                                 config.thermal.atom_count, species, geometry);
}

inline RirSpectrum spectrum_from_csv(const CsvTable& table, double q) {
  RirSpectrum spectrum;
  const std::size_t id = table.column_index("delta_omega_hz");
  const std::size_t is = table.column_index("signal");
  for (const auto& row : table.rows) {
    spectrum.delta_omega.push_back(row[id] * two_pi);
    spectrum.signal.push_back(row[is]);
  }
  spectrum.q = q;
  return spectrum;
}

inline json rir_fit_report(const RirSpectrum& spectrum, const ExperimentConfig& config) {
  const RirFit fit =
      fit_temperature_rir(spectrum, config.probe.to_probe(), config.species.to_species());
  json j;
  j["temperature_K"] = fit.temperature;
  j["temperature_closed_form_K"] = fit.temperature_closed_form;
  j["q_rad_m"] = spectrum.q;
  j["method"] = "dispersive_least_squares";
  j["residual_rms"] = fit.residual_rms;
  return j;
}

inline json rir_report(const ExperimentConfig& config) {
  const AtomSpecies species = config.species.to_species();
  const RamanProbe probe = config.probe.to_probe();
  const double temperature = config.thermal.temperature();
  const RamanWavevector qv = raman_q(probe);
  const double f = geometry_factor(probe.phi);
  json j;
  j["q_rad_m"] = qv.q;
  j["q_axial_rad_m"] = qv.q_axial;
  j["q_radial_rad_m"] = qv.q_radial;
  j["two_photon_rabi_rad_s"] = two_photon_rabi(probe, species);
  j["raman_lattice_depth_j"] = raman_lattice_depth(probe, species);
  j["raman_lattice_depth_uk"] = raman_lattice_depth(probe, species) / boltzmann * 1e6;
  j["geometry_factor"] = f;
  j["extrema_hz"] = qv.q * thermal_velocity(temperature, species) / two_pi;
  j["grating_lifetime_free_s"] =
      grating_lifetime(temperature, probe, species, ProbeGeometry::free_atoms);
  j["grating_lifetime_trapped_s"] =
      grating_lifetime(temperature, probe, species, ProbeGeometry::trapped);
  j["critical_scan_rate_free_hz_per_s"] =
      critical_scan_rate(temperature, probe, species, ProbeGeometry::free_atoms);
  j["critical_scan_rate_trapped_hz_per_s"] =
      critical_scan_rate(temperature, probe, species, ProbeGeometry::trapped);
  return j;
}

// ---- bloch -------------------------------------------------------------

inline CsvTable bloch_trace_csv(const BlochTrace& trace) {
  CsvTable t;
  t.columns = {"t_s", "delta_hz", "u", "v", "w", "im_rho12"};
  for (std::size_t i = 0; i < trace.size(); ++i)
    t.rows.push_back({trace.t[i], trace.delta[i] / two_pi, trace.u[i], trace.v[i],
                      trace.w[i], trace.im_rho12(i)});
  return t;
}

inline json bloch_report(const ExperimentConfig& config) {
  const SweepConfig sweep = config.sweep.to_sweep();
  const BlochTrace trace = integrate_sweep(sweep);
  json j;
  j["dimensionless_rate"] = sweep.angular_rate() / (sweep.gamma * sweep.gamma);
  j["duration_s"] = sweep.duration();
  double peak_v = 0.0;
  for (double v : trace.v) peak_v = std::max(peak_v, std::abs(v));
  j["peak_abs_v"] = peak_v;
  try {
    const RingingMetrics metrics = ringing_metrics(trace, sweep);
    j["ringing"]["onset_time_s"] = metrics.onset_time;
    j["ringing"]["zero_crossings"] = metrics.instantaneous_freqs.size() + 1;
    j["ringing"]["envelope_decay_rate_rad_s"] = metrics.envelope_decay_rate;
    j["ringing"]["envelope_decay_over_half_gamma"] =
        metrics.envelope_decay_rate / (sweep.gamma / 2.0);
  } catch (const domain_error&) {
    j["ringing"] = nullptr;  // sub-critical sweep
  }
  return j;
}

// ---- full report ---------------------------------------------------------

struct RunReport {
  json document;
  std::vector<std::string> manifest;  // file names relative to the output directory
};

// Computes the whole apparatus-reproduction bundle, then writes every
// artifact atomically.  Rerunning with the same config and seeds is
// byte-identical.
inline RunReport run_report(const ExperimentConfig& config,
                            const std::filesystem::path& outdir) {
  config.validate();
  const AtomSpecies species = config.species.to_species();
  const double temperature = config.thermal.temperature();

  RunReport report;
  json& doc = report.document;
  doc["schema_version"] = report_schema_version;
  doc["config"] = to_json(config);
  doc["derived"]["cavity"] = cavity_report(config);
  doc["derived"]["trap"] = trap_report(config);
  doc["derived"]["rir"] = rir_report(config);
  doc["derived"]["bloch"] = bloch_report(config);

  // Thermal block: ensemble moments (never raw samples) and TOF fits.
  {
    const TrapState state = trap_state_from_config(config);
    const Ensemble ensemble =
        sample_ensemble(static_cast<std::size_t>(config.thermal.sample_size), temperature,
                        state, species, config.thermal.rng_seed);
    json moments;
    const char* axes[3] = {"x", "y", "z"};
    for (int axis = 0; axis < 3; ++axis) {
      double vm = 0.0, vs = 0.0, xm = 0.0, xs = 0.0;
      const double n = static_cast<double>(ensemble.velocities.size());
      for (const auto& v : ensemble.velocities) vm += v[axis];
      for (const auto& x : ensemble.positions) xm += x[axis];
      vm /= n;
      xm /= n;
      for (const auto& v : ensemble.velocities) vs += (v[axis] - vm) * (v[axis] - vm);
      for (const auto& x : ensemble.positions) xs += (x[axis] - xm) * (x[axis] - xm);
      moments[axes[axis]] = {{"velocity_mean_m_s", vm},
                             {"velocity_var_m2_s2", vs / n},
                             {"position_mean_m", xm},
                             {"position_var_m2", xs / n}};
    }
    doc["derived"]["thermal"]["ensemble_moments"] = moments;
    doc["derived"]["thermal"]["thermal_velocity_m_s"] =
        thermal_velocity(temperature, species);
    doc["derived"]["thermal"]["depth_ratio"] = depth_ratio(temperature, state.depth);
    doc["derived"]["thermal"]["peak_density_m3"] =
        peak_density(config.thermal.atom_count, temperature, state, species);

    const TofSeries noiseless =
        synthetic_tof_series(temperature, 200e-6, species, 10, 20e-3, 0.0, 0);
    doc["derived"]["thermal"]["tof_fit_noiseless"] = tof_fit_report(noiseless, species);
    const TofSeries noisy = synthetic_tof_series(temperature, 200e-6, species, 10, 20e-3,
                                                 0.01, config.thermal.rng_seed + 1);
    doc["derived"]["thermal"]["tof_fit_noisy_1pct"] = tof_fit_report(noisy, species);
  }

  // RIR spectra, free and trapped, plus the fit round trip on the free one.
  const RirSpectrum free_spectrum =
      synthesize_spectrum_from_config(config, temperature, ProbeGeometry::free_atoms);
  const RirSpectrum trapped_spectrum =
      synthesize_spectrum_from_config(config, temperature, ProbeGeometry::trapped);
  doc["derived"]["rir"]["fit_round_trip"] = rir_fit_report(free_spectrum, config);

  // Inhomogeneously averaged sweep: pre-resonance response width against the
  // free-atom spectral width (the scan rate is kept well below critical for
  // the broadened line).
  {
    const RamanProbe probe = config.probe.to_probe();
    const double width = raman_q(probe).q * thermal_velocity(temperature, species);
    SweepConfig sweep = config.sweep.to_sweep();
    sweep.scan_rate = 0.06 * (width / two_pi) * (width / two_pi);
    sweep.delta_start = -4.0 * width;
    sweep.delta_end = 4.0 * width;
    sweep.output_samples = 2000;
    const BlochTrace averaged = inhomogeneous_average(
        temperature, probe, species, sweep,
        static_cast<std::size_t>(config.sweep.velocity_classes));
    double peak = 0.0;
    std::size_t ipk = 0;
    for (std::size_t i = 0; i < averaged.size(); ++i)
      if (averaged.v[i] > peak) {
        peak = averaged.v[i];
        ipk = i;
      }
    double d_lo = averaged.delta.front(), d_hi = averaged.delta.back();
    for (std::size_t i = 0; i + 1 <= ipk; ++i)
      if (averaged.v[i] < peak / 2.0 && averaged.v[i + 1] >= peak / 2.0) {
        const double f = (peak / 2.0 - averaged.v[i]) / (averaged.v[i + 1] - averaged.v[i]);
        d_lo = averaged.delta[i] + f * (averaged.delta[i + 1] - averaged.delta[i]);
        break;
      }
    for (std::size_t i = ipk; i + 1 < averaged.size(); ++i)
      if (averaged.v[i] >= peak / 2.0 && averaged.v[i + 1] < peak / 2.0) {
        const double f = (averaged.v[i] - peak / 2.0) / (averaged.v[i] - averaged.v[i + 1]);
        d_hi = averaged.delta[i] + f * (averaged.delta[i + 1] - averaged.delta[i]);
        break;
      }
    doc["derived"]["bloch"]["inhomogeneous_fwhm_rad_s"] = d_hi - d_lo;
    doc["derived"]["bloch"]["inhomogeneous_fwhm_over_spectral_width"] =
        (d_hi - d_lo) / width;
  }

  // Critical-rate bisection on a trimmed span to keep the report fast.
  {
    SweepConfig base = config.sweep.to_sweep();
    base.delta_start = -20.0 * base.gamma;
    base.delta_end = 20.0 * base.gamma;
    base.tolerance = 1e-7;
    base.output_samples = 2000;
    doc["derived"]["bloch"]["critical_rate_hz_per_s"] = critical_rate_scan(base, 0.1);
    doc["derived"]["bloch"]["critical_rate_threshold"] = 0.1;
  }

  // Emit artifacts.
  struct Artifact {
    std::string name;
    std::string content;
  };
  std::vector<Artifact> artifacts;
  artifacts.push_back({"cavity.csv", to_csv(cavity_csv(config))});
  artifacts.push_back({"trap.csv", to_csv(trap_csv(config))});
  artifacts.push_back({"rir_spectrum_free.csv", to_csv(rir_spectrum_csv(free_spectrum))});
  artifacts.push_back(
      {"rir_spectrum_trapped.csv", to_csv(rir_spectrum_csv(trapped_spectrum))});
  artifacts.push_back(
      {"bloch_sweep.csv", to_csv(bloch_trace_csv(integrate_sweep(config.sweep.to_sweep())))});
  artifacts.push_back({"modes_tem10.csv", to_csv(modes_csv(config, 1, 0, 41, 2.5))});

  for (const auto& artifact : artifacts) report.manifest.push_back(artifact.name);
  report.manifest.push_back("report.json");
  doc["files"] = report.manifest;

  for (const auto& artifact : artifacts) atomic_write(outdir / artifact.name, artifact.content);
  atomic_write(outdir / "report.json", doc.dump(2) + "\n");
  return report;
}

}  // namespace ringtrap
