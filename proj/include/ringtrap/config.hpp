// Experiment configuration: JSON schema with explicit units in key names,
// paper-apparatus defaults, strict validation (unknown keys rejected, field
// paths in every message).
//
// Blocks store values in file units; accessors convert to SI/angular on the
// way into the physics modules, so write -> load round-trips are exact.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ringtrap/bloch.hpp"
#include "ringtrap/cavity.hpp"
#include "ringtrap/constants.hpp"
#include "ringtrap/csv.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/rir.hpp"

namespace ringtrap {

using json = nlohmann::ordered_json;

struct SpeciesBlock {
  std::string label = "Rb85";
  double mass_amu = 84.9118;
  double d2_wavelength_nm = 780.241;
  double d1_wavelength_nm = 794.979;
  double gamma_2pi_mhz = 6.07;
  double i_sat_w_m2 = 16.7;

  bool operator==(const SpeciesBlock&) const = default;

  AtomSpecies to_species() const {
    AtomSpecies s;
    s.label = label;
    s.mass = mass_amu * atomic_mass_unit;
    s.d2_wavelength = d2_wavelength_nm * 1e-9;
    s.d1_wavelength = d1_wavelength_nm * 1e-9;
    s.gamma = two_pi * gamma_2pi_mhz * 1e6;
    s.i_sat = i_sat_w_m2;
    return s;
  }
};

struct PolarizationBlock {
  std::array<double, 3> transmissions_ppm{};
  double extra_loss_ppm = 0.0;

  bool operator==(const PolarizationBlock&) const = default;
};

struct CavityBlock {
  double round_trip_length_mm = 85.0;
  double waist_v_um = 129.0;
  double waist_h_um = 124.0;
  std::string polarization = "p";
  // extra_loss defaults reproduce the measured finesses (2500 and 170000).
  PolarizationBlock p_pol{{2200.0, 9.0, 9.0}, 295.274123};
  PolarizationBlock s_pol{{27.0, 2.0, 2.0}, 5.95991357};
  double input_power_mw = 7.183;  // inverted from ~10 W circulating; a config
                                  // default, not a measured value
  double mode_match = 1.0;
  double intensity_noise_fraction = 0.02;  // servo residual, carried as a fixed default

  bool operator==(const CavityBlock&) const = default;

  CavityGeometry to_geometry(const std::string& pol) const {
    const PolarizationBlock& block = pol == "s" ? s_pol : p_pol;
    CavityGeometry g;
    g.round_trip_length = round_trip_length_mm * 1e-3;
    g.waist_v = waist_v_um * 1e-6;
    g.waist_h = waist_h_um * 1e-6;
    for (int i = 0; i < 3; ++i) g.mirror_transmissions[i] = block.transmissions_ppm[i] * 1e-6;
    g.extra_loss = block.extra_loss_ppm * 1e-6;
    return g;
  }
  CavityGeometry to_geometry() const { return to_geometry(polarization); }
};

struct TrapBlock {
  double wavelength_nm = 799.0;
  double circulating_power_per_direction_w = 5.0;  // ~10 W total in the standing wave
  double cloud_axial_extent_mm = 4.0;

  bool operator==(const TrapBlock&) const = default;
};

struct ProbeBlock {
  double wavelength_nm = 780.241;
  double theta_deg = 13.1;
  double phi_deg = 3.0;
  double detuning_2pi_mhz = -110.0;
  double intensity_1_mw_cm2 = 50.0;
  double intensity_2_mw_cm2 = 50.0;

  bool operator==(const ProbeBlock&) const = default;

  RamanProbe to_probe() const {
    RamanProbe p;
    p.wavelength = wavelength_nm * 1e-9;
    p.theta = theta_deg * pi / 180.0;
    p.phi = phi_deg * pi / 180.0;
    p.detuning = two_pi * detuning_2pi_mhz * 1e6;
    p.intensity_1 = intensity_1_mw_cm2 * 10.0;  // 1 mW/cm^2 = 10 W/m^2
    p.intensity_2 = intensity_2_mw_cm2 * 10.0;
    return p;
  }
};

struct SweepBlock {
  double gamma_2pi_khz = 5.0;
  double rabi_over_gamma = 0.1;
  double scan_rate_khz_per_us = 2.1;
  double delta_start_2pi_khz = -300.0;
  double delta_end_2pi_khz = 300.0;
  double tolerance = 1e-8;
  double max_step_us = 0.0;  // 0 -> automatic
  bool fixed_step = false;
  std::uint64_t output_samples = 8000;
  std::uint64_t velocity_classes = 64;

  bool operator==(const SweepBlock&) const = default;

  SweepConfig to_sweep() const {
    SweepConfig c;
    c.gamma = two_pi * gamma_2pi_khz * 1e3;
    c.rabi = rabi_over_gamma * c.gamma;
    c.scan_rate = scan_rate_khz_per_us * 1e9;
    c.delta_start = two_pi * delta_start_2pi_khz * 1e3;
    c.delta_end = two_pi * delta_end_2pi_khz * 1e3;
    c.tolerance = tolerance;
    c.max_step = max_step_us * 1e-6;
    c.fixed_step = fixed_step;
    c.output_samples = static_cast<std::size_t>(output_samples);
    return c;
  }
};

struct ThermalBlock {
  double atom_count = 3e7;
  double temperature_uk = 100.0;
  std::uint64_t rng_seed = 85;
  std::uint64_t sample_size = 100000;

  bool operator==(const ThermalBlock&) const = default;

  double temperature() const { return temperature_uk * 1e-6; }
};

struct OutputBlock {
  std::string directory = "out";
  bool csv = true;
  bool svg = false;

  bool operator==(const OutputBlock&) const = default;
};

struct ExperimentConfig {
  SpeciesBlock species;
  CavityBlock cavity;
  TrapBlock trap;
  ProbeBlock probe;
  SweepBlock sweep;
  ThermalBlock thermal;
  OutputBlock output;

  bool operator==(const ExperimentConfig&) const = default;

  void validate() const;
};

namespace detail {

class BlockReader {
 public:
  BlockReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw config_error(path_ + ": expected a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const char* k : keys)
        if (key == k) known = true;
      if (!known) throw config_error(path_ + "." + key + ": unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& child(const char* key) const { return j_.at(key); }
  std::string child_path(const char* key) const { return path_ + "." + key; }

  void number(const char* key, double& target) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw config_error(child_path(key) + ": expected a number");
    target = v.get<double>();
  }
  void integer(const char* key, std::uint64_t& target) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw config_error(child_path(key) + ": expected an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
      throw config_error(child_path(key) + ": must be >= 0");
    target = v.get<std::uint64_t>();
  }
  void boolean(const char* key, bool& target) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw config_error(child_path(key) + ": expected a boolean");
    target = v.get<bool>();
  }
  void text(const char* key, std::string& target) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw config_error(child_path(key) + ": expected a string");
    target = v.get<std::string>();
  }
  void triple(const char* key, std::array<double, 3>& target) const {
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 3)
      throw config_error(child_path(key) + ": expected an array of 3 numbers");
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) throw config_error(child_path(key) + ": expected numbers");
      target[i] = v[i].get<double>();
    }
  }

 private:
  const json& j_;
  std::string path_;
};

inline void require(bool condition, const std::string& path, const char* message) {
  if (!condition) throw config_error(path + ": " + message);
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
  using detail::require;
  require(thermal.atom_count >= 0.0, "thermal.atom_count", "must be >= 0");
  require(thermal.temperature_uk > 0.0, "thermal.temperature_uk", "must be > 0");
  require(cavity.round_trip_length_mm > 0.0, "cavity.round_trip_length_mm", "must be > 0");
  require(cavity.waist_v_um > 0.0, "cavity.waist_v_um", "must be > 0");
  require(cavity.waist_h_um > 0.0, "cavity.waist_h_um", "must be > 0");
  require(cavity.polarization == "p" || cavity.polarization == "s", "cavity.polarization",
          "must be \"p\" or \"s\"");
  require(cavity.input_power_mw >= 0.0, "cavity.input_power_mw", "must be >= 0");
  require(cavity.mode_match >= 0.0 && cavity.mode_match <= 1.0, "cavity.mode_match",
          "must lie in [0, 1]");
  require(cavity.intensity_noise_fraction >= 0.0 && cavity.intensity_noise_fraction < 1.0,
          "cavity.intensity_noise_fraction", "must lie in [0, 1)");
  require(trap.wavelength_nm > 0.0, "trap.wavelength_nm", "must be > 0");
  require(trap.circulating_power_per_direction_w >= 0.0,
          "trap.circulating_power_per_direction_w", "must be >= 0");
  require(trap.cloud_axial_extent_mm >= 0.0, "trap.cloud_axial_extent_mm", "must be >= 0");
  require(sweep.velocity_classes >= 1, "sweep.velocity_classes", "must be >= 1");

  // Re-validate the physical invariants of every referenced type.
  auto rethrow = [](const char* block, auto&& fn) {
    try {
      fn();
    } catch (const domain_error& e) {
      throw config_error(std::string(block) + ": " + e.what());
    }
  };
  rethrow("species", [&] { species.to_species().validate(); });
  rethrow("cavity", [&] {
    cavity.to_geometry("p").validate();
    cavity.to_geometry("s").validate();
  });
  rethrow("probe", [&] { probe.to_probe().validate(); });
  rethrow("sweep", [&] { sweep.to_sweep().validate(); });
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  if (j.is_null()) return config;
  detail::BlockReader root(j, "config");
  root.allow({"species", "cavity", "trap", "probe", "sweep", "thermal", "output"});

  if (root.has("species")) {
    detail::BlockReader r(root.child("species"), "species");
    r.allow({"label", "mass_amu", "d2_wavelength_nm", "d1_wavelength_nm", "gamma_2pi_mhz",
             "i_sat_w_m2"});
    r.text("label", config.species.label);
    r.number("mass_amu", config.species.mass_amu);
    r.number("d2_wavelength_nm", config.species.d2_wavelength_nm);
    r.number("d1_wavelength_nm", config.species.d1_wavelength_nm);
    r.number("gamma_2pi_mhz", config.species.gamma_2pi_mhz);
    r.number("i_sat_w_m2", config.species.i_sat_w_m2);
  }
  if (root.has("cavity")) {
    detail::BlockReader r(root.child("cavity"), "cavity");
    r.allow({"round_trip_length_mm", "waist_v_um", "waist_h_um", "polarization", "p_pol",
             "s_pol", "input_power_mw", "mode_match", "intensity_noise_fraction"});
    r.number("round_trip_length_mm", config.cavity.round_trip_length_mm);
    r.number("waist_v_um", config.cavity.waist_v_um);
    r.number("waist_h_um", config.cavity.waist_h_um);
    r.text("polarization", config.cavity.polarization);
    for (const char* pol : {"p_pol", "s_pol"}) {
      if (!r.has(pol)) continue;
      detail::BlockReader rp(r.child(pol), r.child_path(pol));
      rp.allow({"transmissions_ppm", "extra_loss_ppm"});
      PolarizationBlock& block = pol[0] == 'p' ? config.cavity.p_pol : config.cavity.s_pol;
      rp.triple("transmissions_ppm", block.transmissions_ppm);
      rp.number("extra_loss_ppm", block.extra_loss_ppm);
    }
    r.number("input_power_mw", config.cavity.input_power_mw);
    r.number("mode_match", config.cavity.mode_match);
    r.number("intensity_noise_fraction", config.cavity.intensity_noise_fraction);
  }
  if (root.has("trap")) {
    detail::BlockReader r(root.child("trap"), "trap");
    r.allow({"wavelength_nm", "circulating_power_per_direction_w", "cloud_axial_extent_mm"});
    r.number("wavelength_nm", config.trap.wavelength_nm);
    r.number("circulating_power_per_direction_w",
             config.trap.circulating_power_per_direction_w);
    r.number("cloud_axial_extent_mm", config.trap.cloud_axial_extent_mm);
  }
  if (root.has("probe")) {
    detail::BlockReader r(root.child("probe"), "probe");
    r.allow({"wavelength_nm", "theta_deg", "phi_deg", "detuning_2pi_mhz",
             "intensity_1_mw_cm2", "intensity_2_mw_cm2"});
    r.number("wavelength_nm", config.probe.wavelength_nm);
    r.number("theta_deg", config.probe.theta_deg);
    r.number("phi_deg", config.probe.phi_deg);
    r.number("detuning_2pi_mhz", config.probe.detuning_2pi_mhz);
    r.number("intensity_1_mw_cm2", config.probe.intensity_1_mw_cm2);
    r.number("intensity_2_mw_cm2", config.probe.intensity_2_mw_cm2);
  }
  if (root.has("sweep")) {
    detail::BlockReader r(root.child("sweep"), "sweep");
    r.allow({"gamma_2pi_khz", "rabi_over_gamma", "scan_rate_khz_per_us",
             "delta_start_2pi_khz", "delta_end_2pi_khz", "tolerance", "max_step_us",
             "fixed_step", "output_samples", "velocity_classes"});
    r.number("gamma_2pi_khz", config.sweep.gamma_2pi_khz);
    r.number("rabi_over_gamma", config.sweep.rabi_over_gamma);
    r.number("scan_rate_khz_per_us", config.sweep.scan_rate_khz_per_us);
    r.number("delta_start_2pi_khz", config.sweep.delta_start_2pi_khz);
    r.number("delta_end_2pi_khz", config.sweep.delta_end_2pi_khz);
    r.number("tolerance", config.sweep.tolerance);
    r.number("max_step_us", config.sweep.max_step_us);
    r.boolean("fixed_step", config.sweep.fixed_step);
    r.integer("output_samples", config.sweep.output_samples);
    r.integer("velocity_classes", config.sweep.velocity_classes);
  }
  if (root.has("thermal")) {
    detail::BlockReader r(root.child("thermal"), "thermal");
    r.allow({"atom_count", "temperature_uk", "rng_seed", "sample_size"});
    r.number("atom_count", config.thermal.atom_count);
    r.number("temperature_uk", config.thermal.temperature_uk);
    r.integer("rng_seed", config.thermal.rng_seed);
    r.integer("sample_size", config.thermal.sample_size);
  }
  if (root.has("output")) {
    detail::BlockReader r(root.child("output"), "output");
    r.allow({"directory", "csv", "svg"});
    r.text("directory", config.output.directory);
    r.boolean("csv", config.output.csv);
    r.boolean("svg", config.output.svg);
  }

  config.validate();
  return config;
}

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["species"] = {{"label", c.species.label},
                  {"mass_amu", c.species.mass_amu},
                  {"d2_wavelength_nm", c.species.d2_wavelength_nm},
                  {"d1_wavelength_nm", c.species.d1_wavelength_nm},
                  {"gamma_2pi_mhz", c.species.gamma_2pi_mhz},
                  {"i_sat_w_m2", c.species.i_sat_w_m2}};
  j["cavity"] = {{"round_trip_length_mm", c.cavity.round_trip_length_mm},
                 {"waist_v_um", c.cavity.waist_v_um},
                 {"waist_h_um", c.cavity.waist_h_um},
                 {"polarization", c.cavity.polarization},
                 {"p_pol",
                  {{"transmissions_ppm", c.cavity.p_pol.transmissions_ppm},
                   {"extra_loss_ppm", c.cavity.p_pol.extra_loss_ppm}}},
                 {"s_pol",
                  {{"transmissions_ppm", c.cavity.s_pol.transmissions_ppm},
                   {"extra_loss_ppm", c.cavity.s_pol.extra_loss_ppm}}},
                 {"input_power_mw", c.cavity.input_power_mw},
                 {"mode_match", c.cavity.mode_match},
                 {"intensity_noise_fraction", c.cavity.intensity_noise_fraction}};
  j["trap"] = {{"wavelength_nm", c.trap.wavelength_nm},
               {"circulating_power_per_direction_w", c.trap.circulating_power_per_direction_w},
               {"cloud_axial_extent_mm", c.trap.cloud_axial_extent_mm}};
  j["probe"] = {{"wavelength_nm", c.probe.wavelength_nm},
                {"theta_deg", c.probe.theta_deg},
                {"phi_deg", c.probe.phi_deg},
                {"detuning_2pi_mhz", c.probe.detuning_2pi_mhz},
                {"intensity_1_mw_cm2", c.probe.intensity_1_mw_cm2},
                {"intensity_2_mw_cm2", c.probe.intensity_2_mw_cm2}};
  j["sweep"] = {{"gamma_2pi_khz", c.sweep.gamma_2pi_khz},
                {"rabi_over_gamma", c.sweep.rabi_over_gamma},
                {"scan_rate_khz_per_us", c.sweep.scan_rate_khz_per_us},
                {"delta_start_2pi_khz", c.sweep.delta_start_2pi_khz},
                {"delta_end_2pi_khz", c.sweep.delta_end_2pi_khz},
                {"tolerance", c.sweep.tolerance},
                {"max_step_us", c.sweep.max_step_us},
                {"fixed_step", c.sweep.fixed_step},
                {"output_samples", c.sweep.output_samples},
                {"velocity_classes", c.sweep.velocity_classes}};
  j["thermal"] = {{"atom_count", c.thermal.atom_count},
                  {"temperature_uk", c.thermal.temperature_uk},
                  {"rng_seed", c.thermal.rng_seed},
                  {"sample_size", c.thermal.sample_size}};
  j["output"] = {{"directory", c.output.directory},
                 {"csv", c.output.csv},
                 {"svg", c.output.svg}};
  return j;
}

// Loads a config file: empty file -> all defaults; partial file -> defaults
// applied underneath; unknown keys and invariant violations rejected with
// field paths.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw io_error("config file not found: " + path.string());
  const std::string text = read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return ExperimentConfig{};
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

inline void write_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  atomic_write(path, to_json(config).dump(2) + "\n");
}

}  // namespace ringtrap
