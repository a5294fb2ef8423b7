// ringtrap: desk-scale calculators and simulators for a ring-cavity
// standing-wave dipole trap probed by recoil-induced resonances.
//
// Exit codes: 0 success, 2 configuration error, 3 physics/domain error,
// 4 I/O error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ringtrap/config.hpp"
#include "ringtrap/report.hpp"

namespace fs = std::filesystem;
using namespace ringtrap;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool svg = false;
};

ExperimentConfig resolve_config(const GlobalOptions& opts) {
  ExperimentConfig config =
      opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  if (opts.seed_set) config.thermal.rng_seed = opts.seed;
  if (!opts.out_dir.empty()) {
    config.output.directory = opts.out_dir;
  } else if (const char* env = std::getenv("RINGTRAP_OUTPUT_DIR"); env && *env) {
    config.output.directory = env;
  }
  if (opts.svg) config.output.svg = true;
  return config;
}

void print_row(const char* label, const std::string& value) {
  std::printf("  %-36s %s\n", label, value.c_str());
}

std::string num(double x, const char* unit = "") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g%s%s", x, *unit ? " " : "", unit);
  return buf;
}

void write_table_csv(const ExperimentConfig& config, const fs::path& path,
                     const CsvTable& table) {
  if (!config.output.csv) return;
  atomic_write(path, to_csv(table));
  std::printf("wrote %s\n", path.string().c_str());
}

int run_cavity(const ExperimentConfig& config, const fs::path& outdir) {
  const json j = cavity_report(config);
  const json& active = j[config.cavity.polarization + "_pol"];
  std::printf("ring cavity (%s-polarization)\n", config.cavity.polarization.c_str());
  print_row("round-trip length", num(config.cavity.round_trip_length_mm, "mm"));
  print_row("free spectral range", num(active["fsr_hz"].get<double>() / 1e9, "GHz"));
  print_row("finesse", num(active["finesse"].get<double>()));
  print_row("linewidth FWHM", num(active["linewidth_fwhm_hz"].get<double>() / 1e6, "MHz"));
  print_row("kappa (intensity) / 2pi",
            num(active["kappa_intensity_rad_s"].get<double>() / two_pi / 1e6, "MHz"));
  print_row("kappa (field) / 2pi",
            num(active["kappa_field_rad_s"].get<double>() / two_pi / 1e6, "MHz"));
  print_row("buildup F/pi", num(active["buildup_over_pi"].get<double>()));
  print_row("mode volume", num(active["mode_volume_m3"].get<double>() * 1e9, "mm^3"));
  print_row("circulating power / direction",
            num(j["circulating_power_per_direction_w"].get<double>(), "W"));
  write_table_csv(config, outdir / "cavity.csv", cavity_csv(config));
  return 0;
}

int run_trap(const ExperimentConfig& config, const fs::path& outdir) {
  const json j = trap_report(config);
  std::printf("standing-wave dipole trap\n");
  print_row("wavelength", num(config.trap.wavelength_nm, "nm"));
  print_row("circulating power / direction",
            num(config.trap.circulating_power_per_direction_w, "W"));
  print_row("antinode intensity", num(j["antinode_intensity_w_m2"].get<double>(), "W/m^2"));
  print_row("depth", num(j["depth_mk"].get<double>(), "mK (kB)"));
  print_row("omega_ax / 2pi", num(j["omega_ax_2pi_hz"].get<double>() / 1e3, "kHz"));
  print_row("omega_rad_v / 2pi", num(j["omega_rad_v_2pi_hz"].get<double>(), "Hz"));
  print_row("omega_rad_h / 2pi", num(j["omega_rad_h_2pi_hz"].get<double>(), "Hz"));
  print_row("axial/radial ratio", num(j["axial_to_radial_ratio"].get<double>()));
  print_row("scattering rate", num(j["scattering_rate_per_s"].get<double>(), "1/s"));
  print_row("antinodes over cloud",
            std::to_string(j["antinodes_over_cloud"].get<std::int64_t>()));
  write_table_csv(config, outdir / "trap.csv", trap_csv(config));
  return 0;
}

int run_modes(const ExperimentConfig& config, const fs::path& outdir, int m, int n,
              int grid, double span) {
  const CsvTable table = modes_csv(config, m, n, grid, span);
  const fs::path csv_path =
      outdir / ("modes_m" + std::to_string(m) + "_n" + std::to_string(n) + ".csv");
  atomic_write(csv_path, to_csv(table));
  std::printf("wrote %s\n", csv_path.string().c_str());
  if (config.output.svg) {
    fs::path svg_path = csv_path;
    svg_path.replace_extension(".svg");
    atomic_write(svg_path,
                 render_heatmap(table, "x_m", "y_m", "intensity_w_m2",
                                "TEM_" + std::to_string(m) + std::to_string(n)));
    std::printf("wrote %s\n", svg_path.string().c_str());
  }
  return 0;
}

int run_tof(const ExperimentConfig& config, const fs::path& outdir,
            const std::string& input, double temperature, double sigma0, int points,
            double t_max, double noise) {
  const AtomSpecies species = config.species.to_species();
  TofSeries series;
  if (!input.empty()) {
    series = tof_series_from_csv(parse_csv(read_file(input)));
  } else {
    const double t_use = temperature > 0.0 ? temperature : config.thermal.temperature();
    series = synthetic_tof_series(t_use, sigma0, species, static_cast<std::size_t>(points),
                                  t_max, noise, config.thermal.rng_seed);
    const fs::path series_path = outdir / "tof_series.csv";
    atomic_write(series_path, to_csv(tof_csv(series)));
    std::printf("wrote %s\n", series_path.string().c_str());
  }
  const json fit = tof_fit_report(series, species);
  atomic_write(outdir / "tof_fit.json", fit.dump(2) + "\n");
  std::printf("%s\n", fit.dump(2).c_str());
  if (config.output.svg) {
    const fs::path csv_path = outdir / "tof_series.csv";
    if (fs::exists(csv_path))
      emit_plot(csv_path, {"t_s", {"width_m"}, "time-of-flight expansion"});
  }
  return 0;
}

int run_rir_spectrum(const ExperimentConfig& config, const fs::path& outdir,
                     double temperature, bool trapped, int points, double span_hz) {
  const double t_use = temperature > 0.0 ? temperature : config.thermal.temperature();
  const RirSpectrum spectrum = synthesize_spectrum_from_config(
      config, t_use, trapped ? ProbeGeometry::trapped : ProbeGeometry::free_atoms,
      static_cast<std::size_t>(points), span_hz * two_pi);
  const fs::path csv_path = outdir / "rir_spectrum.csv";
  atomic_write(csv_path, to_csv(rir_spectrum_csv(spectrum)));
  std::printf("wrote %s\n", csv_path.string().c_str());
  if (config.output.svg)
    emit_plot(csv_path, {"delta_omega_hz", {"signal"}, "recoil-induced resonance"});
  return 0;
}

int run_rir_fit(const ExperimentConfig& config, const fs::path& outdir,
                const std::string& input, bool trapped) {
  const RamanProbe probe = config.probe.to_probe();
  const double q =
      effective_q(probe, trapped ? ProbeGeometry::trapped : ProbeGeometry::free_atoms);
  const RirSpectrum spectrum = spectrum_from_csv(parse_csv(read_file(input)), q);
  const json fit = rir_fit_report(spectrum, config);
  atomic_write(outdir / "rir_fit.json", fit.dump(2) + "\n");
  std::printf("%s\n", fit.dump(2).c_str());
  return 0;
}

int run_bloch_sweep(ExperimentConfig config, const fs::path& outdir, bool fixed_step) {
  if (fixed_step) config.sweep.fixed_step = true;
  SweepConfig sweep = config.sweep.to_sweep();
  if (sweep.fixed_step && sweep.max_step <= 0.0)
    sweep.max_step = sweep.duration() / 20000.0;
  const BlochTrace trace = integrate_sweep(sweep);
  const fs::path csv_path = outdir / "bloch_sweep.csv";
  atomic_write(csv_path, to_csv(bloch_trace_csv(trace)));
  std::printf("wrote %s\n", csv_path.string().c_str());
  const json j = bloch_report(config);
  std::printf("%s\n", j.dump(2).c_str());
  if (config.output.svg)
    emit_plot(csv_path, {"delta_hz", {"im_rho12"}, "swept two-level response"});
  return 0;
}

int run_bloch_critical(const ExperimentConfig& config, const fs::path& outdir,
                       double threshold) {
  SweepConfig base = config.sweep.to_sweep();
  const double rate = critical_rate_scan(base, threshold);
  json j;
  j["critical_rate_hz_per_s"] = rate;
  j["threshold"] = threshold;
  atomic_write(outdir / "bloch_critical.json", j.dump(2) + "\n");
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

int run_full_report(const ExperimentConfig& config, const fs::path& outdir) {
  const RunReport report = run_report(config, outdir);
  for (const auto& name : report.manifest)
    std::printf("wrote %s\n", (outdir / name).string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ring-cavity dipole trap and recoil-induced resonance toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "experiment config JSON (defaults apply)");
  app.add_option("--out", opts.out_dir, "output directory (overrides config and env)");
  app.add_option("--seed", opts.seed, "override thermal.rng_seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  app.add_flag("--svg", opts.svg, "also render SVG plots");

  auto* cavity_cmd = app.add_subcommand("cavity", "cavity parameter table and CSV");
  auto* trap_cmd = app.add_subcommand("trap", "trap parameter table and CSV");

  auto* modes_cmd = app.add_subcommand("modes", "transverse-mode intensity grid");
  int mode_m = 1, mode_n = 0, mode_grid = 81;
  double mode_span = 2.5;
  modes_cmd->add_option("--m", mode_m, "horizontal mode index")->check(CLI::NonNegativeNumber);
  modes_cmd->add_option("--n", mode_n, "vertical mode index")->check(CLI::NonNegativeNumber);
  modes_cmd->add_option("--grid", mode_grid, "grid points per axis");
  modes_cmd->add_option("--span", mode_span, "half extent in waists");

  auto* tof_cmd = app.add_subcommand("tof", "time-of-flight fit (CSV input or synthetic)");
  std::string tof_input;
  double tof_temperature = 0.0, tof_sigma0 = 200e-6, tof_tmax = 20e-3, tof_noise = 0.0;
  int tof_points = 10;
  tof_cmd->add_option("--input", tof_input, "CSV with columns t_s,width_m");
  tof_cmd->add_option("--temperature", tof_temperature, "synthetic temperature (K)");
  tof_cmd->add_option("--sigma0", tof_sigma0, "synthetic initial width (m)");
  tof_cmd->add_option("--points", tof_points, "synthetic point count");
  tof_cmd->add_option("--tmax", tof_tmax, "synthetic last expansion time (s)");
  tof_cmd->add_option("--noise", tof_noise, "synthetic multiplicative width noise");

  auto* rir_spectrum_cmd =
      app.add_subcommand("rir-spectrum", "synthesize a RIR spectrum CSV");
  double rir_temperature = 0.0, rir_span_hz = 0.0;
  int rir_points = 801;
  bool rir_trapped = false;
  rir_spectrum_cmd->add_option("--temperature", rir_temperature, "cloud temperature (K)");
  rir_spectrum_cmd->add_option("--points", rir_points, "grid points");
  rir_spectrum_cmd->add_option("--span-hz", rir_span_hz, "half span (Hz, 0 = auto)");
  rir_spectrum_cmd->add_flag("--trapped", rir_trapped, "probe trapped atoms (q_r projection)");

  auto* rir_fit_cmd = app.add_subcommand("rir-fit", "fit temperature from a RIR CSV");
  std::string rir_fit_input;
  bool rir_fit_trapped = false;
  rir_fit_cmd->add_option("--input", rir_fit_input, "CSV with columns delta_omega_hz,signal")
      ->required();
  rir_fit_cmd->add_flag("--trapped", rir_fit_trapped, "spectrum was taken on trapped atoms");

  auto* bloch_sweep_cmd = app.add_subcommand("bloch-sweep", "swept two-level trace CSV");
  bool bloch_fixed = false;
  bloch_sweep_cmd->add_flag("--fixed-step", bloch_fixed, "fixed-step integration");

  auto* bloch_critical_cmd =
      app.add_subcommand("bloch-critical", "bisect the critical scan rate");
  double bloch_threshold = 0.1;
  bloch_critical_cmd->add_option("--threshold", bloch_threshold,
                                 "relative overshoot threshold");

  auto* report_cmd = app.add_subcommand("report", "full apparatus-reproduction report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig config = resolve_config(opts);
    const fs::path outdir = config.output.directory;
    if (cavity_cmd->parsed()) return run_cavity(config, outdir);
    if (trap_cmd->parsed()) return run_trap(config, outdir);
    if (modes_cmd->parsed())
      return run_modes(config, outdir, mode_m, mode_n, mode_grid, mode_span);
    if (tof_cmd->parsed())
      return run_tof(config, outdir, tof_input, tof_temperature, tof_sigma0, tof_points,
                     tof_tmax, tof_noise);
    if (rir_spectrum_cmd->parsed())
      return run_rir_spectrum(config, outdir, rir_temperature, rir_trapped, rir_points,
                              rir_span_hz);
    if (rir_fit_cmd->parsed())
      return run_rir_fit(config, outdir, rir_fit_input, rir_fit_trapped);
    if (bloch_sweep_cmd->parsed()) return run_bloch_sweep(config, outdir, bloch_fixed);
    if (bloch_critical_cmd->parsed())
      return run_bloch_critical(config, outdir, bloch_threshold);
    if (report_cmd->parsed()) return run_full_report(config, outdir);
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 3;
  } catch (const io_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
