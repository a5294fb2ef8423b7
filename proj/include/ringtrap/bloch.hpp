// Swept two-level optical Bloch equations: adaptive integration of a linear
// detuning chirp, adiabatic steady-state reference, ringing analysis,
// critical-scan-rate search, and thermal (inhomogeneous) averaging.
//
// Equations, in the rotating frame of the chirped drive:
//   du/dt =  delta(t) v - (Gamma/2) u
//   dv/dt = -delta(t) u + Omega w - (Gamma/2) v
//   dw/dt = -Omega v - Gamma (w - 1)
// with delta(t) = delta_start + 2 pi * scan_rate * t.  The Bloch vector is
// (u, v, w), w = +1 in the ground state, Im rho_12 = v/2.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/gauss_hermite.hpp"
#include "ringtrap/ode.hpp"
#include "ringtrap/parallel.hpp"
#include "ringtrap/rir.hpp"

namespace ringtrap {

struct SweepConfig {
  double gamma = 0.0;             // rad/s, effective decay rate
  double rabi = 0.0;              // rad/s
  double scan_rate = 0.0;         // Hz/s, ordinary-frequency sweep rate (> 0)
  double delta_start = 0.0;       // rad/s
  double delta_end = 0.0;         // rad/s
  double max_step = 0.0;          // s, 0 -> automatic
  double tolerance = 1e-8;        // integrator error budget
  bool fixed_step = false;        // reproducible fixed-step trace (uses max_step)
  std::size_t output_samples = 4000;

  void validate() const {
    if (!(gamma > 0.0)) throw domain_error("SweepConfig: gamma must be > 0");
    if (rabi < 0.0) throw domain_error("SweepConfig: rabi must be >= 0");
    if (!(scan_rate > 0.0)) throw domain_error("SweepConfig: scan_rate must be > 0");
    if (!(delta_start < delta_end))
      throw domain_error("SweepConfig: delta_start must be below delta_end for an up-sweep");
    if (!(tolerance > 0.0 && tolerance <= 1e-3))
      throw domain_error("SweepConfig: tolerance must lie in (0, 1e-3]");
    if (fixed_step && !(max_step > 0.0))
      throw domain_error("SweepConfig: fixed_step requires max_step > 0");
    if (output_samples < 2) throw domain_error("SweepConfig: output_samples must be >= 2");
  }

  double angular_rate() const { return two_pi * scan_rate; }
  double duration() const { return (delta_end - delta_start) / angular_rate(); }
  double delta_at(double t) const { return delta_start + angular_rate() * t; }
};

struct BlochState {
  double u = 0.0, v = 0.0, w = 1.0;
};

// Stationary point of the equations at fixed detuning.
inline BlochState steady_state(double delta, double rabi, double gamma) {
  if (!(gamma > 0.0)) throw domain_error("steady_state: gamma must be > 0");
  const double v =
      (gamma * rabi / 2.0) / (delta * delta + gamma * gamma / 4.0 + rabi * rabi / 2.0);
  return {2.0 * delta * v / gamma, v, 1.0 - rabi * v / gamma};
}

struct BlochTrace {
  std::vector<double> t;      // s
  std::vector<double> delta;  // rad/s, detuning at each sample
  std::vector<double> u, v, w;

  std::size_t size() const { return t.size(); }
  double im_rho12(std::size_t i) const { return v[i] / 2.0; }
};

namespace detail {

inline OdeOptions sweep_ode_options(const SweepConfig& config) {
  OdeOptions options;
  options.tolerance = config.tolerance;
  options.fixed_step = config.fixed_step;
  if (config.max_step > 0.0) {
    options.max_step = config.max_step;
  } else {
    // Resolve the fastest rotation in the frame; the error control tightens
    // further where needed.
    const double omega_max = std::max({std::abs(config.delta_start),
                                       std::abs(config.delta_end), config.gamma, config.rabi});
    options.max_step = std::min(config.duration() / 50.0, 2.0 / omega_max);
  }
  return options;
}

template <class Rhs>
BlochTrace run_sweep(const SweepConfig& config, Rhs&& rhs, const BlochState& start) {
  const double t_end = config.duration();
  std::vector<double> sample_times(config.output_samples);
  for (std::size_t i = 0; i < config.output_samples; ++i)
    sample_times[i] =
        t_end * static_cast<double>(i) / static_cast<double>(config.output_samples - 1);

  const auto result = integrate_dopri5<3>(rhs, {start.u, start.v, start.w}, 0.0, t_end,
                                          sample_times, sweep_ode_options(config));

  BlochTrace trace;
  trace.t = result.sample_t;
  trace.delta.resize(trace.t.size());
  trace.u.resize(trace.t.size());
  trace.v.resize(trace.t.size());
  trace.w.resize(trace.t.size());
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    trace.delta[i] = config.delta_at(trace.t[i]);
    trace.u[i] = result.sample_y[i][0];
    trace.v[i] = result.sample_y[i][1];
    trace.w[i] = result.sample_y[i][2];
  }
  return trace;
}

}  // namespace detail

// Integrates the sweep from the steady state at delta_start.
inline BlochTrace integrate_sweep(const SweepConfig& config) {
  config.validate();
  const double gamma = config.gamma;
  const double rabi = config.rabi;
  auto rhs = [&config, gamma, rabi](double t, const std::array<double, 3>& y) {
    const double delta = config.delta_at(t);
    return std::array<double, 3>{delta * y[1] - 0.5 * gamma * y[0],
                                 -delta * y[0] + rabi * y[2] - 0.5 * gamma * y[1],
                                 -rabi * y[1] - gamma * (y[2] - 1.0)};
  };
  return detail::run_sweep(config, rhs, steady_state(config.delta_start, rabi, gamma));
}

struct RingingMetrics {
  double onset_time = 0.0;  // s, first post-resonance zero crossing of v
  // (time at interval midpoint, instantaneous angular frequency) pairs from
  // consecutive zero crossings of v.
  std::vector<std::pair<double, double>> instantaneous_freqs;
  double envelope_decay_rate = 0.0;  // rad/s, exponential fit to |v| peaks
};

// Zero-crossing analysis of v after the resonance crossing.
inline RingingMetrics ringing_metrics(const BlochTrace& trace, const SweepConfig& config) {
  config.validate();
  if (trace.size() < 8) throw domain_error("ringing_metrics: trace too short");
  const double t_res = -config.delta_start / config.angular_rate();

  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    if (trace.t[i] < t_res) continue;
    const double a = trace.v[i], b = trace.v[i + 1];
    if (a == 0.0 || a * b >= 0.0) continue;
    crossings.push_back(trace.t[i] + (trace.t[i + 1] - trace.t[i]) * a / (a - b));
  }
  if (crossings.size() < 4)
    throw domain_error("ringing_metrics: insufficient ringing, fewer than 4 "
                       "post-resonance zero crossings");

  RingingMetrics metrics;
  metrics.onset_time = crossings.front();
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
    const double dt = crossings[i + 1] - crossings[i];
    metrics.instantaneous_freqs.emplace_back((crossings[i] + crossings[i + 1]) / 2.0,
                                             pi / dt);
  }

  // Envelope: local maxima of |v| after the onset, log-linear fit.
  std::vector<std::pair<double, double>> peaks;
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    if (trace.t[i] <= metrics.onset_time) continue;
    const double a = std::abs(trace.v[i]);
    if (a > std::abs(trace.v[i - 1]) && a >= std::abs(trace.v[i + 1]) && a > 0.0)
      peaks.emplace_back(trace.t[i], a);
  }
  double peak_max = 0.0;
  for (const auto& p : peaks) peak_max = std::max(peak_max, p.second);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& [tp, ap] : peaks) {
    if (ap < 0.02 * peak_max) continue;
    const double x = tp, y = std::log(ap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 3) {
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom > 0.0) metrics.envelope_decay_rate = -(static_cast<double>(m) * sxy - sx * sy) / denom;
  }
  return metrics;
}

// Relative overshoot of |v| beyond the adiabatic (steady-state) curve,
// normalized to the adiabatic peak.
inline double sweep_overshoot(const SweepConfig& config) {
  const BlochTrace trace = integrate_sweep(config);
  double vss_max = 0.0;
  double excess = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double vss = std::abs(steady_state(trace.delta[i], config.rabi, config.gamma).v);
    vss_max = std::max(vss_max, vss);
    excess = std::max(excess, std::abs(trace.v[i]) - vss);
  }
  return excess / vss_max;
}

// Bisection for the smallest scan rate (Hz/s) whose overshoot exceeds the
// threshold.  Deterministic for a fixed config tolerance.
inline double critical_rate_scan(const SweepConfig& config_base, double threshold) {
  config_base.validate();
  if (!(threshold > 0.0)) throw domain_error("critical_rate_scan: threshold must be > 0");
  if (!std::isfinite(threshold))
    throw domain_error("critical_rate_scan: threshold out of reachable bracket");

  const double linewidth_hz = config_base.gamma / two_pi;
  auto overshoot_at = [&](double rate) {
    SweepConfig config = config_base;
    config.scan_rate = rate;
    return sweep_overshoot(config);
  };

  double lo = 0.01 * linewidth_hz * linewidth_hz;
  double o_lo = overshoot_at(lo);
  for (int k = 0; k < 4 && o_lo >= threshold; ++k) {
    lo /= 8.0;
    o_lo = overshoot_at(lo);
  }
  if (o_lo >= threshold)
    throw domain_error("critical_rate_scan: lower bracket already exceeds threshold");

  double hi = lo;
  double o_hi = o_lo;
  int doublings = 0;
  while (o_hi < threshold) {
    if (++doublings > 32)
      throw domain_error("critical_rate_scan: threshold unreachable in search bracket");
    hi *= 2.0;
    o_hi = overshoot_at(hi);
  }

  while (hi / lo > 1.0 + 1e-3) {
    const double mid = std::sqrt(lo * hi);
    if (overshoot_at(mid) >= threshold)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Averages sweeps over n velocity classes with detuning offsets q v_z,
// Gauss-Hermite weighted on the Maxwell-Boltzmann distribution.  Classes
// integrate independently (concurrently); the reduction is a fixed-weight
// sum in index order.
inline BlochTrace inhomogeneous_average(double temperature, const RamanProbe& probe,
                                        const AtomSpecies& species, const SweepConfig& sweep,
                                        std::size_t n_classes) {
  sweep.validate();
  if (n_classes < 1) throw domain_error("inhomogeneous_average: n_classes must be >= 1");
  if (!(temperature > 0.0))
    throw domain_error("inhomogeneous_average: temperature must be > 0");

  const double q = raman_q(probe).q;
  const double sigma_v = thermal_velocity(temperature, species);
  const GaussHermiteRule rule = gauss_hermite(n_classes);

  std::vector<BlochTrace> traces(n_classes);
  detail::parallel_for(
      n_classes,
      [&](std::size_t i) {
        const double v_class = std::sqrt(2.0) * sigma_v * rule.nodes[i];
        SweepConfig shifted = sweep;
        shifted.delta_start -= q * v_class;
        shifted.delta_end -= q * v_class;
        traces[i] = integrate_sweep(shifted);
      },
      1);

  BlochTrace average;
  average.t = traces.front().t;
  average.delta.resize(average.t.size());
  for (std::size_t j = 0; j < average.t.size(); ++j)
    average.delta[j] = sweep.delta_at(average.t[j]);
  average.u.assign(average.t.size(), 0.0);
  average.v.assign(average.t.size(), 0.0);
  average.w.assign(average.t.size(), 0.0);
  const double norm = 1.0 / std::sqrt(pi);
  for (std::size_t i = 0; i < n_classes; ++i) {
    const double weight = rule.weights[i] * norm;
    for (std::size_t j = 0; j < average.t.size(); ++j) {
      average.u[j] += weight * traces[i].u[j];
      average.v[j] += weight * traces[i].v[j];
      average.w[j] += weight * traces[i].w[j];
    }
  }
  return average;
}

}  // namespace ringtrap
