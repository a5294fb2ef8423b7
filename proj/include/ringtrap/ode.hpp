// Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4)) with
// continuous (dense) output, plus a fixed-step mode for reproducible traces.
//
// Error control is budgeted per unit of integration time: a step of size h
// is accepted when its local error estimate stays below tol * h / span, so
// the accumulated error over the whole integration is of order tol.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ringtrap/errors.hpp"

namespace ringtrap {

struct OdeOptions {
  double tolerance = 1e-8;   // global error budget over the span
  double max_step = 0.0;     // 0 -> span / 50
  double initial_step = 0.0; // 0 -> auto
  bool fixed_step = false;   // integrate with h = max_step, no error control
  bool record_steps = false; // keep every accepted step in the result
  std::size_t max_steps = 50'000'000;
};

template <std::size_t N>
struct OdeResult {
  std::vector<double> sample_t;
  std::vector<std::array<double, N>> sample_y;
  std::vector<double> step_t;  // filled when record_steps
  std::vector<std::array<double, N>> step_y;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5, dp_c3 = 3.0 / 10, dp_c4 = 4.0 / 5, dp_c5 = 8.0 / 9;
inline constexpr double dp_a21 = 1.0 / 5;
inline constexpr double dp_a31 = 3.0 / 40, dp_a32 = 9.0 / 40;
inline constexpr double dp_a41 = 44.0 / 45, dp_a42 = -56.0 / 15, dp_a43 = 32.0 / 9;
inline constexpr double dp_a51 = 19372.0 / 6561, dp_a52 = -25360.0 / 2187,
                        dp_a53 = 64448.0 / 6561, dp_a54 = -212.0 / 729;
inline constexpr double dp_a61 = 9017.0 / 3168, dp_a62 = -355.0 / 33,
                        dp_a63 = 46732.0 / 5247, dp_a64 = 49.0 / 176,
                        dp_a65 = -5103.0 / 18656;
inline constexpr double dp_b1 = 35.0 / 384, dp_b3 = 500.0 / 1113, dp_b4 = 125.0 / 192,
                        dp_b5 = -2187.0 / 6784, dp_b6 = 11.0 / 84;
// b - bhat, for the embedded 4th-order error estimate.
inline constexpr double dp_e1 = 71.0 / 57600, dp_e3 = -71.0 / 16695, dp_e4 = 71.0 / 1920,
                        dp_e5 = -17253.0 / 339200, dp_e6 = 22.0 / 525, dp_e7 = -1.0 / 40;
// Dense-output coefficients.
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0,
                        dp_d3 = 87487479700.0 / 32700410799.0,
                        dp_d4 = -10690763975.0 / 1880347072.0,
                        dp_d5 = 701980252875.0 / 199316789632.0,
                        dp_d6 = -1453857185.0 / 822651844.0,
                        dp_d7 = 69997945.0 / 29380423.0;

}  // namespace detail

// One accepted step's continuous extension over [t, t+h].
template <std::size_t N>
struct DenseSegment {
  double t = 0.0, h = 0.0;
  std::array<double, N> r1{}, r2{}, r3{}, r4{}, r5{};

  std::array<double, N> eval(double time) const {
    const double theta = (time - t) / h;
    const double theta1 = 1.0 - theta;
    std::array<double, N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
    return y;
  }
};

// Integrates dy/dt = f(t, y) from t0 to t1 (t1 > t0), sampling the dense
// solution at the given non-decreasing times within [t0, t1].
template <std::size_t N, class F>
OdeResult<N> integrate_dopri5(F&& f, std::array<double, N> y, double t0, double t1,
                              const std::vector<double>& sample_times,
                              const OdeOptions& options = {}) {
  using namespace detail;

  if (!(t1 > t0)) throw domain_error("integrate_dopri5: require t1 > t0");
  const double span = t1 - t0;
  const double max_step = options.max_step > 0.0 ? options.max_step : span / 50.0;
  if (options.fixed_step && !(options.max_step > 0.0))
    throw domain_error("integrate_dopri5: fixed_step requires max_step > 0");
  if (!(options.tolerance > 0.0))
    throw domain_error("integrate_dopri5: tolerance must be > 0");

  OdeResult<N> result;
  result.sample_t = sample_times;
  result.sample_y.reserve(sample_times.size());

  double t = t0;
  std::array<double, N> k1 = f(t, y);
  std::array<double, N> k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};

  double h_next = options.fixed_step
                      ? max_step
                      : (options.initial_step > 0.0 ? options.initial_step
                                                    : std::min(max_step, span / 1000.0));
  const double h_min =
      std::max(span * 1e-14, 16.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(t0), std::abs(t1)));

  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    result.sample_y.push_back(y);
    ++next_sample;
  }
  if (options.record_steps) {
    result.step_t.push_back(t);
    result.step_y.push_back(y);
  }

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > options.max_steps)
      throw domain_error("integrate_dopri5: step budget exhausted at t = " +
                         std::to_string(t));

    const double h = std::min({h_next, max_step, t1 - t});
    if (h < h_min && t + h < t1)
      throw domain_error("integrate_dopri5: step size underflow at t = " + std::to_string(t));

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * dp_a21 * k1[i];
    k2 = f(t + dp_c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp_a31 * k1[i] + dp_a32 * k2[i]);
    k3 = f(t + dp_c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
    k4 = f(t + dp_c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] + dp_a54 * k4[i]);
    k5 = f(t + dp_c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                            dp_a64 * k4[i] + dp_a65 * k5[i]);
    k6 = f(t + h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (dp_b1 * k1[i] + dp_b3 * k3[i] + dp_b4 * k4[i] + dp_b5 * k5[i] +
                            dp_b6 * k6[i]);
    k7 = f(t + h, ynew);  // FSAL

    if (!options.fixed_step) {
      double err_sq = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] + dp_e5 * k5[i] +
                              dp_e6 * k6[i] + dp_e7 * k7[i]);
        const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(ynew[i]));
        err_sq += (e / scale) * (e / scale);
      }
      const double err = std::sqrt(err_sq / static_cast<double>(N));
      const double target = options.tolerance * h / span;
      const double ratio = err > 0.0 ? err / target : 1e-10;
      // err ~ h^5 against a target ~ h: controller order 4.
      double factor = 0.9 * std::pow(ratio, -0.25);
      factor = std::clamp(factor, 0.2, 5.0);
      h_next = h * factor;
      if (ratio > 1.0) {
        if (h_next < h_min)
          throw domain_error("integrate_dopri5: step size underflow at t = " +
                             std::to_string(t));
        ++result.rejected;
        continue;
      }
    }

    DenseSegment<N> seg;
    seg.t = t;
    seg.h = h;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      seg.r1[i] = y[i];
      seg.r2[i] = ydiff;
      seg.r3[i] = bspl;
      seg.r4[i] = ydiff - h * k7[i] - bspl;
      seg.r5[i] = h * (dp_d1 * k1[i] + dp_d3 * k3[i] + dp_d4 * k4[i] + dp_d5 * k5[i] +
                       dp_d6 * k6[i] + dp_d7 * k7[i]);
    }

    t += h;
    y = ynew;
    k1 = k7;
    ++result.accepted;

    while (next_sample < sample_times.size() &&
           (sample_times[next_sample] <= t || t >= t1)) {
      result.sample_y.push_back(seg.eval(std::min(sample_times[next_sample], t)));
      ++next_sample;
    }
    if (options.record_steps) {
      result.step_t.push_back(t);
      result.step_y.push_back(y);
    }
  }

  while (next_sample < sample_times.size()) {
    result.sample_y.push_back(y);
    ++next_sample;
  }
  return result;
}

}  // namespace ringtrap
