#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ringtrap/cavity.hpp"

using namespace ringtrap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CavityGeometry paper_geometry_p(double extra_loss = 0.0) {
  CavityGeometry g;
  g.round_trip_length = 85e-3;
  g.waist_v = 129e-6;
  g.waist_h = 124e-6;
  g.mirror_transmissions = {2200e-6, 9e-6, 9e-6};
  g.extra_loss = extra_loss;
  return g;
}

CavityGeometry paper_geometry_s(double extra_loss = 0.0) {
  CavityGeometry g = paper_geometry_p(extra_loss);
  g.mirror_transmissions = {27e-6, 2e-6, 2e-6};
  return g;
}

// Independent oracle: brute-force phasor sum of the injected field over many
// round trips on resonance.
double airy_sum_ratio(const CavityGeometry& g, std::size_t round_trips) {
  const double amp = round_trip_amplitude(g);
  double sum = 0.0;
  double term = 1.0;
  for (std::size_t i = 0; i < round_trips; ++i) {
    sum += term;
    term *= amp;
  }
  return g.mirror_transmissions[0] * sum * sum;
}

}  // namespace

TEST_CASE("free spectral range") {
  CHECK_THAT(free_spectral_range(paper_geometry_p()), WithinRel(3.5269700941e9, 1e-10));
  CavityGeometry unit = paper_geometry_p();
  unit.round_trip_length = speed_of_light;  // one light-second of path
  CHECK_THAT(free_spectral_range(unit), WithinRel(1.0, 1e-12));
  CavityGeometry half = paper_geometry_p();
  half.round_trip_length = 42.5e-3;
  CHECK_THAT(free_spectral_range(half), WithinRel(2.0 * free_spectral_range(paper_geometry_p()), 1e-12));
}

TEST_CASE("finesse from losses") {
  CHECK_THAT(finesse_from_losses(paper_geometry_p()), WithinRel(2832.815738, 1e-8));
  CHECK_THAT(finesse_from_losses(paper_geometry_s()), WithinRel(202683.397006, 1e-8));
  CavityGeometry definitional = paper_geometry_p();
  definitional.mirror_transmissions = {0.9, 0.01, 0.01};
  definitional.extra_loss = two_pi - 0.92;  // total loss exactly 2 pi is unphysical (>1)
  CHECK_THROWS_AS(definitional.validate(), domain_error);
}

TEST_CASE("extra-loss inversion reproduces the measured finesses") {
  // p-pol, measured F = 2500.
  const double extra_p = loss_from_finesse(2500.0) - paper_geometry_p().total_loss();
  CHECK_THAT(extra_p, WithinRel(2.95274123e-4, 1e-6));
  CHECK_THAT(finesse_from_losses(paper_geometry_p(extra_p)), WithinRel(2500.0, 1e-9));
  // s-pol, measured F = 170000: the implied extra loss is small and positive.
  const double extra_s = loss_from_finesse(170000.0) - paper_geometry_s().total_loss();
  CHECK(extra_s > 0.0);
  CHECK(extra_s < 1e-5);
  CHECK_THAT(finesse_from_losses(paper_geometry_s(extra_s)), WithinRel(170000.0, 1e-9));
}

TEST_CASE("loss/finesse inversion identity") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> log_finesse(std::log(10.0), std::log(1e6));
  for (int i = 0; i < 200; ++i) {
    const double f = std::exp(log_finesse(rng));
    CHECK_THAT(two_pi / loss_from_finesse(f), WithinRel(f, 1e-9));
  }
}

TEST_CASE("linewidth and decay rates") {
  const auto lw_p = linewidth_and_decay(paper_geometry_p(), 2500.0);
  CHECK_THAT(lw_p.fwhm, WithinRel(1.41078804e6, 1e-8));     // 2 pi x 1.4 MHz decay rate
  CHECK_THAT(lw_p.kappa_intensity, WithinRel(two_pi * lw_p.fwhm, 1e-12));
  CHECK_THAT(lw_p.kappa_field, WithinRel(pi * lw_p.fwhm, 1e-12));
  const auto lw_s = linewidth_and_decay(paper_geometry_s(), 170000.0);
  CHECK_THAT(lw_s.fwhm, WithinRel(2.07468829e4, 1e-8));     // 2 pi x 21 kHz
  CavityGeometry unit = paper_geometry_p();
  const double fsr = free_spectral_range(unit);
  CHECK_THAT(linewidth_and_decay(unit, fsr).fwhm, WithinRel(1.0, 1e-12));
}

TEST_CASE("fwhm times finesse equals fsr over random geometries") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> length(1e-3, 10.0);
  std::uniform_real_distribution<double> log_t(std::log(1e-6), std::log(1e-2));
  for (int i = 0; i < 200; ++i) {
    CavityGeometry g = paper_geometry_p();
    g.round_trip_length = length(rng);
    g.mirror_transmissions = {std::exp(log_t(rng)), std::exp(log_t(rng)),
                              std::exp(log_t(rng))};
    g.extra_loss = std::exp(log_t(rng));
    const double finesse = finesse_from_losses(g);
    CHECK_THAT(linewidth_and_decay(g, finesse).fwhm * finesse,
               WithinRel(free_spectral_range(g), 1e-12));
  }
}

TEST_CASE("buildup factor") {
  CHECK_THAT(buildup_factor(2500.0), WithinRel(795.77471546, 1e-9));
  CHECK_THAT(buildup_factor(pi), WithinRel(1.0, 1e-12));
  CHECK_THAT(buildup_factor(170000.0), WithinRel(5.41126807e4, 1e-8));
}

TEST_CASE("circulating power") {
  const double extra_p = loss_from_finesse(2500.0) - paper_geometry_p().total_loss();
  const CavityGeometry g = paper_geometry_p(extra_p);
  CHECK(circulating_power(0.0, g, 1.0) == 0.0);

  // Airy-peak enhancement for the p-pol cavity tuned to F = 2500; the
  // shipped default input of 7.183 mW then circulates ~10 W per direction.
  const double ratio = circulating_power(1.0, g, 1.0);
  CHECK_THAT(ratio, WithinRel(1392.18490695, 1e-8));
  CHECK_THAT(circulating_power(7.183e-3, g, 1.0), WithinRel(10.0, 2e-3));

  // Impedance-matched structure check: T0 = sum of the remaining losses
  // gives circulating = P / T0 in the small-loss limit.
  CavityGeometry matched = paper_geometry_p();
  matched.mirror_transmissions = {20e-6, 9e-6, 9e-6};
  matched.extra_loss = 2e-6;
  CHECK_THAT(circulating_power(1.0, matched, 1.0), WithinRel(1.0 / 20e-6, 1e-4));

  CHECK(circulating_power(1.0, g, 0.5) == 0.5 * ratio);
  CHECK_THROWS_AS(circulating_power(-1.0, g, 1.0), domain_error);
  CHECK_THROWS_AS(circulating_power(1.0, g, 1.5), domain_error);
}

TEST_CASE("circulating power agrees with the round-trip phasor sum oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> log_t(std::log(1e-6), std::log(2e-3));
  for (int i = 0; i < 50; ++i) {
    CavityGeometry g = paper_geometry_p();
    g.mirror_transmissions = {std::exp(log_t(rng)), std::exp(log_t(rng)),
                              std::exp(log_t(rng))};
    g.extra_loss = std::exp(log_t(rng));
    if (g.total_loss() >= 1e-2) continue;
    const double oracle = airy_sum_ratio(g, 1'000'000);
    CHECK_THAT(circulating_power(1.0, g, 1.0), WithinRel(oracle, 1e-3));
  }
}

TEST_CASE("mode volume") {
  CHECK_THAT(mode_volume(paper_geometry_p()), WithinRel(1.06787447e-9, 1e-8));
  CavityGeometry unit = paper_geometry_p();
  unit.round_trip_length = 1.0;
  unit.waist_v = unit.waist_h = std::sqrt(4.0 / pi);
  CHECK_THAT(mode_volume(unit), WithinRel(1.0, 1e-12));
  CavityGeometry doubled = paper_geometry_p();
  doubled.round_trip_length *= 2.0;
  CHECK_THAT(mode_volume(doubled), WithinRel(2.0 * mode_volume(paper_geometry_p()), 1e-12));
}

TEST_CASE("characterize bundles the derived quantities consistently") {
  const double extra_p = loss_from_finesse(2500.0) - paper_geometry_p().total_loss();
  const CavityCharacter ch = characterize(paper_geometry_p(extra_p));
  CHECK_THAT(ch.linewidth_fwhm * ch.finesse, WithinRel(ch.fsr, 1e-9));
  CHECK_THAT(ch.buildup, WithinRel(ch.finesse / pi, 1e-9));
  CHECK_THAT(ch.intensity_decay_rate, WithinRel(2.0 * ch.field_decay_rate, 1e-12));
}

TEST_CASE("geometry validation") {
  CavityGeometry g = paper_geometry_p();
  g.waist_v = -1e-6;
  CHECK_THROWS_AS(g.validate(), domain_error);
  g = paper_geometry_p();
  g.mirror_transmissions[1] = 0.0;
  CHECK_THROWS_AS(g.validate(), domain_error);
  g = paper_geometry_p();
  g.extra_loss = 1.0;
  CHECK_THROWS_AS(g.validate(), domain_error);
}
