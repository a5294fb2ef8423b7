#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ringtrap/constants.hpp"

using namespace ringtrap;
using Catch::Matchers::WithinRel;

TEST_CASE("physical constants are consistent") {
  PhysicalConstants constants;
  constants.validate();
  CHECK_THAT(constants.h, WithinRel(two_pi * constants.hbar, 1e-12));

  PhysicalConstants broken = constants;
  broken.kB = -1.0;
  CHECK_THROWS_AS(broken.validate(), domain_error);
}

TEST_CASE("rb85 species record") {
  const AtomSpecies rb = rb85();
  rb.validate();
  CHECK_THAT(rb.mass, WithinRel(1.4099936112e-25, 1e-9));
  CHECK(rb.d1_wavelength > rb.d2_wavelength);
  CHECK_THAT(rb.gamma, WithinRel(two_pi * 6.07e6, 1e-12));
}

TEST_CASE("wavenumber") {
  CHECK_THAT(wavenumber(799e-9), WithinRel(7.8638113982e6, 1e-9));
  CHECK_THAT(wavenumber(1.0), WithinRel(two_pi, 1e-15));
  CHECK_THAT(wavenumber(780.24e-9), WithinRel(8.0528879668e6, 1e-9));
  CHECK_THROWS_AS(wavenumber(0.0), domain_error);
  CHECK_THROWS_AS(wavenumber(-1e-9), domain_error);
}

TEST_CASE("wavenumber times wavelength is 2 pi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_lambda(std::log(1e-9), std::log(1e-3));
  for (int i = 0; i < 200; ++i) {
    const double lambda = std::exp(log_lambda(rng));
    CHECK_THAT(wavenumber(lambda) * lambda, WithinRel(two_pi, 1e-12));
  }
}

TEST_CASE("detuning_angular") {
  const double line = speed_of_light / 780.241e-9;
  CHECK_THAT(detuning_angular(line - 110e6, line), WithinRel(-two_pi * 110e6, 1e-9));
  CHECK(detuning_angular(line, line) == 0.0);
  CHECK_THAT(detuning_angular(speed_of_light / 799e-9, line),
             WithinRel(-5.6680635064e13, 1e-9));
  CHECK_THROWS_AS(detuning_angular(0.0, line), domain_error);

  // Antisymmetric under swapping arguments.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> freq(1e12, 1e15);
  for (int i = 0; i < 100; ++i) {
    const double a = freq(rng), b = freq(rng);
    CHECK(detuning_angular(a, b) == -detuning_angular(b, a));
  }
}

TEST_CASE("rabi_from_intensity") {
  const AtomSpecies rb = rb85();
  CHECK(rabi_from_intensity(0.0, rb) == 0.0);
  CHECK_THAT(rabi_from_intensity(2.0 * rb.i_sat, rb), WithinRel(rb.gamma, 1e-12));
  // 50 mW/cm^2 = 500 W/m^2.
  CHECK_THAT(rabi_from_intensity(500.0, rb), WithinRel(3.8691161627 * rb.gamma, 1e-9));
  CHECK_THROWS_AS(rabi_from_intensity(-1.0, rb), domain_error);
}

TEST_CASE("rabi scales as sqrt of intensity") {
  const AtomSpecies rb = rb85();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> intensity(1e-3, 1e6);
  for (int i = 0; i < 100; ++i) {
    const double value = intensity(rng);
    CHECK_THAT(rabi_from_intensity(4.0 * value, rb),
               WithinRel(2.0 * rabi_from_intensity(value, rb), 1e-12));
    CHECK(rabi_from_intensity(value * 1.1, rb) > rabi_from_intensity(value, rb));
  }
}
