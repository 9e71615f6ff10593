#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "wpt/coil_model.hpp"

using namespace wpt;
using doctest::Approx;

TEST_SUITE("coil_model") {
  TEST_CASE("fill factor") {
    CHECK(fill_factor(test::transmitter()) == Approx(35.2 / 55.2).epsilon(1e-12));
    CHECK(fill_factor(test::transmitter()) == Approx(0.6377).epsilon(1e-4));

    SpiralCoild c = test::transmitter();
    c.outer_diameter = 3 * c.inner_diameter;
    CHECK(fill_factor(c) == Approx(0.5).epsilon(1e-15));

    c.outer_diameter = c.inner_diameter;
    CHECK_THROWS_AS(fill_factor(c), InvalidGeometry);
    c.outer_diameter = 0.5 * c.inner_diameter;
    CHECK_THROWS_AS(fill_factor(c), InvalidGeometry);
  }

  TEST_CASE("average diameter") {
    CHECK(average_diameter(test::transmitter()) == Approx(27.6e-3).epsilon(1e-12));
    CHECK(average_diameter(test::receiver()) == Approx(23.2e-3).epsilon(1e-12));
    SpiralCoild c = test::transmitter();
    c.outer_diameter = c.inner_diameter = 12e-3;
    CHECK(average_diameter(c) == 12e-3);
  }

  TEST_CASE("self inductance of the reference coils") {
    const double Lt = self_inductance(test::transmitter());
    const double Lr = self_inductance(test::receiver());
    CHECK(std::abs(Lt - 1.589e-6) / 1.589e-6 < 2e-3);
    CHECK(std::abs(Lr - 0.802e-6) / 0.802e-6 < 2e-3);
  }

  TEST_CASE("self inductance scales as turns squared at fixed diameters") {
    SpiralCoild one = test::transmitter();
    one.turns = 1;
    const double L1 = self_inductance(one);
    for (int n = 2; n <= 12; ++n) {
      SpiralCoild c = one;
      c.turns = n;
      CHECK(self_inductance(c) / L1 == Approx(double(n * n)).epsilon(1e-12));
    }
  }

  TEST_CASE("self inductance increases with turns along the consistent family") {
    double previous = 0;
    for (int n = 1; n <= 12; ++n) {
      const SpiralCoild c = test::consistent_coil(10e-3, n, 0.8e-3, 1.4e-3);
      const double L = self_inductance(c);
      CHECK(L > previous);
      previous = L;
    }
  }

  TEST_CASE("inductance is unit independent") {
    SpiralCoild mm = test::transmitter();
    mm.inner_diameter *= 1e3;
    mm.outer_diameter *= 1e3;
    // H/mm
    const double mu0_per_mm = 4 * pi<double> * 1e-10;
    CHECK(self_inductance(mm, mu0_per_mm) == Approx(self_inductance(test::transmitter())).epsilon(1e-13));
  }

  TEST_CASE("single precision instantiation") {
    const SpiralCoil<float> c{10e-3f, 45.2e-3f, 8, 0.8e-3f, 1.4e-3f};
    CHECK(self_inductance(c) == Approx(1.589e-6).epsilon(2e-3));
  }

  TEST_CASE("geometric consistency") {
    CHECK(geometric_mismatch(test::transmitter()) < 1e-12);
    CHECK(geometric_mismatch(test::receiver()) < 1e-12);
    CHECK(is_geometrically_consistent(test::transmitter()));
    SpiralCoild c = test::transmitter();
    c.outer_diameter = 50e-3;
    CHECK_FALSE(is_geometrically_consistent(c));
    CHECK_NOTHROW(validate(c));  // a warning, not an error
  }

  TEST_CASE("validate lists every violated invariant") {
    SpiralCoild c{-1e-3, -2e-3, 0, 0, -1, 0, 0};
    try {
      validate(c);
      FAIL("expected InvalidGeometry");
    } catch (const InvalidGeometry& e) {
      const std::string what = e.what();
      CHECK(what.find("inner_diameter") != std::string::npos);
      CHECK(what.find("turns") != std::string::npos);
      CHECK(what.find("trace_width") != std::string::npos);
      CHECK(what.find("turn_spacing") != std::string::npos);
      CHECK(what.find("trace_thickness") != std::string::npos);
    }
  }

  TEST_CASE("filament decomposition") {
    const auto set = to_filaments(test::transmitter(), 1);
    REQUIRE(set.size() == 8);
    CHECK(set.current_weight == 1.0);
    for (int i = 0; i < 8; ++i) {
      CHECK(set.filaments[i].radius == Approx((6.1 + 2.2 * i) * 1e-3).epsilon(1e-12));
      CHECK(set.filaments[i].axial_position == 0.0);
    }
    CHECK(set.filaments.back().radius == Approx(21.5e-3).epsilon(1e-12));

    SpiralCoild single = test::transmitter();
    single.turns = 1;
    CHECK(to_filaments(single, 1).size() == 1);

    const auto fine = to_filaments(test::receiver(), 4);
    REQUIRE(fine.size() == 24);
    CHECK(fine.current_weight == 0.25);
    for (std::size_t i = 1; i < fine.size(); ++i) CHECK(fine.filaments[i].radius > fine.filaments[i - 1].radius);

    // Strips of one turn stay within that turn's trace.
    const double centre = 5e-3 + 0.5 * 2.2e-3;
    for (int j = 0; j < 4; ++j) CHECK(std::abs(fine.filaments[j].radius - centre) < 0.4e-3);

    CHECK_THROWS_AS(to_filaments(test::receiver(), 0), DomainError);
  }

  TEST_CASE("conductor length") {
    SpiralCoild single = test::transmitter();
    single.turns = 1;
    const double d = 2 * to_filaments(single).filaments[0].radius;
    CHECK(conductor_length(single) == Approx(pi<double> * d).epsilon(1e-14));
    CHECK(conductor_length(test::transmitter()) == Approx(pi<double> * 8 * 27.6e-3).epsilon(1e-12));
    CHECK(conductor_length(test::transmitter()) == Approx(0.6936).epsilon(1e-4));

    // Sum of circumferences does not depend on the order filaments are visited.
    auto f = to_filaments(test::transmitter()).filaments;
    std::mt19937 rng(7);
    std::shuffle(f.begin(), f.end(), rng);
    double sum = 0;
    for (const auto& x : f) sum += 2 * pi<double> * x.radius;
    CHECK(sum == Approx(conductor_length(test::transmitter())).epsilon(1e-14));
  }

  TEST_CASE("series resistance") {
    const SpiralCoild tx = test::transmitter();
    // 1.68e-8 * 0.693664 / (0.8e-3 * 35e-6)
    const double r_dc = 1.68e-8 * (pi<double> * 8 * 27.6e-3) / (0.8e-3 * 35e-6);
    CHECK(series_resistance(tx, 0.0) == Approx(r_dc).epsilon(1e-12));
    CHECK(series_resistance(tx, 0.0) == Approx(0.416).epsilon(1e-3));

    CHECK(series_resistance(tx, 1.0) == Approx(r_dc).epsilon(1e-12));
    CHECK(series_resistance(tx, 1e3) == Approx(r_dc).epsilon(1e-12));

    SpiralCoild doubled = tx;
    doubled.resistivity *= 2;
    CHECK(series_resistance(doubled, 0.0) == Approx(2 * r_dc).epsilon(1e-14));

    double previous = r_dc;
    for (double f : {1e5, 1e6, 1e7, 3e7, 1e8, 1e9}) {
      const double r = series_resistance(tx, f);
      CHECK(r >= previous);
      previous = r;
    }
    // Above ~14 MHz the skin layers no longer cover 35 um of copper.
    const double delta = std::sqrt(1.68e-8 / (pi<double> * 1e8 * mu0<double>));
    CHECK(series_resistance(tx, 1e8) == Approx(r_dc * 35e-6 / (2 * delta)).epsilon(1e-12));

    CHECK_THROWS_AS(series_resistance(tx, -1.0), DomainError);
    SpiralCoild flat = tx;
    flat.trace_thickness = 0;
    CHECK_THROWS_AS(series_resistance(flat, 0.0), InvalidGeometry);
  }
}
