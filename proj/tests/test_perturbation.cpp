#include <doctest.h>

#include <cmath>
#include <random>

#include "mwsense/perturbation.hpp"

using namespace mwsense;

namespace {

Vec3c unit_x() { return {Complex{1.0}, Complex{0.0}, Complex{0.0}}; }

FieldGrid one_cell_grid() {
    FieldGrid g;
    g.cell_volume_m3 = 1e-9;
    g.e0 = {unit_x()};
    g.e1 = {unit_x()};
    g.delta_eps_f_m = {kVacuumPermittivity};
    return g;
}

FieldGrid random_grid(std::mt19937_64& rng, std::size_t cells) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto vec = [&] {
        return Vec3c{Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)},
                     Complex{u(rng), u(rng)}};
    };
    FieldGrid g;
    g.cell_volume_m3 = 2.5e-10;
    for (std::size_t i = 0; i < cells; ++i) {
        g.e0.push_back(vec());
        g.e1.push_back(vec());
        g.h0.push_back(vec());
        g.h1.push_back(vec());
        g.delta_eps_f_m.push_back(std::fabs(u(rng)) * kVacuumPermittivity);
        g.delta_mu_h_m.push_back(std::fabs(u(rng)) * kVacuumPermeability);
    }
    return g;
}

}  // namespace

TEST_CASE("no perturbation, no shift") {
    std::mt19937_64 rng(11);
    FieldGrid g = random_grid(rng, 16);
    std::fill(g.delta_eps_f_m.begin(), g.delta_eps_f_m.end(), 0.0);
    std::fill(g.delta_mu_h_m.begin(), g.delta_mu_h_m.end(), 0.0);
    CHECK(frequency_shift_full(g) == 0.0);
    CHECK(frequency_shift_electric(g) == 0.0);
}

TEST_CASE("one-cell unit field with delta_eps = eps0 shifts by exactly -1") {
    const FieldGrid g = one_cell_grid();
    CHECK(frequency_shift_full(g) == -1.0);
    CHECK(frequency_shift_electric(g) == -1.0);
}

TEST_CASE("numerator linearity in the perturbation") {
    std::mt19937_64 rng(13);
    const FieldGrid base = random_grid(rng, 24);
    const double full0 = frequency_shift_full(base);
    const double elec0 = frequency_shift_electric(base);
    for (double alpha : {0.5, 2.0, 10.0}) {
        FieldGrid g = base;
        for (double& d : g.delta_eps_f_m) d *= alpha;
        for (double& d : g.delta_mu_h_m) d *= alpha;
        CHECK(std::fabs(frequency_shift_full(g) - alpha * full0) <= 1e-12 * std::fabs(full0));
        FieldGrid ge = base;
        for (double& d : ge.delta_eps_f_m) d *= alpha;
        CHECK(std::fabs(frequency_shift_electric(ge) - alpha * elec0) <=
              1e-12 * std::fabs(elec0));
    }
}

TEST_CASE("uniform relative perturbation c shifts by -c") {
    FieldGrid g;
    g.cell_volume_m3 = 1e-8;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double c = 0.37;
    for (int i = 0; i < 40; ++i) {
        const Vec3c e{Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)},
                      Complex{u(rng), u(rng)}};
        g.e0.push_back(e);
        g.e1.push_back(e);
        g.delta_eps_f_m.push_back(c * kVacuumPermittivity);
    }
    CHECK(frequency_shift_electric(g) == doctest::Approx(-c).epsilon(1e-12));

    // power-of-two factor cancels exactly cell by cell
    for (double& d : g.delta_eps_f_m) d = 2.0 * kVacuumPermittivity;
    CHECK(frequency_shift_electric(g) == -2.0);
}

TEST_CASE("halving the cell volume while doubling the cells changes nothing") {
    std::mt19937_64 rng(19);
    const FieldGrid base = random_grid(rng, 20);
    FieldGrid split;
    split.cell_volume_m3 = base.cell_volume_m3 / 2.0;
    for (std::size_t i = 0; i < base.cells(); ++i) {
        for (int rep = 0; rep < 2; ++rep) {
            split.e0.push_back(base.e0[i]);
            split.e1.push_back(base.e1[i]);
            split.h0.push_back(base.h0[i]);
            split.h1.push_back(base.h1[i]);
            split.delta_eps_f_m.push_back(base.delta_eps_f_m[i]);
            split.delta_mu_h_m.push_back(base.delta_mu_h_m[i]);
        }
    }
    // subdivision replicates values, so the ratio is preserved to rounding
    CHECK(std::fabs(frequency_shift_full(split) - frequency_shift_full(base)) < 1e-12);
    CHECK(std::fabs(frequency_shift_electric(split) - frequency_shift_electric(base)) < 1e-12);
}

TEST_CASE("electric form equals full form when magnetic inputs vanish") {
    std::mt19937_64 rng(23);
    FieldGrid g = random_grid(rng, 12);
    g.h0.clear();
    g.h1.clear();
    g.delta_mu_h_m.clear();
    CHECK(frequency_shift_full(g) == frequency_shift_electric(g));
}

TEST_CASE("aligned positive permittivity perturbation lowers the frequency") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        FieldGrid g = random_grid(rng, 10);
        g.e1 = g.e0;  // aligned
        g.h0.clear();
        g.h1.clear();
        g.delta_mu_h_m.clear();
        CHECK(frequency_shift_electric(g) <= 0.0);
        CHECK(frequency_shift_full(g) <= 0.0);
    }
}

TEST_CASE("validation errors") {
    SUBCASE("zero denominator") {
        FieldGrid g = one_cell_grid();
        g.e0 = {Vec3c{}};  // no stored electric energy
        CHECK_THROWS_AS(frequency_shift_electric(g), Error);
    }
    SUBCASE("mismatched array lengths") {
        FieldGrid g = one_cell_grid();
        g.delta_eps_f_m.push_back(0.0);
        CHECK_THROWS_AS(frequency_shift_full(g), Error);
    }
    SUBCASE("h0 without h1") {
        FieldGrid g = one_cell_grid();
        g.h0 = {unit_x()};
        CHECK_THROWS_AS(frequency_shift_full(g), Error);
    }
    SUBCASE("nonpositive cell volume") {
        FieldGrid g = one_cell_grid();
        g.cell_volume_m3 = 0.0;
        CHECK_THROWS_AS(frequency_shift_full(g), Error);
    }
}

TEST_CASE("field grid CSV round trip") {
    std::mt19937_64 rng(31);
    const FieldGrid g = random_grid(rng, 6);
    const FieldGrid back = read_field_grid_csv(write_field_grid_csv(g));
    REQUIRE(back.cells() == g.cells());
    CHECK(back.cell_volume_m3 == doctest::Approx(g.cell_volume_m3).epsilon(1e-10));
    CHECK(frequency_shift_full(back) == doctest::Approx(frequency_shift_full(g)).epsilon(1e-9));

    SUBCASE("metadata line is required") {
        CHECK_THROWS_AS(read_field_grid_csv("e0x_re,e0x_im\n"), ParseError);
    }
    SUBCASE("malformed metadata") {
        CHECK_THROWS_AS(read_field_grid_csv("# cell_volume_m3\n"), ParseError);
        CHECK_THROWS_AS(read_field_grid_csv("# banana=1\n"), ParseError);
    }
    SUBCASE("header must match") {
        CHECK_THROWS_AS(read_field_grid_csv("# cell_volume_m3=1e-9\nbad,header\n"), ParseError);
    }
}
