#include <doctest.h>

#include <cmath>
#include <random>

#include "mwsense/sensitivity.hpp"

using namespace mwsense;

namespace {

// bundled permittivity sweep (S21) and thickness sweep (S21 column)
const std::vector<std::pair<double, double>> kEpsSweep = {
    {1, 4.168}, {2, 3.783}, {3, 3.09}, {4, 2.683}, {5, 2.408}, {6, 2.199}};
const std::vector<std::pair<double, double>> kThicknessSweep = {
    {0.0, 3.98}, {0.5, 3.7},  {1.0, 3.66}, {1.5, 3.62}, {2.0, 3.61}, {2.5, 3.61},
    {3.0, 3.6},  {3.5, 3.61}, {4.0, 3.59}, {4.5, 3.6},  {5.0, 3.6},  {5.5, 3.6},
    {6.0, 3.6},  {6.5, 3.6},  {7.0, 3.6},  {7.5, 3.6},  {8.0, 3.59}};

std::vector<SweepPoint> eps_points() {
    std::vector<SweepPoint> pts;
    for (auto [eps, f] : kEpsSweep) pts.push_back({ControlKind::Permittivity, eps, f, {}});
    return pts;
}

std::vector<SweepPoint> thickness_points() {
    std::vector<SweepPoint> pts;
    for (auto [t, f] : kThicknessSweep) pts.push_back({ControlKind::ThicknessMm, t, f, {}});
    return pts;
}

}  // namespace

TEST_CASE("normalized average sensitivity") {
    SUBCASE("permittivity sweep endpoints") {
        CHECK(normalized_average_sensitivity(4.168, 2.199, 1.0, 6.0) ==
              doctest::Approx(9.448176583493284).epsilon(1e-12));
    }
    SUBCASE("material-peaks S21 endpoints") {
        CHECK(normalized_average_sensitivity(3.99, 3.08, 1.0, 4.3) ==
              doctest::Approx(6.911217437533228).epsilon(1e-12));
    }
    SUBCASE("no shift means zero") {
        CHECK(normalized_average_sensitivity(3.5, 3.5, 1.0, 4.0) == 0.0);
    }
    SUBCASE("positive even when the frequency rises with permittivity") {
        CHECK(normalized_average_sensitivity(3.0, 3.3, 1.0, 2.0) > 0.0);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(normalized_average_sensitivity(3.5, 3.0, 2.0, 2.0), Error);
        CHECK_THROWS_AS(normalized_average_sensitivity(3.5, 3.0, 0.5, 2.0), Error);
        CHECK_THROWS_AS(normalized_average_sensitivity(-3.5, 3.0, 1.0, 2.0), Error);
    }
}

TEST_CASE("sensitivity report over the bundled sweep") {
    const SensitivityReport rep = sensitivity_report(eps_points());
    REQUIRE(rep.pairs.size() == 5);
    CHECK(rep.endpoint_percent == doctest::Approx(9.448176583493284).epsilon(1e-12));
    const double expected_pairs[5] = {9.237044145873325, 18.318794607454404,
                                      13.171521035598706, 10.249720462169211,
                                      8.679401993355484};
    for (int i = 0; i < 5; ++i)
        CHECK(rep.pairs[i].sensitivity_percent ==
              doctest::Approx(expected_pairs[i]).epsilon(1e-12));
    CHECK(rep.pairs[0].eps_low == 1.0);
    CHECK(rep.pairs[4].eps_high == 6.0);
}

TEST_CASE("sensitivity report edge cases") {
    SUBCASE("identical frequencies give zero everywhere") {
        std::vector<SweepPoint> pts = {{ControlKind::Permittivity, 1.0, 3.5, {}},
                                       {ControlKind::Permittivity, 2.0, 3.5, {}}};
        const SensitivityReport rep = sensitivity_report(pts);
        CHECK(rep.endpoint_percent == 0.0);
        CHECK(rep.pairs[0].sensitivity_percent == 0.0);
    }
    SUBCASE("single point is an error") {
        std::vector<SweepPoint> pts = {{ControlKind::Permittivity, 1.0, 3.5, {}}};
        CHECK_THROWS_AS(sensitivity_report(pts), Error);
    }
    SUBCASE("duplicate permittivities are an error") {
        std::vector<SweepPoint> pts = {{ControlKind::Permittivity, 2.0, 3.5, {}},
                                       {ControlKind::Permittivity, 2.0, 3.6, {}},
                                       {ControlKind::Permittivity, 3.0, 3.0, {}}};
        CHECK_THROWS_AS(sensitivity_report(pts), Error);
    }
    SUBCASE("thickness-tagged sweeps are rejected") {
        CHECK_THROWS_AS(sensitivity_report(thickness_points()), Error);
    }
    SUBCASE("unsorted input is sorted by permittivity") {
        auto pts = eps_points();
        std::swap(pts[0], pts[4]);
        const SensitivityReport rep = sensitivity_report(pts);
        CHECK(rep.endpoint_percent == doctest::Approx(9.448176583493284).epsilon(1e-12));
    }
}

TEST_CASE("frequency-scale invariance of the sensitivity") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    const SensitivityReport base = sensitivity_report(eps_points());
    for (int rep = 0; rep < 10; ++rep) {
        const double k = scale(rng);
        auto pts = eps_points();
        for (SweepPoint& p : pts) p.resonance_ghz *= k;
        const SensitivityReport scaled = sensitivity_report(pts);
        CHECK(scaled.endpoint_percent ==
              doctest::Approx(base.endpoint_percent).epsilon(1e-12));
        for (std::size_t i = 0; i < base.pairs.size(); ++i)
            CHECK(scaled.pairs[i].sensitivity_percent ==
                  doctest::Approx(base.pairs[i].sensitivity_percent).epsilon(1e-12));
    }
}

TEST_CASE("thickness saturation on the bundled sweep") {
    const auto pts = thickness_points();
    CHECK(thickness_saturation(pts, 0.02) == 2.0);
    CHECK(thickness_saturation(pts, 0.05) == 1.0);
    CHECK(thickness_saturation(pts, 0.5) == 0.0);  // never moves more than 0.5 GHz per step
}

TEST_CASE("thickness saturation edge cases") {
    SUBCASE("strictly monotone non-saturating ramp returns the maximum thickness") {
        std::vector<SweepPoint> ramp;
        for (int i = 0; i <= 8; ++i)
            ramp.push_back({ControlKind::ThicknessMm, 0.5 * i, 4.0 - 0.1 * i, {}});
        CHECK(thickness_saturation(ramp, 0.01) == 4.0);
    }
    SUBCASE("flat sweep saturates at the first thickness") {
        std::vector<SweepPoint> flat;
        for (int i = 0; i <= 4; ++i)
            flat.push_back({ControlKind::ThicknessMm, 1.0 * i, 3.6, {}});
        CHECK(thickness_saturation(flat, 0.01) == 0.0);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(thickness_saturation({}, 0.02), Error);
        std::vector<SweepPoint> one = {{ControlKind::ThicknessMm, 1.0, 3.6, {}}};
        CHECK_THROWS_AS(thickness_saturation(one, 0.02), Error);
        CHECK_THROWS_AS(thickness_saturation(thickness_points(), 0.0), Error);
        CHECK_THROWS_AS(thickness_saturation(eps_points(), 0.02), Error);
    }
}

TEST_CASE("saturation thickness is monotone in the tolerance") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> df(-0.2, 0.2);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<SweepPoint> pts;
        double f = 4.0;
        for (int i = 0; i <= 10; ++i) {
            pts.push_back({ControlKind::ThicknessMm, 0.5 * i, f, {}});
            f = std::max(0.1, f + df(rng));
        }
        double prev_sat = 1e9;
        for (double tol : {0.01, 0.05, 0.1, 0.2, 0.5}) {
            const double sat = thickness_saturation(pts, tol);
            CHECK(sat <= prev_sat);
            prev_sat = sat;
        }
    }
}

TEST_CASE("sweep CSV") {
    const std::string text =
        "control_kind,control_value,resonance_ghz,depth_db\n"
        "permittivity,1,4.168,\n"
        "permittivity,2,3.783,-21.5\n";
    const auto pts = read_sweep_csv(text);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].kind == ControlKind::Permittivity);
    CHECK(!pts[0].depth_db.has_value());
    CHECK(pts[1].depth_db.value() == -21.5);

    const auto back = read_sweep_csv(write_sweep_csv(pts));
    REQUIRE(back.size() == 2);
    CHECK(back[1].resonance_ghz == pts[1].resonance_ghz);
    CHECK(back[1].depth_db.value() == -21.5);

    SUBCASE("trailing source column is tolerated") {
        const std::string with_source =
            "control_kind,control_value,resonance_ghz,depth_db,source\n"
            "thickness_mm,1.5,3.62,-26.45632,table2\n";
        const auto tagged = read_sweep_csv(with_source);
        REQUIRE(tagged.size() == 1);
        CHECK(tagged[0].kind == ControlKind::ThicknessMm);
    }
    SUBCASE("unknown control kind") {
        CHECK_THROWS_AS(
            read_sweep_csv("control_kind,control_value,resonance_ghz,depth_db\nvoltage,1,2,\n"),
            ParseError);
    }
}
