#include <doctest.h>

#include <cmath>
#include <random>

#include "mwsense/touchstone.hpp"

using namespace mwsense;

namespace {

void check_close(Complex a, Complex b, double rtol = 1e-8) {
    CHECK(std::abs(a - b) <= rtol * std::abs(b) + 1e-15);
}

FrequencyResponse random_response(std::mt19937_64& rng, std::size_t n) {
    // magnitudes kept away from zero so relative comparisons stay meaningful
    std::uniform_real_distribution<double> mag(1e-3, 1.0);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    std::uniform_real_distribution<double> step(1e6, 5e8);

    FrequencyResponse resp;
    double f = 1e9;
    for (std::size_t i = 0; i < n; ++i) {
        f += step(rng);
        resp.freqs_hz.push_back(f);
        SMatrix m;
        m.s11 = std::polar(mag(rng), ang(rng));
        m.s21 = std::polar(mag(rng), ang(rng));
        m.s12 = std::polar(mag(rng), ang(rng));
        m.s22 = std::polar(mag(rng), ang(rng));
        resp.s.push_back(m);
    }
    return resp;
}

void check_responses_close(const FrequencyResponse& a, const FrequencyResponse& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::fabs(a.freqs_hz[i] - b.freqs_hz[i]) <= 1e-8 * b.freqs_hz[i]);
        check_close(a.s[i].s11, b.s[i].s11);
        check_close(a.s[i].s21, b.s[i].s21);
        check_close(a.s[i].s12, b.s[i].s12);
        check_close(a.s[i].s22, b.s[i].s22);
    }
}

}  // namespace

TEST_CASE("option line GHz S RI R 50") {
    const auto resp = parse_touchstone("# GHz S RI R 50\n1.0 0 0 1 0 1 0 0 0\n");
    REQUIRE(resp.size() == 1);
    CHECK(resp.freqs_hz[0] == 1e9);
    CHECK(resp.z0_ohm == 50.0);
    CHECK(resp.s[0].s11 == Complex{0.0});
    CHECK(resp.s[0].s21 == Complex{1.0});
    CHECK(resp.s[0].s12 == Complex{1.0});
    CHECK(resp.s[0].s22 == Complex{0.0});
}

TEST_CASE("option line variants") {
    SUBCASE("MHz scaling and custom resistance") {
        const auto resp = parse_touchstone("# MHz S RI R 75\n100 0 0 1 0 1 0 0 0\n");
        CHECK(resp.freqs_hz[0] == 1e8);
        CHECK(resp.z0_ohm == 75.0);
    }
    SUBCASE("case-insensitive tokens in any order") {
        const auto resp = parse_touchstone("# r 25 ri s khz\n1000 0 0 1 0 1 0 0 0\n");
        CHECK(resp.freqs_hz[0] == 1e6);
        CHECK(resp.z0_ohm == 25.0);
    }
    SUBCASE("partial option line keeps defaults") {
        const auto resp = parse_touchstone("# RI\n2 0.5 0 0.5 0 0.5 0 0.5 0\n");
        CHECK(resp.freqs_hz[0] == 2e9);  // GHz default
        CHECK(resp.z0_ohm == 50.0);
    }
}

TEST_CASE("missing option line applies the v1.1 defaults (GHz S MA R 50)") {
    const auto resp = parse_touchstone("1.0 0.5 90 1 0 1 0 0.5 -90\n");
    REQUIRE(resp.size() == 1);
    CHECK(resp.freqs_hz[0] == 1e9);
    CHECK(resp.z0_ohm == 50.0);
    check_close(resp.s[0].s11, Complex{0.0, 0.5}, 1e-12);
    check_close(resp.s[0].s22, Complex{0.0, -0.5}, 1e-12);
}

TEST_CASE("comments and blank lines are ignored anywhere") {
    const std::string text =
        "! leading comment\n"
        "\n"
        "# GHz S RI R 50 ! trailing comment\n"
        "! between\n"
        "1.0 0 0 1 0 1 0 0 0 ! row comment\n"
        "\n"
        "2.0 0 0 1 0 1 0 0 0\n"
        "! trailing\n";
    const auto resp = parse_touchstone(text);
    CHECK(resp.size() == 2);
    CHECK(resp.freqs_hz[1] == 2e9);
}

TEST_CASE("parse errors carry line numbers and distinct messages") {
    SUBCASE("malformed option line") {
        try {
            parse_touchstone("# GHz S XY R 50\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(std::string(e.what()).find("option line") != std::string::npos);
        }
    }
    SUBCASE("R without value") {
        CHECK_THROWS_AS(parse_touchstone("# GHz S RI R\n"), ParseError);
    }
    SUBCASE("parameter other than S") {
        try {
            parse_touchstone("! hi\n# GHz Y RI R 50\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("only S-parameter") != std::string::npos);
        }
    }
    SUBCASE("wrong column count") {
        try {
            parse_touchstone("# GHz S RI R 50\n1.0 0 0 1 0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("9 columns") != std::string::npos);
        }
    }
    SUBCASE("non-monotonic frequencies") {
        try {
            parse_touchstone("1.0 0 0 1 0 1 0 0 0\n2.0 0 0 1 0 1 0 0 0\n1.5 0 0 1 0 1 0 0 0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("monotonic") != std::string::npos);
        }
    }
    SUBCASE("malformed number") {
        CHECK_THROWS_AS(parse_touchstone("1.0 0 0 oops 0 1 0 0 0\n"), ParseError);
    }
    SUBCASE("v2 keywords rejected") {
        try {
            parse_touchstone("[Version] 2.0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(std::string(e.what()).find("v2") != std::string::npos);
        }
    }
    SUBCASE("duplicate option line") {
        CHECK_THROWS_AS(parse_touchstone("# GHz S RI R 50\n# GHz S RI R 50\n"), ParseError);
    }
    SUBCASE("non-positive frequency") {
        CHECK_THROWS_AS(parse_touchstone("# Hz S RI R 50\n0 0 0 1 0 1 0 0 0\n"), ParseError);
    }
}

TEST_CASE("write: empty response emits the option line only") {
    FrequencyResponse resp;
    OptionLine opts;
    CHECK(write_touchstone(resp, opts) == "# GHz S MA R 50\n");
}

TEST_CASE("round-trip identity within 1e-8 for RI, MA and DB") {
    std::mt19937_64 rng(20240811);
    for (SFormat fmt : {SFormat::Ri, SFormat::Ma, SFormat::Db}) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto resp = random_response(rng, 40);
            OptionLine opts;
            opts.format = fmt;
            opts.freq_unit = 1e9;
            const auto back = parse_touchstone(write_touchstone(resp, opts));
            check_responses_close(back, resp);
        }
    }
}

TEST_CASE("RI response rewritten as DB and re-parsed matches") {
    std::mt19937_64 rng(7);
    const auto resp = random_response(rng, 25);
    OptionLine ri;
    ri.format = SFormat::Ri;
    const auto parsed_ri = parse_touchstone(write_touchstone(resp, ri));
    OptionLine db;
    db.format = SFormat::Db;
    const auto parsed_db = parse_touchstone(write_touchstone(parsed_ri, db));
    check_responses_close(parsed_db, resp);
}

TEST_CASE("zero magnitude is written as the -400 dB sentinel") {
    FrequencyResponse resp;
    resp.freqs_hz = {1e9};
    SMatrix m;
    m.s21 = 1.0;  // s11/s12/s22 stay exactly zero
    resp.s = {m};
    OptionLine db;
    db.format = SFormat::Db;
    const std::string text = write_touchstone(resp, db);
    CHECK(text.find("-400") != std::string::npos);
    const auto back = parse_touchstone(text);
    CHECK(std::abs(back.s[0].s11) <= 1e-20);
    check_close(back.s[0].s21, Complex{1.0});
}

TEST_CASE("magnitude_db") {
    CHECK(magnitude_db(Complex{1.0}) == doctest::Approx(0.0));
    CHECK(magnitude_db(Complex{0.1}) == doctest::Approx(-20.0));
    CHECK(magnitude_db(Complex{0.2198}) == doctest::Approx(-13.159446238).epsilon(1e-9));
    CHECK(std::isinf(magnitude_db(Complex{0.0})));
    CHECK(magnitude_db(Complex{0.0}) < 0.0);
}

TEST_CASE("CSV response format") {
    std::mt19937_64 rng(99);
    const auto resp = random_response(rng, 12);
    const auto back = read_response_csv(write_response_csv(resp));
    check_responses_close(back, resp);

    SUBCASE("header is required") {
        CHECK_THROWS_AS(read_response_csv("1e9,0,0,1,0,1,0,0,0\n"), ParseError);
    }
    SUBCASE("row arity is checked with a line number") {
        const std::string text =
            "freq_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im\n1e9,0,0\n";
        try {
            read_response_csv(text);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
}

TEST_CASE("response validation") {
    FrequencyResponse resp;
    resp.freqs_hz = {1e9, 1e9};
    resp.s.resize(2);
    CHECK_THROWS_AS(resp.validate(), Error);
    resp.freqs_hz = {1e9, 2e9};
    CHECK_NOTHROW(resp.validate());
    resp.z0_ohm = -1.0;
    CHECK_THROWS_AS(resp.validate(), Error);
}
