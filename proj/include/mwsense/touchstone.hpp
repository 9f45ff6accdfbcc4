#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mwsense/errors.hpp"

namespace mwsense {

using Complex = std::complex<double>;

/// One 2x2 scattering-matrix sample.
struct SMatrix {
    Complex s11{0.0};
    Complex s12{0.0};
    Complex s21{0.0};
    Complex s22{0.0};
};

/// A two-port frequency response: strictly ascending frequency grid, one
/// S-matrix per point, and the reference impedance the parameters are
/// normalized to. Frequencies are always stored in Hz.
struct FrequencyResponse {
    std::vector<double> freqs_hz;
    std::vector<SMatrix> s;
    double z0_ohm = 50.0;

    std::size_t size() const noexcept { return freqs_hz.size(); }

    /// Throws Error unless frequencies are strictly ascending and positive,
    /// the sample count matches the grid, and z0 > 0.
    void validate() const;
};

/// Data formats of a Touchstone option line.
enum class SFormat { Ri, Ma, Db };

/// Touchstone v1 option line `# <unit> <param> <fmt> R <ohms>`.
/// Field defaults follow the v1.1 rules: GHz, S, MA, 50 ohms.
struct OptionLine {
    double freq_unit = 1e9;  ///< multiplier from file units to Hz
    char parameter = 'S';    ///< only 'S' is accepted by the parser
    SFormat format = SFormat::Ma;
    double resistance_ohm = 50.0;

    void validate() const;
};

/// dB magnitude written in place of -inf (|s| == 0) so emitted files stay
/// numeric.
inline constexpr double kDbFloor = -400.0;

/// 20*log10(|s|); returns -infinity when |s| == 0.
double magnitude_db(Complex s);

/// Parse a two-port Touchstone v1 (.s2p) document.
///
/// Accepted grammar: an optional option line (`#`, any case, missing fields
/// take the v1.1 defaults), `!` comments anywhere (full-line or trailing),
/// blank lines anywhere, and data rows of exactly 9 numeric columns in the
/// two-port column order freq, S11, S21, S12, S22. MA and DB angles are in
/// degrees. Touchstone v2 keyword lines (`[...]`) are rejected.
///
/// Throws ParseError (with the offending line number) on a malformed option
/// line, a parameter other than S, a wrong column count, non-monotonic
/// frequencies, or v2 keywords.
FrequencyResponse parse_touchstone(const std::string& text);

/// Render a response as a Touchstone v1 two-port document using the given
/// option line. Values are written with enough digits that a parse of the
/// output reproduces the input within 1e-8 relative error per value.
std::string write_touchstone(const FrequencyResponse& resp, const OptionLine& opts = {});

/// CSV alternative with header
/// freq_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im.
FrequencyResponse read_response_csv(const std::string& text);
std::string write_response_csv(const FrequencyResponse& resp);

/// Load a response from disk, dispatching on extension: .csv is read as the
/// CSV schema above, anything else as Touchstone.
FrequencyResponse load_response_file(const std::string& path);

}  // namespace mwsense
