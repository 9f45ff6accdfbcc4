#pragma once

#include <span>
#include <string>
#include <vector>

#include "mwsense/network.hpp"

namespace mwsense {

enum class ParamField { R, L, C };

/// A fittable scalar inside a netlist, declared in the file by replacing the
/// value with the string "?init:lower:upper" (positive, lower < init < upper).
struct FreeParam {
    std::size_t element_index = 0;
    ParamField field = ParamField::R;
    double init = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// A netlist plus its declared free parameters; the netlist itself holds the
/// init values, so it simulates as-is.
struct NetlistTemplate {
    Netlist netlist;
    std::vector<FreeParam> free_params;
};

/// Netlist file schema (JSON):
///
///   {
///     "z0_ohm": 50.0,
///     "elements": [
///       {"topology": "series"|"shunt",
///        "kind": "R"|"L"|"C"|"RLC_S"|"RLC_P",
///        "r_ohm": <number or "?init:lower:upper">,
///        "l_h":   ...,
///        "c_f":   ...}
///     ]
///   }
///
/// Unknown keys are rejected. Value keys are optional per the element-kind
/// rules in network.hpp.
NetlistTemplate parse_netlist_template(const std::string& json_text);

/// Same, but free parameters are an error (for commands that only simulate).
Netlist parse_netlist(const std::string& json_text);

std::string write_netlist_json(const Netlist& n);

/// Write params[i] into the element slot named by free_params[i].
void apply_params(Netlist& n, std::span<const FreeParam> free_params,
                  std::span<const double> values);

}  // namespace mwsense
