#include "mwsense/netlist_io.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "csv_util.hpp"

namespace mwsense {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error("netlist: " + msg); }

double parse_bound_number(const std::string& tok, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
        fail("malformed number '" + tok + "' in " + context);
    return v;
}

// value slot: plain number, or "?init:lower:upper" declaring a free parameter
void read_value_slot(const json& j, const char* key, std::size_t index, ParamField field,
                     std::optional<double>& out, std::vector<FreeParam>& free_params) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_number()) {
        out = v.get<double>();
        return;
    }
    if (!v.is_string())
        fail(std::string(key) + " must be a number or a '?init:lower:upper' string");
    const std::string s = detail::trim(v.get<std::string>());
    if (s.empty() || s[0] != '?')
        fail(std::string(key) + " string value must start with '?' (free parameter)");
    const std::string body = s.substr(1);
    const auto c1 = body.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : body.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        body.find(':', c2 + 1) != std::string::npos)
        fail("free parameter '" + s + "' must be ?init:lower:upper");
    FreeParam fp;
    fp.element_index = index;
    fp.field = field;
    fp.init = parse_bound_number(body.substr(0, c1), s);
    fp.lower = parse_bound_number(body.substr(c1 + 1, c2 - c1 - 1), s);
    fp.upper = parse_bound_number(body.substr(c2 + 1), s);
    if (!(fp.lower > 0.0) || !(fp.lower < fp.upper))
        fail("free parameter '" + s + "' needs 0 < lower < upper");
    if (!(fp.init >= fp.lower) || !(fp.init <= fp.upper))
        fail("free parameter '" + s + "' init outside [lower, upper]");
    out = fp.init;
    free_params.push_back(fp);
}

NetlistTemplate parse_checked(const json& j) {
    NetlistTemplate t;
    for (const auto& [key, value] : j.items()) {
        if (key == "z0_ohm") {
            if (!value.is_number()) fail("z0_ohm must be a number");
            t.netlist.z0_ohm = value.get<double>();
        } else if (key == "note") {
            // free-form description, ignored
        } else if (key != "elements") {
            fail("unknown top-level key '" + key + "'");
        }
    }
    if (!j.contains("elements") || !j.at("elements").is_array())
        fail("missing 'elements' array");

    std::size_t index = 0;
    for (const json& je : j.at("elements")) {
        if (!je.is_object()) fail("elements must be objects");
        Element e;
        for (const auto& [key, value] : je.items()) {
            if (key == "topology") {
                if (!value.is_string()) fail("topology must be a string");
                const std::string v = detail::to_lower(value.get<std::string>());
                if (v == "series")
                    e.topology = Topology::Series;
                else if (v == "shunt")
                    e.topology = Topology::Shunt;
                else
                    fail("unknown topology '" + v + "' (expected series|shunt)");
            } else if (key == "kind") {
                if (!value.is_string()) fail("kind must be a string");
                const std::string v = value.get<std::string>();
                if (v == "R")
                    e.kind = ElementKind::Resistor;
                else if (v == "L")
                    e.kind = ElementKind::Inductor;
                else if (v == "C")
                    e.kind = ElementKind::Capacitor;
                else if (v == "RLC_S")
                    e.kind = ElementKind::SeriesRlc;
                else if (v == "RLC_P")
                    e.kind = ElementKind::ParallelRlc;
                else
                    fail("unknown kind '" + v + "' (expected R|L|C|RLC_S|RLC_P)");
            } else if (key != "r_ohm" && key != "l_h" && key != "c_f" && key != "note") {
                fail("unknown element key '" + key + "'");
            }
        }
        if (!je.contains("topology"))
            fail("element " + std::to_string(index) + " missing topology");
        if (!je.contains("kind")) fail("element " + std::to_string(index) + " missing kind");
        read_value_slot(je, "r_ohm", index, ParamField::R, e.r_ohm, t.free_params);
        read_value_slot(je, "l_h", index, ParamField::L, e.l_h, t.free_params);
        read_value_slot(je, "c_f", index, ParamField::C, e.c_f, t.free_params);
        t.netlist.elements.push_back(e);
        ++index;
    }
    t.netlist.validate();
    return t;
}

}  // namespace

NetlistTemplate parse_netlist_template(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("invalid netlist JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level must be an object");
    try {
        return parse_checked(j);
    } catch (const json::exception& e) {
        throw Error(std::string("invalid netlist JSON: ") + e.what());
    }
}

Netlist parse_netlist(const std::string& json_text) {
    NetlistTemplate t = parse_netlist_template(json_text);
    if (!t.free_params.empty())
        throw Error(
            "netlist declares free parameters ('?init:lower:upper'); "
            "this operation needs fixed values");
    return std::move(t.netlist);
}

std::string write_netlist_json(const Netlist& n) {
    n.validate();
    nlohmann::ordered_json j;
    j["z0_ohm"] = n.z0_ohm;
    j["elements"] = nlohmann::ordered_json::array();
    for (const Element& e : n.elements) {
        nlohmann::ordered_json je;
        je["topology"] = e.topology == Topology::Series ? "series" : "shunt";
        switch (e.kind) {
            case ElementKind::Resistor: je["kind"] = "R"; break;
            case ElementKind::Inductor: je["kind"] = "L"; break;
            case ElementKind::Capacitor: je["kind"] = "C"; break;
            case ElementKind::SeriesRlc: je["kind"] = "RLC_S"; break;
            case ElementKind::ParallelRlc: je["kind"] = "RLC_P"; break;
        }
        if (e.r_ohm) je["r_ohm"] = *e.r_ohm;
        if (e.l_h) je["l_h"] = *e.l_h;
        if (e.c_f) je["c_f"] = *e.c_f;
        j["elements"].push_back(je);
    }
    return j.dump(2) + "\n";
}

void apply_params(Netlist& n, std::span<const FreeParam> free_params,
                  std::span<const double> values) {
    if (free_params.size() != values.size())
        throw Error("parameter count mismatch: " + std::to_string(free_params.size()) +
                    " declared, " + std::to_string(values.size()) + " provided");
    for (std::size_t i = 0; i < free_params.size(); ++i) {
        const FreeParam& fp = free_params[i];
        if (fp.element_index >= n.elements.size())
            throw Error("free parameter element index out of range");
        Element& e = n.elements[fp.element_index];
        switch (fp.field) {
            case ParamField::R: e.r_ohm = values[i]; break;
            case ParamField::L: e.l_h = values[i]; break;
            case ParamField::C: e.c_f = values[i]; break;
        }
    }
}

}  // namespace mwsense
