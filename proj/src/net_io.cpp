// SPDX-License-Identifier: Apache-2.0
#include "routenet/net_io.hpp"

#include <json.hpp>
#include <sstream>

#include "routenet/errors.hpp"

namespace routenet {

using ojson = nlohmann::ordered_json;

namespace {

ojson net_to_json(const Net& n) {
    ojson j;
    j["free"] = ojson::array();
    for (const auto& f : n.free) j["free"].push_back(ojson{{"port", f.port}, {"label", f.label}});
    j["cells"] = ojson::array();
    for (const auto& c : n.cells) {
        ojson cj{{"id", c.id}, {"sym", symbol_name(c.sym)}, {"pal", c.principal}, {"aux", c.aux}};
        if (c.inner) cj["box"] = net_to_json(*c.inner);
        j["cells"].push_back(std::move(cj));
    }
    j["wires"] = ojson::array();
    for (const auto& w : n.wires) {
        j["wires"].push_back(ojson{{"a", w.a}, {"b", w.b}, {"ty", w.type.str()}, {"dir", "ab"}});
    }
    return j;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw ParseError(0, where + ": " + what);
}

const ojson& field(const ojson& j, const char* key, const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(where, std::string("missing field '") + key + "'");
    return *it;
}

std::int64_t integer(const ojson& j, const std::string& where) {
    if (!j.is_number_integer()) schema_error(where, "expected an integer");
    return j.get<std::int64_t>();
}

std::string text(const ojson& j, const std::string& where) {
    if (!j.is_string()) schema_error(where, "expected a string");
    return j.get<std::string>();
}

Net net_from_json(const ojson& j, const std::string& where) {
    Net n;
    const ojson& free = field(j, "free", where);
    if (!free.is_array()) schema_error(where + ".free", "expected an array");
    for (std::size_t i = 0; i < free.size(); ++i) {
        std::string w = where + ".free[" + std::to_string(i) + "]";
        n.free.push_back(FreePort{integer(field(free[i], "port", w), w + ".port"), text(field(free[i], "label", w), w + ".label")});
    }
    const ojson& cells = field(j, "cells", where);
    if (!cells.is_array()) schema_error(where + ".cells", "expected an array");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string w = where + ".cells[" + std::to_string(i) + "]";
        const ojson& cj = cells[i];
        Cell c;
        c.id = integer(field(cj, "id", w), w + ".id");
        std::string sym = text(field(cj, "sym", w), w + ".sym");
        auto s = symbol_from_name(sym);
        if (!s) schema_error(w + ".sym", "unknown symbol '" + sym + "'");
        c.sym = *s;
        c.principal = integer(field(cj, "pal", w), w + ".pal");
        const ojson& aux = field(cj, "aux", w);
        if (!aux.is_array()) schema_error(w + ".aux", "expected an array");
        for (const auto& a : aux) c.aux.push_back(integer(a, w + ".aux"));
        auto box = cj.find("box");
        if (box != cj.end()) c.inner = std::make_shared<const Net>(net_from_json(*box, w + ".box"));
        n.cells.push_back(std::move(c));
    }
    const ojson& wires = field(j, "wires", where);
    if (!wires.is_array()) schema_error(where + ".wires", "expected an array");
    for (std::size_t i = 0; i < wires.size(); ++i) {
        std::string w = where + ".wires[" + std::to_string(i) + "]";
        const ojson& wj = wires[i];
        Wire x;
        x.a = integer(field(wj, "a", w), w + ".a");
        x.b = integer(field(wj, "b", w), w + ".b");
        std::string ty = text(field(wj, "ty", w), w + ".ty");
        try {
            x.type = Formula::parse(ty);
        } catch (const ParseError& e) {
            schema_error(w + ".ty", e.reason());
        }
        std::string dir = "ab";
        auto d = wj.find("dir");
        if (d != wj.end()) dir = text(*d, w + ".dir");
        if (dir == "ba") x.type = x.type.dual();
        else if (dir != "ab") schema_error(w + ".dir", "expected \"ab\" or \"ba\"");
        n.wires.push_back(x);
    }
    n.reset_next_id();
    return n;
}

}  // namespace

std::string serialize(const Net& n) { return net_to_json(n).dump(); }

std::string serialize(const NetSum& s) {
    ojson j;
    j["sum"] = ojson::array();
    for (const auto& n : s.summands) j["sum"].push_back(net_to_json(n));
    return j.dump();
}

NetSum parse_net_sum(std::string_view text, bool accept_single) {
    ojson j;
    try {
        j = ojson::parse(text.begin(), text.end());
    } catch (const ojson::parse_error& e) {
        throw ParseError(e.byte, e.what());
    }
    if (accept_single && j.is_object() && !j.contains("sum")) return NetSum(net_from_json(j, "$"));
    const ojson& sum = field(j, "sum", "$");
    if (!sum.is_array()) schema_error("$.sum", "expected an array");
    NetSum s;
    for (std::size_t i = 0; i < sum.size(); ++i) s.summands.push_back(net_from_json(sum[i], "$.sum[" + std::to_string(i) + "]"));
    return s;
}

namespace {

const char* glyph(Symbol s) {
    switch (s) {
    case Symbol::One: return "1";
    case Symbol::Tensor: return "*";
    case Symbol::Par: return "%";
    case Symbol::Dereliction: return "?d";
    case Symbol::Contraction: return "?c";
    case Symbol::Weakening: return "?w";
    case Symbol::Cocontraction: return "!c";
    case Symbol::Coweakening: return "!w";
    case Symbol::Box: return "!";
    }
    return "";
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void dot_level(std::ostream& os, const Net& n, const std::string& pre, const std::string& indent) {
    std::unordered_map<PortId, std::string> node_of;
    for (const auto& f : n.free) {
        std::string id = pre + "f" + std::to_string(f.port);
        node_of[f.port] = id;
        os << indent << id << " [shape=plaintext,label=" << quote(f.label) << "];\n";
    }
    for (const auto& c : n.cells) {
        std::string id = pre + "c" + std::to_string(c.id);
        node_of[c.principal] = id;
        for (PortId p : c.aux) node_of[p] = id;
        if (c.is_box() && c.inner) {
            os << indent << "subgraph cluster_" << id << " {\n";
            os << indent << "  label=\"box " << c.id << "\";\n";
            os << indent << "  " << id << " [shape=box,label=\"!\"];\n";
            dot_level(os, *c.inner, id + "_", indent + "  ");
            os << indent << "}\n";
        } else {
            os << indent << id << " [shape=circle,label=" << quote(glyph(c.sym)) << "];\n";
        }
    }
    for (const auto& w : n.wires) {
        os << indent << node_of[w.a] << " -> " << node_of[w.b] << " [label=" << quote(w.type.str()) << "];\n";
    }
}

}  // namespace

std::string to_dot(const Net& n) {
    std::ostringstream os;
    os << "digraph net {\n";
    dot_level(os, n, "", "  ");
    os << "}\n";
    return os.str();
}

std::string to_dot(const NetSum& s) {
    std::ostringstream os;
    os << "digraph sum {\n";
    for (std::size_t i = 0; i < s.summands.size(); ++i) {
        os << "  subgraph cluster_s" << i << " {\n    label=\"summand " << i << "\";\n";
        dot_level(os, s.summands[i], "s" + std::to_string(i) + "_", "    ");
        os << "  }\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace routenet
