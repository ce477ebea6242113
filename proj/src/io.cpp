#include "cubeterm/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using nlohmann::ordered_json;

namespace cubeterm {

namespace {

std::string line_context(const std::string& text, size_t byte_offset) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte_offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

FiniteAlgebra parse_algebra(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::ParseError, std::string(e.what()) + " (" + line_context(text, e.byte) + ")");
    }
    try {
        if (!doc.is_object() || !doc.contains("size") || !doc.contains("ops"))
            raise(Errc::ParseError, "algebra file needs object fields 'size' and 'ops'");
        int size = doc.at("size").get<int>();
        std::vector<OperationSymbol> symbols;
        std::vector<std::vector<int>> tables;
        for (const auto& op : doc.at("ops")) {
            symbols.push_back({op.at("name").get<std::string>(), op.at("arity").get<int>()});
            tables.push_back(op.at("table").get<std::vector<int>>());
        }
        return FiniteAlgebra(size, Signature(std::move(symbols)), std::move(tables));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::ParseError, e.what());
    }
}

FiniteAlgebra load_algebra_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::ParseError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_algebra(buf.str());
}

std::string serialize_algebra(const FiniteAlgebra& algebra) {
    std::ostringstream out;
    out << "{\n  \"size\": " << algebra.size() << ",\n  \"ops\": [\n";
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        const auto& sym = algebra.signature()[op];
        out << "    {\"name\": \"" << sym.name << "\", \"arity\": " << sym.arity << ", \"table\": [";
        const auto& t = algebra.table(op);
        for (size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
        out << "]}" << (op + 1 < algebra.op_count() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

std::vector<Subset> parse_bases(const std::string& text, int universe_size) {
    std::vector<Subset> out;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        if (text[i] != '{') raise(Errc::ParseError, "expected '{' at position " + std::to_string(i));
        ++i;
        Subset s(universe_size);
        skip_ws();
        while (i < text.size() && text[i] != '}') {
            size_t j = i;
            while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
            if (j == i) raise(Errc::ParseError, "expected element at position " + std::to_string(i));
            s.add(std::stoi(text.substr(i, j - i)));
            i = j;
            skip_ws();
            if (i < text.size() && text[i] == ',') {
                ++i;
                skip_ws();
            }
        }
        if (i >= text.size()) raise(Errc::ParseError, "unterminated base set");
        ++i;  // '}'
        out.push_back(std::move(s));
        skip_ws();
        if (i < text.size()) {
            if (text[i] != ',') raise(Errc::ParseError, "expected ',' between bases");
            ++i;
        }
    }
    if (out.empty()) raise(Errc::ParseError, "no bases given");
    return out;
}

std::string format_subset(const Subset& s) {
    std::string out = "{";
    bool first = true;
    for (int e : s.elements()) {
        if (!first) out += ",";
        out += std::to_string(e);
        first = false;
    }
    return out + "}";
}

ordered_json subset_json(const Subset& s) { return ordered_json(s.elements()); }

ordered_json cross_json(const Cross& c) {
    ordered_json bases = ordered_json::array();
    for (const auto& b : c.bases()) bases.push_back(subset_json(b));
    return ordered_json{{"arity", c.arity()}, {"bases", bases}};
}

ordered_json violation_json(const FiniteAlgebra& algebra, const CrossViolation& v) {
    ordered_json rows = ordered_json::array();
    for (size_t r = 0; r < v.rows.size(); ++r)
        rows.push_back(ordered_json{{"base", v.row_base[r]}, {"arguments", v.rows[r]},
                                    {"output", v.violating_output[r]}});
    return ordered_json{{"operation", algebra.signature()[v.op].name},
                        {"map", v.map_m},
                        {"rows", rows}};
}

ordered_json blocker_json(const FiniteAlgebra& algebra, const Blocker& b) {
    ordered_json cert = ordered_json::array();
    for (size_t op = 0; op < b.absorbing_variable.size(); ++op)
        cert.push_back(ordered_json{{"operation", algebra.signature()[op].name},
                                    {"absorbing_variable", b.absorbing_variable[op]}});
    return ordered_json{{"U", subset_json(b.u)}, {"B", subset_json(b.b)}, {"certificate", cert}};
}

ordered_json witness_json(const FiniteAlgebra& algebra, const TermWitness& w,
                          const std::vector<std::string>& leaf_names) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : w.nodes()) {
        if (n.op < 0) {
            nodes.push_back(ordered_json{{"leaf", n.leaf}});
        } else {
            nodes.push_back(ordered_json{{"operation", algebra.signature()[static_cast<size_t>(n.op)].name},
                                         {"children", n.children}});
        }
    }
    return ordered_json{{"term", w.to_string(algebra, leaf_names)}, {"root", w.root()}, {"nodes", nodes}};
}

ordered_json cube_verdict_json(const FiniteAlgebra& algebra, const CubeVerdict& v) {
    ordered_json out;
    out["dimension"] = v.dimension;
    switch (v.status) {
        case CubeVerdict::Status::HasCubeTerm: out["status"] = "has-cube-term"; break;
        case CubeVerdict::Status::NoCubeTerm: out["status"] = "no-cube-term"; break;
        case CubeVerdict::Status::Undecided: out["status"] = "undecided"; break;
    }
    out["closure_size"] = v.closure_size;
    if (v.witness) {
        out["columns"] = v.column_names;
        out["witness"] = witness_json(algebra, *v.witness, v.column_names);
    }
    if (v.blocker) out["blocker"] = blocker_json(algebra, *v.blocker);
    if (v.free_cross) {
        out["free_algebra_elements"] = v.free_elements;
        out["free_algebra_cross"] = cross_json(*v.free_cross);
    }
    return out;
}

} // namespace cubeterm
