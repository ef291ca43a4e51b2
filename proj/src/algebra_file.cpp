#include "lie/algebra_file.hpp"

#include <fstream>
#include <sstream>

namespace lie {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

Rational parse_value(const std::string& s, std::size_t line) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw FileFormatError("bad number '" + s + "'", line);
    q.canonicalize();
    return q;
}

std::pair<std::string, std::string> split_key_value(const std::string& s, std::size_t line) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw FileFormatError("expected key=value, got '" + s + "'", line);
    return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

}  // namespace

AlgebraFile parse_algebra_file(const std::string& text) {
    AlgebraFile f;
    std::istringstream in(text);
    std::string raw;
    std::size_t no = 0;
    bool have_vars = false;
    while (std::getline(in, raw)) {
        ++no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw FileFormatError("expected 'key: value'", no);
        std::string key = trim(line.substr(0, colon));
        std::string val = trim(line.substr(colon + 1));
        if (key == "id") {
            f.id = val;
        } else if (key == "vars") {
            f.vars = words(val);
            have_vars = true;
        } else if (key == "params") {
            f.params = words(val);
        } else if (key == "field") {
            if (val.empty()) throw FileFormatError("empty field", no);
            f.fields.push_back(val);
        } else if (key.rfind("invariant", 0) == 0) {
            std::size_t s = 2;
            std::string rest = key.substr(9);
            if (!rest.empty()) {
                if (rest.size() < 5 || rest.rfind("[s=", 0) != 0 || rest.back() != ']')
                    throw FileFormatError("expected invariant[s=N]", no);
                std::string n = rest.substr(3, rest.size() - 4);
                if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
                    throw FileFormatError("bad point count '" + n + "'", no);
                s = std::stoul(n);
            }
            f.invariants.emplace_back(s, val);
        } else if (key == "constraint") {
            try {
                f.constraints.push_back(parse_constraint(val));
            } catch (const std::invalid_argument& e) {
                throw FileFormatError(e.what(), no);
            }
        } else if (key == "expect") {
            auto kv = split_key_value(val, no);
            try {
                Expected probe;
                set_expectation(probe, kv.first, kv.second);
            } catch (const std::invalid_argument& e) {
                throw FileFormatError(e.what(), no);
            }
            f.expects.push_back(kv);
        } else if (key == "boundary") {
            auto bar = val.find('|');
            Boundary b;
            for (auto& w : words(val.substr(0, bar))) b.values.push_back(parse_value(split_key_value(w, no).second, no));
            if (bar != std::string::npos)
                for (auto& w : words(val.substr(bar + 1))) b.overrides.push_back(split_key_value(w, no));
            f.boundaries.push_back(b);
        } else if (key == "base") {
            std::vector<Rational> pt;
            for (auto& w : words(val)) pt.push_back(parse_value(w, no));
            f.base = pt;
        } else {
            throw FileFormatError("unknown key '" + key + "'", no);
        }
    }
    if (!have_vars) throw FileFormatError("missing vars line", no);
    if (f.fields.empty()) throw FileFormatError("no field lines", no);
    for (auto& b : f.boundaries)
        if (b.values.size() != f.params.size()) throw FileFormatError("boundary needs a value per parameter", no);
    if (f.base && f.base->size() != f.vars.size()) throw FileFormatError("base needs a value per variable", no);
    return f;
}

AlgebraFile read_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return parse_algebra_file(s.str());
}

LieAlgebra to_algebra(const AlgebraFile& f) {
    return make_algebra(f.id.empty() ? "file" : f.id, f.vars, f.params, f.fields);
}

Expected expectations(const AlgebraFile& f) {
    Expected e;
    for (auto& [k, v] : f.expects) set_expectation(e, k, v);
    return e;
}

std::string write_algebra_file(const CatalogEntry& e) {
    std::ostringstream out;
    auto join = [](const std::vector<std::string>& ws) {
        std::string s;
        for (auto& w : ws) s += (s.empty() ? "" : " ") + w;
        return s;
    };
    out << "id: " << e.id << "\n";
    out << "vars: " << join(e.algebra.vars) << "\n";
    if (!e.algebra.params.empty()) out << "params: " << join(e.algebra.params) << "\n";
    for (auto& c : e.constraints) out << "constraint: " << to_string(c) << "\n";
    for (auto& f : e.field_texts) out << "field: " << f << "\n";
    for (auto& j : e.invariants) out << "invariant[s=2]: " << j << "\n";
    for (auto& [k, v] : to_key_values(e.expected)) out << "expect: " << k << "=" << v << "\n";
    for (auto& b : e.boundaries) {
        out << "boundary:";
        for (std::size_t i = 0; i < b.values.size(); ++i)
            out << " " << e.algebra.params[i] << "=" << b.values[i].get_str();
        if (!b.overrides.empty()) {
            out << " |";
            for (auto& [k, v] : b.overrides) out << " " << k << "=" << v;
        }
        out << "\n";
    }
    if (e.base) {
        out << "base:";
        for (auto& v : *e.base) out << " " << v.get_str();
        out << "\n";
    }
    return out.str();
}

CatalogEntry entry_from_file(const AlgebraFile& f) {
    CatalogEntry e = make_entry(f.id, f.vars, f.params, f.fields);
    e.constraints = f.constraints;
    for (auto& [s, text] : f.invariants) {
        if (s != 2) throw std::invalid_argument("catalog entries hold two-point invariants only");
        e.invariants.push_back(text);
    }
    e.expected = expectations(f);
    e.boundaries = f.boundaries;
    e.base = f.base;
    return e;
}

}  // namespace lie
