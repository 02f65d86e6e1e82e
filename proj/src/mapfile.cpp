#include "keller/mapfile.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "keller/errors.hpp"

namespace keller::mapfile {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxDimension = 1024;
constexpr std::int64_t kMaxExponent = std::numeric_limits<std::int32_t>::max();

// ---- structural scanner over already-validated JSON ----

struct Scanner {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    void skip_string() {
        ++pos; // opening quote
        while (pos < text.size() && text[pos] != '"') pos += text[pos] == '\\' ? 2 : 1;
        ++pos;
    }

    std::string read_key() {
        // Keys in map documents never need unescaping to be matched.
        const std::size_t start = pos + 1;
        skip_string();
        return std::string(text.substr(start, pos - start - 1));
    }

    void skip_value() {
        skip_ws();
        if (pos >= text.size()) return;
        const char c = text[pos];
        if (c == '"') {
            skip_string();
        } else if (c == '{' || c == '[') {
            const char close = c == '{' ? '}' : ']';
            ++pos;
            skip_ws();
            if (text[pos] == close) {
                ++pos;
                return;
            }
            for (;;) {
                skip_ws();
                if (c == '{') {
                    skip_string();
                    skip_ws();
                    ++pos; // ':'
                }
                skip_value();
                skip_ws();
                if (text[pos++] == close) return;
            }
        } else {
            while (pos < text.size() && text[pos] != ',' && text[pos] != '}' && text[pos] != ']' &&
                   !std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            }
        }
    }

    // Moves to the member `key` of the object at pos (last occurrence wins,
    // matching the parser). Returns false when absent.
    bool enter_key(const std::string& key) {
        skip_ws();
        if (pos >= text.size() || text[pos] != '{') return false;
        ++pos;
        std::size_t found = std::string_view::npos;
        for (;;) {
            skip_ws();
            if (text[pos] == '}') break;
            const std::string k = read_key();
            skip_ws();
            ++pos; // ':'
            skip_ws();
            if (k == key) found = pos;
            skip_value();
            skip_ws();
            if (text[pos++] == '}') break;
        }
        if (found == std::string_view::npos) return false;
        pos = found;
        return true;
    }

    bool enter_index(std::size_t index) {
        skip_ws();
        if (pos >= text.size() || text[pos] != '[') return false;
        ++pos;
        for (std::size_t k = 0;; ++k) {
            skip_ws();
            if (text[pos] == ']') return false;
            if (k == index) return true;
            skip_value();
            skip_ws();
            if (text[pos++] == ']') return false;
        }
    }
};

[[noreturn]] void fail_at(std::string_view text, const std::vector<PathStep>& path, const std::string& message) {
    const Position p = position_of(text, locate(text, path));
    throw ParseError(message, p.line, p.column);
}

std::string path_string(const std::vector<PathStep>& path) {
    std::string out;
    for (const auto& step : path) {
        if (const auto* key = std::get_if<std::string>(&step)) {
            out += "/" + *key;
        } else {
            out += "/" + std::to_string(std::get<std::size_t>(step));
        }
    }
    return out;
}

std::int64_t read_integer(std::string_view text, const json& value, const std::vector<PathStep>& path,
                          std::int64_t lo, std::int64_t hi) {
    if (!value.is_number_integer()) fail_at(text, path, path_string(path) + ": expected an integer");
    std::int64_t v = 0;
    if (value.is_number_unsigned()) {
        const auto u = value.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(hi)) fail_at(text, path, path_string(path) + ": value out of range");
        v = static_cast<std::int64_t>(u);
    } else {
        v = value.get<std::int64_t>();
    }
    if (v < lo || v > hi) {
        fail_at(text, path,
                path_string(path) + ": value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
    }
    return v;
}

const json& member(std::string_view text, const json& object, const std::vector<PathStep>& path,
                   const std::string& key) {
    auto it = object.find(key);
    if (it == object.end()) fail_at(text, path, (path.empty() ? std::string("document") : path_string(path)) +
                                                    ": missing key \"" + key + "\"");
    return *it;
}

} // namespace

std::size_t locate(std::string_view text, const std::vector<PathStep>& path) {
    Scanner s{text};
    s.skip_ws();
    for (const auto& step : path) {
        const std::size_t before = s.pos;
        bool ok = false;
        if (const auto* key = std::get_if<std::string>(&step)) {
            ok = s.enter_key(*key);
        } else {
            ok = s.enter_index(std::get<std::size_t>(step));
        }
        if (!ok) return before;
        s.skip_ws();
    }
    return s.pos;
}

Position position_of(std::string_view text, std::size_t offset) {
    Position p;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

PolyMap parse(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte is 1-based and points just past the offending character.
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        const Position p = position_of(text, offset);
        // Drop the library's own "[json.exception...] parse error at ...:" prefix.
        std::string reason = e.what();
        if (auto at = reason.find("syntax error"); at != std::string::npos) reason = reason.substr(at);
        throw ParseError("invalid JSON: " + reason, p.line, p.column);
    }
    if (!doc.is_object()) fail_at(text, {}, "document: expected an object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "n" && key != "d" && key != "components") fail_at(text, {key}, "unknown key \"" + key + "\"");
    }

    const auto n = static_cast<std::size_t>(
        read_integer(text, member(text, doc, {}, "n"), {"n"}, 1, static_cast<std::int64_t>(kMaxDimension)));
    const auto d = static_cast<int>(read_integer(text, member(text, doc, {}, "d"), {"d"}, 1, kMaxExponent));
    const json& comps = member(text, doc, {}, "components");
    if (!comps.is_array()) fail_at(text, {"components"}, "/components: expected an array");
    if (comps.size() != n) {
        fail_at(text, {"components"}, "/components: expected " + std::to_string(n) + " components, found " +
                                          std::to_string(comps.size()));
    }

    std::vector<Polynomial> components;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<PathStep> cpath{"components", i};
        const json& terms = comps[i];
        if (!terms.is_array()) fail_at(text, cpath, path_string(cpath) + ": expected an array of terms");
        Polynomial p(n);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            std::vector<PathStep> tpath = cpath;
            tpath.emplace_back(t);
            const json& term = terms[t];
            if (!term.is_object()) fail_at(text, tpath, path_string(tpath) + ": expected a term object");
            for (const auto& [key, value] : term.items()) {
                if (key != "coeff" && key != "exps") {
                    auto kpath = tpath;
                    kpath.emplace_back(key);
                    fail_at(text, kpath, path_string(tpath) + ": unknown key \"" + key + "\"");
                }
            }
            auto coeff_path = tpath;
            coeff_path.emplace_back(std::string("coeff"));
            auto exps_path = tpath;
            exps_path.emplace_back(std::string("exps"));

            const json& coeff_json = member(text, term, tpath, "coeff");
            if (!coeff_json.is_string()) {
                fail_at(text, coeff_path, path_string(coeff_path) + ": coefficient must be a string such as \"3/4\"");
            }
            Rational coeff;
            try {
                coeff = parse_rational(coeff_json.get<std::string>());
            } catch (const DomainError& e) {
                fail_at(text, coeff_path, path_string(coeff_path) + ": " + e.what());
            }

            const json& exps_json = member(text, term, tpath, "exps");
            if (!exps_json.is_array()) fail_at(text, exps_path, path_string(exps_path) + ": expected an array");
            if (exps_json.size() != n) {
                fail_at(text, exps_path, path_string(exps_path) + ": expected " + std::to_string(n) +
                                             " exponents, found " + std::to_string(exps_json.size()));
            }
            std::vector<std::uint32_t> exps;
            std::int64_t degree = 0;
            for (std::size_t k = 0; k < n; ++k) {
                auto epath = exps_path;
                epath.emplace_back(k);
                const auto e = read_integer(text, exps_json[k], epath, 0, kMaxExponent);
                exps.push_back(static_cast<std::uint32_t>(e));
                degree += e;
            }
            if (sgn(coeff) == 0) continue;
            if (degree == 0) fail_at(text, exps_path, path_string(tpath) + ": constant terms are not allowed");
            if (degree > d) {
                fail_at(text, exps_path, path_string(tpath) + ": degree " + std::to_string(degree) +
                                             " exceeds d = " + std::to_string(d));
            }
            p.add_term(Monomial(std::move(exps)), coeff);
        }
        components.push_back(std::move(p));
    }
    return PolyMap(n, d, std::move(components));
}

PolyMap read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string write(const PolyMap& map) {
    std::string out = "{\n  \"components\": [";
    for (std::size_t i = 0; i < map.n(); ++i) {
        out += i ? ",\n    [" : "\n    [";
        const auto& terms = map.components()[i].terms();
        bool first = true;
        for (const auto& [m, c] : terms) {
            out += first ? "\n      " : ",\n      ";
            first = false;
            out += "{\"coeff\": \"" + rational_to_string(c) + "\", \"exps\": [";
            for (std::size_t k = 0; k < m.dim(); ++k) {
                if (k) out += ", ";
                out += std::to_string(m[k]);
            }
            out += "]}";
        }
        out += terms.empty() ? "]" : "\n    ]";
    }
    out += "\n  ],\n  \"d\": " + std::to_string(map.d()) + ",\n  \"n\": " + std::to_string(map.n()) + "\n}\n";
    return out;
}

void write_file(const std::string& path, const PolyMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << write(map);
    if (!out) throw Error("failed writing " + path);
}

} // namespace keller::mapfile
