#include "ufix/family_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ufix {

using nlohmann::json;

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : ValidationError(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Byte offset of the '[' opening rules[rule][offset] (offset < 0: the rule
// itself), found by bracket depth after the "rules" key. npos if not found.
std::size_t locate(const std::string& text, std::size_t rule, long offset) {
    const auto key = text.find("\"rules\"");
    if (key == std::string::npos) return std::string::npos;
    int depth = 0;
    long rule_idx = -1, off_idx = -1;
    bool in_string = false;
    for (std::size_t i = key + 7; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '[') {
            ++depth;
            if (depth == 2) {
                ++rule_idx;
                off_idx = -1;
                if (offset < 0 && rule_idx == static_cast<long>(rule)) return i;
            } else if (depth == 3) {
                ++off_idx;
                if (rule_idx == static_cast<long>(rule) && off_idx == offset) return i;
            }
        } else if (c == ']') {
            if (--depth == 0) break;
        }
    }
    return std::string::npos;
}

[[noreturn]] void fail_at(const std::string& text, std::size_t pos, const std::string& msg) {
    if (pos == std::string::npos) throw ParseError(msg, 0, 0);
    const auto [l, c] = line_column(text, pos);
    throw ParseError(msg, l, c);
}

}  // namespace

UpdateFamily parse_family(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [l, c] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("malformed family document: ") + e.what(), l, c);
    }
    if (!doc.is_object()) fail_at(text, 0, "family document must be an object");
    if (!doc.contains("rules") || !doc["rules"].is_array())
        fail_at(text, 0, "family document needs a \"rules\" array");
    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail_at(text, text.find("\"name\""), "\"name\" must be a string");
        name = doc["name"].get<std::string>();
    }

    std::vector<Rule> rules;
    const auto& arr = doc["rules"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& r = arr[i];
        if (!r.is_array() || r.empty()) fail_at(text, locate(text, i, -1), "rule must be a non-empty list of [dx,dy]");
        std::vector<LatticeVector> offs;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const auto& v = r[j];
            const auto where = locate(text, i, static_cast<long>(j));
            if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
                fail_at(text, where, "offset must be a two-element integer list");
            const LatticeVector p{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
            if (p.is_zero()) fail_at(text, where, "offset [0,0] is not allowed");
            for (const auto& q : offs)
                if (q == p) fail_at(text, where, "duplicate offset in rule");
            offs.push_back(p);
        }
        Rule rule(std::move(offs));
        for (std::size_t k = 0; k < rules.size(); ++k)
            if (rules[k] == rule)
                fail_at(text, locate(text, i, -1), "rule " + std::to_string(i) + " duplicates rule " + std::to_string(k));
        rules.push_back(std::move(rule));
    }
    if (rules.empty()) fail_at(text, locate(text, 0, -1), "family needs at least one rule");
    return UpdateFamily(std::move(rules), name);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

UpdateFamily load_family(const std::string& path) {
    auto f = parse_family(read_text_file(path));
    if (f.name().empty()) f.set_name(std::filesystem::path(path).stem().string());
    return f;
}

UpdateFamily resolve_family(const std::string& name_or_path) {
    for (const auto& n : catalog::names())
        if (n == name_or_path) return catalog::by_name(name_or_path);
    return load_family(name_or_path);
}

std::string family_to_json(const UpdateFamily& family) {
    // One rule per line keeps the files diff-friendly.
    std::ostringstream os;
    os << "{\n  \"name\": " << json(family.name()).dump() << ",\n  \"rules\": [\n";
    for (std::size_t i = 0; i < family.m(); ++i) {
        os << "    [";
        const auto& r = family.rule(i);
        for (std::size_t j = 0; j < r.size(); ++j)
            os << (j ? ", " : "") << '[' << r.offsets()[j].x << ", " << r.offsets()[j].y << ']';
        os << ']' << (i + 1 < family.m() ? "," : "") << '\n';
    }
    os << "  ]\n}\n";
    return os.str();
}

std::vector<LatticeVector> parse_seed_points(const std::string& text) {
    std::vector<LatticeVector> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::int64_t x, y;
        if (!(ls >> x)) {
            ls.clear();
            std::string rest;
            if (ls >> rest) throw ParseError("expected 'x y' integer pair", lineno, 1);
            continue;
        }
        if (!(ls >> y)) throw ParseError("expected 'x y' integer pair", lineno, 1);
        std::string extra;
        if (ls >> extra) throw ParseError("trailing text after 'x y'", lineno, 1);
        out.push_back({x, y});
    }
    return out;
}

std::vector<LatticeVector> load_seed_points(const std::string& path) {
    return parse_seed_points(read_text_file(path));
}

}  // namespace ufix
