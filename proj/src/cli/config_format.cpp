#include "ttlab/cli/config_format.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ttlab::cli {
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

bool valid_key(std::string_view k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!is_key_char(k[i])) return false;
        if (k[i] == '.' && i + 1 < k.size() && k[i + 1] == '.') return false;
    }
    return true;
}

[[noreturn]] void fail(const SourceLocation& at, const std::string& what) {
    throw ConfigError(what, at.source, at.line);
}

/// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted && c == '\\') {
            ++i;
        } else if (c == '"') {
            quoted = !quoted;
        } else if (c == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

/// Reads a quoted string starting at s[pos] == '"'; advances pos past it.
std::string read_quoted(std::string_view s, std::size_t& pos, const SourceLocation& at) {
    std::string out;
    ++pos;
    while (pos < s.size()) {
        const char c = s[pos++];
        if (c == '"') return out;
        if (c == '\\') {
            if (pos >= s.size()) break;
            const char e = s[pos++];
            switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail(at, std::string("unknown escape '\\") + e + "'");
            }
        } else {
            out += c;
        }
    }
    fail(at, "unterminated string");
}

std::string canonical_number(const std::string& s) {
    if (s.empty()) return s;
    const char* b = s.data();
    const char* e = b + s.size();
    long long i = 0;
    auto ri = std::from_chars(b, e, i);
    if (ri.ec == std::errc{} && ri.ptr == e) return std::to_string(i);
    double d = 0.0;
    auto rd = std::from_chars(b, e, d);
    if (rd.ec == std::errc{} && rd.ptr == e) {
        char buf[64];
        auto w = std::to_chars(buf, buf + sizeof buf, d);
        return std::string(buf, w.ptr);
    }
    return s;
}

bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    if (std::isspace(static_cast<unsigned char>(s.front())) || std::isspace(static_cast<unsigned char>(s.back())))
        return true;
    for (char c : s) {
        if (c == '"' || c == '#' || c == '[' || c == ']' || c == ',' || c == '\\' || c == '\n' || c == '\t')
            return true;
    }
    return false;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

std::string write_scalar(const std::string& s) {
    const std::string c = canonical_number(s);
    return needs_quotes(c) ? quote(c) : c;
}

struct Parser {
    const ParseOptions& options;
    std::vector<std::string> stack;  // canonical include chain, for cycle detection
    ConfigDoc doc;

    void parse(std::string_view text, const std::string& source, const fs::path& base) {
        std::string section;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t nl = text.find('\n', pos);
            std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line_no;
            const SourceLocation at{source, line_no};
            std::string_view line = trim(strip_comment(raw));
            if (line.empty()) continue;

            if (line.front() == '[') {
                if (line.back() != ']') fail(at, "section header missing ']'");
                std::string_view name = trim(line.substr(1, line.size() - 2));
                if (!name.empty() && !valid_key(name)) fail(at, "invalid section name '" + std::string(name) + "'");
                section = std::string(name);
                continue;
            }

            if (line.rfind("include", 0) == 0 && line.size() > 7 && std::isspace(static_cast<unsigned char>(line[7]))) {
                include(trim(line.substr(7)), at, base);
                continue;
            }

            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos) fail(at, "expected 'key = value'");
            std::string_view key = trim(line.substr(0, eq));
            if (!valid_key(key)) fail(at, "invalid key '" + std::string(key) + "'");
            std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
            doc.set(full, parse_value(line.substr(eq + 1), at));
        }
    }

    void include(std::string_view target, const SourceLocation& at, const fs::path& base) {
        if (target.empty()) fail(at, "include needs a preset name or a quoted path");
        fs::path path;
        if (target.front() == '"') {
            std::size_t p = 0;
            const std::string rel = read_quoted(target, p, at);
            if (!trim(target.substr(p)).empty()) fail(at, "unexpected text after include path");
            path = fs::path(rel);
            if (path.is_relative()) path = base / path;
        } else {
            const std::string name(target);
            if (!valid_key(name)) fail(at, "invalid preset name '" + name + "'");
            for (const auto& dir : options.preset_dirs) {
                const fs::path candidate = dir / (name + ".cfg");
                if (fs::exists(candidate)) {
                    path = candidate;
                    break;
                }
            }
            if (path.empty()) fail(at, "unknown preset '" + name + "'");
        }
        std::error_code ec;
        const fs::path canon = fs::weakly_canonical(path, ec);
        const std::string id = ec ? path.string() : canon.string();
        for (const auto& s : stack) {
            if (s == id) fail(at, "include cycle through '" + path.string() + "'");
        }
        if (static_cast<int>(stack.size()) >= options.max_include_depth) fail(at, "includes nested too deeply");
        std::ifstream in(path, std::ios::binary);
        if (!in) fail(at, "cannot open include '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        stack.push_back(id);
        parse(ss.str(), path.string(), path.parent_path());
        stack.pop_back();
    }
};

}  // namespace

ConfigValue ConfigValue::of(std::string s, SourceLocation where) {
    ConfigValue v;
    v.scalar = std::move(s);
    v.where = std::move(where);
    return v;
}

ConfigValue ConfigValue::list(std::vector<std::string> items, SourceLocation where) {
    ConfigValue v;
    v.is_list = true;
    v.items = std::move(items);
    v.where = std::move(where);
    return v;
}

void ConfigDoc::set(const std::string& key, ConfigValue value) {
    if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'", value.where.source, value.where.line);
    entries_[key] = std::move(value);
}

const ConfigValue& ConfigDoc::at(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

ConfigDoc ConfigDoc::subtree(const std::string& prefix) const {
    ConfigDoc out;
    const std::string p = prefix + ".";
    for (auto it = entries_.lower_bound(p); it != entries_.end() && it->first.rfind(p, 0) == 0; ++it) {
        out.entries_[it->first.substr(p.size())] = it->second;
    }
    return out;
}

void ConfigDoc::merge(const ConfigDoc& other, const std::string& prefix) {
    for (const auto& [k, v] : other.entries_) entries_[prefix.empty() ? k : prefix + "." + k] = v;
}

std::string ConfigDoc::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        if (v.is_list) {
            out += '[';
            for (std::size_t i = 0; i < v.items.size(); ++i) {
                if (i) out += ", ";
                out += write_scalar(v.items[i]);
            }
            out += ']';
        } else {
            out += write_scalar(v.scalar);
        }
        out += '\n';
    }
    return out;
}

std::uint64_t ConfigDoc::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : serialize()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_hash(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 0xf];
    return s;
}

std::string ConfigDoc::hash_hex() const { return format_hash(hash()); }

ConfigValue parse_value(std::string_view text, const SourceLocation& where) {
    text = trim(text);
    if (text.empty()) fail(where, "missing value");
    if (text.front() == '[') {
        if (text.back() != ']') fail(where, "list missing ']'");
        std::string_view body = trim(text.substr(1, text.size() - 2));
        std::vector<std::string> items;
        std::size_t p = 0;
        while (p < body.size()) {
            while (p < body.size() && std::isspace(static_cast<unsigned char>(body[p]))) ++p;
            if (p >= body.size()) fail(where, "trailing ',' in list");
            std::string item;
            if (body[p] == '"') {
                item = read_quoted(body, p, where);
                while (p < body.size() && std::isspace(static_cast<unsigned char>(body[p]))) ++p;
            } else {
                const std::size_t end = body.find(',', p);
                std::string_view raw = trim(body.substr(p, end == std::string_view::npos ? std::string_view::npos : end - p));
                if (raw.empty()) fail(where, "empty list item");
                if (raw.find_first_of("[]\"") != std::string_view::npos) fail(where, "nested lists are not supported");
                item = std::string(raw);
                p = end == std::string_view::npos ? body.size() : end;
            }
            items.push_back(std::move(item));
            if (p < body.size()) {
                if (body[p] != ',') fail(where, "expected ',' between list items");
                ++p;
                if (trim(body.substr(p)).empty()) fail(where, "trailing ',' in list");
            }
        }
        return ConfigValue::list(std::move(items), where);
    }
    if (text.front() == '"') {
        std::size_t p = 0;
        std::string s = read_quoted(text, p, where);
        if (!trim(text.substr(p)).empty()) fail(where, "unexpected text after string");
        return ConfigValue::of(std::move(s), where);
    }
    if (text.find_first_of("[]\"") != std::string_view::npos) fail(where, "unexpected character in value");
    return ConfigValue::of(std::string(text), where);
}

std::vector<fs::path> default_preset_dirs() {
    std::vector<fs::path> dirs;
    if (const char* env = std::getenv("TTLAB_PRESET_DIR")) {
        std::string_view s(env);
        while (!s.empty()) {
            const std::size_t c = s.find(':');
            const std::string_view part = s.substr(0, c);
            if (!part.empty()) dirs.emplace_back(std::string(part));
            if (c == std::string_view::npos) break;
            s.remove_prefix(c + 1);
        }
    }
#ifdef TTLAB_PRESET_DIR
    dirs.emplace_back(TTLAB_PRESET_DIR);
#endif
    return dirs;
}

ConfigDoc parse_config(std::string_view text, const std::string& source, const ParseOptions& options) {
    Parser p{options, {}, {}};
    p.parse(text, source, options.base_dir);
    return std::move(p.doc);
}

ConfigDoc load_config(const fs::path& path, ParseOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (options.base_dir.empty()) options.base_dir = path.parent_path();
    Parser p{options, {}, {}};
    std::error_code ec;
    const fs::path canon = fs::weakly_canonical(path, ec);
    p.stack.push_back(ec ? path.string() : canon.string());
    p.parse(ss.str(), path.string(), options.base_dir);
    return std::move(p.doc);
}

ConfigDoc load_preset(const std::string& name, const ParseOptions& options) {
    return parse_config("include " + name + "\n", "<preset " + name + ">", options);
}

void apply_override(ConfigDoc& doc, std::string_view assignment, const std::string& source) {
    const SourceLocation at{source, 0};
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos) fail(at, "override must be key=value");
    const std::string key(trim(assignment.substr(0, eq)));
    if (!valid_key(key)) fail(at, "invalid key '" + key + "'");
    doc.set(key, parse_value(assignment.substr(eq + 1), at));
}

void apply_env_overrides(ConfigDoc& doc, char** environ_block) {
    if (!environ_block) return;
    for (char** e = environ_block; *e; ++e) {
        std::string_view entry(*e);
        if (entry.rfind(kEnvOverridePrefix, 0) != 0) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string_view::npos) continue;
        std::string name(entry.substr(kEnvOverridePrefix.size(), eq - kEnvOverridePrefix.size()));
        std::string key;
        for (std::size_t i = 0; i < name.size(); ++i) {
            if (name[i] == '_' && i + 1 < name.size() && name[i + 1] == '_') {
                key += '.';
                ++i;
            } else {
                key += name[i];
            }
        }
        const std::string source = "environment " + std::string(entry.substr(0, eq));
        if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'", source);
        doc.set(key, parse_value(entry.substr(eq + 1), {source, 0}));
    }
}

}  // namespace ttlab::cli
