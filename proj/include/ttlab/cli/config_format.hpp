#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ttlab/core/errors.hpp"

namespace ttlab::cli {

/// Where a key was last assigned.
struct SourceLocation {
    std::string source;
    int line = 0;
};

/// A scalar or a flat list of scalars, kept as text until bound.
struct ConfigValue {
    bool is_list = false;
    std::string scalar;
    std::vector<std::string> items;
    SourceLocation where;

    static ConfigValue of(std::string s, SourceLocation where = {});
    static ConfigValue list(std::vector<std::string> items, SourceLocation where = {});
};

/// Flat dotted-key configuration. Later assignments replace earlier ones.
class ConfigDoc {
public:
    void set(const std::string& key, ConfigValue value);
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const ConfigValue& at(const std::string& key) const;
    void erase(const std::string& key) { entries_.erase(key); }
    const std::map<std::string, ConfigValue>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// Keys starting with `prefix.`, with the prefix stripped.
    ConfigDoc subtree(const std::string& prefix) const;
    /// Copies every entry of `other` over this one, prefixing keys.
    void merge(const ConfigDoc& other, const std::string& prefix = {});

    /// One `key = value` line per entry, keys sorted, numbers in shortest
    /// round-trip form. Parsing the output gives back the same document.
    std::string serialize() const;
    /// 64-bit FNV-1a over serialize().
    std::uint64_t hash() const;
    std::string hash_hex() const;

private:
    std::map<std::string, ConfigValue> entries_;
};

struct ParseOptions {
    /// Searched in order for `include name` fragments (`name.cfg`).
    std::vector<std::filesystem::path> preset_dirs;
    /// Base for quoted relative include paths.
    std::filesystem::path base_dir;
    int max_include_depth = 16;
};

/// Preset search path: $TTLAB_PRESET_DIR (colon separated) then the
/// directory installed with the sources.
std::vector<std::filesystem::path> default_preset_dirs();

/// Grammar, one statement per line:
///   # comment
///   [section]              prefixes following keys; [] clears
///   include name           named preset fragment
///   include "path.cfg"     file relative to the including file
///   key = value            value: bare text, "quoted", or [a, b, "c"]
ConfigDoc parse_config(std::string_view text, const std::string& source, const ParseOptions& options = {});
ConfigDoc load_config(const std::filesystem::path& path, ParseOptions options = {});
ConfigDoc load_preset(const std::string& name, const ParseOptions& options = {});

/// Parses a single value with the file grammar.
ConfigValue parse_value(std::string_view text, const SourceLocation& where);

/// Applies `key=value`.
void apply_override(ConfigDoc& doc, std::string_view assignment, const std::string& source);

inline constexpr std::string_view kEnvOverridePrefix = "TTLAB__";
/// Every environment variable TTLAB__a__b=value sets key a.b.
void apply_env_overrides(ConfigDoc& doc, char** environ_block);

std::string format_hash(std::uint64_t h);

}  // namespace ttlab::cli
