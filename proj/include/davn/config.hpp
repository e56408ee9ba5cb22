#pragma once

// Declarative run configuration. Every parameter has a key (also its INI
// name), a command-line flag (--key with '_' -> '-') and an environment
// variable (DAVN_KEY). Precedence: defaults < file < environment < flags.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "davn/scenario.hpp"

namespace davn::config {

inline constexpr std::string_view env_prefix = "DAVN_";

enum class Kind { integer, real, boolean, text, list };

struct Parameter {
    std::string_view section;
    std::string_view key;
    std::string_view default_value;
    Kind kind;
    std::string_view help;

    std::string flag() const;      ///< "--key-name"
    std::string env_name() const;  ///< "DAVN_KEY_NAME"
};

/// Every known parameter, grouped by section in file order.
const std::vector<Parameter>& parameters();

/// Finds a parameter by key; nullptr if unknown.
const Parameter* find(std::string_view key);

class Settings {
public:
    /// All parameters at their defaults.
    Settings();

    /// Throws ConfigError for unknown keys or values that do not parse as
    /// the parameter's kind.
    void set(std::string_view key, std::string value);
    const std::string& get(std::string_view key) const;

    long long integer(std::string_view key) const;
    double real(std::string_view key) const;
    bool boolean(std::string_view key) const;
    std::vector<double> reals(std::string_view key) const;

    /// INI-style file: `[section]` headers, `key = value` lines, `#` or `;`
    /// comments. Keys must sit under their own section.
    void apply_file(const std::filesystem::path& path);
    void apply_text(std::string_view text, std::string_view origin = "<config>");

    /// Entries of the form NAME=VALUE; names with the DAVN_ prefix must map
    /// to a known key.
    void apply_env(const std::vector<std::string>& environment);

    /// Renders a complete config file with every key.
    std::string render() const;

private:
    std::map<std::string, std::string, std::less<>> values_;
};

/// Builds the scenario configuration; throws ConfigError with the key name
/// when a value is out of its domain.
scenario::RunConfig to_run_config(const Settings& s);

/// Parses "1-2:3,2-4:1" (source-target:messages per step).
std::vector<scenario::D2dTransfer> parse_d2d(std::string_view text);

}  // namespace davn::config
