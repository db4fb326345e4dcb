#ifndef DWIG_CONFIG_HPP
#define DWIG_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "dwig/errors.hpp"

namespace dwig {

/// Plain-text `key = value` files: one assignment per line, `#` starts
/// a comment, blank lines ignored. Keys are consumed by the typed
/// getters; finish() rejects anything left over, so typos surface as
/// errors instead of silently using defaults.
class ConfigFile {
public:
    static ConfigFile load(const std::string& path);
    static ConfigFile from_string(const std::string& text,
                                  const std::string& name = "<string>");

    const std::string& path() const { return path_; }

    bool has(const std::string& key) const;

    double require_double(const std::string& key);
    double get_double(const std::string& key, double fallback);
    long require_int(const std::string& key);
    long get_int(const std::string& key, long fallback);
    std::string require_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& fallback);

    /// Numeric value or the word "auto"; returns true when auto.
    bool get_auto_or_double(const std::string& key, double& out, double fallback,
                            bool fallback_auto);

    /// Whitespace- or comma-separated list of numbers.
    std::vector<double> get_double_list(const std::string& key);

    /// All stored keys sharing a prefix, in file order (consumed or not).
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    /// Throws ConfigError naming every key that was never consumed.
    void finish() const;

private:
    std::string path_;
    std::vector<std::string> order_;
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> used_;

    std::string take(const std::string& key);
    double parse_double(const std::string& key, const std::string& raw) const;
};

} // namespace dwig

#endif
