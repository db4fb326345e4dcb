#include "dwig/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dwig {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

ConfigFile ConfigFile::from_string(const std::string& text, const std::string& name) {
    ConfigFile cfg;
    cfg.path_ = name;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << name << ":" << lineno << ": expected `key = value`";
            throw ConfigError(msg.str());
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << name << ":" << lineno << ": empty key";
            throw ConfigError(msg.str());
        }
        if (cfg.values_.count(key)) {
            throw ConfigError(name + ": duplicate key: " + key);
        }
        cfg.values_[key] = value;
        cfg.order_.push_back(key);
        cfg.used_[key] = false;
    }
    return cfg;
}

bool ConfigFile::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string ConfigFile::take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError(path_ + ": missing required key: " + key);
    }
    used_[key] = true;
    return it->second;
}

double ConfigFile::parse_double(const std::string& key, const std::string& raw) const {
    const std::string v = trim(raw);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError(path_ + ": key `" + key + "` is not a number: " + raw);
    }
    return out;
}

double ConfigFile::require_double(const std::string& key) {
    return parse_double(key, take(key));
}

double ConfigFile::get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return require_double(key);
}

long ConfigFile::require_int(const std::string& key) {
    const std::string v = trim(take(key));
    long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError(path_ + ": key `" + key + "` is not an integer: " + v);
    }
    return out;
}

long ConfigFile::get_int(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    return require_int(key);
}

std::string ConfigFile::require_string(const std::string& key) {
    const std::string v = take(key);
    if (v.empty()) {
        throw ConfigError(path_ + ": key `" + key + "` has an empty value");
    }
    return v;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return require_string(key);
}

bool ConfigFile::get_auto_or_double(const std::string& key, double& out, double fallback,
                                    bool fallback_auto) {
    if (!has(key)) {
        out = fallback;
        return fallback_auto;
    }
    const std::string v = take(key);
    if (trim(v) == "auto") return true;
    out = parse_double(key, v);
    return false;
}

std::vector<double> ConfigFile::get_double_list(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    std::string v = take(key);
    for (char& c : v) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) {
        out.push_back(parse_double(key, tok));
    }
    if (out.empty()) {
        throw ConfigError(path_ + ": key `" + key + "` holds an empty list");
    }
    return out;
}

std::vector<std::string> ConfigFile::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const std::string& k : order_) {
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    }
    return out;
}

void ConfigFile::finish() const {
    std::string unused;
    for (const std::string& k : order_) {
        if (!used_.at(k)) {
            if (!unused.empty()) unused += ", ";
            unused += k;
        }
    }
    if (!unused.empty()) {
        throw ConfigError(path_ + ": unknown key(s): " + unused);
    }
}

} // namespace dwig
