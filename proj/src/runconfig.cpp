#include "berngt/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "berngt/io.hpp"

namespace berngt {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

/// Numbers are renormalized (shortest round-trip); comma lists
/// element-wise; everything else passes through.
std::string normalize_value(const std::string& value) {
    auto normalize_scalar = [](const std::string& v) -> std::string {
        double d = 0.0;
        const char* begin = v.data();
        const char* end = v.data() + v.size();
        const auto res = std::from_chars(begin, end, d);
        if (res.ec == std::errc() && res.ptr == end) return format_full(d);
        return v;
    };
    if (value.find(',') == std::string::npos) return normalize_scalar(value);
    std::string out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t pos = value.find(',', start);
        const std::string part = trim(value.substr(start, pos - start));
        if (!out.empty()) out += ',';
        out += normalize_scalar(part);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

RunConfigFile RunConfigFile::parse(const std::string& text) {
    RunConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

RunConfigFile RunConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void RunConfigFile::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

bool RunConfigFile::has(const std::string& key) const { return entries_.count(key) > 0; }

const std::string& RunConfigFile::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw std::out_of_range("config key missing: " + key);
    return it->second;
}

std::string RunConfigFile::canonical() const {
    std::string out;  // std::map iterates keys in sorted order
    for (const auto& [key, value] : entries_) {
        out += key;
        out += '=';
        out += normalize_value(value);
        out += '\n';
    }
    return out;
}

uint64_t RunConfigFile::hash() const { return fnv1a64(canonical()); }

const std::vector<std::string>& RunConfigFile::known_keys() {
    static const std::vector<std::string> keys = {
        "n",     "k",       "p",       "nu",      "theta",          "decoders",
        "t_grid", "trials", "seed",    "threads", "sss_node_budget", "delta",
        "out_dir", "format", "level"};
    return keys;
}

std::vector<std::string> RunConfigFile::unknown_keys() const {
    std::vector<std::string> out;
    const auto& known = known_keys();
    for (const auto& [key, value] : entries_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) out.push_back(key);
    }
    return out;
}

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string RunManifest::to_json() const {
    char hash_hex[17];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash));
    const nlohmann::json doc{{"schema_version", kSchemaVersion},
                             {"tool_version", tool_version},
                             {"config_hash", hash_hex},
                             {"master_seed", master_seed},
                             {"created_utc", created_utc},
                             {"outputs", outputs}};
    return doc.dump(2);
}

RunManifest RunManifest::make(uint64_t config_hash, uint64_t master_seed,
                              std::vector<std::string> outputs) {
    RunManifest m;
    m.tool_version = kToolVersion;
    m.config_hash = config_hash;
    m.master_seed = master_seed;
    m.outputs = std::move(outputs);
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    m.created_utc = buf;
    return m;
}

} // namespace berngt
