#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace berngt {

/// Flat key=value run configuration ('#' starts a comment). Flags override
/// file entries; canonicalization (sorted keys, renormalized numbers)
/// makes the hash independent of formatting and entry order.
class RunConfigFile {
public:
    static RunConfigFile parse(const std::string& text);
    static RunConfigFile load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

    /// Sorted "key=value" lines with numeric values in shortest
    /// round-trip form.
    std::string canonical() const;
    uint64_t hash() const;

    /// Keys this tool understands; anything else is a validation error.
    static const std::vector<std::string>& known_keys();
    std::vector<std::string> unknown_keys() const;

private:
    std::map<std::string, std::string> entries_;
};

uint64_t fnv1a64(const std::string& data);

struct RunManifest {
    std::string tool_version;
    uint64_t config_hash = 0;
    uint64_t master_seed = 0;
    std::string created_utc;
    std::vector<std::string> outputs;

    std::string to_json() const;
    static RunManifest make(uint64_t config_hash, uint64_t master_seed,
                            std::vector<std::string> outputs);
};

} // namespace berngt
