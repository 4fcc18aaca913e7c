// INI-style scenario configuration with [chain], [run] and
// [meta] sections.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatchain/chain_model.hpp"

namespace heatchain {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct ScenarioConfig {
    ChainParams chain;
    std::map<std::string, std::string> run;
    std::uint64_t seed{0};
    std::string output_dir{"."};
    // Every key exactly as read, section-qualified ("chain.mass").
    std::map<std::string, std::string> raw;
};

// Parses and validates. Throws ConfigError listing every offending key.
ScenarioConfig parse_config(const std::string& text, bool require_chain = true);
ScenarioConfig load_config(const std::string& path, bool require_chain = true);

// Typed access to [run] keys. Errors accumulate; finish() throws them all at
// once, including keys that were present but never read.
class RunKeys {
public:
    explicit RunKeys(const ScenarioConfig& config);

    double number(const std::string& key, std::optional<double> fallback = std::nullopt);
    int integer(const std::string& key, std::optional<int> fallback = std::nullopt);
    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
    std::string choice(const std::string& key, const std::vector<std::string>& allowed,
                       std::optional<std::string> fallback = std::nullopt);
    std::vector<int> integer_list(const std::string& key, std::optional<std::vector<int>> fallback = std::nullopt);

    // Records a failed range check for `key`.
    void reject(const std::string& key, const std::string& why);

    void finish();

private:
    const std::string* find(const std::string& key);

    const ScenarioConfig& config_;
    std::map<std::string, bool> used_;
    std::vector<std::string> issues_;
};

}  // namespace heatchain
