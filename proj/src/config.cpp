#include "heatchain/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace heatchain {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream os;
    os << "configuration invalid:";
    for (const auto& i : issues) os << "\n  " << i;
    return os.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(const std::string& s) {
    const std::string t = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

struct ChainKey {
    const char* name;
    double ChainParams::*field;
    bool required;
};

const ChainKey kChainKeys[] = {
    {"mass", &ChainParams::mass, true},
    {"omega0", &ChainParams::omega0, true},
    {"xi", &ChainParams::xi, true},
    {"lattice_const", &ChainParams::lattice_const, true},
    {"lambda", &ChainParams::lambda_fric, true},
    {"gamma", &ChainParams::gamma_fric, true},
    {"hbar", &ChainParams::hbar, false},
    {"k_boltz", &ChainParams::k_boltz, false},
    {"bath_temp", &ChainParams::bath_temp, true},
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ScenarioConfig parse_config(const std::string& text, bool require_chain) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({std::string("syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")"});
    }

    ScenarioConfig cfg;
    std::vector<std::string> issues;
    const std::set<std::string> sections{"chain", "run", "meta"};
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            issues.push_back(name + ": keys must live in a [chain], [run] or [meta] section");
            continue;
        }
        if (!sections.count(name)) {
            issues.push_back(name + ": unknown section");
            continue;
        }
        for (const auto& [key, value] : node) cfg.raw[name + "." + key] = trim(value.data());
    }

    const auto chain = tree.get_child_optional("chain");
    if (!chain && require_chain) issues.emplace_back("chain: section missing");
    if (chain) {
        std::set<std::string> known{"n_sites"};
        for (const auto& k : kChainKeys) known.insert(k.name);
        for (const auto& [key, value] : *chain) {
            if (!known.count(key)) issues.push_back("chain." + key + ": unknown key");
        }
        if (const auto v = chain->get_optional<std::string>("n_sites")) {
            const auto n = to_integer(*v);
            if (!n || *n < 3 || *n > 1 << 16)
                issues.emplace_back("chain.n_sites: expected an integer >= 3");
            else
                cfg.chain.n_sites = static_cast<int>(*n);
        } else {
            issues.emplace_back("chain.n_sites: required key missing");
        }
        for (const auto& k : kChainKeys) {
            const auto v = chain->get_optional<std::string>(k.name);
            if (!v) {
                if (k.required) issues.push_back(std::string("chain.") + k.name + ": required key missing");
                continue;
            }
            const auto d = to_double(*v);
            if (!d) {
                issues.push_back(std::string("chain.") + k.name + ": not a number ('" + trim(*v) + "')");
                continue;
            }
            cfg.chain.*(k.field) = *d;
        }
        if (issues.empty()) {
            for (const auto& e : validation_errors(cfg.chain)) issues.push_back("chain: " + e);
        }
    }

    if (const auto run = tree.get_child_optional("run")) {
        for (const auto& [key, value] : *run) cfg.run[key] = trim(value.data());
    }
    if (const auto meta = tree.get_child_optional("meta")) {
        for (const auto& [key, value] : *meta) {
            if (key == "seed") {
                const auto s = to_integer(value.data());
                if (!s || *s < 0)
                    issues.emplace_back("meta.seed: expected a non-negative integer");
                else
                    cfg.seed = static_cast<std::uint64_t>(*s);
            } else if (key == "output_dir") {
                cfg.output_dir = trim(value.data());
            } else {
                issues.push_back("meta." + key + ": unknown key");
            }
        }
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

ScenarioConfig load_config(const std::string& path, bool require_chain) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), require_chain);
}

RunKeys::RunKeys(const ScenarioConfig& config) : config_(config) {
    for (const auto& [key, value] : config.run) used_[key] = false;
}

const std::string* RunKeys::find(const std::string& key) {
    const auto it = config_.run.find(key);
    if (it == config_.run.end()) return nullptr;
    used_[key] = true;
    return &it->second;
}

double RunKeys::number(const std::string& key, std::optional<double> fallback) {
    const std::string* v = find(key);
    if (!v) {
        if (!fallback) issues_.push_back("run." + key + ": required key missing");
        return fallback.value_or(0.0);
    }
    const auto d = to_double(*v);
    if (!d) {
        issues_.push_back("run." + key + ": not a number ('" + *v + "')");
        return fallback.value_or(0.0);
    }
    return *d;
}

int RunKeys::integer(const std::string& key, std::optional<int> fallback) {
    const std::string* v = find(key);
    if (!v) {
        if (!fallback) issues_.push_back("run." + key + ": required key missing");
        return fallback.value_or(0);
    }
    const auto i = to_integer(*v);
    if (!i) {
        issues_.push_back("run." + key + ": not an integer ('" + *v + "')");
        return fallback.value_or(0);
    }
    return static_cast<int>(*i);
}

std::string RunKeys::text(const std::string& key, std::optional<std::string> fallback) {
    const std::string* v = find(key);
    if (!v) {
        if (!fallback) issues_.push_back("run." + key + ": required key missing");
        return fallback.value_or(std::string{});
    }
    return *v;
}

std::string RunKeys::choice(const std::string& key, const std::vector<std::string>& allowed,
                            std::optional<std::string> fallback) {
    const std::string value = text(key, fallback);
    for (const auto& a : allowed)
        if (a == value) return value;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    issues_.push_back("run." + key + ": expected one of " + list + " ('" + value + "')");
    return fallback.value_or(allowed.front());
}

std::vector<int> RunKeys::integer_list(const std::string& key, std::optional<std::vector<int>> fallback) {
    const std::string* v = find(key);
    if (!v) {
        if (!fallback) issues_.push_back("run." + key + ": required key missing");
        return fallback.value_or(std::vector<int>{});
    }
    std::vector<int> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto i = to_integer(item);
        if (!i) {
            issues_.push_back("run." + key + ": not an integer list ('" + *v + "')");
            return fallback.value_or(std::vector<int>{});
        }
        out.push_back(static_cast<int>(*i));
    }
    return out;
}

void RunKeys::reject(const std::string& key, const std::string& why) { issues_.push_back("run." + key + ": " + why); }

void RunKeys::finish() {
    for (const auto& [key, used] : used_) {
        if (!used) issues_.push_back("run." + key + ": unknown key for this subcommand");
    }
    if (!issues_.empty()) throw ConfigError(issues_);
}

}  // namespace heatchain
