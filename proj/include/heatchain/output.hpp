// Deterministic CSV emission and the JSON run report.

#pragma once

#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "heatchain/chain_model.hpp"

namespace heatchain {

// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(std::initializer_list<double> values);
    void row(const std::vector<double>& values);

private:
    std::ofstream out_;
    std::size_t columns_;
};

inline constexpr const char* kVersion = "0.1.0";

// summary: name -> {"value", "criterion"}; provenance: config echo, version,
// timestamps. See schemas/run_report.schema.json.
class RunReport {
public:
    explicit RunReport(std::string subcommand);

    void metric(const std::string& name, double value, const std::string& criterion = "informational");
    void metric(const std::string& name, const nlohmann::json& value,
                const std::string& criterion = "informational");
    void echo_config(const std::map<std::string, std::string>& raw, const ChainParams& resolved);
    void artifact(const std::string& path);
    void set_status(bool ok);

    const nlohmann::json& json() const { return doc_; }
    nlohmann::json& json() { return doc_; }

    // Stamps finished_at and writes pretty JSON.
    void write(const std::string& path);

private:
    nlohmann::json doc_;
};

nlohmann::json chain_params_json(const ChainParams& p);

// {"error": {"kind", "message", "issues"}} written to stderr and to
// <dir>/error.json when the directory exists.
nlohmann::json error_record(const std::string& kind, const std::string& message,
                            const std::vector<std::string>& issues = {});

std::string utc_timestamp();

}  // namespace heatchain
