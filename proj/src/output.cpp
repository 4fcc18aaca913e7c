#include "heatchain/output.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

namespace heatchain {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
    return {buf.data(), ptr};
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

nlohmann::json chain_params_json(const ChainParams& p) {
    return {{"n_sites", p.n_sites},     {"mass", p.mass},          {"omega0", p.omega0},
            {"xi", p.xi},               {"lattice_const", p.lattice_const},
            {"lambda", p.lambda_fric},  {"gamma", p.gamma_fric},   {"hbar", p.hbar},
            {"k_boltz", p.k_boltz},     {"bath_temp", p.bath_temp}};
}

RunReport::RunReport(std::string subcommand) {
    doc_["subcommand"] = std::move(subcommand);
    doc_["status"] = "ok";
    doc_["summary"] = nlohmann::json::object();
    doc_["artifacts"] = nlohmann::json::array();
    doc_["provenance"] = {{"version", kVersion}, {"started_at", utc_timestamp()}};
}

void RunReport::metric(const std::string& name, double value, const std::string& criterion) {
    metric(name, nlohmann::json(value), criterion);
}

void RunReport::metric(const std::string& name, const nlohmann::json& value, const std::string& criterion) {
    doc_["summary"][name] = {{"value", value}, {"criterion", criterion}};
}

void RunReport::echo_config(const std::map<std::string, std::string>& raw, const ChainParams& resolved) {
    doc_["provenance"]["config"] = raw;
    doc_["provenance"]["resolved_chain"] = chain_params_json(resolved);
}

void RunReport::artifact(const std::string& path) { doc_["artifacts"].push_back(path); }

void RunReport::set_status(bool ok) { doc_["status"] = ok ? "ok" : "failed"; }

void RunReport::write(const std::string& path) {
    doc_["provenance"]["finished_at"] = utc_timestamp();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << doc_.dump(2) << '\n';
}

nlohmann::json error_record(const std::string& kind, const std::string& message,
                            const std::vector<std::string>& issues) {
    return {{"error", {{"kind", kind}, {"message", message}, {"issues", issues}}}};
}

}  // namespace heatchain
