#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "activeft/experiments.hpp"
#include "activeft/metrics.hpp"
#include "activeft/optimizer.hpp"

// Report serialization.  All documents are JSON with sorted keys and carry
// schema_version 1; identical inputs serialize to identical bytes.

namespace activeft::report {

inline constexpr int kSchemaVersion = 1;

nlohmann::json config_json(const optimizer::OptimizerConfig& config);
nlohmann::json loss_json(const optimizer::LossBreakdown& loss);
nlohmann::json diagnostics_json(const metrics::DiagnosticsReport& report);
nlohmann::json comparison_json(const experiments::ComparisonTable& table);
nlohmann::json ablation_json(const experiments::AblationTable& table);

// FNV-1a over a canonical rendering of the producing configuration.
std::string config_digest(const std::string& method, uint32_t b,
                          const optimizer::OptimizerConfig& config);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Indices files: ascending zero-based indices, one per line, trailing newline.
void write_indices(const std::filesystem::path& path, const std::vector<uint32_t>& indices);
std::vector<uint32_t> read_indices(const std::filesystem::path& path);

}  // namespace activeft::report
