#pragma once

#include <filesystem>

#include "json.hpp"
#include "typlab/report.hpp"

namespace typlab::harness {

/// Lossless JSON form: doubles keep every bit, non-finite values are
/// written as the strings "inf", "-inf" and "nan".
nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

void save_report(const std::filesystem::path& path, const ExperimentReport& report);
ExperimentReport load_report(const std::filesystem::path& path);

}  // namespace typlab::harness
