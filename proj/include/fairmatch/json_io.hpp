#pragma once

#include <filesystem>
#include <string>

#include "fairmatch/instance.hpp"
#include "json.hpp"

namespace fairmatch {

// Instance schema:
//   {"drivers": [{"id", "quota", "group"?}],
//    "request_types": [{"id", "rate", "group"?}],
//    "edges": [{"u", "v", "p", "w"}],
//    "horizon": int}
// Edge endpoints are string ids. Parsing throws std::runtime_error on
// structural problems (missing keys, unknown ids); value-level problems are
// left for validate_instance.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace fairmatch
