#pragma once

#include <string>

#include <json.hpp>

#include "reap/polarized.hpp"
#include "reap/property.hpp"

namespace reap {

// Flat record {i, h, j, leaves}; leaves in lexicographic path order.
nlohmann::json coloring_to_json(const Coloring& col);
Coloring coloring_from_json(const nlohmann::json& j);

// Flat record {n, m, k, entries}; entries row-major.
nlohmann::json pol_matrix_to_json(const PolMatrix& mat);
PolMatrix pol_matrix_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const PropertyQuery& query, const Verdict& v);

/// FNV-1a over the canonical serialization; used as the certificate id.
std::string content_id(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);   // throws std::runtime_error
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace reap
