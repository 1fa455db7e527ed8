#pragma once

#include <json.hpp>

#include "ido/domain.hpp"

namespace ido {

// nlohmann ADL hooks for the schema types; the JSON layout is the schema's
// on-disk interchange format.
void to_json(nlohmann::json& j, const DimSpec& spec);
void from_json(const nlohmann::json& j, DimSpec& spec);
void to_json(nlohmann::json& j, const FeatureSchema& schema);
void from_json(const nlohmann::json& j, FeatureSchema& schema);

nlohmann::json to_json_array(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);
nlohmann::json to_json_array(const Matrix& m);  // row-major nested arrays
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace ido
