#include "ido/domain.hpp"

#include <cmath>
#include <sstream>

#include "ido/serialize.hpp"

namespace ido {

void validate(const FeatureSchema& schema) {
  const auto dim_count = static_cast<int>(schema.dims.size());
  std::vector<int> owner(schema.dims.size(), -1);
  for (int g = 0; g < static_cast<int>(schema.groups.size()); ++g) {
    const auto& group = schema.groups[g];
    if (group.empty()) {
      throw ConfigError("schema: group " + std::to_string(g) + " is empty");
    }
    for (int idx : group) {
      if (idx < 0 || idx >= dim_count) {
        throw ConfigError("schema: group " + std::to_string(g) +
                          " references dim " + std::to_string(idx) +
                          " outside [0, " + std::to_string(dim_count) + ")");
      }
      if (owner[idx] != -1) {
        throw ConfigError("schema: dim " + std::to_string(idx) +
                          " appears in more than one group");
      }
      owner[idx] = g;
    }
  }
  for (int i = 0; i < dim_count; ++i) {
    const DimSpec& d = schema.dims[i];
    const bool grouped = owner[i] != -1;
    if (grouped != (d.kind == DimKind::OneHot) ||
        (grouped && d.group != owner[i])) {
      throw ConfigError("schema: dim '" + d.name +
                        "' kind/group inconsistent with the group lists");
    }
    if (d.kind == DimKind::Numeric) {
      if (!(d.norm_std > 0.0)) {
        throw ConfigError("schema: numeric dim '" + d.name +
                          "' needs norm_std > 0");
      }
    } else if (d.norm_mean != 0.0 || d.norm_std != 1.0) {
      throw ConfigError("schema: one-hot dim '" + d.name +
                        "' must carry identity normalization");
    }
    if (const auto* fi = std::get_if<FixedInterval>(&d.constraint)) {
      if (!(fi->half_length > 0.0)) {
        throw ConfigError("schema: FixedInterval on dim '" + d.name +
                          "' needs half_length > 0");
      }
    }
  }
}

void validate(const BoxDomain& domain, const FeatureSchema& schema,
              double sigma_min) {
  if (domain.centers.size() != domain.half_lengths.size()) {
    throw ConfigError("domain: centers and half_lengths differ in length");
  }
  if (domain.dims() < 1) {
    throw ConfigError("domain: needs at least one dimension");
  }
  if (domain.dims() != schema.size()) {
    throw ConfigError("domain: dimension count " +
                      std::to_string(domain.dims()) +
                      " does not match schema size " +
                      std::to_string(schema.size()));
  }
  for (Eigen::Index i = 0; i < domain.dims(); ++i) {
    const double c = domain.centers[i];
    const double s = domain.half_lengths[i];
    if (!std::isfinite(c) || !std::isfinite(s)) {
      throw ConfigError("domain: non-finite entry at dim " + std::to_string(i));
    }
    const bool is_free = std::holds_alternative<Free>(
        schema.dims[static_cast<std::size_t>(i)].constraint);
    const double floor = is_free ? sigma_min : 0.0;
    if (!(s > 0.0) || s < floor) {
      throw ConfigError("domain: half_length " + std::to_string(s) +
                        " at dim " + std::to_string(i) + " below the floor");
    }
  }
}

void validate(const OptimizerConfig& config) {
  if (config.iterations < 1) throw ConfigError("config: iterations must be >= 1");
  if (config.sample_count < 2) throw ConfigError("config: sample_count must be >= 2");
  if (!(config.learning_rate > 0.0)) throw ConfigError("config: learning_rate must be > 0");
  if (!(config.sigma_min > 0.0)) throw ConfigError("config: sigma_min must be > 0");
  if (config.ridge < 0.0) throw ConfigError("config: ridge must be >= 0");
}

void validate(const PenaltyWeights& weights) {
  if (weights.lambda < 0 || weights.beta < 0 || weights.mu < 0 ||
      weights.omega < 0 || weights.gamma < 0) {
    throw ConfigError("penalty weights must be non-negative");
  }
}

std::vector<bool> free_mask(const FeatureSchema& schema) {
  std::vector<bool> mask(schema.dims.size());
  for (std::size_t i = 0; i < schema.dims.size(); ++i) {
    mask[i] = std::holds_alternative<Free>(schema.dims[i].constraint);
  }
  return mask;
}

BoxDomain apply_constraints(BoxDomain domain, const FeatureSchema& schema,
                            double sigma_min) {
  if (domain.centers.size() != domain.half_lengths.size() ||
      domain.dims() != schema.size()) {
    throw ConfigError("apply_constraints: domain/schema dimension mismatch");
  }
  for (Eigen::Index i = 0; i < domain.dims(); ++i) {
    const auto& constraint = schema.dims[static_cast<std::size_t>(i)].constraint;
    if (const auto* fv = std::get_if<FixedValue>(&constraint)) {
      domain.centers[i] = fv->value;
      domain.half_lengths[i] = sigma_min;
    } else if (const auto* fi = std::get_if<FixedInterval>(&constraint)) {
      domain.centers[i] = fi->center;
      domain.half_lengths[i] = fi->half_length;
    }
  }
  return domain;
}

FeatureSchema numeric_schema(Eigen::Index dims) {
  FeatureSchema schema;
  schema.dims.reserve(static_cast<std::size_t>(dims));
  for (Eigen::Index i = 0; i < dims; ++i) {
    DimSpec spec;
    spec.name = "x" + std::to_string(i);
    schema.dims.push_back(std::move(spec));
  }
  return schema;
}

namespace {

using nlohmann::json;

json constraint_to_json(const DimConstraint& c) {
  json j;
  if (std::holds_alternative<Free>(c)) {
    j["type"] = "Free";
  } else if (const auto* fv = std::get_if<FixedValue>(&c)) {
    j["type"] = "FixedValue";
    j["value"] = fv->value;
  } else {
    const auto& fi = std::get<FixedInterval>(c);
    j["type"] = "FixedInterval";
    j["center"] = fi.center;
    j["half_length"] = fi.half_length;
  }
  return j;
}

DimConstraint constraint_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "Free") return Free{};
  if (type == "FixedValue") return FixedValue{j.at("value").get<double>()};
  if (type == "FixedInterval") {
    return FixedInterval{j.at("center").get<double>(),
                         j.at("half_length").get<double>()};
  }
  throw ConfigError("schema: unknown constraint type '" + type + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const DimSpec& spec) {
  json kind;
  if (spec.kind == DimKind::Numeric) {
    kind["type"] = "Numeric";
  } else {
    kind["type"] = "OneHot";
    kind["group"] = spec.group;
  }
  j = json{{"name", spec.name},
           {"kind", kind},
           {"norm_mean", spec.norm_mean},
           {"norm_std", spec.norm_std},
           {"constraint", constraint_to_json(spec.constraint)}};
}

void from_json(const nlohmann::json& j, DimSpec& spec) {
  spec.name = j.at("name").get<std::string>();
  const auto& kind = j.at("kind");
  const std::string type = kind.at("type").get<std::string>();
  if (type == "Numeric") {
    spec.kind = DimKind::Numeric;
    spec.group = -1;
  } else if (type == "OneHot") {
    spec.kind = DimKind::OneHot;
    spec.group = kind.at("group").get<int>();
  } else {
    throw ConfigError("schema: unknown dim kind '" + type + "'");
  }
  spec.norm_mean = j.at("norm_mean").get<double>();
  spec.norm_std = j.at("norm_std").get<double>();
  spec.constraint = constraint_from_json(j.at("constraint"));
}

void to_json(nlohmann::json& j, const FeatureSchema& schema) {
  j = json{{"dims", schema.dims}, {"groups", schema.groups}};
}

void from_json(const nlohmann::json& j, FeatureSchema& schema) {
  schema.dims = j.at("dims").get<std::vector<DimSpec>>();
  schema.groups = j.at("groups").get<std::vector<std::vector<int>>>();
}

nlohmann::json to_json_array(const Vector& v) {
  auto j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  }
  return v;
}

nlohmann::json to_json_array(const Matrix& m) {
  auto j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix JSON: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

std::string to_json_string(const FeatureSchema& schema) {
  return nlohmann::json(schema).dump(2);
}

FeatureSchema schema_from_json_string(const std::string& text) {
  FeatureSchema schema;
  try {
    nlohmann::json::parse(text).get_to(schema);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schema JSON: ") + e.what());
  }
  validate(schema);
  return schema;
}

}  // namespace ido
