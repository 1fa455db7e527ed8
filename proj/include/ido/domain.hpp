#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ido {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Configuration or validation failure; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box: dimension i spans [centers[i] - half_lengths[i],
/// centers[i] + half_lengths[i]] in normalized feature space.
struct BoxDomain {
  Vector centers;
  Vector half_lengths;

  Eigen::Index dims() const { return centers.size(); }
};

struct Free {};
struct FixedValue {
  double value = 0.0;
};
struct FixedInterval {
  double center = 0.0;
  double half_length = 0.0;
};

/// Free dims are optimized; fixed dims are pinned and masked out of updates.
using DimConstraint = std::variant<Free, FixedValue, FixedInterval>;

enum class DimKind { Numeric, OneHot };

struct DimSpec {
  std::string name;
  DimKind kind = DimKind::Numeric;
  int group = -1;  // index into FeatureSchema::groups; -1 for numeric dims
  double norm_mean = 0.0;
  double norm_std = 1.0;
  DimConstraint constraint = Free{};
};

/// Per-dimension metadata plus the one-hot group structure. Dims that belong
/// to no group are numeric; each group lists the dim indices encoding one
/// categorical feature.
struct FeatureSchema {
  std::vector<DimSpec> dims;
  std::vector<std::vector<int>> groups;

  Eigen::Index size() const { return static_cast<Eigen::Index>(dims.size()); }
};

/// Soft-constraint coefficients: lambda rewards wide numeric intervals, beta
/// penalizes off-center numeric intervals, mu/omega/gamma enforce the one-hot
/// structure (binary centers, narrow intervals, group sums of 1).
struct PenaltyWeights {
  double lambda = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double omega = 0.0;
  double gamma = 0.0;
};

struct Maximize {};
struct Minimize {};
struct TargetMean {
  double target = 0.0;
};
using ObjectiveMode = std::variant<Maximize, Minimize, TargetMean>;

struct GradientAscent {};
struct Adam {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};
using OptimizerKind = std::variant<GradientAscent, Adam>;

inline constexpr double kDefaultSigmaMin = 1e-3;
inline constexpr double kDefaultRidge = 1e-6;

struct OptimizerConfig {
  int iterations = 300;
  int sample_count = 50;
  double learning_rate = 0.07;
  OptimizerKind optimizer_kind = Adam{};
  double sigma_min = kDefaultSigmaMin;
  double ridge = kDefaultRidge;
  std::uint64_t seed = 0;
};

/// Throws ConfigError if the schema is inconsistent (overlapping or empty
/// groups, kind/group mismatches, non-positive norm_std, bad constraints).
void validate(const FeatureSchema& schema);

/// Throws ConfigError if the domain violates its invariants against the
/// schema: matching lengths, D >= 1, half_lengths >= sigma_min on free dims
/// and > 0 everywhere.
void validate(const BoxDomain& domain, const FeatureSchema& schema,
              double sigma_min = kDefaultSigmaMin);

void validate(const OptimizerConfig& config);
void validate(const PenaltyWeights& weights);

/// Entry i is true iff dims[i] is Free.
std::vector<bool> free_mask(const FeatureSchema& schema);

/// Pins fixed dims: FixedValue(v) -> center v, half_length sigma_min (a
/// point-like sliver; sampling emits exactly v); FixedInterval(c, s) ->
/// (c, s). Free dims pass through. Idempotent.
BoxDomain apply_constraints(BoxDomain domain, const FeatureSchema& schema,
                            double sigma_min = kDefaultSigmaMin);

/// All-free numeric schema with identity normalization; dims named x0..x{D-1}.
FeatureSchema numeric_schema(Eigen::Index dims);

std::string to_json_string(const FeatureSchema& schema);
FeatureSchema schema_from_json_string(const std::string& text);

}  // namespace ido
