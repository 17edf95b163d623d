#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperclust/model.hpp"
#include "hyperclust/pipeline.hpp"

namespace hyperclust {

struct ThetaSpec {
  enum class Kind { constant, powerlaw, reciprocal_uniform, explicit_values };
  Kind kind = Kind::constant;
  double value = 1.0;           // constant
  double alpha = 2.0;           // powerlaw exponent, support fixed to [0.2, 1]
  std::vector<double> values;   // explicit
};

struct CoreSpec {
  enum class Kind { constant, symmetric_sbm, planted, explicit_values };
  Kind kind = Kind::constant;
  double value = 0.5;                     // constant c or the sbm off-diagonal b
  std::map<std::string, double> planted;  // digit-string keyed entries
  std::vector<double> values;             // explicit, K^m lexicographic
};

// Declarative model description as found in config files; materialize() draws
// the degree weights and assembles validated parameters.
struct ModelConfig {
  int n = 0;
  int m = 0;
  int K = 0;
  std::vector<int> community_sizes;  // used when labels is empty; empty means balanced
  std::vector<int> labels;
  ThetaSpec theta;
  CoreSpec core;
  std::optional<std::uint64_t> seed;

  HdcbmParams materialize(std::uint64_t draw_seed) const;
};

ModelConfig parse_model_config(const nlohmann::json& j);

struct MethodSpec {
  enum class Kind { tensor_score, baseline };
  Kind kind = Kind::tensor_score;
  InitKind init = InitKind::diag_removed_hosvd;
  double eps = 0.3;
  BaselineMethod baseline = BaselineMethod::nhcut;
  std::string label;
};

MethodSpec parse_method(const nlohmann::json& j);

struct SimulateSpec {
  ModelConfig model;
  int replicates = 1;
  std::optional<std::uint64_t> seed;
};

SimulateSpec parse_simulate_config(const nlohmann::json& j);

struct BenchSetting {
  std::string id;
  ModelConfig model;
};

struct BenchSpec {
  std::vector<BenchSetting> settings;
  std::vector<MethodSpec> methods;
  int replicates = 1;
  std::uint64_t seed = 1;
  int restarts = 20;
  int t_max = 50;
  std::optional<double> delta;
  std::optional<double> cap;
};

BenchSpec parse_bench_config(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

}  // namespace hyperclust
