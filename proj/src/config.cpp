#include "hyperclust/config.hpp"

#include <fstream>

#include "hyperclust/errors.hpp"
#include "hyperclust/rng.hpp"

namespace hyperclust {

namespace {

using nlohmann::json;

constexpr std::uint64_t kThetaTag = 0x7468657461;

[[noreturn]] void bad(const std::string& msg) { throw ParseError("config: " + msg); }

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

int need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double num_or(const json& j, const char* key, double dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number()) bad(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

std::vector<double> num_array(const json& v, const char* key) {
  if (!v.is_array()) bad(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) bad(std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ThetaSpec parse_theta(const json& j) {
  ThetaSpec t;
  if (j.is_null()) return t;
  if (!j.is_object()) bad("'theta' must be an object");
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "constant") {
    t.kind = ThetaSpec::Kind::constant;
    t.value = num_or(j, "value", 1.0);
  } else if (kind == "powerlaw") {
    t.kind = ThetaSpec::Kind::powerlaw;
    t.alpha = num_or(j, "alpha", 2.0);
  } else if (kind == "reciprocal_uniform") {
    t.kind = ThetaSpec::Kind::reciprocal_uniform;
  } else if (kind == "explicit") {
    t.kind = ThetaSpec::Kind::explicit_values;
    t.values = num_array(need(j, "values"), "theta.values");
  } else {
    bad("unknown theta kind '" + kind + "'");
  }
  return t;
}

CoreSpec parse_core(const json& j) {
  if (!j.is_object()) bad("'core' must be an object");
  CoreSpec c;
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "constant") {
    c.kind = CoreSpec::Kind::constant;
    c.value = num_or(j, "c", num_or(j, "value", 0.5));
  } else if (kind == "symmetric_sbm") {
    c.kind = CoreSpec::Kind::symmetric_sbm;
    c.value = num_or(j, "b", 0.5);
  } else if (kind == "planted") {
    c.kind = CoreSpec::Kind::planted;
    const json& v = need(j, "values");
    if (!v.is_object()) bad("'core.values' must map digit strings to numbers");
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!it.value().is_number()) bad("'core.values' must map digit strings to numbers");
      c.planted[it.key()] = it.value().get<double>();
    }
  } else if (kind == "explicit") {
    c.kind = CoreSpec::Kind::explicit_values;
    c.values = num_array(need(j, "values"), "core.values");
  } else {
    bad("unknown core kind '" + kind + "'");
  }
  return c;
}

CoreTensor build_core(const CoreSpec& spec, int K, int m) {
  switch (spec.kind) {
    case CoreSpec::Kind::constant:
      return CoreTensor::constant(K, m, spec.value);
    case CoreSpec::Kind::symmetric_sbm:
      return CoreTensor::symmetric_sbm(K, m, spec.value);
    case CoreSpec::Kind::planted:
      return CoreTensor::planted(K, m, spec.planted);
    case CoreSpec::Kind::explicit_values:
      return CoreTensor(K, m, spec.values);
  }
  throw Error("unknown core kind");
}

}  // namespace

ModelConfig parse_model_config(const json& j) {
  if (!j.is_object()) bad("model must be an object");
  ModelConfig c;
  c.n = need_int(j, "n");
  c.m = need_int(j, "m");
  c.K = need_int(j, "K");
  if (auto it = j.find("labels"); it != j.end()) {
    for (const auto& v : *it) c.labels.push_back(v.get<int>());
  } else if (auto st = j.find("community_sizes"); st != j.end()) {
    for (const auto& v : *st) c.community_sizes.push_back(v.get<int>());
  }
  c.theta = parse_theta(j.contains("theta") ? j["theta"] : json());
  if (j.contains("core"))
    c.core = parse_core(j["core"]);
  else
    bad("missing field 'core'");
  if (auto it = j.find("seed"); it != j.end()) c.seed = it->get<std::uint64_t>();
  return c;
}

HdcbmParams ModelConfig::materialize(std::uint64_t draw_seed) const {
  std::vector<int> lab;
  if (!labels.empty()) {
    lab = labels;
    if (static_cast<int>(lab.size()) != n) bad("'labels' must have n entries");
  } else {
    std::vector<int> sizes = community_sizes;
    if (sizes.empty()) {
      sizes.assign(K, n / std::max(K, 1));
      for (int k = 0; k < n % std::max(K, 1); ++k) ++sizes[k];
    }
    if (static_cast<int>(sizes.size()) != K) bad("'community_sizes' must have K entries");
    long long total = 0;
    for (int s : sizes) total += s;
    if (total != n) bad("'community_sizes' must sum to n");
    for (int k = 0; k < K; ++k) lab.insert(lab.end(), sizes[k], k);
  }

  Eigen::VectorXd th;
  const std::uint64_t tseed = rng::split(draw_seed, kThetaTag);
  switch (theta.kind) {
    case ThetaSpec::Kind::constant:
      th = Eigen::VectorXd::Constant(n, theta.value);
      break;
    case ThetaSpec::Kind::powerlaw:
      th = theta_powerlaw(n, theta.alpha, tseed);
      break;
    case ThetaSpec::Kind::reciprocal_uniform:
      th = theta_reciprocal_uniform(n, tseed);
      break;
    case ThetaSpec::Kind::explicit_values:
      if (static_cast<int>(theta.values.size()) != n) bad("'theta.values' must have n entries");
      th = Eigen::Map<const Eigen::VectorXd>(theta.values.data(), n);
      break;
  }

  HdcbmParams p{n, m, K, std::move(lab), std::move(th), build_core(core, K, m)};
  p.validate();
  return p;
}

MethodSpec parse_method(const json& j) {
  MethodSpec m;
  std::string name;
  std::string init;
  if (j.is_string()) {
    name = j.get<std::string>();
    if (auto colon = name.find(':'); colon != std::string::npos) {
      init = name.substr(colon + 1);
      name.resize(colon);
    }
  } else if (j.is_object()) {
    name = need(j, "method").get<std::string>();
    if (j.contains("init")) init = j["init"].get<std::string>();
    m.eps = num_or(j, "eps", 0.3);
  } else {
    bad("method entries must be strings or objects");
  }

  if (name == "tensor-score") {
    m.kind = MethodSpec::Kind::tensor_score;
    m.init = init.empty() ? InitKind::diag_removed_hosvd : init_from_name(init);
    m.label = "tensor-score:" + std::string(init_name(m.init));
    return m;
  }
  if (!init.empty()) bad("only tensor-score takes an initialization");
  m.kind = MethodSpec::Kind::baseline;
  if (name == "binary-projection")
    m.baseline = BaselineMethod::binary_projection_score;
  else if (name == "weighted-projection")
    m.baseline = BaselineMethod::weighted_projection_score;
  else if (name == "nhcut")
    m.baseline = BaselineMethod::nhcut;
  else if (name == "hosvd-kmeans")
    m.baseline = BaselineMethod::hosvd_kmeans;
  else
    bad("unknown method '" + name + "'");
  m.label = baseline_name(m.baseline);
  return m;
}

SimulateSpec parse_simulate_config(const json& j) {
  if (!j.is_object()) bad("simulate config must be an object");
  SimulateSpec s;
  s.model = parse_model_config(j.contains("model") ? j["model"] : j);
  if (j.contains("model") && j.contains("replicates")) s.replicates = j["replicates"].get<int>();
  if (j.contains("model") && j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (!s.seed) s.seed = s.model.seed;
  if (s.replicates < 1) bad("'replicates' must be at least 1");
  return s;
}

BenchSpec parse_bench_config(const json& j) {
  if (!j.is_object()) bad("bench config must be an object");
  BenchSpec b;
  const json& settings = need(j, "settings");
  if (!settings.is_array() || settings.empty()) bad("'settings' must be a nonempty array");
  for (const auto& s : settings) {
    BenchSetting st;
    st.id = need(s, "id").get<std::string>();
    st.model = parse_model_config(need(s, "model"));
    b.settings.push_back(std::move(st));
  }
  for (std::size_t i = 0; i < b.settings.size(); ++i)
    for (std::size_t k = i + 1; k < b.settings.size(); ++k)
      if (b.settings[i].id == b.settings[k].id) bad("duplicate setting id '" + b.settings[i].id + "'");

  const json& methods = need(j, "methods");
  if (!methods.is_array() || methods.empty()) bad("'methods' must be a nonempty array");
  for (const auto& m : methods) b.methods.push_back(parse_method(m));

  if (j.contains("replicates")) b.replicates = j["replicates"].get<int>();
  if (b.replicates < 1) bad("'replicates' must be at least 1");
  if (j.contains("seed")) b.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("restarts")) b.restarts = j["restarts"].get<int>();
  if (j.contains("t_max")) b.t_max = j["t_max"].get<int>();
  if (j.contains("delta")) b.delta = j["delta"].get<double>();
  if (j.contains("cap")) b.cap = j["cap"].get<double>();
  return b;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
}

}  // namespace hyperclust
