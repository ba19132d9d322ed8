#include "netstab/model_io.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "netstab/errors.hpp"

namespace netstab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + prefix + it.key() + "'", prefix + it.key());
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& prefix) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing required key '" + prefix + key + "'", prefix + key);
  }
  return *it;
}

template <typename T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + path + "' has the wrong type", path);
  }
}

LatentParams parse_params(const json& j, const std::string& name, std::size_t s_dim, int d_z) {
  if (!j.is_object()) throw ConfigError("'" + name + "' must be an object", name);
  reject_unknown(j, {"beta_s", "beta_z", "intercept"}, name + ".");
  LatentParams p;
  p.beta_s = j.contains("beta_s") ? get_as<std::vector<double>>(j["beta_s"], name + ".beta_s")
                                  : std::vector<double>(s_dim, 0.0);
  p.beta_z = j.contains("beta_z") ? get_as<std::vector<double>>(j["beta_z"], name + ".beta_z")
                                  : std::vector<double>(static_cast<std::size_t>(d_z), 0.0);
  p.intercept = j.contains("intercept") ? get_as<double>(j["intercept"], name + ".intercept") : 0.0;
  return p;
}

ShockLaw parse_shock(const json& j) {
  ShockLaw law;
  std::string family;
  if (j.is_string()) {
    family = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown(j, {"family", "sigma", "b"}, "shock_law.");
    family = get_as<std::string>(require(j, "family", "shock_law."), "shock_law.family");
  } else {
    throw ConfigError("'shock_law' must be a string or an object", "shock_law");
  }
  if (family == "logistic") {
    law.family = ShockFamily::logistic;
    if (j.is_object() && (j.contains("sigma") || j.contains("b"))) {
      throw ConfigError("logistic shocks take no scale parameter", "shock_law");
    }
  } else if (family == "normal") {
    law.family = ShockFamily::normal;
    if (j.is_object() && j.contains("b")) throw ConfigError("normal shocks take 'sigma'", "shock_law.b");
    law.scale = j.is_object() && j.contains("sigma") ? get_as<double>(j["sigma"], "shock_law.sigma") : 1.0;
  } else if (family == "laplace") {
    law.family = ShockFamily::laplace;
    if (j.is_object() && j.contains("sigma")) throw ConfigError("laplace shocks take 'b'", "shock_law.sigma");
    law.scale = j.is_object() && j.contains("b") ? get_as<double>(j["b"], "shock_law.b") : 1.0;
  } else if (family == "exponential") {
    law.family = ShockFamily::exponential;
    if (j.is_object() && j.contains("sigma")) throw ConfigError("exponential shocks take 'b'", "shock_law.sigma");
    law.scale = j.is_object() && j.contains("b") ? get_as<double>(j["b"], "shock_law.b") : 1.0;
  } else {
    throw ConfigError("unknown shock family '" + family + "'", "shock_law.family");
  }
  return law;
}

AttributeLaw parse_attributes(const json& j) {
  AttributeLaw law;
  std::string family;
  if (j.is_string()) {
    family = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown(j, {"family", "p"}, "attribute_law.");
    family = get_as<std::string>(require(j, "family", "attribute_law."), "attribute_law.family");
  } else {
    throw ConfigError("'attribute_law' must be a string or an object", "attribute_law");
  }
  if (family == "none") {
    law.family = AttributeFamily::none;
  } else if (family == "bernoulli") {
    law.family = AttributeFamily::bernoulli;
    law.p = j.is_object() && j.contains("p") ? get_as<double>(j["p"], "attribute_law.p") : 0.5;
  } else if (family == "uniform") {
    law.family = AttributeFamily::uniform;
  } else {
    throw ConfigError("unknown attribute family '" + family + "'", "attribute_law.family");
  }
  return law;
}

}  // namespace

ModelSpec model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  reject_unknown(j, {"d", "d_z", "T", "kappa", "v", "v0", "shock_law", "s_kind",
                     "custom_statistic", "position_law", "attribute_law", "s_bounds",
                     "pair_tail_eps"},
                 "");
  ModelSpec spec;
  spec.d = get_as<int>(require(j, "d", ""), "d");
  spec.d_z = j.contains("d_z") ? get_as<int>(j["d_z"], "d_z") : 0;
  spec.T = get_as<int>(require(j, "T", ""), "T");
  spec.kappa = get_as<double>(require(j, "kappa", ""), "kappa");
  spec.s_kind = s_kind_from_string(get_as<std::string>(require(j, "s_kind", ""), "s_kind"));
  if (spec.s_kind == SKind::custom) {
    const std::string name =
        get_as<std::string>(require(j, "custom_statistic", ""), "custom_statistic");
    spec.custom = find_custom_statistic(name);
    if (!spec.custom) {
      throw ConfigError("custom statistic '" + name + "' is not registered", "custom_statistic");
    }
  } else if (j.contains("custom_statistic")) {
    throw ConfigError("custom_statistic requires s_kind custom", "custom_statistic");
  }
  if (j.contains("position_law") &&
      get_as<std::string>(j["position_law"], "position_law") != "uniform_unit_cube") {
    throw ConfigError("only uniform_unit_cube positions are supported", "position_law");
  }
  spec.attributes = j.contains("attribute_law") ? parse_attributes(j["attribute_law"])
                                                : AttributeLaw{};
  spec.shock = parse_shock(require(j, "shock_law", ""));
  const std::size_t k = spec.s_dim();
  if (j.contains("s_bounds")) {
    const json& b = j["s_bounds"];
    if (!b.is_array()) throw ConfigError("'s_bounds' must be a list of [lo, hi] pairs", "s_bounds");
    for (const auto& e : b) {
      auto pair = get_as<std::vector<double>>(e, "s_bounds");
      if (pair.size() != 2) throw ConfigError("'s_bounds' entries must be [lo, hi]", "s_bounds");
      spec.s_bounds.push_back({pair[0], pair[1]});
    }
  } else {
    // Indicator components default to [0,1]; counts need an explicit cap.
    const bool has_count = spec.s_kind == SKind::common_neighbor_count ||
                           spec.s_kind == SKind::lagged_link_and_common_count ||
                           spec.s_kind == SKind::custom;
    if (has_count) throw ConfigError("missing required key 's_bounds'", "s_bounds");
    spec.s_bounds.assign(k, Bounds{0.0, 1.0});
  }
  spec.v = parse_params(require(j, "v", ""), "v", k, spec.d_z);
  spec.v0 = parse_params(require(j, "v0", ""), "v0", k, spec.d_z);
  if (j.contains("pair_tail_eps")) spec.pair_tail_eps = get_as<double>(j["pair_tail_eps"], "pair_tail_eps");
  spec.validate();
  return spec;
}

std::string model_to_json(const ModelSpec& spec, int indent) {
  json j;
  j["d"] = spec.d;
  j["d_z"] = spec.d_z;
  j["T"] = spec.T;
  j["kappa"] = spec.kappa;
  for (auto [w, name] : {std::pair{Which::V, "v"}, std::pair{Which::V0, "v0"}}) {
    const LatentParams& p = spec.params(w);
    j[name] = {{"beta_s", p.beta_s}, {"beta_z", p.beta_z}, {"intercept", p.intercept}};
  }
  switch (spec.shock.family) {
    case ShockFamily::logistic: j["shock_law"] = {{"family", "logistic"}}; break;
    case ShockFamily::normal: j["shock_law"] = {{"family", "normal"}, {"sigma", spec.shock.scale}}; break;
    case ShockFamily::laplace: j["shock_law"] = {{"family", "laplace"}, {"b", spec.shock.scale}}; break;
    case ShockFamily::exponential: j["shock_law"] = {{"family", "exponential"}, {"b", spec.shock.scale}}; break;
  }
  j["s_kind"] = to_string(spec.s_kind);
  if (spec.s_kind == SKind::custom && spec.custom) j["custom_statistic"] = spec.custom->name;
  j["position_law"] = "uniform_unit_cube";
  switch (spec.attributes.family) {
    case AttributeFamily::none: j["attribute_law"] = {{"family", "none"}}; break;
    case AttributeFamily::bernoulli:
      j["attribute_law"] = {{"family", "bernoulli"}, {"p", spec.attributes.p}};
      break;
    case AttributeFamily::uniform: j["attribute_law"] = {{"family", "uniform"}}; break;
  }
  json bounds = json::array();
  for (const auto& b : spec.s_bounds) bounds.push_back({b.lo, b.hi});
  j["s_bounds"] = bounds;
  j["pair_tail_eps"] = spec.pair_tail_eps;
  return j.dump(indent);
}

}  // namespace netstab
