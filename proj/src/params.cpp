#include "quasimode/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace quasimode {

namespace {

// Field table shared by the JSON reader, writer and validator.
constexpr std::pair<const char*, double SystemParams::*> kFields[] = {
    {"delta", &SystemParams::delta},       {"omega_m", &SystemParams::omega_m},
    {"kappa", &SystemParams::kappa},       {"gamma", &SystemParams::gamma},
    {"Gamma", &SystemParams::Gamma},       {"lambda_c", &SystemParams::lambda_c},
    {"g_c", &SystemParams::g_c},           {"V0", &SystemParams::V0},
    {"V1", &SystemParams::V1},             {"alpha", &SystemParams::alpha},
    {"beta", &SystemParams::beta},         {"T_a_plus", &SystemParams::T_a_plus},
    {"T_a_minus", &SystemParams::T_a_minus}, {"T_b_plus", &SystemParams::T_b_plus},
    {"T_b_minus", &SystemParams::T_b_minus},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("SystemParams: " + what);
}

} // namespace

void validate(const SystemParams& p) {
  for (const auto& [name, member] : kFields)
    require(std::isfinite(p.*member), std::string(name) + " must be finite");
  require(p.kappa > 0.0, "kappa must be > 0");
  require(p.gamma > 0.0, "gamma must be > 0");
  require(p.Gamma > 0.0, "Gamma must be > 0");
  require(p.lambda_c >= 0.0, "lambda_c must be >= 0");
  require(p.g_c >= 0.0, "g_c must be >= 0");
  require(p.V0 >= 0.0, "V0 must be >= 0");
  require(p.V1 >= 0.0, "V1 must be >= 0");
  require(p.alpha >= 0.0, "alpha must be >= 0");
  require(p.beta >= 0.0, "beta must be >= 0");
  require(p.T_a_plus >= 0.0 && p.T_a_minus >= 0.0 && p.T_b_plus >= 0.0 &&
              p.T_b_minus >= 0.0,
          "temperatures must be >= 0");
}

std::vector<std::string> regime_warnings(const SystemParams& p) {
  std::vector<std::string> out;
  if (p.Gamma < 10.0 * p.gamma)
    out.emplace_back("quasi-mode regime: Gamma < 10 gamma");
  if (!(p.delta < 0.0 && std::abs(p.delta) >= 5.0 * p.kappa))
    out.emplace_back("rotating-wave regime: expected delta < 0 and |delta| >= 5 kappa");
  return out;
}

SystemParams reference_params() {
  SystemParams p;
  p.omega_m = 1.0;
  p.delta = -1.0;
  p.gamma = 0.001;
  p.kappa = 0.1;
  p.lambda_c = 0.001;
  p.g_c = 0.005;
  p.Gamma = 0.05;
  p.V0 = 0.02;
  p.T_a_plus = p.T_a_minus = p.T_b_plus = p.T_b_minus = 1.0;
  return p;
}

SystemParams random_params(std::mt19937_64& rng) {
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  };
  SystemParams p;
  p.omega_m = uniform(0.5, 2.0);
  p.delta = -p.omega_m + uniform(-0.05, 0.05);
  p.kappa = log_uniform(0.02, 0.3);
  p.gamma = log_uniform(1e-4, 1e-2);
  p.Gamma = log_uniform(0.01, 0.3);
  p.lambda_c = log_uniform(1e-4, 5e-3);
  p.g_c = log_uniform(1e-3, 2e-2);
  p.V0 = uniform(0.0, 0.05);
  p.alpha = uniform(0.0, 12.0);
  p.beta = uniform(0.0, 12.0);
  p.T_a_plus = uniform(0.5, 2.0);
  p.T_a_minus = uniform(0.5, 2.0);
  p.T_b_plus = uniform(0.5, 2.0);
  p.T_b_minus = uniform(0.5, 2.0);
  return p;
}

void to_json(nlohmann::json& j, const SystemParams& p) {
  j = nlohmann::json::object();
  for (const auto& [name, member] : kFields) j[name] = p.*member;
}

void from_json(const nlohmann::json& j, SystemParams& p) {
  if (!j.is_object()) throw std::invalid_argument("SystemParams: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& field : kFields) known = known || key == field.first;
    if (!known) throw std::invalid_argument("SystemParams: unknown key '" + key + "'");
  }
  for (const auto& [name, member] : kFields) {
    if (!j.contains(name)) throw std::invalid_argument(std::string("SystemParams: missing key '") + name + "'");
    if (!j.at(name).is_number())
      throw std::invalid_argument(std::string("SystemParams: '") + name + "' must be a number");
    p.*member = j.at(name).get<double>();
  }
}

SystemParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open parameter file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (buffer.str().empty()) throw std::invalid_argument("parameter file is empty: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("parameter file " + path + ": " + e.what());
  }
  auto p = j.get<SystemParams>();
  validate(p);
  return p;
}

} // namespace quasimode
