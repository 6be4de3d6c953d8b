#include "cycledec/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cycledec {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

void EngineConfig::validate() const {
  if (!(eta > 0 && gamma > 0 && xi > 0 && mu > 0 && mu < 1 && nu > 0 &&
        epsilon > 0))
    throw std::invalid_argument("config: fractions must be positive (mu < 1)");
  if (m < 2 || m1 < 1 || m2 < 1 || m3 < 2)
    throw std::invalid_argument("config: size parameters too small");
  if (!is_prime(t)) throw std::invalid_argument("config: t must be prime");
  int power = t;
  while (power < s) power *= t;
  if (power != s) throw std::invalid_argument("config: s must be a power of t");
  if (oracle_cutoff < 0 || oracle_budget < 1)
    throw std::invalid_argument("config: bad oracle limits");
}

std::string EngineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["eta"] = eta;
  j["gamma"] = gamma;
  j["xi"] = xi;
  j["mu"] = mu;
  j["nu"] = nu;
  j["epsilon"] = epsilon;
  j["m"] = m;
  j["m1"] = m1;
  j["m2"] = m2;
  j["m3"] = m3;
  j["s"] = s;
  j["t"] = t;
  j["oracle_cutoff"] = oracle_cutoff;
  j["oracle_budget"] = oracle_budget;
  j["vortex_retry_cap"] = vortex_retry_cap;
  j["ell0_override"] = ell0_override;
  j["absorber_max_leftovers"] = absorber_max_leftovers;
  j["seed"] = seed;
  return j.dump(2);
}

EngineConfig EngineConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EngineConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("eta", cfg.eta);
  get("gamma", cfg.gamma);
  get("xi", cfg.xi);
  get("mu", cfg.mu);
  get("nu", cfg.nu);
  get("epsilon", cfg.epsilon);
  get("m", cfg.m);
  get("m1", cfg.m1);
  get("m2", cfg.m2);
  get("m3", cfg.m3);
  get("s", cfg.s);
  get("t", cfg.t);
  get("oracle_cutoff", cfg.oracle_cutoff);
  get("oracle_budget", cfg.oracle_budget);
  get("vortex_retry_cap", cfg.vortex_retry_cap);
  get("ell0_override", cfg.ell0_override);
  get("absorber_max_leftovers", cfg.absorber_max_leftovers);
  get("seed", cfg.seed);
  cfg.validate();
  return cfg;
}

EngineConfig EngineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void EngineConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << to_json() << '\n';
}

}  // namespace cycledec
