#pragma once

#include <cstdint>
#include <string>

namespace cycledec {

// Knobs for the covering engine. The fractional parameters are desk-scale
// calibrations recorded with every run, not theoretical constants.
struct EngineConfig {
  double eta = 0.02;      // approximate-decomposition residue, eta * n^2
  double gamma = 0.01;    // sparse-cover degree budget, gamma * n
  double xi = 0.25;       // group granularity in the cover-down partition
  double mu = 0.25;       // vortex shrink factor
  double nu = 0.05;       // expansion parameter
  double epsilon = 0.01;  // closeness threshold
  int m = 4;              // terminal vortex size = absorber universe
  int m1 = 10;            // extremality slack
  int m2 = 6;             // degree slack for absorber hosts
  int m3 = 4;             // absorber universe in the length-four pipeline
  int s = 9;              // parts in the max-degree-bounding partition
  int t = 3;              // clique size decomposing K_s (s = t^j, t prime)
  int oracle_cutoff = 14;
  long long oracle_budget = 100'000'000;
  int vortex_retry_cap = 50;
  int ell0_override = 0;  // 0: derive the absorber-reservation level
  long long absorber_max_leftovers = 4096;
  uint64_t seed = 0;

  static EngineConfig defaults(int k) {
    EngineConfig cfg;
    cfg.m = k == 2 ? 4 : 2 * k + 2;
    cfg.m3 = cfg.m;
    return cfg;
  }

  // s must be a power of the prime t so that K_s has a K_t-decomposition.
  void validate() const;

  std::string to_json() const;
  static EngineConfig from_json(const std::string& text);
  static EngineConfig load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace cycledec
