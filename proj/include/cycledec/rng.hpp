#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace cycledec {

// Deterministic splitmix64 stream. Outputs are part of the reproducibility
// contract (byte-identical runs for a fixed seed), so std:: distributions
// are off limits: their output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). bound must be positive.
  uint64_t below(uint64_t bound) {
    // rejection sampling to stay unbiased
    uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  int range(int lo, int hi) {  // uniform in [lo, hi)
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo)));
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derived stream keyed by a fixed label; independent of draws made on
  // this stream so far.
  Rng fork(std::string_view label) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    Rng child(seed_ ^ h);
    child.next();
    return child;
  }

  Rng fork(uint64_t label) const {
    Rng child(seed_ ^ (label * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    child.next();
    return child;
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t state_;
};

}  // namespace cycledec
