#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace mcpf {

// mt19937_64 with fixed reduction and shuffling so seeded outputs do not
// depend on the standard library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mcpf
