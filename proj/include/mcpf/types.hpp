#pragma once

#include <bit>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcpf {

// vertex id = row * width + col
using Vertex = int;
// edge costs are unit, but costs are kept as a full integer type
using Cost = int;
// one workspace vertex per agent
using JointVertex = std::vector<Vertex>;

inline constexpr int kMaxAgents = 64;
inline constexpr int kMaxTargets = 128;

// binary vector a: bit m set iff target m has been claimed
using TargetBits = std::bitset<kMaxTargets>;

// Subset of the agent index set {0..N-1}, bitmask semantics.
class AgentSet {
 public:
  constexpr AgentSet() = default;
  constexpr explicit AgentSet(std::uint64_t bits) : bits_(bits) {}

  static AgentSet all(int num_agents) {
    return AgentSet(num_agents >= 64 ? ~std::uint64_t{0}
                                     : (std::uint64_t{1} << num_agents) - 1);
  }
  static AgentSet single(int agent) { return AgentSet(std::uint64_t{1} << agent); }

  bool contains(int agent) const { return (bits_ >> agent) & 1U; }
  void insert(int agent) { bits_ |= std::uint64_t{1} << agent; }
  bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  bool subset_of(AgentSet other) const { return (bits_ & ~other.bits_) == 0; }
  std::uint64_t bits() const { return bits_; }

  AgentSet operator|(AgentSet o) const { return AgentSet(bits_ | o.bits_); }
  AgentSet& operator|=(AgentSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  bool operator==(const AgentSet&) const = default;

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

// Agents that must consider every action (I_C of a label).
using ConflictSet = AgentSet;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No assignment of targets and goals can be completed; carries the vertex that
// could not be served.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(Vertex vertex, const std::string& what)
      : std::runtime_error(what), vertex_(vertex) {}
  Vertex vertex() const { return vertex_; }

 private:
  Vertex vertex_;
};

}  // namespace mcpf
