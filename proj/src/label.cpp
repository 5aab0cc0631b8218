#include "mcpf/label.hpp"

#include <algorithm>
#include <set>

namespace mcpf {

Cost Label::g_max() const { return g.empty() ? 0 : *std::max_element(g.begin(), g.end()); }

bool binary_dominates(const TargetBits& a, const TargetBits& b) {
  return (b & ~a).none() && a != b;
}

bool binary_dominates(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size()) throw ContractViolation("binary vectors differ in length");
  bool strict = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (b[m] && !a[m]) return false;
    if (a[m] && !b[m]) strict = true;
  }
  return strict;
}

namespace {

void require_same_vertex(const Label& l1, const Label& l2) {
  if (l1.v != l2.v) throw ContractViolation("label comparison across different joint vertices");
}

bool costs_leq(const std::vector<Cost>& x, const std::vector<Cost>& y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

}  // namespace

bool label_dominates(const Label& l1, const Label& l2, DominanceRule rule) {
  require_same_vertex(l1, l2);
  if (rule == DominanceRule::GMax) {
    if (binary_dominates(l1.a, l2.a)) return l1.g_max() <= l2.g_max();
    return l1.a == l2.a && l1.g_max() < l2.g_max();
  }
  if (binary_dominates(l1.a, l2.a)) return costs_leq(l1.g, l2.g);
  return l1.a == l2.a && costs_leq(l1.g, l2.g) && l1.g != l2.g;
}

bool labels_equal(const Label& l1, const Label& l2, DominanceRule rule) {
  require_same_vertex(l1, l2);
  if (l1.a != l2.a) return false;
  return rule == DominanceRule::GMax ? l1.g_max() == l2.g_max() : l1.g == l2.g;
}

std::vector<Cost> simple_heu(const Label& parent) {
  if (!parent.sequenced) throw ContractViolation("simple_heu needs a sequenced parent label");
  std::vector<Cost> out(parent.h.size());
  std::transform(parent.h.begin(), parent.h.end(), out.begin(),
                 [](Cost h) { return h > 0 ? h - 1 : 0; });
  return out;
}

bool check_success(const Instance& inst, const VertexRoles& roles, const Label& l) {
  for (int m = 0; m < inst.num_targets(); ++m)
    if (!l.a.test(m)) return false;
  std::set<Vertex> used;
  for (int i = 0; i < inst.num_agents; ++i) {
    if (!roles.eligible_goal(l.v[i], i)) return false;
    if (!used.insert(l.v[i]).second) return false;
  }
  return true;
}

}  // namespace mcpf
