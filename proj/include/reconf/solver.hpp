#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reconf/constraint_graph.hpp"

namespace reconf {

inline constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 24;

/// One additive term of a state score: a table over the mixed-radix product
/// of the alphabets of `vars` (coordinate 0 most significant).
struct ScoreFactor {
  std::vector<std::size_t> vars;
  std::vector<std::uint8_t> table;
};

/// The full assignment space of a set of variables, with a score per state
/// (the sum of factor tables). States are encoded in mixed radix with
/// variable 0 least significant; every state's score is computed once up
/// front, so the number of states is capped by `budget`.
class StateSpace {
 public:
  StateSpace(std::vector<std::uint32_t> radices, std::vector<ScoreFactor> factors,
             std::uint64_t budget = kDefaultStateBudget);

  /// Scores each state by the number of hyperedges it satisfies.
  static StateSpace for_graph(const ConstraintGraph& graph, std::uint64_t budget = kDefaultStateBudget);

  std::uint64_t size() const { return size_; }
  std::uint64_t encode(const Assignment& a) const;
  Assignment decode(std::uint64_t state) const;
  std::uint32_t score(std::uint64_t state) const { return scores_[state]; }

  /// Breadth-first search through states scoring at least k. Returns the
  /// shortest path of states from `from` to `to`, if one exists.
  std::optional<std::vector<std::uint64_t>> path_at_threshold(std::uint64_t from, std::uint64_t to,
                                                              std::uint32_t k) const;

 private:
  std::vector<std::uint32_t> radices_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
  std::vector<std::uint32_t> scores_;
};

/// Throws reconf::Error("instance too large for exact search") when the
/// product of alphabet sizes exceeds the budget.
std::uint64_t configuration_count(const ConstraintGraph& graph);

struct ReachResult {
  bool reachable = false;
  std::optional<ReconfigSequence> witness;  // shortest, when reachable
};

struct MaxminResult {
  Value optimum;
  std::optional<ReconfigSequence> witness;
};

// The two searches below skip vertices that lie in no hyperedge: those are
// moved to their target values after the search, and only the remaining
// vertices count against the budget.

/// Is there a one-vertex-step path from psi_ini to psi_tar through
/// assignments satisfying at least k hyperedges?
ReachResult reachable_at_threshold(const ReconfInstance& instance, std::uint64_t k,
                                   std::uint64_t budget = kDefaultStateBudget);

/// Exact maxmin value by binary search over the integer threshold.
MaxminResult maxmin_value(const ReconfInstance& instance, std::uint64_t budget = kDefaultStateBudget);

/// Maxmin over an arbitrary scored space; the optimum is max k with a
/// threshold-k path. `total` is the denominator reported in the Value.
MaxminResult maxmin_over(const StateSpace& space, const Assignment& from, const Assignment& to, std::uint64_t total);

/// A seeded walk of `scramble_steps` random single-vertex changes starting at
/// psi_ini, followed by a repair phase that moves each differing vertex to its
/// psi_tar value in random order.
ReconfigSequence random_adversarial_sequence(const ReconfInstance& instance, std::uint64_t seed,
                                             std::size_t scramble_steps);

}  // namespace reconf
