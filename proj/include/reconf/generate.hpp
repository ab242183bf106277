#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reconf/constraint_graph.hpp"
#include "reconf/rng.hpp"
#include "reconf/solver.hpp"

namespace reconf {

enum class GraphKind { kPath, kCycle, kRandom };

GraphKind parse_graph_kind(const std::string& name);

struct GenerateOptions {
  GraphKind kind = GraphKind::kPath;
  std::size_t vertices = 3;
  std::uint32_t alphabet = 4;
  /// Random graphs only; defaults to the vertex count.
  std::optional<std::size_t> edges;
  /// Probability of each pair being accepted.
  Ratio density{1, 2};
  /// Endpoints satisfy every edge and are joined by a satisfying path.
  bool satisfiable = false;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t budget = kDefaultStateBudget;
  int attempts = 200;
};

/// Binary instance, deterministic per seed. Vertices are "v0", "v1", ...
ReconfInstance generate_instance(const GenerateOptions& options);

/// A path instance over a large alphabet whose constraints only use a few
/// symbols per vertex. The small "shadow" instance keeps the same structure
/// over alphabet `shadow_alphabet`; vertex v's shadow symbol s appears as
/// symbol_map[v][s] in the embedded instance, and all other symbols occur
/// in no constraint, so both instances have the same maxmin value.
struct ShadowInstance {
  ReconfInstance shadow;
  ReconfInstance embedded;
  std::vector<std::vector<Symbol>> symbol_map;
  /// Changes v0, v1, ... in order, satisfying every edge throughout. Only
  /// present for satisfiable instances.
  std::optional<ReconfigSequence> shadow_path;
};

/// With `satisfiable` the hand-built path is valid by construction. Without
/// it, transit pairs are dropped until the shadow oracle reports maxmin < 1.
ShadowInstance generate_shadow_path(std::size_t vertices, std::uint32_t shadow_alphabet, std::uint32_t alphabet,
                                    bool satisfiable, std::uint64_t seed);

ReconfigSequence embed_sequence(const ShadowInstance& s, const ReconfigSequence& shadow_seq);

}  // namespace reconf
