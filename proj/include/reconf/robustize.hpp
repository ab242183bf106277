#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "reconf/constraint_graph.hpp"
#include "reconf/hadamard.hpp"

namespace reconf {

/// One codeword-sized block per source vertex.
struct BlockAssignment {
  std::vector<BitFunction> blocks;

  friend bool operator==(const BlockAssignment&, const BlockAssignment&) = default;
};

/// The decoding predicate for one binary constraint. It accepts (f, g) iff
/// both blocks are 1/4-close to some codeword and every pair of messages
/// inside the list-decoding radius of (f, g) is allowed by `pi`. The radius is
/// 1/4 + delta0/2, or 1/4 for the weakened variant used only in negative
/// tests.
struct RobustCircuit {
  std::size_t edge = 0;
  std::size_t v = 0;
  std::size_t w = 0;
  std::shared_ptr<const Relation> pi;
  int n = 0;
  bool weakened = false;

  /// Largest Hamming distance that still counts as 1/4-close.
  std::uint32_t close_radius() const;
  /// Largest Hamming distance inside the list-decoding radius.
  std::uint32_t list_radius() const;
};

struct CircuitSystem {
  /// The source graph with every alphabet padded to 2^n. Padding symbols
  /// never occur in any constraint.
  ConstraintGraph graph;
  int n = 0;
  bool weakened = false;
  std::vector<RobustCircuit> circuits;
  Assignment psi_ini;
  Assignment psi_tar;
  BlockAssignment sigma_ini;
  BlockAssignment sigma_tar;
};

struct RobustizeOptions {
  int min_n = 2;
  bool weakened = false;
};

/// Requires a binary instance whose endpoints satisfy every edge. n is the
/// smallest value >= min_n with 2^n >= the largest alphabet.
CircuitSystem robustize(const ReconfInstance& instance, RobustizeOptions options = {});

BlockAssignment encode_blocks(const Assignment& psi, int n);

bool eval_circuit(const RobustCircuit& c, const BitFunction& f, const BitFunction& g);
bool eval_circuit_from_distances(const RobustCircuit& c, const std::vector<std::uint32_t>& to_f,
                                 const std::vector<std::uint32_t>& to_g);

std::size_t satisfied_circuits(const CircuitSystem& system, const BlockAssignment& sigma);

/// Nearest codeword; ties go to the smallest message.
Symbol decode_block(const BitFunction& f);

/// Splices a verified codeword path into every one-vertex move of psi_seq.
/// Every step of psi_seq must satisfy the graph, and n must be at least 9.
std::vector<BlockAssignment> completeness_sequence(const CircuitSystem& system, const ReconfigSequence& psi_seq,
                                                   std::uint64_t seed, int max_retries = 3);

/// Decodes every block of every step; consecutive duplicates are collapsed.
/// Throws if two consecutive sigma steps differ in more than one bit.
ReconfigSequence extract_psi_sequence(const CircuitSystem& system, const std::vector<BlockAssignment>& sigma_seq);

/// A seeded single-bit walk from `from` to `to`: `scramble_steps` random bit
/// flips anywhere, then every differing bit is flipped back in random order.
std::vector<BlockAssignment> random_sigma_sequence(const BlockAssignment& from, const BlockAssignment& to,
                                                   std::uint64_t seed, std::size_t scramble_steps);

// --- micro scale (n <= 3) ---------------------------------------------------

/// Packs f then g into one integer: bit x is f(x), bit 2^n + x is g(x).
std::uint32_t pack_input(const BitFunction& f, const BitFunction& g);
std::pair<BitFunction, BitFunction> unpack_input(std::uint32_t input, int n);

/// All accepted inputs of c, ascending, by full enumeration.
std::vector<std::uint32_t> micro_sat_set(const RobustCircuit& c);

/// Exact relative distance from f∘g to the accepted set of c.
Ratio micro_distance_to_sat(const RobustCircuit& c, const BitFunction& f, const BitFunction& g);
Ratio micro_distance(const std::vector<std::uint32_t>& sat_set, std::uint32_t input, int n);

/// The circuit system as an explicit constraint graph over bit vertices
/// "<vertex>#<position>", one hyperedge per circuit (arity 2^(n+1)).
ReconfInstance materialize(const CircuitSystem& system);
Assignment flatten_blocks(const BlockAssignment& sigma);
BlockAssignment unflatten_blocks(const CircuitSystem& system, const Assignment& bits);

/// The four-phase walk from Had(a1)∘Had(b1) to Had(a2)∘Had(b2) through f∘g,
/// where f is 1/4-close to both Had(a1) and Had(a2) and g likewise for b1, b2.
std::vector<std::pair<BitFunction, BitFunction>> four_phase_path(int n, std::uint64_t a1, std::uint64_t a2,
                                                                 std::uint64_t b1, std::uint64_t b2);

// --- files --------------------------------------------------------------------

/// DIR/system.json, DIR/sigma_ini.hex, DIR/sigma_tar.hex.
void write_system(const std::filesystem::path& dir, const CircuitSystem& system);
CircuitSystem read_system(const std::filesystem::path& dir);

/// One line per vertex: "<id> <hex>".
std::string format_blocks(const CircuitSystem& system, const BlockAssignment& sigma);
/// One line per step, hex blocks in vertex order separated by spaces.
std::string format_sigma_sequence(const std::vector<BlockAssignment>& seq);
std::vector<BlockAssignment> parse_sigma_sequence(const CircuitSystem& system, const std::string& text);

}  // namespace reconf
