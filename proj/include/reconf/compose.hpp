#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "reconf/constraint_graph.hpp"
#include "reconf/robustize.hpp"

namespace reconf {

// --- traces -------------------------------------------------------------------

struct TraceVertex {
  std::string kind;               // "bit", "aux", "vertex" or "hyperedge"
  std::string source_vertex;      // bit, vertex
  std::int64_t position = -1;     // bit: position inside the block
  std::int64_t source_edge = -1;  // aux: circuit; hyperedge: source hyperedge
  int twin = 0;                   // aux: 1 or 2
  std::int64_t aux = -1;          // aux: index inside the twin's auxiliary set
};

struct TraceEdge {
  std::int64_t source_edge = -1;
  std::int64_t twin1_edge = -1;
  std::int64_t twin2_edge = -1;
  std::int64_t copy = 0;          // > 0 for padding duplicates
  std::int64_t coordinate = -1;   // arity reduction: coordinate of the source hyperedge
};

/// Links every vertex and edge of a reduced instance to what produced it.
struct ReductionTrace {
  std::string stage;
  std::vector<TraceVertex> vertices;
  std::vector<TraceEdge> edges;
  /// Factor by which the violated fraction may shrink across the stage.
  Ratio soundness_loss{1, 1};

  std::string to_json() const;
};

// --- assignment testers -------------------------------------------------------

/// A binary constraint graph over input bits X (vertices 0..m-1, alphabet 2)
/// plus auxiliary vertices Y.
struct AssignmentTesterOutput {
  ConstraintGraph graph{2, 2};
  std::size_t input_bits = 0;
  std::vector<std::size_t> aux;
  /// Declared: 1 - value >= rate * (distance of the input from the
  /// accepted set), for every auxiliary assignment.
  Ratio rejection_rate{1, 1};
  /// Auxiliary values, in `aux` order, completing an accepted input to a
  /// full satisfying assignment. Throws for rejected inputs.
  std::function<std::vector<Symbol>(std::uint32_t input)> witness;

  /// X from the input bits (bit i is vertex i), Y from `aux_values`.
  Assignment assignment(std::uint32_t input, const std::vector<Symbol>& aux_values) const;
};

class AssignmentTester {
 public:
  virtual ~AssignmentTester() = default;
  /// `sat_set` lists the accepted inputs over m bits; bit i of an input is
  /// the value of input vertex i.
  virtual AssignmentTesterOutput run(const std::vector<std::uint32_t>& sat_set, std::size_t m) const = 0;
};

/// One auxiliary vertex naming an accepted input, and one edge per input bit
/// checking that bit against the named input. Rejection rate 1.
class ReferenceTester final : public AssignmentTester {
 public:
  AssignmentTesterOutput run(const std::vector<std::uint32_t>& sat_set, std::size_t m) const override;
};

AssignmentTesterOutput reference_tester(const std::vector<std::uint32_t>& sat_set, std::size_t m);

// --- superimposition ------------------------------------------------------------

/// Two copies of one tester output sharing X. Hyperedge (u1, v1, u2, v2) is
/// accepted iff (u1, v1) satisfies its twin-1 edge or (u2, v2) its twin-2
/// edge.
struct SuperimposedGraph {
  ConstraintGraph graph{4, 2};  // X, then Y1, then Y2
  std::size_t input_bits = 0;
  std::vector<std::size_t> aux1;
  std::vector<std::size_t> aux2;
  std::vector<std::pair<std::size_t, std::size_t>> twin_edges;  // per hyperedge
};

SuperimposedGraph superimpose(const AssignmentTesterOutput& twin1, const AssignmentTesterOutput& twin2);

/// The restriction of `a` to one twin, in that twin's own vertex order.
Assignment twin_view(const SuperimposedGraph& g, const AssignmentTesterOutput& twin, const Assignment& a,
                     int which);

// --- composition --------------------------------------------------------------

/// The 4-ary instance built from a circuit system. Vertices are the block bits
/// "<vertex>#<position>" in vertex-major order, then the auxiliary vertices of
/// every circuit ("e<k>.y1.<i>", "e<k>.y2.<i>").
struct ComposedInstance {
  ReconfInstance instance;
  ReductionTrace trace;
  int n = 0;
  std::size_t source_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> circuit_vertices;
  std::vector<std::vector<std::uint32_t>> sat_sets;
  std::vector<AssignmentTesterOutput> testers;
  std::vector<std::vector<std::size_t>> aux1;
  std::vector<std::vector<std::size_t>> aux2;
  std::size_t hyperedges_per_circuit = 0;

  std::size_t bit_vertex(std::size_t v, std::uint64_t x) const { return (v << n) + x; }
  std::uint32_t circuit_input(std::size_t c, const BlockAssignment& sigma) const;
  /// Blocks from sigma; both auxiliary copies from the tester witness.
  Assignment encode(const BlockAssignment& sigma) const;
  BlockAssignment blocks(const Assignment& a) const;
};

/// Requires n <= 3 so that every circuit's accepted set is enumerable.
ComposedInstance compose_system(const CircuitSystem& system, const AssignmentTester& tester = ReferenceTester{});

/// Replays a single-bit sigma sequence whose every step satisfies all
/// circuits: per bit flip, move the Y1 copies of the touched circuits to the
/// new witness, flip the bit, then move the Y2 copies.
ReconfigSequence lift_sigma_sequence(const ComposedInstance& composed, const std::vector<BlockAssignment>& sigma_seq);

// --- arity reduction ------------------------------------------------------------

/// A configuration of the binary instance: source values plus one symbol per
/// hyperedge vertex (kept 64-bit, since these alphabets outgrow Symbol).
struct BinaryState {
  Assignment x;
  std::vector<std::uint64_t> z;

  friend bool operator==(const BinaryState&, const BinaryState&) = default;
};

/// 4-ary to binary. Each hyperedge gets a vertex whose value holds an
/// unordered pair {a, b} for every distinct vertex of the hyperedge (its
/// slots); the value is valid iff every choice of one element per pair is an
/// accepted tuple. Coordinate i contributes the binary edge (hyperedge vertex,
/// i-th vertex), satisfied iff the value is valid and the vertex value lies in
/// the pair of its slot.
class ArityReduction {
 public:
  explicit ArityReduction(ReconfInstance source);

  const ReconfInstance& source() const { return source_; }
  const std::vector<std::size_t>& slots(std::size_t e) const { return slots_.at(e); }
  /// Slot of coordinate i of hyperedge e.
  std::size_t slot_of(std::size_t e, std::size_t i) const { return slot_of_.at(e).at(i); }
  std::uint64_t z_alphabet(std::size_t e) const { return z_alphabet_.at(e); }

  std::uint64_t vertex_count() const { return source_.graph.vertex_count() + source_.graph.edge_count(); }
  std::uint64_t edge_count() const { return 4 * source_.graph.edge_count(); }
  std::uint64_t max_alphabet() const;

  std::uint64_t encode_z(std::size_t e, const std::vector<std::pair<Symbol, Symbol>>& pairs) const;
  std::vector<std::pair<Symbol, Symbol>> decode_z(std::size_t e, std::uint64_t z) const;
  bool z_valid(std::size_t e, std::uint64_t z) const;
  bool edge_satisfied(std::size_t e, std::size_t i, std::uint64_t z, Symbol a) const;

  Value value(const BinaryState& s) const;
  /// Singleton pairs at every slot.
  BinaryState lift(const Assignment& x) const;
  /// Every one-vertex change becomes: widen the slot pairs holding the vertex,
  /// change the vertex, narrow the pairs again.
  std::vector<BinaryState> lift_sequence(const ReconfigSequence& seq) const;

  /// Explicit instance; throws when a hyperedge vertex would need more than
  /// `cap` symbols.
  ReconfInstance materialize(std::uint64_t cap = std::uint64_t{1} << 16) const;
  ReductionTrace trace() const;

  /// An upper bound on the binary maxmin, exact over the source
  /// configuration space: each hyperedge scores 4 when accepted and otherwise
  /// the most coordinates any accepted tuple shares with it.
  Value relaxation_upper_bound(std::uint64_t budget) const;

 private:
  ReconfInstance source_;
  std::vector<std::vector<std::size_t>> slots_;
  std::vector<std::vector<std::size_t>> slot_of_;
  std::vector<std::uint64_t> z_alphabet_;
};

inline std::uint64_t pair_index(Symbol a, Symbol b) {
  if (a > b) std::swap(a, b);
  return static_cast<std::uint64_t>(b) * (b + 1) / 2 + a;
}
std::pair<Symbol, Symbol> pair_from_index(std::uint64_t k);

}  // namespace reconf
