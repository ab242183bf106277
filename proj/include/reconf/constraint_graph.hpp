#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reconf/ratio.hpp"
#include "reconf/relation.hpp"

namespace reconf {

inline constexpr Symbol kUnassigned = -1;

struct Hyperedge {
  std::vector<std::size_t> vertices;
  std::shared_ptr<const Relation> constraint;
};

/// A q-ary constraint graph with explicit accepted-tuple constraints.
///
/// Vertices are opaque string ids kept in declaration order; all other APIs
/// address them by index. Every vertex has the graph-wide alphabet unless it
/// carries an override. Duplicate hyperedges are allowed and count with
/// multiplicity.
class ConstraintGraph {
 public:
  ConstraintGraph(std::size_t arity, std::uint32_t alphabet);

  std::size_t add_vertex(std::string id, std::optional<std::uint32_t> alphabet = std::nullopt);

  /// The relation's radices must equal the endpoint alphabets.
  std::size_t add_edge(std::vector<std::size_t> vertices, std::shared_ptr<const Relation> constraint);
  std::size_t add_edge(std::vector<std::size_t> vertices, std::span<const std::vector<Symbol>> accepted);

  std::size_t arity() const { return arity_; }
  std::uint32_t alphabet() const { return alphabet_; }
  std::uint32_t max_alphabet() const;

  std::size_t vertex_count() const { return ids_.size(); }
  const std::string& vertex_id(std::size_t v) const { return ids_.at(v); }
  std::optional<std::size_t> find_vertex(const std::string& id) const;
  std::uint32_t alphabet_of(std::size_t v) const { return alphabets_.at(v); }
  std::optional<std::uint32_t> alphabet_override(std::size_t v) const { return overrides_.at(v); }
  std::vector<std::uint32_t> vertex_alphabets() const { return alphabets_; }

  std::size_t edge_count() const { return edges_.size(); }
  const Hyperedge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  /// Indices of hyperedges touching v, each listed once.
  const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }

  /// No range checks; `values` indexed by vertex.
  bool satisfies(std::size_t e, std::span<const Symbol> values) const;
  std::size_t satisfied_count(std::span<const Symbol> values) const;

 private:
  std::size_t arity_;
  std::uint32_t alphabet_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::uint32_t> alphabets_;
  std::vector<std::optional<std::uint32_t>> overrides_;
  std::vector<Hyperedge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// A map from vertex index to symbol; kUnassigned marks a missing value.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t size) : values_(size, kUnassigned) {}
  explicit Assignment(std::vector<Symbol> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  Symbol& operator[](std::size_t v) { return values_[v]; }
  Symbol operator[](std::size_t v) const { return values_[v]; }
  std::span<const Symbol> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Symbol> values_;
};

struct ReconfigSequence {
  std::vector<Assignment> steps;
};

/// Exact value satisfied/total. Ordering is by the rational, so 1/3 == 2/6.
struct Value {
  std::uint64_t satisfied = 0;
  std::uint64_t total = 1;

  Ratio ratio() const { return Ratio(static_cast<std::int64_t>(satisfied), static_cast<std::int64_t>(total)); }
  bool perfect() const { return satisfied == total; }
  /// "satisfied/total", not reduced.
  std::string str() const { return std::to_string(satisfied) + "/" + std::to_string(total); }

  friend std::strong_ordering operator<=>(const Value& a, const Value& b) { return a.ratio() <=> b.ratio(); }
  friend bool operator==(const Value& a, const Value& b) { return a.ratio() == b.ratio(); }
};

struct ReconfInstance {
  ConstraintGraph graph;
  Assignment psi_ini;
  Assignment psi_tar;
};

/// Throws reconf::Error("incomplete assignment"), ("no constraints") or
/// ("symbol out of range ...").
Value value(const ConstraintGraph& graph, const Assignment& psi);

/// Indices i such that steps i and i+1 differ in more than one vertex (or in
/// size). Empty iff the sequence obeys the one-vertex rule.
std::vector<std::size_t> validate_sequence(const ReconfigSequence& seq);

/// Minimum value over the steps. Throws on an empty or invalid sequence.
Value sequence_value(const ConstraintGraph& graph, const ReconfigSequence& seq);

std::size_t hamming(const Assignment& a, const Assignment& b);

/// Checks both endpoints are total and in range for the graph.
void check_instance(const ReconfInstance& instance);

}  // namespace reconf
