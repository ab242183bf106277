#include "reconf/constraint_graph.hpp"

#include <algorithm>

#include "reconf/error.hpp"

namespace reconf {

ConstraintGraph::ConstraintGraph(std::size_t arity, std::uint32_t alphabet) : arity_(arity), alphabet_(alphabet) {
  if (arity == 0) throw Error("arity must be positive");
  if (alphabet == 0) throw Error("alphabet must be positive");
}

std::uint32_t ConstraintGraph::max_alphabet() const {
  std::uint32_t m = alphabet_;
  for (const auto a : alphabets_) m = std::max(m, a);
  return m;
}

std::size_t ConstraintGraph::add_vertex(std::string id, std::optional<std::uint32_t> alphabet) {
  if (index_.contains(id)) throw Error("duplicate vertex id: " + id);
  if (alphabet && *alphabet == 0) throw Error("alphabet must be positive for vertex " + id);
  const std::size_t v = ids_.size();
  index_.emplace(id, v);
  ids_.push_back(std::move(id));
  alphabets_.push_back(alphabet.value_or(alphabet_));
  overrides_.push_back(alphabet);
  incident_.emplace_back();
  return v;
}

std::optional<std::size_t> ConstraintGraph::find_vertex(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ConstraintGraph::add_edge(std::vector<std::size_t> vertices, std::shared_ptr<const Relation> constraint) {
  if (vertices.size() != arity_) throw Error("arity mismatch");
  if (!constraint) throw Error("missing constraint");
  if (constraint->arity() != arity_) throw Error("arity mismatch");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= ids_.size()) throw Error("unknown vertex index " + std::to_string(vertices[i]));
    if (constraint->radices()[i] != alphabets_[vertices[i]]) {
      throw Error("constraint alphabet does not match vertex " + ids_[vertices[i]]);
    }
  }
  const std::size_t e = edges_.size();
  std::vector<std::size_t> distinct = vertices;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (const std::size_t v : distinct) incident_[v].push_back(e);
  edges_.push_back(Hyperedge{std::move(vertices), std::move(constraint)});
  return e;
}

std::size_t ConstraintGraph::add_edge(std::vector<std::size_t> vertices, std::span<const std::vector<Symbol>> accepted) {
  if (vertices.size() != arity_) throw Error("arity mismatch");
  std::vector<std::uint32_t> radices;
  for (const std::size_t v : vertices) {
    if (v >= ids_.size()) throw Error("unknown vertex index " + std::to_string(v));
    radices.push_back(alphabets_[v]);
  }
  return add_edge(std::move(vertices), std::make_shared<const Relation>(std::move(radices), accepted));
}

bool ConstraintGraph::satisfies(std::size_t e, std::span<const Symbol> values) const {
  const Hyperedge& h = edges_[e];
  Symbol local[16];
  std::vector<Symbol> heap;
  Symbol* tuple = local;
  if (h.vertices.size() > 16) {
    heap.resize(h.vertices.size());
    tuple = heap.data();
  }
  for (std::size_t i = 0; i < h.vertices.size(); ++i) tuple[i] = values[h.vertices[i]];
  return h.constraint->contains(std::span<const Symbol>(tuple, h.vertices.size()));
}

std::size_t ConstraintGraph::satisfied_count(std::span<const Symbol> values) const {
  std::size_t count = 0;
  for (std::size_t e = 0; e < edges_.size(); ++e) count += satisfies(e, values) ? 1 : 0;
  return count;
}

Value value(const ConstraintGraph& graph, const Assignment& psi) {
  if (psi.size() != graph.vertex_count()) throw Error("incomplete assignment");
  for (std::size_t v = 0; v < psi.size(); ++v) {
    if (psi[v] == kUnassigned) throw Error("incomplete assignment");
    if (psi[v] < 0 || static_cast<std::uint32_t>(psi[v]) >= graph.alphabet_of(v)) {
      throw Error("symbol out of range at vertex " + graph.vertex_id(v));
    }
  }
  if (graph.edge_count() == 0) throw Error("no constraints");
  return Value{graph.satisfied_count(psi.values()), graph.edge_count()};
}

std::size_t hamming(const Assignment& a, const Assignment& b) {
  std::size_t d = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

std::vector<std::size_t> validate_sequence(const ReconfigSequence& seq) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i + 1 < seq.steps.size(); ++i) {
    if (hamming(seq.steps[i], seq.steps[i + 1]) > 1) bad.push_back(i);
  }
  return bad;
}

Value sequence_value(const ConstraintGraph& graph, const ReconfigSequence& seq) {
  if (seq.steps.empty()) throw Error("empty sequence");
  const auto bad = validate_sequence(seq);
  if (!bad.empty()) throw Error("invalid step at index " + std::to_string(bad.front()));
  Value best = value(graph, seq.steps.front());
  for (std::size_t i = 1; i < seq.steps.size(); ++i) best = std::min(best, value(graph, seq.steps[i]));
  return best;
}

void check_instance(const ReconfInstance& instance) {
  for (const Assignment* psi : {&instance.psi_ini, &instance.psi_tar}) {
    if (psi->size() != instance.graph.vertex_count()) throw Error("incomplete assignment");
    for (std::size_t v = 0; v < psi->size(); ++v) {
      if ((*psi)[v] == kUnassigned) throw Error("incomplete assignment");
      if ((*psi)[v] < 0 || static_cast<std::uint32_t>((*psi)[v]) >= instance.graph.alphabet_of(v)) {
        throw Error("symbol out of range at vertex " + instance.graph.vertex_id(v));
      }
    }
  }
}

}  // namespace reconf
