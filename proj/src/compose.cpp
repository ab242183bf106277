#include "reconf/compose.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"
#include "reconf/constants.hpp"
#include "reconf/error.hpp"
#include "reconf/solver.hpp"

namespace reconf {

std::string ReductionTrace::to_json() const {
  nlohmann::ordered_json root;
  root["stage"] = stage;
  root["soundness_loss"] = soundness_loss.str();
  auto& vs = root["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : vertices) {
    nlohmann::ordered_json j{{"kind", v.kind}};
    if (!v.source_vertex.empty()) j["source_vertex"] = v.source_vertex;
    if (v.position >= 0) j["position"] = v.position;
    if (v.source_edge >= 0) j["source_edge"] = v.source_edge;
    if (v.twin) j["twin"] = v.twin;
    if (v.aux >= 0) j["aux"] = v.aux;
    vs.push_back(std::move(j));
  }
  auto& es = root["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges) {
    nlohmann::ordered_json j{{"source_edge", e.source_edge}};
    if (e.twin1_edge >= 0) j["twin1_edge"] = e.twin1_edge;
    if (e.twin2_edge >= 0) j["twin2_edge"] = e.twin2_edge;
    if (e.copy) j["copy"] = e.copy;
    if (e.coordinate >= 0) j["coordinate"] = e.coordinate;
    es.push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

// --- testers ------------------------------------------------------------------

Assignment AssignmentTesterOutput::assignment(std::uint32_t input, const std::vector<Symbol>& aux_values) const {
  if (aux_values.size() != aux.size()) throw Error("auxiliary assignment has the wrong size");
  Assignment a(graph.vertex_count());
  for (std::size_t i = 0; i < input_bits; ++i) a[i] = static_cast<Symbol>((input >> i) & 1U);
  for (std::size_t k = 0; k < aux.size(); ++k) a[aux[k]] = aux_values[k];
  return a;
}

AssignmentTesterOutput ReferenceTester::run(const std::vector<std::uint32_t>& sat_set, std::size_t m) const {
  if (m == 0 || m > 16) throw Error("tester input size must be between 1 and 16 bits");
  if (sat_set.empty()) throw Error("unsatisfiable circuit");
  auto sat = std::make_shared<std::vector<std::uint32_t>>(sat_set);
  std::sort(sat->begin(), sat->end());
  sat->erase(std::unique(sat->begin(), sat->end()), sat->end());
  if (sat->back() >> m) throw Error("accepted input wider than " + std::to_string(m) + " bits");

  AssignmentTesterOutput out;
  out.input_bits = m;
  for (std::size_t i = 0; i < m; ++i) out.graph.add_vertex("x" + std::to_string(i));
  const auto s = static_cast<std::uint32_t>(sat->size());
  out.aux.push_back(out.graph.add_vertex("y", s));
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint64_t> keys;
    keys.reserve(s);
    for (std::uint32_t j = 0; j < s; ++j) keys.push_back(std::uint64_t{j} * 2 + (((*sat)[j] >> i) & 1U));
    out.graph.add_edge({out.aux[0], i}, std::make_shared<const Relation>(Relation::from_keys({s, 2}, std::move(keys))));
  }
  out.rejection_rate = Ratio(1, 1);
  out.witness = [sat](std::uint32_t input) {
    const auto it = std::lower_bound(sat->begin(), sat->end(), input);
    if (it == sat->end() || *it != input) throw Error("input rejected by the circuit");
    return std::vector<Symbol>{static_cast<Symbol>(it - sat->begin())};
  };
  return out;
}

AssignmentTesterOutput reference_tester(const std::vector<std::uint32_t>& sat_set, std::size_t m) {
  return ReferenceTester{}.run(sat_set, m);
}

// --- superimposition ------------------------------------------------------------

namespace {

std::shared_ptr<const Relation> or_relation(const Relation& a, const Relation& b) {
  std::vector<std::uint32_t> radices{a.radices()[0], a.radices()[1], b.radices()[0], b.radices()[1]};
  return std::make_shared<const Relation>(Relation::from_predicate(std::move(radices), [&](std::span<const Symbol> t) {
    return a.contains(t.subspan(0, 2)) || b.contains(t.subspan(2, 2));
  }));
}

void check_twin(const AssignmentTesterOutput& t) {
  if (t.graph.arity() != 2) throw Error("tester output must be binary");
  if (t.graph.edge_count() == 0) throw Error("twin edge set is empty");
}

}  // namespace

SuperimposedGraph superimpose(const AssignmentTesterOutput& twin1, const AssignmentTesterOutput& twin2) {
  check_twin(twin1);
  check_twin(twin2);
  if (twin1.input_bits != twin2.input_bits) throw Error("twins must share their input bits");
  SuperimposedGraph out;
  out.input_bits = twin1.input_bits;
  for (std::size_t i = 0; i < out.input_bits; ++i) out.graph.add_vertex(twin1.graph.vertex_id(i));
  auto add_aux = [&](const AssignmentTesterOutput& t, const std::string& prefix, std::vector<std::size_t>& into) {
    std::vector<std::size_t> map(t.graph.vertex_count());
    for (std::size_t i = 0; i < out.input_bits; ++i) map[i] = i;
    for (const std::size_t a : t.aux) {
      map[a] = out.graph.add_vertex(prefix + t.graph.vertex_id(a), t.graph.alphabet_of(a));
      into.push_back(map[a]);
    }
    return map;
  };
  const auto map1 = add_aux(twin1, "1.", out.aux1);
  const auto map2 = add_aux(twin2, "2.", out.aux2);
  for (std::size_t e1 = 0; e1 < twin1.graph.edge_count(); ++e1) {
    const Hyperedge& h1 = twin1.graph.edge(e1);
    for (std::size_t e2 = 0; e2 < twin2.graph.edge_count(); ++e2) {
      const Hyperedge& h2 = twin2.graph.edge(e2);
      out.graph.add_edge({map1[h1.vertices[0]], map1[h1.vertices[1]], map2[h2.vertices[0]], map2[h2.vertices[1]]},
                         or_relation(*h1.constraint, *h2.constraint));
      out.twin_edges.emplace_back(e1, e2);
    }
  }
  return out;
}

Assignment twin_view(const SuperimposedGraph& g, const AssignmentTesterOutput& twin, const Assignment& a,
                     int which) {
  if (which != 1 && which != 2) throw Error("twin must be 1 or 2");
  const auto& aux = which == 1 ? g.aux1 : g.aux2;
  Assignment out(twin.graph.vertex_count());
  for (std::size_t i = 0; i < g.input_bits; ++i) out[i] = a[i];
  for (std::size_t k = 0; k < twin.aux.size(); ++k) out[twin.aux[k]] = a[aux.at(k)];
  return out;
}

// --- composition --------------------------------------------------------------

std::uint32_t ComposedInstance::circuit_input(std::size_t c, const BlockAssignment& sigma) const {
  const auto [v, w] = circuit_vertices.at(c);
  return pack_input(sigma.blocks.at(v), sigma.blocks.at(w));
}

Assignment ComposedInstance::encode(const BlockAssignment& sigma) const {
  if (sigma.blocks.size() != source_vertices) throw Error("block count mismatch");
  Assignment a(instance.graph.vertex_count());
  for (std::size_t v = 0; v < source_vertices; ++v) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) a[bit_vertex(v, x)] = sigma.blocks[v].get(x) ? 1 : 0;
  }
  for (std::size_t c = 0; c < testers.size(); ++c) {
    const auto tau = testers[c].witness(circuit_input(c, sigma));
    for (std::size_t k = 0; k < tau.size(); ++k) {
      a[aux1[c][k]] = tau[k];
      a[aux2[c][k]] = tau[k];
    }
  }
  return a;
}

BlockAssignment ComposedInstance::blocks(const Assignment& a) const {
  BlockAssignment sigma;
  for (std::size_t v = 0; v < source_vertices; ++v) {
    BitFunction f(n);
    for (std::uint64_t x = 0; x < f.size(); ++x) f.set(x, a[bit_vertex(v, x)] != 0);
    sigma.blocks.push_back(std::move(f));
  }
  return sigma;
}

ComposedInstance compose_system(const CircuitSystem& system, const AssignmentTester& tester) {
  if (system.n > 3) throw Error("micro oracle out of range");
  const int n = system.n;
  const std::uint64_t len = std::uint64_t{1} << n;
  const std::size_t m = 2 * len;

  ComposedInstance out{ReconfInstance{ConstraintGraph(4, 2), {}, {}}, {}, n, system.graph.vertex_count(), {}, {}, {},
                       {}, {}, 0};
  ConstraintGraph& g = out.instance.graph;
  out.trace.stage = "compose";
  // delta0^2 rho^2 / 64 with the tester's declared rate
  for (std::size_t v = 0; v < out.source_vertices; ++v) {
    for (std::uint64_t x = 0; x < len; ++x) {
      g.add_vertex(system.graph.vertex_id(v) + "#" + std::to_string(x));
      out.trace.vertices.push_back(TraceVertex{"bit", system.graph.vertex_id(v), static_cast<std::int64_t>(x)});
    }
  }

  struct Pending {
    std::vector<std::size_t> vertices;
    std::shared_ptr<const Relation> rel;
    std::size_t e1;
    std::size_t e2;
  };
  std::vector<std::vector<Pending>> per_circuit;
  Ratio rate(1, 1);
  for (std::size_t c = 0; c < system.circuits.size(); ++c) {
    const RobustCircuit& circ = system.circuits[c];
    out.circuit_vertices.emplace_back(circ.v, circ.w);
    out.sat_sets.push_back(micro_sat_set(circ));
    out.testers.push_back(tester.run(out.sat_sets.back(), m));
    const AssignmentTesterOutput& t = out.testers.back();
    check_twin(t);
    if (t.input_bits != m) throw Error("tester changed the input size");
    rate = std::min(rate, t.rejection_rate);

    const std::string prefix = "e" + std::to_string(c);
    auto map_twin = [&](int which, std::vector<std::size_t>& aux) {
      std::vector<std::size_t> map(t.graph.vertex_count());
      for (std::size_t i = 0; i < m; ++i) map[i] = i < len ? out.bit_vertex(circ.v, i) : out.bit_vertex(circ.w, i - len);
      for (std::size_t k = 0; k < t.aux.size(); ++k) {
        map[t.aux[k]] = g.add_vertex(prefix + ".y" + std::to_string(which) + "." + std::to_string(k),
                                     t.graph.alphabet_of(t.aux[k]));
        aux.push_back(map[t.aux[k]]);
        out.trace.vertices.push_back(
            TraceVertex{"aux", "", -1, static_cast<std::int64_t>(c), which, static_cast<std::int64_t>(k)});
      }
      return map;
    };
    out.aux1.emplace_back();
    out.aux2.emplace_back();
    const auto map1 = map_twin(1, out.aux1.back());
    const auto map2 = map_twin(2, out.aux2.back());

    per_circuit.emplace_back();
    for (std::size_t e1 = 0; e1 < t.graph.edge_count(); ++e1) {
      const Hyperedge& h1 = t.graph.edge(e1);
      for (std::size_t e2 = 0; e2 < t.graph.edge_count(); ++e2) {
        const Hyperedge& h2 = t.graph.edge(e2);
        per_circuit.back().push_back(Pending{
            {map1[h1.vertices[0]], map1[h1.vertices[1]], map2[h2.vertices[0]], map2[h2.vertices[1]]},
            or_relation(*h1.constraint, *h2.constraint), e1, e2});
      }
    }
  }

  std::size_t target = 0;
  for (const auto& p : per_circuit) target = std::max(target, p.size());
  out.hyperedges_per_circuit = target;
  for (std::size_t c = 0; c < per_circuit.size(); ++c) {
    const auto& list = per_circuit[c];
    for (std::size_t k = 0; k < target; ++k) {
      const Pending& p = list[k % list.size()];
      g.add_edge(p.vertices, p.rel);
      out.trace.edges.push_back(TraceEdge{static_cast<std::int64_t>(c), static_cast<std::int64_t>(p.e1),
                                          static_cast<std::int64_t>(p.e2),
                                          static_cast<std::int64_t>(k / list.size()), -1});
    }
  }
  out.trace.soundness_loss = constants::kDelta0 * constants::kDelta0 * rate * rate * Ratio(1, 64);
  out.instance.psi_ini = out.encode(system.sigma_ini);
  out.instance.psi_tar = out.encode(system.sigma_tar);
  return out;
}

ReconfigSequence lift_sigma_sequence(const ComposedInstance& composed, const std::vector<BlockAssignment>& sigma_seq) {
  if (sigma_seq.empty()) throw Error("empty sequence");
  ReconfigSequence out;
  Assignment cur = composed.encode(sigma_seq.front());
  out.steps.push_back(cur);
  auto move_aux = [&](const std::vector<std::size_t>& aux, const std::vector<Symbol>& tau) {
    for (std::size_t k = 0; k < aux.size(); ++k) {
      if (cur[aux[k]] == tau[k]) continue;
      cur[aux[k]] = tau[k];
      out.steps.push_back(cur);
    }
  };
  for (std::size_t t = 1; t < sigma_seq.size(); ++t) {
    const BlockAssignment& prev = sigma_seq[t - 1];
    const BlockAssignment& next = sigma_seq[t];
    std::size_t changed = composed.source_vertices;
    std::uint64_t pos = 0;
    std::uint64_t flips = 0;
    for (std::size_t v = 0; v < composed.source_vertices; ++v) {
      for (std::uint64_t x = 0; x < prev.blocks[v].size(); ++x) {
        if (prev.blocks[v].get(x) == next.blocks[v].get(x)) continue;
        ++flips;
        changed = v;
        pos = x;
      }
    }
    if (flips > 1) throw Error("sigma steps " + std::to_string(t - 1) + " and " + std::to_string(t) +
                               " differ in more than one bit");
    if (flips == 0) continue;
    std::vector<std::pair<std::size_t, std::vector<Symbol>>> touched;
    for (std::size_t c = 0; c < composed.testers.size(); ++c) {
      const auto [v, w] = composed.circuit_vertices[c];
      if (v != changed && w != changed) continue;
      try {
        touched.emplace_back(c, composed.testers[c].witness(composed.circuit_input(c, next)));
      } catch (const Error&) {
        throw Error("sigma step " + std::to_string(t) + " violates circuit " + std::to_string(c));
      }
    }
    for (const auto& [c, tau] : touched) move_aux(composed.aux1[c], tau);
    cur[composed.bit_vertex(changed, pos)] = next.blocks[changed].get(pos) ? 1 : 0;
    out.steps.push_back(cur);
    for (const auto& [c, tau] : touched) move_aux(composed.aux2[c], tau);
  }
  return out;
}

// --- arity reduction ------------------------------------------------------------

std::pair<Symbol, Symbol> pair_from_index(std::uint64_t k) {
  std::uint64_t b = 0;
  while ((b + 1) * (b + 2) / 2 <= k) ++b;
  return {static_cast<Symbol>(k - b * (b + 1) / 2), static_cast<Symbol>(b)};
}

ArityReduction::ArityReduction(ReconfInstance source) : source_(std::move(source)) {
  const ConstraintGraph& g = source_.graph;
  if (g.arity() != 4) throw Error("arity reduction needs a 4-ary instance");
  check_instance(source_);
  if (g.edge_count() == 0) throw Error("no constraints");
  for (const Hyperedge& h : g.edges()) {
    std::vector<std::size_t> slots;
    std::vector<std::size_t> slot_of;
    for (const std::size_t v : h.vertices) {
      auto it = std::find(slots.begin(), slots.end(), v);
      if (it == slots.end()) it = slots.insert(slots.end(), v);
      slot_of.push_back(static_cast<std::size_t>(it - slots.begin()));
    }
    std::uint64_t z = 1;
    for (const std::size_t v : slots) {
      const std::uint64_t w = g.alphabet_of(v);
      const std::uint64_t r = w * (w + 1) / 2;
      if (z > (std::uint64_t{1} << 62) / r) throw Error("hyperedge vertex alphabet overflows");
      z *= r;
    }
    slots_.push_back(std::move(slots));
    slot_of_.push_back(std::move(slot_of));
    z_alphabet_.push_back(z);
  }
}

std::uint64_t ArityReduction::max_alphabet() const {
  std::uint64_t m = source_.graph.max_alphabet();
  for (const std::uint64_t z : z_alphabet_) m = std::max(m, z);
  return m;
}

std::uint64_t ArityReduction::encode_z(std::size_t e, const std::vector<std::pair<Symbol, Symbol>>& pairs) const {
  const auto& slots = slots_.at(e);
  if (pairs.size() != slots.size()) throw Error("slot count mismatch");
  std::uint64_t z = 0;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const std::uint64_t w = source_.graph.alphabet_of(slots[s]);
    const auto [a, b] = pairs[s];
    if (a < 0 || b < 0 || static_cast<std::uint64_t>(a) >= w || static_cast<std::uint64_t>(b) >= w) {
      throw Error("symbol out of range in slot pair");
    }
    z = z * (w * (w + 1) / 2) + pair_index(a, b);
  }
  return z;
}

std::vector<std::pair<Symbol, Symbol>> ArityReduction::decode_z(std::size_t e, std::uint64_t z) const {
  const auto& slots = slots_.at(e);
  std::vector<std::pair<Symbol, Symbol>> pairs(slots.size());
  for (std::size_t s = slots.size(); s-- > 0;) {
    const std::uint64_t w = source_.graph.alphabet_of(slots[s]);
    const std::uint64_t r = w * (w + 1) / 2;
    pairs[s] = pair_from_index(z % r);
    z /= r;
  }
  return pairs;
}

bool ArityReduction::z_valid(std::size_t e, std::uint64_t z) const {
  if (z >= z_alphabet_.at(e)) return false;
  const auto pairs = decode_z(e, z);
  const auto& slot_of = slot_of_[e];
  const Relation& rel = *source_.graph.edge(e).constraint;
  Symbol tuple[4];
  for (std::uint32_t mask = 0; mask < (1U << pairs.size()); ++mask) {
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& p = pairs[slot_of[i]];
      tuple[i] = (mask >> slot_of[i]) & 1U ? p.second : p.first;
    }
    if (!rel.contains(tuple)) return false;
  }
  return true;
}

bool ArityReduction::edge_satisfied(std::size_t e, std::size_t i, std::uint64_t z, Symbol a) const {
  if (!z_valid(e, z)) return false;
  const auto p = decode_z(e, z)[slot_of_.at(e).at(i)];
  return a == p.first || a == p.second;
}

Value ArityReduction::value(const BinaryState& s) const {
  const ConstraintGraph& g = source_.graph;
  if (s.z.size() != g.edge_count() || s.x.size() != g.vertex_count()) throw Error("incomplete assignment");
  std::uint64_t sat = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!z_valid(e, s.z[e])) continue;
    const auto pairs = decode_z(e, s.z[e]);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto p = pairs[slot_of_[e][i]];
      const Symbol a = s.x[g.edge(e).vertices[i]];
      if (a == p.first || a == p.second) ++sat;
    }
  }
  return Value{sat, edge_count()};
}

BinaryState ArityReduction::lift(const Assignment& x) const {
  BinaryState s{x, {}};
  for (std::size_t e = 0; e < slots_.size(); ++e) {
    std::vector<std::pair<Symbol, Symbol>> pairs;
    for (const std::size_t v : slots_[e]) pairs.emplace_back(x[v], x[v]);
    s.z.push_back(encode_z(e, pairs));
  }
  return s;
}

std::vector<BinaryState> ArityReduction::lift_sequence(const ReconfigSequence& seq) const {
  if (seq.steps.empty()) throw Error("empty sequence");
  if (const auto bad = validate_sequence(seq); !bad.empty()) {
    throw Error("invalid step at index " + std::to_string(bad.front()));
  }
  std::vector<BinaryState> out{lift(seq.steps.front())};
  BinaryState cur = out.front();
  const ConstraintGraph& g = source_.graph;
  for (std::size_t t = 1; t < seq.steps.size(); ++t) {
    const Assignment& next = seq.steps[t];
    std::size_t v = g.vertex_count();
    for (std::size_t u = 0; u < next.size(); ++u) {
      if (next[u] != cur.x[u]) v = u;
    }
    if (v == g.vertex_count()) continue;
    for (const std::size_t e : g.incident(v)) {
      std::vector<std::pair<Symbol, Symbol>> pairs;
      for (const std::size_t u : slots_[e]) pairs.emplace_back(cur.x[u], u == v ? next[u] : cur.x[u]);
      cur.z[e] = encode_z(e, pairs);
      out.push_back(cur);
    }
    cur.x[v] = next[v];
    out.push_back(cur);
    for (const std::size_t e : g.incident(v)) {
      std::vector<std::pair<Symbol, Symbol>> pairs;
      for (const std::size_t u : slots_[e]) pairs.emplace_back(cur.x[u], cur.x[u]);
      cur.z[e] = encode_z(e, pairs);
      out.push_back(cur);
    }
  }
  return out;
}

ReconfInstance ArityReduction::materialize(std::uint64_t cap) const {
  const ConstraintGraph& src = source_.graph;
  cap = std::min<std::uint64_t>(cap, std::numeric_limits<Symbol>::max());
  for (std::size_t e = 0; e < src.edge_count(); ++e) {
    if (z_alphabet_[e] > cap) {
      throw Error("binary instance too large to materialize (hyperedge " + std::to_string(e) + " needs " +
                  std::to_string(z_alphabet_[e]) + " symbols)");
    }
  }
  ConstraintGraph g(2, src.alphabet());
  for (std::size_t v = 0; v < src.vertex_count(); ++v) g.add_vertex(src.vertex_id(v), src.alphabet_override(v));
  std::vector<std::size_t> zv;
  for (std::size_t e = 0; e < src.edge_count(); ++e) {
    zv.push_back(g.add_vertex("h" + std::to_string(e), static_cast<std::uint32_t>(z_alphabet_[e])));
  }
  for (std::size_t e = 0; e < src.edge_count(); ++e) {
    std::vector<std::uint64_t> valid;
    for (std::uint64_t z = 0; z < z_alphabet_[e]; ++z) {
      if (z_valid(e, z)) valid.push_back(z);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      const std::size_t v = src.edge(e).vertices[i];
      const std::uint32_t w = src.alphabet_of(v);
      std::vector<std::uint64_t> keys;
      for (const std::uint64_t z : valid) {
        const auto p = decode_z(e, z)[slot_of_[e][i]];
        keys.push_back(z * w + static_cast<std::uint64_t>(p.first));
        if (p.second != p.first) keys.push_back(z * w + static_cast<std::uint64_t>(p.second));
      }
      g.add_edge({zv[e], v}, std::make_shared<const Relation>(
                                 Relation::from_keys({static_cast<std::uint32_t>(z_alphabet_[e]), w}, std::move(keys))));
    }
  }
  auto endpoint = [&](const Assignment& x) {
    const BinaryState s = lift(x);
    std::vector<Symbol> values(x.values().begin(), x.values().end());
    for (const std::uint64_t z : s.z) values.push_back(static_cast<Symbol>(z));
    return Assignment(std::move(values));
  };
  return ReconfInstance{std::move(g), endpoint(source_.psi_ini), endpoint(source_.psi_tar)};
}

ReductionTrace ArityReduction::trace() const {
  const ConstraintGraph& g = source_.graph;
  ReductionTrace t;
  t.stage = "arity-reduce";
  t.soundness_loss = Ratio(1, 4);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) t.vertices.push_back(TraceVertex{"vertex", g.vertex_id(v)});
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    t.vertices.push_back(TraceVertex{"hyperedge", "", -1, static_cast<std::int64_t>(e)});
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (std::int64_t i = 0; i < 4; ++i) t.edges.push_back(TraceEdge{static_cast<std::int64_t>(e), -1, -1, 0, i});
  }
  return t;
}

namespace {

// 4 - (fewest coordinates of x that must change to reach an accepted tuple),
// for every x in the relation's domain.
std::vector<std::uint8_t> best_agreement_table(const Relation& rel) {
  const auto& radices = rel.radices();
  const std::uint64_t domain = rel.domain_size();
  std::uint64_t strides[4];
  std::uint64_t s = 1;
  for (std::size_t i = 4; i-- > 0;) {
    strides[i] = s;
    s *= radices[i];
  }
  auto project = [&](std::uint64_t key, unsigned mask) {
    std::uint64_t out = key;
    for (std::size_t i = 0; i < 4; ++i) {
      if (mask >> i & 1U) out -= (key / strides[i] % radices[i]) * strides[i];
    }
    return out;
  };
  std::vector<std::uint8_t> table(domain, 0);
  std::vector<bool> done(domain, false);
  std::vector<bool> hit(domain);
  std::vector<unsigned> masks(16);
  for (unsigned m = 0; m < 16; ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  for (const unsigned mask : masks) {
    std::fill(hit.begin(), hit.end(), false);
    rel.for_each_key([&](std::uint64_t k) { hit[project(k, mask)] = true; });
    const auto score = static_cast<std::uint8_t>(4 - std::popcount(mask));
    for (std::uint64_t x = 0; x < domain; ++x) {
      if (!done[x] && hit[project(x, mask)]) {
        table[x] = score;
        done[x] = true;
      }
    }
  }
  return table;
}

}  // namespace

Value ArityReduction::relaxation_upper_bound(std::uint64_t budget) const {
  const ConstraintGraph& g = source_.graph;
  std::vector<std::size_t> index(g.vertex_count(), g.vertex_count());
  std::vector<std::uint32_t> radices;
  Assignment from;
  Assignment to;
  std::vector<Symbol> fv;
  std::vector<Symbol> tv;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.incident(v).empty()) continue;
    index[v] = radices.size();
    radices.push_back(g.alphabet_of(v));
    fv.push_back(source_.psi_ini[v]);
    tv.push_back(source_.psi_tar[v]);
  }
  std::uint64_t configs = 1;
  for (const std::uint32_t r : radices) {
    if (configs > budget / r) throw Error("instance too large for exact search");
    configs *= r;
  }
  std::vector<ScoreFactor> factors;
  for (const Hyperedge& h : g.edges()) {
    std::vector<std::size_t> vars;
    for (const std::size_t v : h.vertices) vars.push_back(index[v]);
    factors.push_back(ScoreFactor{std::move(vars), best_agreement_table(*h.constraint)});
  }
  const StateSpace space(std::move(radices), std::move(factors), budget);
  return maxmin_over(space, Assignment(std::move(fv)), Assignment(std::move(tv)), edge_count()).optimum;
}

}  // namespace reconf
