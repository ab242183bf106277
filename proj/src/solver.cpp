#include "reconf/solver.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "reconf/error.hpp"
#include "reconf/rng.hpp"

namespace reconf {
namespace {

constexpr std::uint64_t kMaxFactorTable = std::uint64_t{1} << 24;
constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

[[noreturn]] void too_large() { throw Error("instance too large for exact search"); }

std::uint64_t checked_product(const std::vector<std::uint32_t>& radices, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (const std::uint32_t r : radices) {
    if (r == 0) throw Error("zero-size alphabet");
    if (total > budget / r) too_large();
    total *= r;
  }
  return total;
}

}  // namespace

StateSpace::StateSpace(std::vector<std::uint32_t> radices, std::vector<ScoreFactor> factors, std::uint64_t budget)
    : radices_(std::move(radices)) {
  // parent pointers are 32-bit
  budget = std::min<std::uint64_t>(budget, kUnvisited);
  size_ = checked_product(radices_, budget);
  strides_.resize(radices_.size());
  std::uint64_t stride = 1;
  for (std::size_t v = 0; v < radices_.size(); ++v) {
    strides_[v] = stride;
    stride *= radices_[v];
  }

  // Per factor: local strides for each coordinate and the running local key.
  struct Touch {
    std::size_t factor;
    std::uint64_t local_stride;
  };
  std::vector<std::vector<Touch>> touches(radices_.size());
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto& vars = factors[f].vars;
    std::uint64_t local = 1;
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (vars[i] >= radices_.size()) throw Error("score factor references unknown variable");
      touches[vars[i]].push_back(Touch{f, local});
      local *= radices_[vars[i]];
      if (local > kMaxFactorTable) too_large();
    }
    if (factors[f].table.size() != local) throw Error("score factor table has wrong size");
  }

  scores_.assign(size_, 0);
  std::vector<std::uint64_t> local_key(factors.size(), 0);
  std::uint32_t current = 0;
  for (const auto& f : factors) current += f.table[0];
  std::vector<std::uint32_t> digits(radices_.size(), 0);
  for (std::uint64_t s = 0; s < size_; ++s) {
    scores_[s] = current;
    if (s + 1 == size_) break;
    for (std::size_t v = 0; v < digits.size(); ++v) {
      // digit v moves from d to d+1, or wraps to 0
      const std::uint32_t old = digits[v];
      const bool wrap = old + 1 == radices_[v];
      digits[v] = wrap ? 0 : old + 1;
      for (const Touch& t : touches[v]) {
        const auto& table = factors[t.factor].table;
        current -= table[local_key[t.factor]];
        if (wrap) {
          local_key[t.factor] -= static_cast<std::uint64_t>(old) * t.local_stride;
        } else {
          local_key[t.factor] += t.local_stride;
        }
        current += table[local_key[t.factor]];
      }
      if (!wrap) break;
    }
  }
}

StateSpace StateSpace::for_graph(const ConstraintGraph& graph, std::uint64_t budget) {
  const auto radices = graph.vertex_alphabets();
  checked_product(radices, std::min<std::uint64_t>(budget, kUnvisited));
  std::vector<ScoreFactor> factors;
  factors.reserve(graph.edge_count());
  for (const Hyperedge& h : graph.edges()) {
    const Relation& rel = *h.constraint;
    if (rel.domain_size() > kMaxFactorTable) too_large();
    ScoreFactor f{h.vertices, std::vector<std::uint8_t>(rel.domain_size(), 0)};
    rel.for_each_key([&](std::uint64_t k) { f.table[k] = 1; });
    factors.push_back(std::move(f));
  }
  return StateSpace(radices, std::move(factors), budget);
}

std::uint64_t StateSpace::encode(const Assignment& a) const {
  if (a.size() != radices_.size()) throw Error("incomplete assignment");
  std::uint64_t s = 0;
  for (std::size_t v = 0; v < radices_.size(); ++v) {
    if (a[v] < 0 || static_cast<std::uint32_t>(a[v]) >= radices_[v]) throw Error("incomplete assignment");
    s += static_cast<std::uint64_t>(a[v]) * strides_[v];
  }
  return s;
}

Assignment StateSpace::decode(std::uint64_t state) const {
  Assignment a(radices_.size());
  for (std::size_t v = 0; v < radices_.size(); ++v) {
    a[v] = static_cast<Symbol>(state % radices_[v]);
    state /= radices_[v];
  }
  return a;
}

std::optional<std::vector<std::uint64_t>> StateSpace::path_at_threshold(std::uint64_t from, std::uint64_t to,
                                                                        std::uint32_t k) const {
  if (scores_[from] < k || scores_[to] < k) return std::nullopt;
  std::vector<std::uint32_t> parent(size_, kUnvisited);
  std::deque<std::uint64_t> queue{from};
  parent[from] = static_cast<std::uint32_t>(from);
  while (!queue.empty() && parent[to] == kUnvisited) {
    const std::uint64_t s = queue.front();
    queue.pop_front();
    std::uint64_t rest = s;
    for (std::size_t v = 0; v < radices_.size(); ++v) {
      const std::uint64_t digit = rest % radices_[v];
      rest /= radices_[v];
      const std::uint64_t base = s - digit * strides_[v];
      for (std::uint64_t b = 0; b < radices_[v]; ++b) {
        if (b == digit) continue;
        const std::uint64_t t = base + b * strides_[v];
        if (parent[t] != kUnvisited || scores_[t] < k) continue;
        parent[t] = static_cast<std::uint32_t>(s);
        queue.push_back(t);
      }
    }
  }
  if (parent[to] == kUnvisited) return std::nullopt;
  std::vector<std::uint64_t> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::uint64_t configuration_count(const ConstraintGraph& graph) {
  return checked_product(graph.vertex_alphabets(), std::numeric_limits<std::uint64_t>::max());
}

namespace {

ReconfigSequence to_sequence(const StateSpace& space, const std::vector<std::uint64_t>& path) {
  ReconfigSequence seq;
  seq.steps.reserve(path.size());
  for (const std::uint64_t s : path) seq.steps.push_back(space.decode(s));
  return seq;
}

// Vertices outside every hyperedge never change a score, so the search runs
// on the constrained vertices only and the free ones are moved at the end.
struct Projection {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> free;
  std::optional<ReconfInstance> reduced;

  const ReconfInstance& of(const ReconfInstance& full) const { return reduced ? *reduced : full; }

  ReconfigSequence lift(const ReconfInstance& full, const ReconfigSequence& seq) const {
    if (!reduced) return seq;
    ReconfigSequence out;
    Assignment cur = full.psi_ini;
    for (const Assignment& step : seq.steps) {
      for (std::size_t i = 0; i < kept.size(); ++i) cur[kept[i]] = step[i];
      out.steps.push_back(cur);
    }
    for (const std::size_t v : free) {
      if (cur[v] == full.psi_tar[v]) continue;
      cur[v] = full.psi_tar[v];
      out.steps.push_back(cur);
    }
    return out;
  }
};

Projection project(const ReconfInstance& instance) {
  const ConstraintGraph& g = instance.graph;
  Projection p;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) (g.incident(v).empty() ? p.free : p.kept).push_back(v);
  if (p.free.empty()) return p;
  std::vector<std::size_t> index(g.vertex_count(), 0);
  ConstraintGraph reduced(g.arity(), g.alphabet());
  Assignment ini(p.kept.size());
  Assignment tar(p.kept.size());
  for (std::size_t i = 0; i < p.kept.size(); ++i) {
    const std::size_t v = p.kept[i];
    index[v] = reduced.add_vertex(g.vertex_id(v), g.alphabet_override(v));
    ini[i] = instance.psi_ini[v];
    tar[i] = instance.psi_tar[v];
  }
  for (const Hyperedge& h : g.edges()) {
    std::vector<std::size_t> vs;
    for (const std::size_t v : h.vertices) vs.push_back(index[v]);
    reduced.add_edge(std::move(vs), h.constraint);
  }
  p.reduced = ReconfInstance{std::move(reduced), std::move(ini), std::move(tar)};
  return p;
}

}  // namespace

ReachResult reachable_at_threshold(const ReconfInstance& instance, std::uint64_t k, std::uint64_t budget) {
  check_instance(instance);
  if (instance.graph.edge_count() == 0) throw Error("no constraints");
  if (k > instance.graph.edge_count()) return {};
  const Projection proj = project(instance);
  const ReconfInstance& inst = proj.of(instance);
  const StateSpace space = StateSpace::for_graph(inst.graph, budget);
  const auto path = space.path_at_threshold(space.encode(inst.psi_ini), space.encode(inst.psi_tar),
                                            static_cast<std::uint32_t>(k));
  if (!path) return {};
  return ReachResult{true, proj.lift(instance, to_sequence(space, *path))};
}

MaxminResult maxmin_over(const StateSpace& space, const Assignment& from, const Assignment& to, std::uint64_t total) {
  const std::uint64_t a = space.encode(from);
  const std::uint64_t b = space.encode(to);
  // Reachability is monotone in k and always holds at k = 0.
  std::uint32_t lo = 0;
  std::uint32_t hi = std::min(space.score(a), space.score(b));
  auto best = space.path_at_threshold(a, b, hi);
  if (!best) {
    best = space.path_at_threshold(a, b, 0);
    while (hi - lo > 1) {
      const std::uint32_t mid = lo + (hi - lo) / 2;
      if (auto p = space.path_at_threshold(a, b, mid)) {
        lo = mid;
        best = std::move(p);
      } else {
        hi = mid;
      }
    }
  } else {
    lo = hi;
  }
  return MaxminResult{Value{lo, total}, to_sequence(space, *best)};
}

MaxminResult maxmin_value(const ReconfInstance& instance, std::uint64_t budget) {
  check_instance(instance);
  if (instance.graph.edge_count() == 0) throw Error("no constraints");
  const Projection proj = project(instance);
  const ReconfInstance& inst = proj.of(instance);
  const StateSpace space = StateSpace::for_graph(inst.graph, budget);
  MaxminResult r = maxmin_over(space, inst.psi_ini, inst.psi_tar, inst.graph.edge_count());
  if (r.witness) r.witness = proj.lift(instance, *r.witness);
  return r;
}

ReconfigSequence random_adversarial_sequence(const ReconfInstance& instance, std::uint64_t seed,
                                             std::size_t scramble_steps) {
  check_instance(instance);
  const ConstraintGraph& g = instance.graph;
  Rng rng(derive_seed(seed, "adversarial-sequence"));
  ReconfigSequence seq;
  Assignment cur = instance.psi_ini;
  seq.steps.push_back(cur);
  const std::size_t nv = g.vertex_count();
  for (std::size_t i = 0; i < scramble_steps && nv > 0; ++i) {
    const std::size_t v = rng.below(nv);
    const std::uint32_t w = g.alphabet_of(v);
    if (w < 2) continue;
    // uniform over the other w-1 symbols
    auto s = static_cast<Symbol>(rng.below(w - 1));
    if (s >= cur[v]) ++s;
    cur[v] = s;
    seq.steps.push_back(cur);
  }
  std::vector<std::size_t> pending;
  for (std::size_t v = 0; v < nv; ++v) {
    if (cur[v] != instance.psi_tar[v]) pending.push_back(v);
  }
  rng.shuffle(std::span<std::size_t>(pending));
  for (const std::size_t v : pending) {
    cur[v] = instance.psi_tar[v];
    seq.steps.push_back(cur);
  }
  return seq;
}

}  // namespace reconf
