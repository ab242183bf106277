#include "reconf/generate.hpp"

#include <algorithm>
#include <numeric>

#include "reconf/error.hpp"

namespace reconf {

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "path") return GraphKind::kPath;
  if (name == "cycle") return GraphKind::kCycle;
  if (name == "random") return GraphKind::kRandom;
  throw Error("unknown graph kind '" + name + "' (expected path, cycle or random)");
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> edge_list(const GenerateOptions& o, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  const std::size_t n = o.vertices;
  switch (o.kind) {
    case GraphKind::kPath:
      for (std::size_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
      break;
    case GraphKind::kCycle:
      if (n < 3) throw Error("a cycle needs at least 3 vertices");
      for (std::size_t v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
      break;
    case GraphKind::kRandom:
      for (std::size_t k = 0; k < o.edges.value_or(n); ++k) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        edges.emplace_back(a, b);
      }
      break;
  }
  return edges;
}

Assignment random_assignment(std::size_t n, std::uint32_t w, Rng& rng) {
  Assignment a(n);
  for (std::size_t v = 0; v < n; ++v) a[v] = static_cast<Symbol>(rng.below(w));
  return a;
}

}  // namespace

ReconfInstance generate_instance(const GenerateOptions& o) {
  if (o.vertices < 2) throw Error("at least 2 vertices are needed");
  if (o.alphabet < 2) throw Error("the alphabet needs at least 2 symbols");
  if (o.density.num() < 0 || o.density > Ratio(1, 1)) throw Error("density must lie in [0, 1]");
  Rng rng(derive_seed(o.seed, "generate"));
  const auto num = static_cast<std::uint64_t>(o.density.num());
  const auto den = static_cast<std::uint64_t>(o.density.den());

  for (int attempt = 0; attempt < std::max(1, o.attempts); ++attempt) {
    const auto edges = edge_list(o, rng);
    ConstraintGraph g(2, o.alphabet);
    for (std::size_t v = 0; v < o.vertices; ++v) g.add_vertex("v" + std::to_string(v));
    for (const auto& [a, b] : edges) {
      std::vector<std::vector<Symbol>> accept;
      for (Symbol x = 0; x < static_cast<Symbol>(o.alphabet); ++x) {
        for (Symbol y = 0; y < static_cast<Symbol>(o.alphabet); ++y) {
          if (rng.bernoulli(num, den)) accept.push_back({x, y});
        }
      }
      g.add_edge({a, b}, accept);
    }
    if (!o.satisfiable) {
      Assignment ini = random_assignment(o.vertices, o.alphabet, rng);
      Assignment tar = random_assignment(o.vertices, o.alphabet, rng);
      return ReconfInstance{std::move(g), std::move(ini), std::move(tar)};
    }

    auto sample_satisfying = [&]() -> std::optional<Assignment> {
      for (int k = 0; k < 1000; ++k) {
        Assignment a = random_assignment(o.vertices, o.alphabet, rng);
        if (value(g, a).perfect()) return a;
      }
      return std::nullopt;
    };
    auto ini = sample_satisfying();
    auto tar = ini ? sample_satisfying() : std::nullopt;
    if (!tar) continue;
    ReconfInstance inst{std::move(g), std::move(*ini), std::move(*tar)};
    if (maxmin_value(inst, o.budget).optimum.perfect()) return inst;
  }
  throw Error("satisfiable generation timed out after " + std::to_string(o.attempts) +
              " attempts; try fewer vertices, a smaller alphabet or a higher density");
}

ShadowInstance generate_shadow_path(std::size_t vertices, std::uint32_t shadow_alphabet, std::uint32_t alphabet,
                                    bool satisfiable, std::uint64_t seed) {
  if (vertices < 2) throw Error("at least 2 vertices are needed");
  if (shadow_alphabet < 2 || shadow_alphabet > alphabet) throw Error("shadow alphabet must lie in [2, alphabet]");
  Rng rng(derive_seed(seed, satisfiable ? "shadow-path" : "shadow-path-broken"));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    Assignment ini(vertices);
    Assignment tar(vertices);
    for (std::size_t v = 0; v < vertices; ++v) {
      ini[v] = static_cast<Symbol>(rng.below(shadow_alphabet));
      tar[v] = static_cast<Symbol>(rng.below(shadow_alphabet - 1));
      if (tar[v] >= ini[v]) ++tar[v];
    }
    // drop the transit pair of one edge in the broken variant
    const std::size_t broken = satisfiable ? vertices : rng.below(vertices - 1);

    ConstraintGraph shadow(2, shadow_alphabet);
    for (std::size_t v = 0; v < vertices; ++v) shadow.add_vertex("v" + std::to_string(v));
    std::vector<std::vector<std::vector<Symbol>>> accepts;
    for (std::size_t v = 0; v + 1 < vertices; ++v) {
      std::vector<std::vector<Symbol>> req{{ini[v], ini[v + 1]}, {tar[v], tar[v + 1]}};
      if (v != broken) req.push_back({tar[v], ini[v + 1]});
      std::vector<std::vector<Symbol>> accept;
      for (Symbol a = 0; a < static_cast<Symbol>(shadow_alphabet); ++a) {
        for (Symbol b = 0; b < static_cast<Symbol>(shadow_alphabet); ++b) {
          const std::vector<Symbol> t{a, b};
          const bool required = std::find(req.begin(), req.end(), t) != req.end();
          const bool forbidden = v == broken && t == std::vector<Symbol>{tar[v], ini[v + 1]};
          if (required || (!forbidden && rng.bernoulli(1, 4))) accept.push_back(t);
        }
      }
      shadow.add_edge({v, v + 1}, accept);
      accepts.push_back(std::move(accept));
    }
    ReconfInstance sh{shadow, ini, tar};

    std::optional<ReconfigSequence> path;
    if (satisfiable) {
      ReconfigSequence p{{ini}};
      Assignment cur = ini;
      for (std::size_t v = 0; v < vertices; ++v) {
        cur[v] = tar[v];
        p.steps.push_back(cur);
      }
      path = std::move(p);
    } else if (maxmin_value(sh).optimum.perfect()) {
      continue;
    }

    // embed: distinct random large symbols for every shadow symbol
    std::vector<std::vector<Symbol>> map(vertices);
    for (auto& m : map) {
      std::vector<Symbol> pool(alphabet);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::uint32_t i = 0; i < shadow_alphabet; ++i) {
        const std::size_t j = i + rng.below(alphabet - i);
        std::swap(pool[i], pool[j]);
        m.push_back(pool[i]);
      }
    }
    ConstraintGraph big(2, alphabet);
    for (std::size_t v = 0; v < vertices; ++v) big.add_vertex("v" + std::to_string(v));
    for (std::size_t v = 0; v + 1 < vertices; ++v) {
      std::vector<std::vector<Symbol>> accept;
      for (const auto& t : accepts[v]) accept.push_back({map[v][t[0]], map[v + 1][t[1]]});
      big.add_edge({v, v + 1}, accept);
    }
    ShadowInstance out{std::move(sh), ReconfInstance{std::move(big), {}, {}}, std::move(map), std::move(path)};
    out.embedded.psi_ini = embed_sequence(out, ReconfigSequence{{out.shadow.psi_ini}}).steps.front();
    out.embedded.psi_tar = embed_sequence(out, ReconfigSequence{{out.shadow.psi_tar}}).steps.front();
    return out;
  }
  throw Error("could not generate a shadow instance with maxmin below 1");
}

ReconfigSequence embed_sequence(const ShadowInstance& s, const ReconfigSequence& shadow_seq) {
  ReconfigSequence out;
  for (const Assignment& a : shadow_seq.steps) {
    Assignment b(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) b[v] = s.symbol_map.at(v).at(static_cast<std::size_t>(a[v]));
    out.steps.push_back(std::move(b));
  }
  return out;
}

}  // namespace reconf
