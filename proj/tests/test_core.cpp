#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "reconf/constraint_graph.hpp"
#include "reconf/instance_io.hpp"
#include "reconf/ratio.hpp"
#include "reconf/relation.hpp"
#include "reconf/rng.hpp"
#include "test_util.hpp"

using namespace reconf;
using reconf::testing::A;
using reconf::testing::contains;
using reconf::testing::error_of;

TEST(Ratio, ComparesExactly) {
  EXPECT_EQ(Ratio(1, 3), Ratio(2, 6));
  EXPECT_LT(Ratio(1, 3), Ratio(1, 2));
  EXPECT_GT(Ratio(101, 400), Ratio(1, 4));
  EXPECT_EQ(Ratio(6, 8).str(), "3/4");
  EXPECT_EQ(Ratio(0, 5).str(), "0/1");
  // operands whose cross products overflow 64 bits
  const std::int64_t big = std::int64_t{1} << 62;
  EXPECT_LT(Ratio(big - 1, big), Ratio(big, big + 1));
  EXPECT_LT(Ratio(big - 2, big - 1), Ratio(big - 1, big));
  EXPECT_EQ(Ratio(big, big), Ratio(1, 1));
  EXPECT_THROW(Ratio(1, 0), std::invalid_argument);
}

TEST(Ratio, Arithmetic) {
  EXPECT_EQ(Ratio(1, 4) + Ratio(1, 400), Ratio(101, 400));
  EXPECT_EQ(Ratio(1, 2) - Ratio(1, 3), Ratio(1, 6));
  EXPECT_EQ(Ratio(2, 3) * Ratio(3, 4), Ratio(1, 2));
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  Rng c(7);
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto x = c.below(5);
    ASSERT_LT(x, 5u);
    ++hist[x];
  }
  for (const int h : hist) EXPECT_GT(h, 800);
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, std::uint64_t{0}), derive_seed(1, std::uint64_t{1}));
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(3);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  r.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

TEST(Relation, DenseAndSparseAgree) {
  const std::vector<std::uint32_t> radices{3, 4};
  std::vector<std::vector<Symbol>> few{{0, 1}};
  std::vector<std::vector<Symbol>> many;
  for (Symbol a = 0; a < 3; ++a) {
    for (Symbol b = 0; b < 4; ++b) {
      if ((a + b) % 2 == 0) many.push_back({a, b});
    }
  }
  const Relation sparse(radices, few);
  const Relation dense(radices, many);
  EXPECT_EQ(sparse.size(), 1u);
  EXPECT_EQ(dense.size(), many.size());
  for (Symbol a = 0; a < 3; ++a) {
    for (Symbol b = 0; b < 4; ++b) {
      const std::vector<Symbol> t{a, b};
      EXPECT_EQ(dense.contains(t), (a + b) % 2 == 0);
      EXPECT_EQ(sparse.contains(t), a == 0 && b == 1);
    }
  }
  EXPECT_EQ(dense.tuples(), many);
  const std::vector<Symbol> out_of_range{3, 0};
  EXPECT_FALSE(dense.contains(out_of_range));
}

TEST(Relation, EncodeIsMostSignificantFirst) {
  const Relation r({3, 5}, std::vector<std::vector<Symbol>>{});
  const std::vector<Symbol> t{2, 4};
  EXPECT_EQ(r.encode(t), 2u * 5 + 4);
  std::vector<Symbol> back(2);
  r.decode(14, back);
  EXPECT_EQ(back, t);
}

TEST(Relation, RejectsBadTuples) {
  const std::vector<std::vector<Symbol>> wrong_len{{0}};
  EXPECT_TRUE(contains(error_of([&] { Relation({2, 2}, wrong_len); }), "arity mismatch"));
  const std::vector<std::vector<Symbol>> wrong_sym{{0, 2}};
  EXPECT_TRUE(contains(error_of([&] { Relation({2, 2}, wrong_sym); }), "symbol out of range"));
}

TEST(Value, SpecExamples) {
  ConstraintGraph single(2, 2);
  single.add_vertex("u");
  single.add_vertex("v");
  single.add_edge({0, 1}, std::vector<std::vector<Symbol>>{{0, 0}});
  EXPECT_EQ(value(single, A({0, 0})).str(), "1/1");

  // edges (v0,v1) agree, (v1,v2) and (v0,v2) do not
  EXPECT_EQ(value(reconf::testing::triangle(), A({0, 0, 1})).str(), "1/3");

  ConstraintGraph vacuous(2, 3);
  for (const char* id : {"a", "b", "c"}) vacuous.add_vertex(id);
  std::vector<std::vector<Symbol>> all;
  for (Symbol a = 0; a < 3; ++a) {
    for (Symbol b = 0; b < 3; ++b) all.push_back({a, b});
  }
  vacuous.add_edge({0, 1}, all);
  vacuous.add_edge({1, 2}, all);
  EXPECT_EQ(value(vacuous, A({2, 0, 1})).str(), "2/2");
}

TEST(Value, Errors) {
  const auto g = reconf::testing::triangle();
  EXPECT_EQ(error_of([&] { value(g, Assignment(3)); }), "incomplete assignment");
  EXPECT_EQ(error_of([&] { value(g, A({0, 0})); }), "incomplete assignment");
  EXPECT_TRUE(contains(error_of([&] { value(g, A({0, 2, 0})); }), "symbol out of range"));
  ConstraintGraph empty(2, 2);
  empty.add_vertex("a");
  EXPECT_EQ(error_of([&] { value(empty, A({0})); }), "no constraints");
}

TEST(Value, DuplicateEdgesCountWithMultiplicity) {
  ConstraintGraph g(2, 2);
  g.add_vertex("a");
  g.add_vertex("b");
  const std::vector<std::vector<Symbol>> eq{{0, 0}, {1, 1}};
  const std::vector<std::vector<Symbol>> ne{{0, 1}, {1, 0}};
  g.add_edge({0, 1}, eq);
  g.add_edge({0, 1}, eq);
  g.add_edge({0, 1}, ne);
  EXPECT_EQ(value(g, A({1, 1})).str(), "2/3");
  EXPECT_EQ(value(g, A({1, 0})).str(), "1/3");
}

TEST(Sequence, SpecExamples) {
  const auto g = reconf::testing::triangle();
  EXPECT_EQ(sequence_value(g, ReconfigSequence{{A({1, 1, 1})}}).str(), "3/3");
  const ReconfigSequence flips{{A({0, 0, 0}), A({1, 0, 0}), A({1, 1, 0}), A({1, 1, 1})}};
  EXPECT_EQ(sequence_value(g, flips), Value({1, 3}));
  const ReconfigSequence twice{{A({0, 0, 1}), A({0, 0, 1})}};
  EXPECT_EQ(sequence_value(g, twice), value(g, A({0, 0, 1})));
}

TEST(Sequence, Validation) {
  EXPECT_TRUE(validate_sequence(ReconfigSequence{{A({0, 0}), A({0, 1}), A({1, 1})}}).empty());
  EXPECT_EQ(validate_sequence(ReconfigSequence{{A({0, 0}), A({1, 1})}}), std::vector<std::size_t>{0});
  EXPECT_TRUE(validate_sequence(ReconfigSequence{{A({0, 0})}}).empty());
  const auto g = reconf::testing::triangle();
  EXPECT_EQ(error_of([&] { sequence_value(g, ReconfigSequence{{A({0, 0, 0}), A({1, 1, 0})}}); }),
            "invalid step at index 0");
  EXPECT_EQ(error_of([&] { sequence_value(g, ReconfigSequence{}); }), "empty sequence");
}

namespace {

// Random graph with its accepted tuples kept as plain lists.
struct Plain {
  ConstraintGraph g{2, 3};
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::vector<Symbol>>> accept;
};

Plain random_plain(Rng& rng, std::size_t nv, std::size_t ne) {
  Plain p;
  for (std::size_t v = 0; v < nv; ++v) p.g.add_vertex("v" + std::to_string(v));
  for (std::size_t e = 0; e < ne; ++e) {
    const std::size_t a = rng.below(nv);
    const std::size_t b = rng.below(nv);
    std::vector<std::vector<Symbol>> acc;
    for (Symbol x = 0; x < 3; ++x) {
      for (Symbol y = 0; y < 3; ++y) {
        if (rng.bernoulli(1, 2)) acc.push_back({x, y});
      }
    }
    p.g.add_edge({a, b}, acc);
    p.edges.emplace_back(a, b);
    p.accept.push_back(acc);
  }
  return p;
}

std::uint64_t plain_count(const Plain& p, const Assignment& psi) {
  std::uint64_t n = 0;
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    const std::vector<Symbol> t{psi[p.edges[e].first], psi[p.edges[e].second]};
    n += std::find(p.accept[e].begin(), p.accept[e].end(), t) != p.accept[e].end();
  }
  return n;
}

Assignment random_assignment(Rng& rng, std::size_t nv) {
  Assignment a(nv);
  for (std::size_t v = 0; v < nv; ++v) a[v] = static_cast<Symbol>(rng.below(3));
  return a;
}

ReconfigSequence random_walk(Rng& rng, Assignment start, std::size_t len) {
  ReconfigSequence s{{start}};
  for (std::size_t i = 0; i < len; ++i) {
    start[rng.below(start.size())] = static_cast<Symbol>(rng.below(3));
    s.steps.push_back(start);
  }
  return s;
}

}  // namespace

TEST(ValueProperties, MatchesPlainCountAndIsRelabelInvariant) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Plain p = random_plain(rng, 5, 7);
    const Assignment psi = random_assignment(rng, 5);
    const Value v = value(p.g, psi);
    EXPECT_EQ(v.satisfied, plain_count(p, psi));
    EXPECT_EQ(v.total, 7u);

    // relabel vertices by a permutation and reverse the edge order
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    ConstraintGraph h(2, 3);
    std::vector<std::size_t> where(5);
    for (std::size_t i = 0; i < 5; ++i) where[perm[i]] = h.add_vertex("w" + std::to_string(perm[i]));
    for (std::size_t e = p.edges.size(); e-- > 0;) {
      h.add_edge({where[p.edges[e].first], where[p.edges[e].second]}, p.accept[e]);
    }
    Assignment moved(5);
    for (std::size_t v0 = 0; v0 < 5; ++v0) moved[where[v0]] = psi[v0];
    EXPECT_EQ(value(h, moved), v);
  }
}

TEST(SequenceProperties, BoundsReversalConcatenation) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Plain p = random_plain(rng, 4, 6);
    const ReconfigSequence s = random_walk(rng, random_assignment(rng, 4), 8);
    const Value sv = sequence_value(p.g, s);
    EXPECT_LE(sv, std::min(value(p.g, s.steps.front()), value(p.g, s.steps.back())));
    EXPECT_GE(sv.ratio(), Ratio(0, 1));

    ReconfigSequence rev = s;
    std::reverse(rev.steps.begin(), rev.steps.end());
    EXPECT_EQ(sequence_value(p.g, rev), sv);

    const ReconfigSequence t = random_walk(rng, s.steps.back(), 5);
    ReconfigSequence joined = s;
    joined.steps.insert(joined.steps.end(), t.steps.begin() + 1, t.steps.end());
    EXPECT_EQ(sequence_value(p.g, joined), std::min(sv, sequence_value(p.g, t)));
  }
}

TEST(InstanceIo, RoundTrip) {
  ConstraintGraph g(2, 4);
  g.add_vertex("a");
  g.add_vertex("b", 8);
  g.add_vertex("c");
  g.add_edge({0, 1}, std::vector<std::vector<Symbol>>{{0, 7}, {3, 2}});
  g.add_edge({2, 0}, std::vector<std::vector<Symbol>>{{1, 1}});
  g.add_edge({2, 0}, std::vector<std::vector<Symbol>>{{1, 1}});
  const ReconfInstance inst{g, A({0, 7, 1}), A({3, 2, 1})};
  const std::string text = serialize(inst);
  const ReconfInstance back = deserialize(text);
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(back.graph.vertex_count(), 3u);
  EXPECT_EQ(back.graph.alphabet_of(1), 8u);
  EXPECT_EQ(back.graph.edge_count(), 3u);
  EXPECT_EQ(*back.graph.edge(0).constraint, *g.edge(0).constraint);
  EXPECT_EQ(back.psi_ini, inst.psi_ini);
  EXPECT_EQ(back.psi_tar, inst.psi_tar);

  const auto dir = std::filesystem::temp_directory_path() / "reconf_core_io";
  std::filesystem::create_directories(dir);
  write_instance(dir / "x.json", inst);
  EXPECT_EQ(serialize(read_instance(dir / "x.json")), text);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.json.tmp"));
}

TEST(InstanceIo, ErrorsCarryLocation) {
  const std::string base =
      R"({"arity":2,"alphabet":2,"vertices":["a","b"],"edges":[{"vertices":["a","b"],"accept":[[0,0]]}],"psi_ini":{"a":0,"b":0})";
  EXPECT_TRUE(contains(error_of([&] { deserialize(base + "}"); }), "missing endpoint"));
  const std::string bad_arity =
      R"({"arity":2,"alphabet":2,"vertices":["a","b"],"edges":[{"vertices":["a","b"],"accept":[[0,0,1]]}],"psi_ini":{"a":0,"b":0},"psi_tar":{"a":0,"b":0}})";
  const std::string msg = error_of([&] { deserialize(bad_arity); });
  EXPECT_TRUE(contains(msg, "arity mismatch"));
  EXPECT_TRUE(contains(msg, "edges[0].accept[0]"));
  const std::string unknown =
      R"({"arity":2,"alphabet":2,"vertices":["a","b"],"edges":[{"vertices":["a","z"],"accept":[[0,0]]}],"psi_ini":{"a":0,"b":0},"psi_tar":{"a":0,"b":0}})";
  EXPECT_TRUE(contains(error_of([&] { deserialize(unknown); }), "unknown vertex id 'z'"));
  const std::string range =
      R"({"arity":2,"alphabet":2,"vertices":["a","b"],"edges":[{"vertices":["a","b"],"accept":[[0,0]]}],"psi_ini":{"a":0,"b":5},"psi_tar":{"a":0,"b":0}})";
  EXPECT_TRUE(contains(error_of([&] { deserialize(range); }), "symbol out of range"));
  EXPECT_TRUE(contains(error_of([&] { deserialize("{"); }), "malformed"));
}

TEST(InstanceIo, SequenceRoundTrip) {
  const auto g = reconf::testing::triangle();
  const ReconfigSequence s{{A({0, 0, 0}), A({1, 0, 0})}};
  const ReconfigSequence back = deserialize_sequence(g, serialize_sequence(g, s));
  ASSERT_EQ(back.steps.size(), 2u);
  EXPECT_EQ(back.steps[1], s.steps[1]);
}

TEST(Instance, EqualEndpointsAreAccepted) {
  const ReconfInstance inst{reconf::testing::triangle(), A({1, 1, 1}), A({1, 1, 1})};
  EXPECT_NO_THROW(check_instance(inst));
}
