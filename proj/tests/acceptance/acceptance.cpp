// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "reconf/compose.hpp"
#include "reconf/constants.hpp"
#include "reconf/experiments.hpp"
#include "reconf/generate.hpp"
#include "reconf/hadamard.hpp"
#include "reconf/robustize.hpp"
#include "reconf/solver.hpp"

using namespace reconf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int slow_inner(std::uint64_t a, std::uint64_t x) {
  int p = 0;
  for (std::uint64_t m = a & x; m; m >>= 1) p ^= static_cast<int>(m & 1);
  return p;
}

std::vector<BitFunction> codewords(int n) {
  std::vector<BitFunction> out;
  for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
    BitFunction f(n);
    for (std::uint64_t x = 0; x < f.size(); ++x) f.set(x, slow_inner(a, x));
    out.push_back(std::move(f));
  }
  return out;
}

// --- 1 -------------------------------------------------------------------------

Outcome codeword_paths_n9() {
  Outcome o;
  const int n = 9;
  const auto words = codewords(n);
  const std::uint64_t len = 512;
  Rng rng(derive_seed(kDefaultSeed, "acceptance-1"));
  std::size_t checked = 0;
  for (int k = 0; k < 50; ++k) {
    const std::uint64_t a = rng.below(len);
    std::uint64_t b = rng.below(len - 1);
    if (b >= a) ++b;
    CodewordPath p;
    try {
      p = generate_codeword_path(a, b, n, derive_seed(kDefaultSeed, static_cast<std::uint64_t>(k)), 3);
    } catch (const std::exception& e) {
      o.fail(std::string("generation failed: ") + e.what());
      continue;
    }
    if (!verify_codeword_path(p).ok()) o.fail("library verification failed");
    // independent: closeness 4d <= 2^n, farness 400 d > 101 * 2^n
    for (const BitFunction& f : p.steps) {
      if (4 * std::min(f.hamming(words[a]), f.hamming(words[b])) > len) o.fail("step not 1/4-close to endpoints");
      for (std::uint64_t g = 0; g < len; ++g) {
        if (g == a || g == b) continue;
        if (400 * f.hamming(words[g]) <= 101 * len) o.fail("step too close to a third codeword");
        ++checked;
      }
    }
  }
  o.detail = o.pass ? "50 paths, " + std::to_string(checked) + " (step, codeword) pairs far" : o.detail;
  return o;
}

// --- 2 -------------------------------------------------------------------------

Outcome observation_n3() {
  Outcome o;
  const auto words = codewords(3);
  std::size_t pairs_failing = 0;
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) {
      if (a == b) continue;
      std::vector<std::uint64_t> d;
      for (std::uint64_t x = 0; x < 8; ++x) {
        if (slow_inner(a, x) != slow_inner(b, x)) d.push_back(x);
      }
      bool every_order = true;
      int orders = 0;
      do {
        BitFunction f = words[a];
        bool close_third = false;
        for (const auto x : d) {
          f.flip(x);
          for (std::uint64_t g = 0; g < 8; ++g) {
            if (g != a && g != b && 4 * f.hamming(words[g]) <= 8) close_third = true;
          }
        }
        every_order = every_order && close_third;
        ++orders;
      } while (std::next_permutation(d.begin(), d.end()));
      if (orders != 24) o.fail("expected 24 orders");
      pairs_failing += every_order;
    }
  }
  const ObsN3Result lib = obs_n3();
  if (pairs_failing != 56) o.fail("independent sweep: only " + std::to_string(pairs_failing) + " of 56 pairs");
  if (lib.failing_pairs != 56 || lib.pairs != 56) o.fail("library sweep disagrees");
  if (o.pass) o.detail = "56 of 56 ordered pairs, every one of 24 orders has a close third codeword";
  return o;
}

// --- 3 -------------------------------------------------------------------------

Outcome partial_sums() {
  Outcome o;
  const PartialSumReport r = partial_sum_experiment(128, 100000, kDefaultSeed);
  if (r.hits != 0) o.fail(std::to_string(r.hits) + " hits at N = 128");
  if (!(r.bound < 1.5e-6 && r.bound > 1.3e-6)) o.fail("bound 0.9^128 misreported");
  std::vector<int> s{-1, -1, 1, 1};
  int hits = 0;
  int total = 0;
  do {
    int sum = 0;
    int low = 1 << 30;
    for (const int v : s) low = std::min(low, sum += v);
    hits += low <= -2;
    ++total;
  } while (std::next_permutation(s.begin(), s.end()));
  if (Ratio(hits, total) != Ratio(1, 6)) o.fail("independent N = 2 enumeration");
  if (exhaustive_partial_sum_frequency(2) != Ratio(1, 6)) o.fail("library N = 2 enumeration");
  if (o.pass) o.detail = "0 of 100000 at N = 128 (bound " + std::to_string(r.bound) + "), N = 2 exactly 1/6";
  return o;
}

// --- 4 -------------------------------------------------------------------------

Outcome partition_claim() {
  Outcome o;
  std::size_t triples = 0;
  for (int n : {4, 5}) {
    const std::uint64_t m = 1ULL << n;
    for (std::uint64_t a = 0; a < m; ++a) {
      for (std::uint64_t b = 0; b < m; ++b) {
        for (std::uint64_t c = 0; c < m; ++c) {
          if (a == b || b == c || a == c) continue;
          std::uint64_t counts[4] = {0, 0, 0, 0};  // alpha odd, beta odd, gamma odd, equal
          for (std::uint64_t x = 0; x < m; ++x) {
            const int pa = slow_inner(a, x);
            const int pb = slow_inner(b, x);
            const int pc = slow_inner(c, x);
            counts[pb == pc && pa != pb ? 0 : pa == pc && pb != pa ? 1 : pa == pb && pc != pa ? 2 : 3]++;
          }
          const PartitionReport r = partition_triple(a, b, c, n);
          const std::uint64_t q = m / 4;
          for (const auto k : counts) {
            if (k != q) o.fail("independent count differs from 2^(n-2)");
          }
          if (r.p_alpha.size() != q || r.p_beta.size() != q || r.p_gamma.size() != q || r.p_equal.size() != q) {
            o.fail("library partition sizes");
          }
          std::vector<std::uint64_t> ab = r.p_alpha;
          ab.insert(ab.end(), r.p_beta.begin(), r.p_beta.end());
          std::sort(ab.begin(), ab.end());
          if (ab != disagreement_set(a, b, n)) o.fail("P_alpha + P_beta != D");
          ++triples;
        }
      }
    }
  }
  if (claim_partition(4).violations != 0 || claim_partition(5).violations != 0) o.fail("library sweep");
  if (o.pass) o.detail = std::to_string(triples) + " triples at n = 4, 5";
  return o;
}

// --- 5, 6 ----------------------------------------------------------------------

std::vector<ShadowInstance> shadow_instances(bool satisfiable) {
  std::vector<ShadowInstance> out;
  for (std::uint64_t k = 0; k < 10; ++k) {
    out.push_back(generate_shadow_path(4, 4, 512, satisfiable, derive_seed(kDefaultSeed, 500 + k)));
  }
  return out;
}

Outcome completeness() {
  Outcome o;
  std::size_t steps = 0;
  for (const ShadowInstance& s : shadow_instances(true)) {
    const CircuitSystem sys = robustize(s.embedded);
    if (sys.n != 9) o.fail("n != 9");
    const ReconfigSequence psi = embed_sequence(s, *s.shadow_path);
    if (!sequence_value(s.embedded.graph, psi).perfect()) o.fail("hand-built path leaves the satisfying set");
    const auto seq = completeness_sequence(sys, psi, kDefaultSeed);
    if (seq.front() != sys.sigma_ini || seq.back() != sys.sigma_tar) o.fail("endpoints");
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (satisfied_circuits(sys, seq[t]) != sys.circuits.size()) o.fail("step " + std::to_string(t) + " violates");
      if (t > 0) {
        std::uint64_t d = 0;
        for (std::size_t v = 0; v < 4; ++v) d += seq[t].blocks[v].hamming(seq[t - 1].blocks[v]);
        if (d != 1) o.fail("step " + std::to_string(t) + " is not a single-bit step");
      }
    }
    steps += seq.size();
  }
  if (o.pass) o.detail = "10 instances, " + std::to_string(steps) + " sigma steps, all circuits satisfied";
  return o;
}

Outcome soundness_extraction() {
  Outcome o;
  std::size_t sequences = 0;
  std::size_t broken_checked = 0;
  const auto good = shadow_instances(true);
  const auto broken = shadow_instances(false);
  for (std::size_t k = 0; k < 20; ++k) {
    const ShadowInstance& s = k < 10 ? good[k] : broken[k - 10];
    const Value shadow_maxmin = maxmin_value(s.shadow).optimum;
    if ((k < 10) != shadow_maxmin.perfect()) o.fail("shadow oracle disagrees with the generator");
    const CircuitSystem sys = robustize(s.embedded);
    const std::size_t edges = s.embedded.graph.edge_count();
    for (std::uint64_t j = 0; j < 5; ++j) {
      const auto seq = random_sigma_sequence(sys.sigma_ini, sys.sigma_tar, derive_seed(kDefaultSeed, 600 + 5 * k + j), 200);
      const ReconfigSequence psi = extract_psi_sequence(sys, seq);
      ++sequences;
      if (!validate_sequence(psi).empty()) o.fail("extracted sequence is not a valid reconfiguration");
      if (psi.steps.front() != s.embedded.psi_ini || psi.steps.back() != s.embedded.psi_tar) o.fail("endpoints");
      // pointwise: an accepting circuit decodes to an accepted pair
      for (const BlockAssignment& step : seq) {
        Assignment dec(4);
        for (std::size_t v = 0; v < 4; ++v) dec[v] = decode_block(step.blocks[v]);
        const std::size_t rejected = sys.circuits.size() - satisfied_circuits(sys, step);
        const std::size_t violated = edges - value(s.embedded.graph, dec).satisfied;
        if (rejected < violated) o.fail("a circuit accepts a step whose decoding violates its edge");
      }
      if (!shadow_maxmin.perfect()) {
        if (sequence_value(s.embedded.graph, psi) > shadow_maxmin) o.fail("decoded sequence beats the maxmin");
        ++broken_checked;
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(sequences) + " sequences, " + std::to_string(broken_checked) +
               " on maxmin < 1 instances, no structural failures";
  }
  return o;
}

// --- 7 -------------------------------------------------------------------------

Outcome failed_attempt_regression() {
  Outcome o;
  for (int n : {2, 3}) {
    const std::uint32_t w = 1U << n;
    const Symbol a1 = 1, a2 = 2, b1 = 3, b2 = n == 2 ? 0 : 5;
    const std::vector<std::vector<Symbol>> pi{{a1, b1}, {a2, b2}};
    const auto rel = std::make_shared<Relation>(std::vector<std::uint32_t>{w, w}, pi);
    const RobustCircuit weak{0, 0, 1, rel, n, true};
    const RobustCircuit fixed{0, 0, 1, rel, n, false};
    const auto sat = micro_sat_set(weak);
    const auto path = four_phase_path(n, static_cast<std::uint64_t>(a1), static_cast<std::uint64_t>(a2),
                                      static_cast<std::uint64_t>(b1), static_cast<std::uint64_t>(b2));
    bool rejected_somewhere = false;
    for (const auto& [f, g] : path) {
      const std::uint32_t in = pack_input(f, g);
      std::uint32_t best = 64;
      for (const auto s : sat) best = std::min<std::uint32_t>(best, std::popcount(in ^ s));
      // relative distance over the 2^(n+1) input bits is at most 1/2^n
      if (best > 2) o.fail("n = " + std::to_string(n) + ": a step is farther than 1/2^n");
      if (micro_distance(sat, in, n) != Ratio(best, 2LL * w)) o.fail("micro oracle disagrees");
      rejected_somewhere = rejected_somewhere || !eval_circuit(weak, f, g);
      if (eval_circuit(fixed, f, g) != eval_circuit(weak, f, g)) o.fail("radii differ below n = 10");
    }
    if (!rejected_somewhere) o.fail("the path never leaves the satisfying set");
  }
  // the fixed circuit's extra 1/800 only shows from n = 10 on
  const int n = 10;
  const auto path = four_phase_path(n, 1, 2, 3, 4);
  const auto& [f, g] = path[(1ULL << n) / 2];
  BitFunction fs = f;
  BitFunction gs = g;
  fs.flip(disagreement_set(1, 2, n)[0]);
  gs.flip(disagreement_set(3, 4, n)[0]);
  const auto rel = std::make_shared<Relation>(std::vector<std::uint32_t>{1024, 1024},
                                              std::vector<std::vector<Symbol>>{{1, 3}, {2, 4}});
  const RobustCircuit weak{0, 0, 1, rel, n, true};
  const RobustCircuit fixed{0, 0, 1, rel, n, false};
  if (eval_circuit(weak, f, g) || eval_circuit(fixed, f, g)) o.fail("midpoint accepted");
  if (!eval_circuit(weak, fs, gs)) o.fail("weakened circuit rejects the two-bit repair");
  if (eval_circuit(fixed, fs, gs)) o.fail("fixed circuit accepts the two-bit repair at n = 10");
  if (o.pass) {
    o.detail = "n = 2, 3 four-phase paths within 1/2^n of the weakened circuit; fixed circuit rejects the "
               "two-bit repair at n = 10";
  }
  return o;
}

// --- 8, 9 ----------------------------------------------------------------------

std::vector<std::uint32_t> random_sat_set(Rng& rng, std::size_t m) {
  std::set<std::uint32_t> s;
  const std::size_t k = 1 + rng.below(6);
  while (s.size() < k) s.insert(static_cast<std::uint32_t>(rng.below(1ULL << m)));
  return {s.begin(), s.end()};
}

std::size_t violated_edges(const ConstraintGraph& g, const Assignment& a) {
  std::size_t bad = 0;
  for (const Hyperedge& h : g.edges()) {
    std::vector<Symbol> t;
    for (const auto v : h.vertices) t.push_back(a[v]);
    bad += !h.constraint->contains(t);
  }
  return bad;
}

Outcome rectangularity() {
  Outcome o;
  Rng rng(derive_seed(kDefaultSeed, "acceptance-8"));
  for (int graph = 0; graph < 10; ++graph) {
    const std::size_t m = 4 + rng.below(5);
    const auto t = reference_tester(random_sat_set(rng, m), m);
    const SuperimposedGraph s = superimpose(t, t);
    const auto e = static_cast<std::int64_t>(t.graph.edge_count());
    for (int i = 0; i < 100; ++i) {
      Assignment a(s.graph.vertex_count());
      for (std::size_t v = 0; v < a.size(); ++v) a[v] = static_cast<Symbol>(rng.below(s.graph.alphabet_of(v)));
      const Ratio prod(static_cast<std::int64_t>(violated_edges(s.graph, a)), e * e);
      const Ratio r1(static_cast<std::int64_t>(violated_edges(t.graph, twin_view(s, t, a, 1))), e);
      const Ratio r2(static_cast<std::int64_t>(violated_edges(t.graph, twin_view(s, t, a, 2))), e);
      if (prod != r1 * r2) o.fail("violated fractions do not multiply");
    }
  }
  if (o.pass) o.detail = "1000 assignments over 10 superimposed graphs, exact";
  return o;
}

Outcome tester_contract() {
  Outcome o;
  Rng rng(derive_seed(kDefaultSeed, "acceptance-9"));
  std::size_t pairs = 0;
  for (int k = 0; k < 100; ++k) {
    const auto sat = random_sat_set(rng, 4);
    const AssignmentTesterOutput t = reference_tester(sat, 4);
    for (const auto x : sat) {
      if (violated_edges(t.graph, t.assignment(x, t.witness(x))) != 0) o.fail("completeness value below 1");
    }
    for (std::uint32_t x = 0; x < 16; ++x) {
      int dist = 64;
      for (const auto s : sat) dist = std::min(dist, std::popcount(x ^ s));
      for (Symbol tau = 0; tau < static_cast<Symbol>(sat.size()); ++tau) {
        // Delta(sigma, sat) * m = Hamming distance to the set
        if (static_cast<int>(violated_edges(t.graph, t.assignment(x, {tau}))) < dist) o.fail("too few violations");
        ++pairs;
      }
    }
  }
  if (o.pass) o.detail = "100 sat sets, " + std::to_string(pairs) + " (sigma, tau) pairs";
  return o;
}

// --- 10 ------------------------------------------------------------------------

Outcome value_accounting() {
  Outcome o;
  const MicroPipelineResult r = micro_pipeline_experiment(10, kDefaultSeed, kDefaultStateBudget);
  if (!r.ok) o.fail("pipeline reported failures");
  std::size_t witnessed = 0;
  std::size_t bounded = 0;
  for (const PipelineReport& rep : r.reports) {
    for (const auto& f : rep.failures) o.fail(f);
    const StageRow* src = rep.row("source");
    const StageRow* rob = rep.row("robustized");
    const StageRow* com = rep.row("composed");
    const StageRow* bin = rep.row("binary");
    if (!src || !rob || !com || !bin || !src->maxmin) {
      o.fail("missing stage");
      continue;
    }
    if (src->maxmin->perfect() && rob->maxmin && rob->maxmin->perfect()) {
      if (!(com->maxmin && com->maxmin->perfect() && bin->maxmin && bin->maxmin->perfect())) {
        o.fail("a satisfying-step sequence exists but a later stage is below 1");
      }
      ++witnessed;
    }
    if (com->maxmin && com->maxmin->perfect() && !(bin->maxmin && bin->maxmin->perfect())) {
      o.fail("perfect 4-ary stage but the binary stage is not");
    }
    if (com->method == "exact" && !com->maxmin->perfect()) {
      if (!bin->upper_bound) {
        o.fail("no binary bound");
        continue;
      }
      // maxmin(binary) <= U, so the bound on U carries over
      if (Ratio(1, 1) - bin->upper_bound->ratio() < (Ratio(1, 1) - com->maxmin->ratio()) * Ratio(1, 4)) {
        o.fail("binary stage loses more than a factor 4");
      }
      ++bounded;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(r.reports.size()) + " instances, " + std::to_string(witnessed) +
               " with value 1 carried to the binary stage, " + std::to_string(bounded) + " with the factor-4 bound";
  }
  return o;
}

// --- 11 ------------------------------------------------------------------------

// Widest-path DFS over whole sequences: a state is re-entered only when a
// sequence reaches it with a strictly better minimum.
std::uint64_t dfs_maxmin(const ReconfInstance& inst) {
  const auto radices = inst.graph.vertex_alphabets();
  std::vector<std::uint64_t> stride(radices.size(), 1);
  std::uint64_t total = 1;
  for (std::size_t v = 0; v < radices.size(); ++v) {
    stride[v] = total;
    total *= radices[v];
  }
  auto decode = [&](std::uint64_t s) {
    std::vector<Symbol> a(radices.size());
    for (std::size_t v = 0; v < radices.size(); ++v) a[v] = static_cast<Symbol>(s / stride[v] % radices[v]);
    return a;
  };
  auto encode = [&](const Assignment& a) {
    std::uint64_t s = 0;
    for (std::size_t v = 0; v < radices.size(); ++v) s += static_cast<std::uint64_t>(a[v]) * stride[v];
    return s;
  };
  std::vector<std::int64_t> score(total);
  for (std::uint64_t s = 0; s < total; ++s) {
    score[s] = static_cast<std::int64_t>(inst.graph.edge_count() - violated_edges(inst.graph, Assignment(decode(s))));
  }
  std::vector<std::int64_t> best(total, -1);
  const std::uint64_t from = encode(inst.psi_ini);
  best[from] = score[from];
  std::vector<std::uint64_t> stack{from};
  while (!stack.empty()) {
    const std::uint64_t s = stack.back();
    stack.pop_back();
    const auto a = decode(s);
    for (std::size_t v = 0; v < radices.size(); ++v) {
      for (std::uint32_t x = 0; x < radices[v]; ++x) {
        if (static_cast<Symbol>(x) == a[v]) continue;
        const std::uint64_t t = s - static_cast<std::uint64_t>(a[v]) * stride[v] + x * stride[v];
        const std::int64_t b = std::min(best[s], score[t]);
        if (b > best[t]) {
          best[t] = b;
          stack.push_back(t);
        }
      }
    }
  }
  return static_cast<std::uint64_t>(best[encode(inst.psi_tar)]);
}

Outcome solver_self_consistency() {
  Outcome o;
  std::vector<ReconfInstance> corpus;
  ConstraintGraph tri(2, 2);
  for (const char* id : {"v0", "v1", "v2"}) tri.add_vertex(id);
  const std::vector<std::vector<Symbol>> eq{{0, 0}, {1, 1}};
  tri.add_edge({0, 1}, eq);
  tri.add_edge({1, 2}, eq);
  tri.add_edge({0, 2}, eq);
  corpus.push_back(ReconfInstance{tri, Assignment(std::vector<Symbol>{0, 0, 0}), Assignment(std::vector<Symbol>{1, 1, 1})});
  for (std::uint64_t k = 0; k < 60; ++k) {
    GenerateOptions g;
    g.kind = k % 3 == 0 ? GraphKind::kPath : k % 3 == 1 ? GraphKind::kCycle : GraphKind::kRandom;
    g.vertices = 3 + k % 4;
    g.alphabet = 2 + static_cast<std::uint32_t>(k % 3);
    g.seed = derive_seed(kDefaultSeed, 1100 + k);
    corpus.push_back(generate_instance(g));
  }
  for (auto& inst : micro_corpus(10, kDefaultSeed)) corpus.push_back(std::move(inst));

  std::size_t checked = 0;
  for (const ReconfInstance& inst : corpus) {
    std::uint64_t configs = 1;
    for (const auto w : inst.graph.vertex_alphabets()) configs *= w;
    if (configs > 4096) continue;
    const MaxminResult bfs = maxmin_value(inst);
    const std::uint64_t dfs = dfs_maxmin(inst);
    if (bfs.optimum.satisfied != dfs) o.fail("BFS and DFS disagree on instance " + std::to_string(checked));
    if (!bfs.witness || sequence_value(inst.graph, *bfs.witness) != bfs.optimum) o.fail("witness value");
    ++checked;
  }
  if (maxmin_value(corpus.front()).optimum != Value{1, 3} || dfs_maxmin(corpus.front()) != 1) {
    o.fail("triangle value is not 1/3");
  }
  if (o.pass) o.detail = std::to_string(checked) + " instances agree, triangle = 1/3";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"codeword paths at n = 9", codeword_paths_n9},
      {"n = 3 impossibility", observation_n3},
      {"partial-sum lemma", partial_sums},
      {"partition claim", partition_claim},
      {"robustization completeness", completeness},
      {"soundness extraction", soundness_extraction},
      {"failed-attempt regression", failed_attempt_regression},
      {"rectangularity", rectangularity},
      {"reference tester contract", tester_contract},
      {"micro value accounting", value_accounting},
      {"solver self-consistency", solver_self_consistency},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %-28s %s (%.2fs) %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
