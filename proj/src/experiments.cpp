#include "reconf/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "reconf/constants.hpp"
#include "reconf/error.hpp"

namespace reconf {

namespace {

std::string decimal(const Ratio& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
  return buf;
}

}  // namespace

Fig2Result fig2_profile(int n, std::uint64_t seed) {
  if (n < 2 || n > 16) throw Error("fig2-profile needs 2 <= n <= 16");
  Rng rng(derive_seed(seed, "fig2-profile"));
  const std::uint64_t size = std::uint64_t{1} << n;
  Fig2Result r;
  r.alpha = rng.below(size);
  r.beta = rng.below(size - 1);
  if (r.beta >= r.alpha) ++r.beta;
  const CodewordPath path = generate_codeword_path(r.alpha, r.beta, n, seed);
  r.attempts = path.attempts;
  std::ostringstream out;
  out << "step,flipped,hamming_alpha,hamming_beta,hamming_other_min,other_argmin,rel_other_min\n";
  r.all_far = true;
  const Ratio far = constants::kQuarter + constants::kDelta0;
  for (const ProfileRow& row : distance_profile(path)) {
    const Ratio rel(row.to_other_min, static_cast<std::int64_t>(size));
    r.all_far = r.all_far && rel > far;
    out << row.step << ',' << row.flipped << ',' << row.to_alpha << ',' << row.to_beta << ',' << row.to_other_min
        << ',' << row.other_argmin << ',' << decimal(rel) << '\n';
  }
  r.csv = out.str();
  return r;
}

bool has_close_third(const CodewordPath& path) {
  const HadamardCode& code = hadamard_code(path.n);
  for (const BitFunction& step : path.steps) {
    const auto dist = code.distances(step);
    for (std::uint64_t g = 0; g < code.size(); ++g) {
      if (g == path.alpha || g == path.beta) continue;
      if (Ratio(dist[g], static_cast<std::int64_t>(code.size())) <= constants::kQuarter) return true;
    }
  }
  return false;
}

ObsN3Result obs_n3() {
  constexpr int n = 3;
  ObsN3Result r;
  std::ostringstream out;
  out << "alpha,beta,orders,orders_with_close_third\n";
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) {
      if (a == b) continue;
      std::vector<std::uint64_t> order = disagreement_set(a, b, n);
      std::sort(order.begin(), order.end());
      std::size_t orders = 0;
      std::size_t failing = 0;
      do {
        ++orders;
        failing += has_close_third(codeword_path_from_order(a, b, n, order)) ? 1 : 0;
      } while (std::next_permutation(order.begin(), order.end()));
      ++r.pairs;
      r.orders_per_pair = orders;
      if (failing == orders) ++r.failing_pairs;
      out << a << ',' << b << ',' << orders << ',' << failing << '\n';
    }
  }
  r.csv = out.str();
  return r;
}

PartitionSweep claim_partition(int n) {
  if (n < 2 || n > 8) throw Error("claim-partition needs 2 <= n <= 8");
  const std::uint64_t size = std::uint64_t{1} << n;
  const std::size_t quarter = size / 4;
  PartitionSweep s;
  std::ostringstream out;
  out << "alpha,beta,gamma,p_alpha,p_beta,p_gamma,p_equal,union_is_d\n";
  for (std::uint64_t a = 0; a < size; ++a) {
    for (std::uint64_t b = 0; b < size; ++b) {
      if (b == a) continue;
      const auto d = disagreement_set(a, b, n);
      for (std::uint64_t c = 0; c < size; ++c) {
        if (c == a || c == b) continue;
        const PartitionReport p = partition_triple(a, b, c, n);
        std::vector<std::uint64_t> uni;
        std::merge(p.p_alpha.begin(), p.p_alpha.end(), p.p_beta.begin(), p.p_beta.end(), std::back_inserter(uni));
        const bool union_ok = uni == d;
        const bool sizes_ok = p.p_alpha.size() == quarter && p.p_beta.size() == quarter &&
                              p.p_gamma.size() == quarter && p.p_equal.size() == quarter;
        ++s.triples;
        if (!union_ok || !sizes_ok) ++s.violations;
        out << a << ',' << b << ',' << c << ',' << p.p_alpha.size() << ',' << p.p_beta.size() << ','
            << p.p_gamma.size() << ',' << p.p_equal.size() << ',' << (union_ok ? 1 : 0) << '\n';
      }
    }
  }
  s.csv = out.str();
  return s;
}

Ratio exhaustive_partial_sum_frequency(std::uint64_t half_length) {
  if (half_length == 0 || half_length > 12) throw Error("exhaustive enumeration needs 1 <= N <= 12");
  const auto threshold = -static_cast<std::int64_t>((99 * half_length + 99) / 100);
  std::vector<int> signs(2 * half_length, 1);
  std::fill(signs.begin(), signs.begin() + static_cast<std::ptrdiff_t>(half_length), -1);
  std::int64_t hits = 0;
  std::int64_t total = 0;
  do {
    ++total;
    if (min_partial_sum(signs) <= threshold) ++hits;
  } while (std::next_permutation(signs.begin(), signs.end()));
  return Ratio(hits, total).reduced();
}

std::string partial_sum_csv(const PartialSumReport& r) {
  std::ostringstream out;
  char bound[32];
  std::snprintf(bound, sizeof bound, "%.6e", r.bound);
  out << "half_length,trials,threshold,hits,frequency,bound\n"
      << r.half_length << ',' << r.trials << ',' << r.threshold << ',' << r.hits << ',' << r.frequency.str() << ','
      << bound << '\n';
  return out.str();
}

std::vector<ReconfInstance> micro_corpus(std::size_t count, std::uint64_t seed) {
  constexpr std::uint32_t w = 4;
  std::vector<ReconfInstance> corpus;
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng(derive_seed(derive_seed(seed, "micro-corpus"), static_cast<std::uint64_t>(k)));
    const std::size_t shape = k % 3;  // one edge; one edge plus an isolated vertex; a 3-path
    const std::size_t nv = shape == 0 ? 2 : 3;
    const bool want_perfect = k % 2 == 0;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw Error("micro corpus generation failed");
      ConstraintGraph g(2, w);
      for (std::size_t v = 0; v < nv; ++v) g.add_vertex("v" + std::to_string(v));
      const std::size_t ne = shape == 2 ? 2 : 1;
      for (std::size_t e = 0; e < ne; ++e) {
        std::vector<std::vector<Symbol>> accept;
        for (Symbol a = 0; a < static_cast<Symbol>(w); ++a) {
          for (Symbol b = 0; b < static_cast<Symbol>(w); ++b) {
            if (rng.bernoulli(1, 3)) accept.push_back({a, b});
          }
        }
        g.add_edge({e, e + 1}, accept);
      }
      Assignment ends[2];
      bool found = true;
      for (auto& end : ends) {
        found = false;
        for (int tries = 0; tries < 200 && !found; ++tries) {
          end = Assignment(nv);
          for (std::size_t v = 0; v < nv; ++v) end[v] = static_cast<Symbol>(rng.below(w));
          found = value(g, end).perfect();
        }
        if (!found) break;
      }
      if (!found || ends[0] == ends[1]) continue;
      ReconfInstance inst{std::move(g), ends[0], ends[1]};
      if (maxmin_value(inst).optimum.perfect() != want_perfect) continue;
      corpus.push_back(std::move(inst));
      break;
    }
  }
  return corpus;
}

MicroPipelineResult micro_pipeline_experiment(std::size_t count, std::uint64_t seed, std::uint64_t budget) {
  MicroPipelineResult r;
  const auto corpus = micro_corpus(count, seed);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    PipelineOptions opt;
    opt.budget = budget;
    opt.seed = derive_seed(seed, static_cast<std::uint64_t>(k));
    r.reports.push_back(micro_pipeline(corpus[k], opt));
    r.csv += r.reports.back().csv(k == 0, std::to_string(k));
    r.ok = r.ok && r.reports.back().ok();
  }
  return r;
}

}  // namespace reconf
