#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reconf/generate.hpp"
#include "reconf/hadamard.hpp"
#include "reconf/pipeline.hpp"

namespace reconf {

// Each experiment returns its CSV together with the verdict of the checks it
// performs.

struct Fig2Result {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;
  int attempts = 0;
  std::string csv;  // step,flipped,hamming_alpha,hamming_beta,hamming_other_min,other_argmin,rel_other_min
  bool all_far = false;
};

/// Random distinct (alpha, beta) from the seed, then a verified path.
Fig2Result fig2_profile(int n, std::uint64_t seed);

/// True iff some step of the path is 1/4-close to a codeword other than the
/// two endpoints.
bool has_close_third(const CodewordPath& path);

struct ObsN3Result {
  std::size_t pairs = 0;
  std::size_t orders_per_pair = 0;
  std::size_t failing_pairs = 0;  // pairs where every order has a close third
  std::string csv;               // alpha,beta,orders,orders_with_close_third
};

/// Every flip order of D(alpha, beta) at n = 3, for all ordered pairs.
ObsN3Result obs_n3();

struct PartitionSweep {
  std::size_t triples = 0;
  std::size_t violations = 0;
  std::string csv;  // alpha,beta,gamma,p_alpha,p_beta,p_gamma,p_equal,union_is_d
};

PartitionSweep claim_partition(int n);

/// Exact frequency over all arrangements of N (+1)s and N (-1)s of a
/// minimum partial sum <= -ceil(0.99 N).
Ratio exhaustive_partial_sum_frequency(std::uint64_t half_length);

std::string partial_sum_csv(const PartialSumReport& r);

/// The micro instances of the value-accounting experiment: 2 or 3 vertices
/// over alphabet 4, endpoints satisfying every edge.
std::vector<ReconfInstance> micro_corpus(std::size_t count, std::uint64_t seed);

struct MicroPipelineResult {
  std::vector<PipelineReport> reports;
  std::string csv;
  bool ok = true;
};

MicroPipelineResult micro_pipeline_experiment(std::size_t count, std::uint64_t seed, std::uint64_t budget);

}  // namespace reconf
