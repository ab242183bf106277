#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reconf/ratio.hpp"

namespace reconf {

/// A function F_2^n -> F_2 stored as 2^n bits. Position x stands for the
/// vector whose j-th coordinate is bit j of x.
class BitFunction {
 public:
  BitFunction() = default;
  explicit BitFunction(int n);

  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }

  bool get(std::uint64_t x) const { return (words_[x >> 6] >> (x & 63)) & 1U; }
  void set(std::uint64_t x, bool bit);
  void flip(std::uint64_t x) { words_[x >> 6] ^= std::uint64_t{1} << (x & 63); }

  std::span<const std::uint64_t> words() const { return words_; }

  /// Throws reconf::Error on length mismatch.
  std::uint64_t hamming(const BitFunction& other) const;

  /// Little-endian hex: position 0 is the low bit of the first digit.
  std::string to_hex() const;
  static BitFunction from_hex(int n, std::string_view hex);

  friend bool operator==(const BitFunction&, const BitFunction&) = default;
  friend BitFunction operator^(BitFunction a, const BitFunction& b);

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

inline int inner_product(std::uint64_t alpha, std::uint64_t x) { return __builtin_popcountll(alpha & x) & 1; }

BitFunction had_encode(std::uint64_t alpha, int n);

/// Hamming distance over 2^n, exact.
Ratio rel_distance(const BitFunction& f, const BitFunction& g);

/// All 2^n codewords for one n, with a distance scan against each.
class HadamardCode {
 public:
  explicit HadamardCode(int n);

  int n() const { return n_; }
  std::uint64_t size() const { return codewords_.size(); }
  const BitFunction& codeword(std::uint64_t alpha) const { return codewords_.at(alpha); }
  /// Hamming distance from f to every codeword, indexed by message.
  std::vector<std::uint32_t> distances(const BitFunction& f) const;

 private:
  int n_;
  std::vector<BitFunction> codewords_;
};

/// Shared, lazily built code for n (thread-safe).
const HadamardCode& hadamard_code(int n);

/// {x : <alpha,x> != <beta,x>}, ascending. Throws if alpha == beta.
std::vector<std::uint64_t> disagreement_set(std::uint64_t alpha, std::uint64_t beta, int n);

/// Positions split by which of the three codewords is the odd one out.
struct PartitionReport {
  std::vector<std::uint64_t> p_alpha;  // alpha differs, beta == gamma
  std::vector<std::uint64_t> p_beta;   // beta differs, gamma == alpha
  std::vector<std::uint64_t> p_gamma;  // gamma differs, alpha == beta
  std::vector<std::uint64_t> p_equal;  // all agree
};

PartitionReport partition_triple(std::uint64_t alpha, std::uint64_t beta, std::uint64_t gamma, int n);

/// A walk from Had(alpha) to Had(beta) that flips the positions of
/// flip_order one at a time.
struct CodewordPath {
  int n = 0;
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;
  std::vector<std::uint64_t> flip_order;
  std::vector<BitFunction> steps;
  int attempts = 1;
};

CodewordPath codeword_path_from_order(std::uint64_t alpha, std::uint64_t beta, int n,
                                      std::vector<std::uint64_t> flip_order);

struct PathCheck {
  enum class Kind { kPass, kStructural, kNotClose, kNotFar };

  Kind kind = Kind::kPass;
  std::size_t step = 0;
  std::uint64_t gamma = 0;
  Ratio distance;
  std::string detail;

  bool ok() const { return kind == Kind::kPass; }
  std::string describe() const;
};

/// Exhaustive check that every step is 1/4-close to Had(alpha) or Had(beta)
/// and strictly (1/4 + delta0)-far from every other codeword. Reports the
/// first failure in (step, gamma) order.
PathCheck verify_codeword_path(const CodewordPath& path);

/// Flips the disagreement set in a seeded uniformly random order. For
/// n >= 9 the path is verified and resampled up to max_retries times; running
/// out of retries throws with the last counterexample. Smaller n return the
/// first sample unverified.
CodewordPath generate_codeword_path(std::uint64_t alpha, std::uint64_t beta, int n, std::uint64_t seed,
                                    int max_retries = 3);

/// One row of the distance profile along a path (Hamming counts).
struct ProfileRow {
  std::size_t step = 0;
  std::int64_t flipped = -1;  // -1 on the first step
  std::uint32_t to_alpha = 0;
  std::uint32_t to_beta = 0;
  std::uint32_t to_other_min = 0;
  std::uint64_t other_argmin = 0;
};

std::vector<ProfileRow> distance_profile(const CodewordPath& path);

/// min over k >= 1 of the sum of the first k entries.
std::int64_t min_partial_sum(std::span<const int> signs);

struct PartialSumReport {
  std::uint64_t half_length = 0;  // N
  std::uint64_t trials = 0;
  std::int64_t threshold = 0;     // -ceil(0.99 N)
  std::uint64_t hits = 0;
  Ratio frequency;
  double bound = 0.0;             // 0.9^N
};

/// Shuffles N (+1)s and N (-1)s per trial and counts minimum partial sums at
/// or below -ceil(0.99 N).
PartialSumReport partial_sum_experiment(std::uint64_t half_length, std::uint64_t trials, std::uint64_t seed);

}  // namespace reconf
