#include "reconf/hadamard.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>

#include "reconf/constants.hpp"
#include "reconf/error.hpp"
#include "reconf/rng.hpp"

namespace reconf {
namespace {

constexpr int kMaxN = 24;

void check_n(int n) {
  if (n < 1 || n > kMaxN) throw Error("n out of range: " + std::to_string(n));
}

void check_message(std::uint64_t alpha, int n) {
  check_n(n);
  if (alpha >= (std::uint64_t{1} << n)) throw Error("message out of range: " + std::to_string(alpha));
}

bool is_close(std::uint64_t hamming, int n) { return Ratio(static_cast<std::int64_t>(hamming), std::int64_t{1} << n) <= constants::kQuarter; }

bool is_far(std::uint64_t hamming, int n) {
  return Ratio(static_cast<std::int64_t>(hamming), std::int64_t{1} << n) > constants::kQuarter + constants::kDelta0;
}

}  // namespace

BitFunction::BitFunction(int n) : n_(n) {
  check_n(n);
  words_.assign(std::max<std::uint64_t>(1, size() / 64), 0);
}

void BitFunction::set(std::uint64_t x, bool bit) {
  const std::uint64_t mask = std::uint64_t{1} << (x & 63);
  if (bit) {
    words_[x >> 6] |= mask;
  } else {
    words_[x >> 6] &= ~mask;
  }
}

std::uint64_t BitFunction::hamming(const BitFunction& other) const {
  if (n_ != other.n_) throw Error("length mismatch");
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) d += std::popcount(words_[i] ^ other.words_[i]);
  return d;
}

std::string BitFunction::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::uint64_t digits = std::max<std::uint64_t>(1, (size() + 3) / 4);
  std::string out(digits, '0');
  for (std::uint64_t i = 0; i < digits; ++i) {
    const std::uint64_t nibble = (words_[(4 * i) >> 6] >> ((4 * i) & 63)) & 0xF;
    out[i] = kDigits[nibble];
  }
  return out;
}

BitFunction BitFunction::from_hex(int n, std::string_view hex) {
  BitFunction f(n);
  const std::uint64_t digits = std::max<std::uint64_t>(1, (f.size() + 3) / 4);
  if (hex.size() != digits) throw Error("hex block has wrong length for n=" + std::to_string(n));
  for (std::uint64_t i = 0; i < digits; ++i) {
    const char c = hex[i];
    std::uint64_t nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<std::uint64_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<std::uint64_t>(c - 'A' + 10);
    } else {
      throw Error(std::string("malformed hex digit '") + c + "'");
    }
    if (f.size() < 4 && (nibble >> f.size()) != 0) throw Error("hex block sets bits beyond 2^n");
    f.words_[(4 * i) >> 6] |= nibble << ((4 * i) & 63);
  }
  return f;
}

BitFunction operator^(BitFunction a, const BitFunction& b) {
  if (a.n_ != b.n_) throw Error("length mismatch");
  for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] ^= b.words_[i];
  return a;
}

BitFunction had_encode(std::uint64_t alpha, int n) {
  check_message(alpha, n);
  BitFunction f(n);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    if (inner_product(alpha, x)) f.flip(x);
  }
  return f;
}

Ratio rel_distance(const BitFunction& f, const BitFunction& g) {
  return Ratio(static_cast<std::int64_t>(f.hamming(g)), static_cast<std::int64_t>(f.size()));
}

HadamardCode::HadamardCode(int n) : n_(n) {
  check_n(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  codewords_.reserve(count);
  for (std::uint64_t a = 0; a < count; ++a) codewords_.push_back(had_encode(a, n));
}

std::vector<std::uint32_t> HadamardCode::distances(const BitFunction& f) const {
  std::vector<std::uint32_t> out(codewords_.size());
  for (std::size_t a = 0; a < codewords_.size(); ++a) out[a] = static_cast<std::uint32_t>(f.hamming(codewords_[a]));
  return out;
}

const HadamardCode& hadamard_code(int n) {
  check_n(n);
  static std::mutex mu;
  static std::array<std::unique_ptr<HadamardCode>, kMaxN + 1> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[static_cast<std::size_t>(n)];
  if (!slot) slot = std::make_unique<HadamardCode>(n);
  return *slot;
}

std::vector<std::uint64_t> disagreement_set(std::uint64_t alpha, std::uint64_t beta, int n) {
  check_message(alpha, n);
  check_message(beta, n);
  if (alpha == beta) throw Error("disagreement set needs distinct messages");
  std::vector<std::uint64_t> d;
  d.reserve(std::uint64_t{1} << (n - 1));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    if (inner_product(alpha, x) != inner_product(beta, x)) d.push_back(x);
  }
  return d;
}

PartitionReport partition_triple(std::uint64_t alpha, std::uint64_t beta, std::uint64_t gamma, int n) {
  check_message(alpha, n);
  check_message(beta, n);
  check_message(gamma, n);
  if (alpha == beta || beta == gamma || alpha == gamma) throw Error("partition needs three distinct messages");
  PartitionReport r;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const int a = inner_product(alpha, x);
    const int b = inner_product(beta, x);
    const int c = inner_product(gamma, x);
    if (a == b && b == c) {
      r.p_equal.push_back(x);
    } else if (b == c) {
      r.p_alpha.push_back(x);
    } else if (c == a) {
      r.p_beta.push_back(x);
    } else {
      r.p_gamma.push_back(x);
    }
  }
  return r;
}

CodewordPath codeword_path_from_order(std::uint64_t alpha, std::uint64_t beta, int n,
                                      std::vector<std::uint64_t> flip_order) {
  CodewordPath path;
  path.n = n;
  path.alpha = alpha;
  path.beta = beta;
  path.steps.reserve(flip_order.size() + 1);
  BitFunction cur = had_encode(alpha, n);
  path.steps.push_back(cur);
  for (const std::uint64_t x : flip_order) {
    if (x >= cur.size()) throw Error("flip position out of range");
    cur.flip(x);
    path.steps.push_back(cur);
  }
  path.flip_order = std::move(flip_order);
  return path;
}

std::string PathCheck::describe() const {
  switch (kind) {
    case Kind::kPass:
      return "pass";
    case Kind::kStructural:
      return "structural violation at step " + std::to_string(step) + ": " + detail;
    case Kind::kNotClose:
      return "step " + std::to_string(step) + " is not 1/4-close to either endpoint (distance " + distance.str() + ")";
    case Kind::kNotFar:
      return "step " + std::to_string(step) + " is within 1/4+1/400 of Had(" + std::to_string(gamma) +
             ") (distance " + distance.str() + ")";
  }
  return "unknown";
}

PathCheck verify_codeword_path(const CodewordPath& path) {
  auto structural = [](std::size_t step, std::string detail) {
    PathCheck c;
    c.kind = PathCheck::Kind::kStructural;
    c.step = step;
    c.detail = std::move(detail);
    return c;
  };
  const int n = path.n;
  if (n < 2) return structural(0, "n must be at least 2");
  if (path.alpha == path.beta) return structural(0, "endpoints coincide");
  const HadamardCode& code = hadamard_code(n);
  if (path.alpha >= code.size() || path.beta >= code.size()) return structural(0, "message out of range");
  const std::uint64_t expected_len = (std::uint64_t{1} << (n - 1)) + 1;
  if (path.steps.size() != expected_len) {
    return structural(0, "expected " + std::to_string(expected_len) + " steps, got " + std::to_string(path.steps.size()));
  }
  if (path.steps.front() != code.codeword(path.alpha)) return structural(0, "does not start at Had(alpha)");
  if (path.steps.back() != code.codeword(path.beta)) return structural(path.steps.size() - 1, "does not end at Had(beta)");
  for (std::size_t t = 0; t + 1 < path.steps.size(); ++t) {
    const BitFunction diff = path.steps[t] ^ path.steps[t + 1];
    const auto words = diff.words();
    std::uint64_t bits = 0;
    std::uint64_t pos = 0;
    for (std::size_t w = 0; w < words.size(); ++w) {
      bits += std::popcount(words[w]);
      if (words[w] != 0) pos = w * 64 + static_cast<std::uint64_t>(std::countr_zero(words[w]));
    }
    if (bits != 1) return structural(t + 1, "consecutive steps differ in " + std::to_string(bits) + " positions");
    if (inner_product(path.alpha, pos) == inner_product(path.beta, pos)) {
      return structural(t + 1, "flipped position " + std::to_string(pos) + " lies outside the disagreement set");
    }
  }

  const auto size = static_cast<std::int64_t>(code.size());
  for (std::size_t t = 0; t < path.steps.size(); ++t) {
    const auto dist = code.distances(path.steps[t]);
    const std::uint32_t near = std::min(dist[path.alpha], dist[path.beta]);
    if (!is_close(near, n)) {
      PathCheck c;
      c.kind = PathCheck::Kind::kNotClose;
      c.step = t;
      c.distance = Ratio(near, size);
      return c;
    }
    for (std::uint64_t g = 0; g < code.size(); ++g) {
      if (g == path.alpha || g == path.beta) continue;
      if (!is_far(dist[g], n)) {
        PathCheck c;
        c.kind = PathCheck::Kind::kNotFar;
        c.step = t;
        c.gamma = g;
        c.distance = Ratio(dist[g], size);
        return c;
      }
    }
  }
  return PathCheck{};
}

CodewordPath generate_codeword_path(std::uint64_t alpha, std::uint64_t beta, int n, std::uint64_t seed,
                                    int max_retries) {
  if (n < 2) throw Error("codeword paths need n >= 2");
  std::vector<std::uint64_t> d = disagreement_set(alpha, beta, n);
  const std::uint64_t base = derive_seed(seed, "codeword-path");
  PathCheck last;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng(derive_seed(base, static_cast<std::uint64_t>(attempt)));
    std::vector<std::uint64_t> order = d;
    rng.shuffle(std::span<std::uint64_t>(order));
    CodewordPath path = codeword_path_from_order(alpha, beta, n, std::move(order));
    path.attempts = attempt + 1;
    if (n < constants::kCodewordPathMinN) return path;
    last = verify_codeword_path(path);
    if (last.ok()) return path;
  }
  throw Error("codeword path generation failed after " + std::to_string(max_retries) + " retries for alpha=" +
              std::to_string(alpha) + " beta=" + std::to_string(beta) + " n=" + std::to_string(n) +
              ": gamma=" + std::to_string(last.gamma) + ", " + last.describe() +
              "; this contradicts the 1 - 2^n 0.9^(2^(n-2)) success bound");
}

std::vector<ProfileRow> distance_profile(const CodewordPath& path) {
  const HadamardCode& code = hadamard_code(path.n);
  std::vector<ProfileRow> rows;
  rows.reserve(path.steps.size());
  for (std::size_t t = 0; t < path.steps.size(); ++t) {
    const auto dist = code.distances(path.steps[t]);
    ProfileRow row;
    row.step = t;
    row.flipped = t == 0 ? -1 : static_cast<std::int64_t>(path.flip_order[t - 1]);
    row.to_alpha = dist[path.alpha];
    row.to_beta = dist[path.beta];
    row.to_other_min = static_cast<std::uint32_t>(code.size());
    for (std::uint64_t g = 0; g < code.size(); ++g) {
      if (g == path.alpha || g == path.beta) continue;
      if (dist[g] < row.to_other_min) {
        row.to_other_min = dist[g];
        row.other_argmin = g;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::int64_t min_partial_sum(std::span<const int> signs) {
  if (signs.empty()) throw Error("min_partial_sum needs a non-empty sequence");
  std::int64_t sum = 0;
  std::int64_t best = signs.front();
  for (const int s : signs) {
    sum += s;
    best = std::min(best, sum);
  }
  return best;
}

PartialSumReport partial_sum_experiment(std::uint64_t half_length, std::uint64_t trials, std::uint64_t seed) {
  if (half_length == 0) throw Error("partial-sum experiment needs N >= 1");
  if (trials == 0) throw Error("partial-sum experiment needs at least one trial");
  PartialSumReport r;
  r.half_length = half_length;
  r.trials = trials;
  r.threshold = -static_cast<std::int64_t>((99 * half_length + 99) / 100);
  r.bound = std::pow(0.9, static_cast<double>(half_length));
  const std::uint64_t base = derive_seed(seed, "partial-sum");
  std::vector<int> signs(2 * half_length);
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::fill(signs.begin(), signs.begin() + static_cast<std::ptrdiff_t>(half_length), 1);
    std::fill(signs.begin() + static_cast<std::ptrdiff_t>(half_length), signs.end(), -1);
    Rng rng(derive_seed(base, t));
    rng.shuffle(std::span<int>(signs));
    if (min_partial_sum(signs) <= r.threshold) ++r.hits;
  }
  r.frequency = Ratio(static_cast<std::int64_t>(r.hits), static_cast<std::int64_t>(trials));
  return r;
}

}  // namespace reconf
