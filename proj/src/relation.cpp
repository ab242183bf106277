#include "reconf/relation.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "reconf/error.hpp"

namespace reconf {
namespace {

constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 62;
constexpr std::uint64_t kMaxEnumeratedDomain = std::uint64_t{1} << 32;

std::uint64_t domain_of(const std::vector<std::uint32_t>& radices) {
  std::uint64_t d = 1;
  for (const std::uint32_t r : radices) {
    if (r == 0) throw Error("relation: zero-size alphabet");
    if (d > kMaxDomain / r) throw Error("relation: domain too large");
    d *= r;
  }
  return d;
}

}  // namespace

Relation::Relation(std::vector<std::uint32_t> radices, std::span<const std::vector<Symbol>> tuples)
    : radices_(std::move(radices)), domain_(domain_of(radices_)) {
  std::vector<std::uint64_t> keys;
  keys.reserve(tuples.size());
  for (const auto& t : tuples) {
    if (t.size() != radices_.size()) throw Error("arity mismatch");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0 || static_cast<std::uint32_t>(t[i]) >= radices_[i]) {
        throw Error("symbol out of range: " + std::to_string(t[i]));
      }
    }
    keys.push_back(encode(t));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  store(std::move(keys));
}

Relation Relation::from_keys(std::vector<std::uint32_t> radices, std::vector<std::uint64_t> keys) {
  Relation r;
  r.radices_ = std::move(radices);
  r.domain_ = domain_of(r.radices_);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  if (!keys.empty() && keys.back() >= r.domain_) throw Error("relation: key out of domain");
  r.store(std::move(keys));
  return r;
}

Relation Relation::from_predicate(std::vector<std::uint32_t> radices,
                                  const std::function<bool(std::span<const Symbol>)>& accept) {
  const std::uint64_t domain = domain_of(radices);
  if (domain > kMaxEnumeratedDomain) throw Error("relation: domain too large to enumerate");
  std::vector<Symbol> tuple(radices.size(), 0);
  std::vector<std::uint64_t> keys;
  for (std::uint64_t key = 0; key < domain; ++key) {
    if (accept(tuple)) keys.push_back(key);
    // odometer increment, last coordinate fastest
    for (std::size_t i = tuple.size(); i-- > 0;) {
      if (static_cast<std::uint32_t>(++tuple[i]) < radices[i]) break;
      tuple[i] = 0;
    }
  }
  return from_keys(std::move(radices), std::move(keys));
}

void Relation::store(std::vector<std::uint64_t> keys) {
  count_ = keys.size();
  const std::uint64_t dense_words = (domain_ + 63) / 64;
  dense_ = dense_words <= keys.size();
  if (dense_) {
    data_.assign(dense_words, 0);
    for (const std::uint64_t k : keys) data_[k >> 6] |= std::uint64_t{1} << (k & 63);
  } else {
    data_ = std::move(keys);
  }
}

std::uint64_t Relation::encode(std::span<const Symbol> tuple) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < radices_.size(); ++i) key = key * radices_[i] + static_cast<std::uint64_t>(tuple[i]);
  return key;
}

void Relation::decode(std::uint64_t key, std::span<Symbol> out) const {
  for (std::size_t i = radices_.size(); i-- > 0;) {
    out[i] = static_cast<Symbol>(key % radices_[i]);
    key /= radices_[i];
  }
}

bool Relation::contains_key(std::uint64_t key) const {
  if (key >= domain_) return false;
  if (dense_) return (data_[key >> 6] >> (key & 63)) & 1U;
  return std::binary_search(data_.begin(), data_.end(), key);
}

bool Relation::contains(std::span<const Symbol> tuple) const {
  if (tuple.size() != radices_.size()) return false;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0 || static_cast<std::uint32_t>(tuple[i]) >= radices_[i]) return false;
  }
  return contains_key(encode(tuple));
}

void Relation::for_each_key(const std::function<void(std::uint64_t)>& visit) const {
  if (!dense_) {
    for (const std::uint64_t k : data_) visit(k);
    return;
  }
  for (std::size_t w = 0; w < data_.size(); ++w) {
    std::uint64_t bits = data_[w];
    while (bits != 0) {
      visit(w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
}

std::vector<std::vector<Symbol>> Relation::tuples() const {
  std::vector<std::vector<Symbol>> out;
  out.reserve(count_);
  for_each_key([&](std::uint64_t k) {
    std::vector<Symbol> t(radices_.size());
    decode(k, t);
    out.push_back(std::move(t));
  });
  return out;
}

bool operator==(const Relation& a, const Relation& b) {
  if (a.radices_ != b.radices_ || a.count_ != b.count_) return false;
  if (a.dense_ == b.dense_) return a.data_ == b.data_;
  bool same = true;
  a.for_each_key([&](std::uint64_t k) { same = same && b.contains_key(k); });
  return same;
}

}  // namespace reconf
