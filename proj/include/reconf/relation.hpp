#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace reconf {

using Symbol = std::int32_t;

/// A set of accepted tuples over a product of finite alphabets.
///
/// Tuples are keyed in mixed radix with coordinate 0 most significant, so key
/// order is lexicographic tuple order. Storage is either a dense bitmap over
/// the whole domain or a sorted key list, whichever is smaller.
class Relation {
 public:
  Relation() = default;

  /// Builds from explicit tuples. Duplicates are merged. Throws reconf::Error
  /// on a tuple of the wrong length or with an out-of-range coordinate.
  Relation(std::vector<std::uint32_t> radices, std::span<const std::vector<Symbol>> tuples);

  static Relation from_keys(std::vector<std::uint32_t> radices, std::vector<std::uint64_t> keys);

  /// Enumerates the whole domain; for small domains only.
  static Relation from_predicate(std::vector<std::uint32_t> radices,
                                 const std::function<bool(std::span<const Symbol>)>& accept);

  std::size_t arity() const { return radices_.size(); }
  const std::vector<std::uint32_t>& radices() const { return radices_; }
  std::uint64_t domain_size() const { return domain_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool is_dense() const { return dense_; }

  /// False for tuples outside the domain.
  bool contains(std::span<const Symbol> tuple) const;
  bool contains_key(std::uint64_t key) const;

  std::uint64_t encode(std::span<const Symbol> tuple) const;
  void decode(std::uint64_t key, std::span<Symbol> out) const;

  /// Visits accepted keys in increasing order.
  void for_each_key(const std::function<void(std::uint64_t)>& visit) const;
  std::vector<std::vector<Symbol>> tuples() const;

  friend bool operator==(const Relation& a, const Relation& b);

 private:
  void store(std::vector<std::uint64_t> sorted_unique_keys);

  std::vector<std::uint32_t> radices_;
  std::uint64_t domain_ = 1;
  std::size_t count_ = 0;
  bool dense_ = false;
  std::vector<std::uint64_t> data_;  // bitmap words or sorted keys
};

}  // namespace reconf
