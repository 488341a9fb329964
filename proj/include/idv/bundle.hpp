#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

#include "idv/errors.hpp"

namespace idv {

/// Hard cap on the number of items; bundles are 64-bit masks.
inline constexpr int kMaxItems = 63;

/// A subset of the item set {0..m-1}, stored as a bit mask. Numeric order on
/// masks is the library-wide lexicographic tie-break order.
struct Bundle {
  std::uint64_t bits = 0;

  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint64_t mask) : bits(mask) {}

  bool contains(int item) const { return (bits >> item) & 1u; }
  int count() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }
  bool subset_of(const Bundle& other) const { return (bits & ~other.bits) == 0; }

  Bundle with(int item) const { return Bundle(bits | (std::uint64_t{1} << item)); }
  Bundle without(int item) const { return Bundle(bits & ~(std::uint64_t{1} << item)); }
  Bundle united(const Bundle& other) const { return Bundle(bits | other.bits); }
  Bundle intersect(const Bundle& other) const { return Bundle(bits & other.bits); }

  /// Item indices in ascending order.
  std::vector<int> items() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1)
      out.push_back(std::countr_zero(rest));
    return out;
  }

  static Bundle full(int m) {
    if (m < 0 || m > kMaxItems) throw InputError("item count out of range: " + std::to_string(m));
    return Bundle(m == 0 ? 0 : (~std::uint64_t{0} >> (64 - m)));
  }

  static Bundle from_items(const std::vector<int>& items, int m) {
    Bundle b;
    for (int item : items) {
      if (item < 0 || item >= m)
        throw InputError("item index " + std::to_string(item) + " out of range for m=" + std::to_string(m));
      b.bits |= std::uint64_t{1} << item;
    }
    return b;
  }

  auto operator<=>(const Bundle&) const = default;
};

inline Bundle complement(const Bundle& b, int m) { return Bundle(Bundle::full(m).bits & ~b.bits); }

/// An ordered partition of all m items into n bundles (no disposal).
struct Allocation {
  std::vector<Bundle> bundles;

  Allocation() = default;
  explicit Allocation(std::vector<Bundle> parts) : bundles(std::move(parts)) {}

  static Allocation empty(int n) { return Allocation(std::vector<Bundle>(static_cast<std::size_t>(n))); }

  const Bundle& operator[](int agent) const { return bundles[static_cast<std::size_t>(agent)]; }
  Bundle& operator[](int agent) { return bundles[static_cast<std::size_t>(agent)]; }
  int agents() const { return static_cast<int>(bundles.size()); }

  /// Disjointness plus full coverage of {0..m-1}.
  void validate(int n, int m) const {
    if (agents() != n) throw InputError("allocation has wrong number of bundles");
    std::uint64_t seen = 0;
    for (const Bundle& b : bundles) {
      if (b.bits & ~Bundle::full(m).bits) throw InputError("allocation bundle exceeds item range");
      if (b.bits & seen) throw InputError("allocation bundles overlap");
      seen |= b.bits;
    }
    if (seen != Bundle::full(m).bits) throw InputError("allocation does not cover all items");
  }

  bool operator==(const Allocation&) const = default;
};

}  // namespace idv
