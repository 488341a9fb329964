#pragma once

#include <cstdint>

namespace idv {

/// Hard enumeration limits. Exceeding any of them raises ResourceError;
/// nothing is ever silently truncated, so a completed verdict is a complete
/// verdict.
struct Budgets {
  int max_subset_bits = 10;                  // 2^m bundle scans
  std::uint64_t max_partitions = 1'000'000;  // n-part partition enumeration
  std::uint64_t max_profiles = 1'000'000;    // report/deviation enumeration
  int max_price_items = 12;                  // LP-backed price-space operations
  std::uint64_t max_axiom_checks = 1'000'000;
};

}  // namespace idv
