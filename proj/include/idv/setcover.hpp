#pragma once

#include <cstdint>
#include <vector>

#include "idv/bundle.hpp"
#include "idv/rational.hpp"

namespace idv {

/// The subadditive valuation over the m = 2^k - 1 nonzero binary k-vectors.
/// Item index i stands for the vector i+1; the cover family consists of
/// B_u = { j : <j,u> = 1 over GF(2) } for every nonzero u (the affine
/// half-space family; it is the one for which g(M) = k holds). The valuation
/// is
///   v(T) = g(T)            if g(T) < k/2
///        = k - g(M \ T)    if g(M \ T) < k/2
///        = k/2             otherwise
/// where g is the minimum number of cover sets needed to cover T. The cases
/// are mutually exclusive because g(T) + g(M \ T) >= g(M) = k.
class SetCoverFamily {
public:
  explicit SetCoverFamily(int k);

  int k() const { return k_; }
  int item_count() const { return m_; }

  /// Mask of B_u over item indices; u ranges over 1..2^k-1.
  Bundle cover_set(std::uint64_t u) const { return Bundle(cover_masks_[u - 1]); }
  int family_size() const { return static_cast<int>(cover_masks_.size()); }

  /// min(g(t), k/2). Exact below k/2; the valuation never distinguishes
  /// larger cover sizes.
  int cover_size_capped(Bundle t) const;

  Rational value(Bundle t) const;

private:
  int min_cover_bounded(std::uint64_t t, int limit) const;

  int k_;
  int m_;
  std::vector<std::uint64_t> cover_masks_;          // indexed by u-1
  std::vector<std::vector<int>> covers_of_item_;    // item -> indices of B_u containing it
};

/// Shared per-k family (construction is deterministic).
const SetCoverFamily& set_cover_family(int k);

/// v(bundle) for the family above; even k >= 6 required, and 2^k - 1 must fit
/// the 63-item bundle cap (so k = 6 in practice).
Rational set_cover_value(int k, Bundle bundle);

}  // namespace idv
