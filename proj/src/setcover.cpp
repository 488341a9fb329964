#include "idv/setcover.hpp"

#include <bit>
#include <map>

#include "idv/errors.hpp"

namespace idv {

SetCoverFamily::SetCoverFamily(int k) : k_(k) {
  if (k < 6 || k % 2 != 0) throw DomainError("set-cover family requires even k >= 6");
  if (k > 6)
    throw ResourceError("set-cover family with k=" + std::to_string(k) + " needs " +
                        std::to_string((std::uint64_t{1} << k) - 1) +
                        " items; the bundle cap is " + std::to_string(kMaxItems));
  m_ = (1 << k) - 1;

  // Item index i stands for the nonzero vector i+1. Covering all of M takes
  // k sets exactly because any k-1 functionals j -> <j,u_l> share a nonzero
  // kernel vector, which no B_{u_l} contains.
  cover_masks_.resize(static_cast<std::size_t>(m_));
  covers_of_item_.resize(static_cast<std::size_t>(m_));
  for (std::uint64_t u = 1; u <= static_cast<std::uint64_t>(m_); ++u) {
    std::uint64_t mask = 0;
    for (int item = 0; item < m_; ++item) {
      std::uint64_t vec = static_cast<std::uint64_t>(item) + 1;
      if (std::popcount(vec & u) % 2 == 1) {
        mask |= std::uint64_t{1} << item;
        covers_of_item_[static_cast<std::size_t>(item)].push_back(static_cast<int>(u - 1));
      }
    }
    cover_masks_[static_cast<std::size_t>(u - 1)] = mask;
  }
}

int SetCoverFamily::min_cover_bounded(std::uint64_t t, int limit) const {
  if (t == 0) return 0;
  if (limit == 0) return k_;  // sentinel: no cover within the bound
  // Any cover must include a set containing the lowest uncovered item.
  int item = std::countr_zero(t);
  int best = k_;
  for (int set_index : covers_of_item_[static_cast<std::size_t>(item)]) {
    int rest = min_cover_bounded(t & ~cover_masks_[static_cast<std::size_t>(set_index)], limit - 1);
    if (rest + 1 < best) best = rest + 1;
    if (best == 1) break;
  }
  return best;
}

int SetCoverFamily::cover_size_capped(Bundle t) const {
  int half = k_ / 2;
  int size = min_cover_bounded(t.bits, half - 1);
  return size < half ? size : half;
}

Rational SetCoverFamily::value(Bundle t) const {
  if (t.bits & ~Bundle::full(m_).bits)
    throw InputError("bundle contains items outside the set-cover universe");
  int half = k_ / 2;
  int g_t = cover_size_capped(t);
  if (g_t < half) return g_t;
  int g_rest = cover_size_capped(complement(t, m_));
  if (g_rest < half) return k_ - g_rest;
  return half;
}

const SetCoverFamily& set_cover_family(int k) {
  static std::map<int, SetCoverFamily> cache;
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, SetCoverFamily(k)).first;
  return it->second;
}

Rational set_cover_value(int k, Bundle bundle) { return set_cover_family(k).value(bundle); }

}  // namespace idv
