#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idv/errors.hpp"
#include "idv/rational.hpp"

namespace idv {

enum class SpaceKind { Singleton, Vectors };

/// A finite per-agent signal space. Signals are referenced by index into the
/// declared order. A Vectors space attaches one nonnegative rational
/// coordinate per item to each signal; a Singleton space has one opaque
/// signal with no coordinates.
struct SignalSpace {
  SpaceKind kind = SpaceKind::Singleton;
  std::vector<std::vector<Rational>> vectors;  // per signal, one coord per item

  std::size_t size() const { return kind == SpaceKind::Singleton ? 1 : vectors.size(); }

  const Rational& coord(int signal, int item) const {
    if (kind == SpaceKind::Singleton)
      throw InputError("singleton signal space carries no per-item coordinates");
    return vectors[static_cast<std::size_t>(signal)][static_cast<std::size_t>(item)];
  }

  void validate(int m) const {
    if (kind == SpaceKind::Singleton) return;
    if (vectors.empty()) throw InputError("signal space must be nonempty");
    for (const auto& vec : vectors) {
      if (static_cast<int>(vec.size()) != m)
        throw InputError("signal vector length " + std::to_string(vec.size()) +
                         " does not match m=" + std::to_string(m));
      for (const Rational& c : vec)
        if (c < 0) throw InputError("signal coordinates must be nonnegative");
    }
  }
};

/// One signal index per agent.
using SignalProfile = std::vector<int>;

}  // namespace idv
