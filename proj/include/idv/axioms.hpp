#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "idv/budgets.hpp"
#include "idv/instance.hpp"

namespace idv {

enum class ValuationClass { Monotone, Additive, XosConsistent, Subadditive };

ValuationClass parse_valuation_class(const std::string& name);
std::string valuation_class_name(ValuationClass c);

struct AxiomWitness {
  int agent = 0;
  SignalProfile profile;
  Bundle set_a;
  Bundle set_b;  // second set for subadditivity, the added item's singleton for monotonicity
};

struct AxiomReport {
  bool holds = true;
  std::optional<AxiomWitness> witness;
  std::uint64_t checks = 0;
  bool sampled = false;
};

struct AxiomSampling {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Checks a claimed valuation class for every agent over every signal profile
/// and bundle in range. Exhaustive by default; if the enumeration exceeds the
/// budget the check either falls back to seeded sampling (when `sampling` is
/// given) or raises ResourceError — never a silent pass.
AxiomReport verify_valuation_axioms(const Instance& instance, ValuationClass claim,
                                    const Budgets& budgets = {},
                                    std::optional<AxiomSampling> sampling = {});

}  // namespace idv
