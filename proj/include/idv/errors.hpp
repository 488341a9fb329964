#pragma once

#include <stdexcept>
#include <string>

namespace idv {

/// Malformed or out-of-range input (bad file, bad index, bad report shape).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation called outside its mathematical domain (e.g. MMS with unequal
/// entitlements, a two-agent mechanism on a three-agent instance).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration or solver budget was exceeded. Verdicts are never silently
/// truncated; callers see this instead.
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace idv
