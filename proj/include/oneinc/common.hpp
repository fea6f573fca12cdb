#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oneinc {

inline constexpr const char* kVersion = "0.1.0";

// The reserved "don't know" output. It may appear in label alphabets (margin
// predictors emit it) but never as a sample target. The literal doubles as
// its on-disk spelling in class files.
inline constexpr const char* kAbstain = "!abstain";

inline bool is_abstain(const std::string& label) { return label == kAbstain; }

// Error taxonomy. DomainError: malformed or unknown input. ResourceError: a
// configured cap would be exceeded. NumericError: a solver failed to meet its
// tolerance. NonRealizableError: a sample inconsistent with the class.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonRealizableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int popcount32(std::uint32_t x) { return std::popcount(x); }
inline int popcount64(std::uint64_t x) { return std::popcount(x); }

}  // namespace oneinc
