#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace towernorm {

// Input text could not be parsed; `position` is the 0-based offset of the
// first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// A structural precondition failed (bad permutation, broken link, ...).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds a configured size cap and is refused.
class CapExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0,1) from 64 random bits.
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Shortest round-trip decimal form; identical across runs for identical bits.
std::string fmt_double(double v);

}  // namespace towernorm
