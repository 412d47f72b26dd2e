#pragma once

// Shared aliases, hashing, seeding, and error types used across the library.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace dispersim {

using json = nlohmann::json;
// Ordered variant keeps insertion order; we use it wherever a dump() has to
// be byte-stable across platforms (trace lines, hashes of config objects).
using ojson = nlohmann::ordered_json;

using NodeId = int;
using Port = int;      // -1 means "no entry port"
using Handle = int;    // engine-assigned physical identity, 0-based
using ClaimedId = std::int64_t;
using Round = int;

inline constexpr Port kNoEntry = -1;

// Raised when a scenario/config is malformed or violates a hard precondition.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an internal invariant breaks (engine or protocol bug).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Folds any number of 64-bit parts into one seed. Deterministic and
// order-sensitive, so (n, graph_hash, seed) and (seed, graph_hash, n) differ.
template <class... Parts>
std::uint64_t mix_seed(Parts... parts) {
  std::uint64_t acc = 0x243f6a8885a308d3ull;
  ((acc = splitmix64(acc ^ static_cast<std::uint64_t>(parts))), ...);
  return acc;
}

template <class... Parts>
std::mt19937_64 seeded_rng(Parts... parts) {
  return std::mt19937_64(mix_seed(parts...));
}

}  // namespace dispersim
