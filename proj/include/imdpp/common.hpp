#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace imdpp {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using NodeId = std::uint32_t;

inline constexpr std::uint32_t kNoId = std::numeric_limits<std::uint32_t>::max();

// Error categories used across the library. Message text names the offending
// entity (id, key, or file) so CLI users can act on it.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bidirectional name <-> dense id map. Ids are assigned in first-seen order,
// so file order fixes the id order and every run is reproducible.
class Interner {
 public:
  std::uint32_t intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(names_.size());
    names_.push_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }
  std::uint32_t find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? kNoId : it->second;
  }
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(names_.size()); }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// All floating point values surfaced to files or stdout go through this:
// 6 significant digits.
std::string fmt6(double v);

// splitmix64; used both for seed derivation and as a counter-based coin hash.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t w) {
  return splitmix64(h ^ (w + 0x9e3779b97f4a7c15ull));
}

// Kahan accumulator; keeps reported means independent of summation noise.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace imdpp
