#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

namespace hcs::detail {

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct VectorHash {
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t seed = v.size();
    for (const auto& x : v) hash_combine(seed, std::hash<T>{}(x));
    return seed;
  }
};

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// `base`, or `base` with a numeric suffix, not present in `taken`.
inline std::string fresh_name(const std::string& base, const std::vector<std::string>& taken) {
  std::unordered_set<std::string> used(taken.begin(), taken.end());
  if (!used.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!used.count(candidate)) return candidate;
  }
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t sum = a + b;
  return sum < a ? std::numeric_limits<std::uint64_t>::max() : sum;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exponent) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) result = saturating_mul(result, base);
  return result;
}

inline std::string join_names(const std::vector<std::string>& names, const std::vector<std::uint32_t>& ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += names[ids[i]];
  }
  return out + "}";
}

}  // namespace hcs::detail
