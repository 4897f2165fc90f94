#pragma once

// Brute-force domain for lattice laws: m = n = 2, writes <= 2, counters <= 2,
// payloads from {"a", "b"}. The order below is written from scratch so it can
// serve as an oracle for the library.

#include <string>
#include <tuple>
#include <vector>

#include "lasnap/lattice.hpp"

namespace small_domain {

inline lasnap::LatticeConfig config() { return lasnap::LatticeConfig{2, 2, ""}; }

inline std::vector<lasnap::RegisterCell> cells() {
  std::vector<lasnap::RegisterCell> out{{0, ""}};
  for (std::uint64_t w = 1; w <= 2; ++w) {
    for (const char* v : {"a", "b"}) out.push_back({w, v});
  }
  return out;
}

inline std::vector<lasnap::AsoVector> vectors() {
  std::vector<lasnap::AsoVector> out;
  for (const auto& c0 : cells()) {
    for (const auto& c1 : cells()) {
      for (std::uint64_t r0 = 0; r0 <= 2; ++r0) {
        for (std::uint64_t r1 = 0; r1 <= 2; ++r1) out.emplace_back(std::vector{c0, c1}, std::vector{r0, r1});
      }
    }
  }
  return out;
}

inline bool oracle_cell_leq(const lasnap::RegisterCell& a, const lasnap::RegisterCell& b) {
  return std::tie(a.writes, a.value) <= std::tie(b.writes, b.value);
}

inline bool oracle_leq(const lasnap::AsoVector& a, const lasnap::AsoVector& b) {
  for (std::size_t i = 0; i < a.m(); ++i) {
    if (!oracle_cell_leq(a.cell(i), b.cell(i))) return false;
  }
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (a.counter(i) > b.counter(i)) return false;
  }
  return true;
}

/// Index of the least upper bound of a and b, by enumeration.
inline std::size_t oracle_lub(const std::vector<lasnap::AsoVector>& dom, std::size_t a, std::size_t b) {
  std::vector<std::size_t> ups;
  for (std::size_t u = 0; u < dom.size(); ++u) {
    if (oracle_leq(dom[a], dom[u]) && oracle_leq(dom[b], dom[u])) ups.push_back(u);
  }
  for (auto u : ups) {
    bool least = true;
    for (auto v : ups) least = least && oracle_leq(dom[u], dom[v]);
    if (least) return u;
  }
  return dom.size();
}

}  // namespace small_domain
