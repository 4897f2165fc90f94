#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lasnap {

using NodeId = std::uint32_t;

/// Strict "less than" over register payloads. Must be a strict total order.
using PayloadLess = bool (*)(std::string_view, std::string_view);

/// Byte-wise lexicographic order, the default payload order.
bool lexicographic_less(std::string_view a, std::string_view b);

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LatticeConfig {
  std::size_t m = 1;  // registers
  std::size_t n = 1;  // processes
  std::string initial_payload;

  static LatticeConfig square(std::size_t n, std::string initial = {});
  void validate() const;
};

/// One register position: a write count paired with the last written payload.
struct RegisterCell {
  std::uint64_t writes = 0;
  std::string value;

  friend bool operator==(const RegisterCell&, const RegisterCell&) = default;
};

bool cell_leq(const RegisterCell& a, const RegisterCell& b,
              PayloadLess less = lexicographic_less);

/// Element of the vector lattice: m register cells followed by n per-process
/// snapshot counters. Bottom is a regular value, so joins need no special case.
class AsoVector {
 public:
  AsoVector() = default;
  AsoVector(std::vector<RegisterCell> registers,
            std::vector<std::uint64_t> counters);

  static AsoVector bottom(const LatticeConfig& cfg);

  std::size_t m() const { return registers_.size(); }
  std::size_t n() const { return counters_.size(); }

  const std::vector<RegisterCell>& registers() const { return registers_; }
  const std::vector<std::uint64_t>& counters() const { return counters_; }
  const RegisterCell& cell(std::size_t i) const { return registers_.at(i); }
  std::uint64_t counter(std::size_t i) const { return counters_.at(i); }

  /// True when every cell has zero writes and every counter is zero.
  bool is_bottom() const;

  /// Deterministic byte encoding; equal vectors have equal encodings.
  std::string canonical() const;
  static AsoVector from_canonical(std::string_view bytes);

  friend bool operator==(const AsoVector&, const AsoVector&) = default;

 private:
  std::vector<RegisterCell> registers_;
  std::vector<std::uint64_t> counters_;
};

inline constexpr std::uint8_t kCanonicalVersion = 1;

bool leq(const AsoVector& a, const AsoVector& b,
         PayloadLess less = lexicographic_less);
/// a ⊑ b and a != b.
bool strictly_below(const AsoVector& a, const AsoVector& b,
                    PayloadLess less = lexicographic_less);
AsoVector join(const AsoVector& a, const AsoVector& b,
               PayloadLess less = lexicographic_less);
bool comparable(const AsoVector& a, const AsoVector& b,
                PayloadLess less = lexicographic_less);

/// Vector with (writes, value) at register `i` (0-based) and bottom elsewhere.
AsoVector make_update_vector(const LatticeConfig& cfg, std::size_t i,
                             std::uint64_t writes, std::string value);
/// Vector with `reads` at counter `i` (0-based) and bottom elsewhere.
AsoVector make_snapshot_vector(const LatticeConfig& cfg, std::size_t i,
                               std::uint64_t reads);

std::vector<std::string> project_registers(const AsoVector& x);

/// FNV-1a 64-bit over arbitrary bytes; used for trace digests.
std::uint64_t fnv1a64(std::string_view bytes);

std::string to_string(const AsoVector& x);

}  // namespace lasnap
