#include "lasnap/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace lasnap {

namespace {

void require_same_shape(const AsoVector& a, const AsoVector& b) {
  if (a.m() != b.m() || a.n() != b.n()) {
    std::ostringstream os;
    os << "lattice dimension mismatch: (" << a.m() << "," << a.n() << ") vs ("
       << b.m() << "," << b.n() << ")";
    throw DimensionMismatch(os.str());
  }
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t take(int width) {
    if (pos_ + width > bytes_.size()) {
      throw std::invalid_argument("canonical encoding truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }

  std::string take_string(std::size_t len) {
    if (pos_ + len > bytes_.size()) {
      throw std::invalid_argument("canonical encoding truncated");
    }
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

bool lexicographic_less(std::string_view a, std::string_view b) { return a < b; }

LatticeConfig LatticeConfig::square(std::size_t n, std::string initial) {
  return LatticeConfig{n, n, std::move(initial)};
}

void LatticeConfig::validate() const {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("lattice config requires m >= 1 and n >= 1");
  }
}

bool cell_leq(const RegisterCell& a, const RegisterCell& b, PayloadLess less) {
  if (a.writes != b.writes) return a.writes < b.writes;
  return !less(b.value, a.value);
}

AsoVector::AsoVector(std::vector<RegisterCell> registers,
                     std::vector<std::uint64_t> counters)
    : registers_(std::move(registers)), counters_(std::move(counters)) {}

AsoVector AsoVector::bottom(const LatticeConfig& cfg) {
  cfg.validate();
  return AsoVector(std::vector<RegisterCell>(cfg.m, RegisterCell{0, cfg.initial_payload}),
                   std::vector<std::uint64_t>(cfg.n, 0));
}

bool AsoVector::is_bottom() const {
  for (const auto& c : registers_) {
    if (c.writes != 0) return false;
  }
  for (auto r : counters_) {
    if (r != 0) return false;
  }
  return true;
}

// Layout: version byte, u32 m, u32 n, per cell (u64 writes, u32 len, bytes),
// per counter u64. All integers little-endian.
std::string AsoVector::canonical() const {
  std::string out;
  out.reserve(9 + registers_.size() * 16 + counters_.size() * 8);
  out.push_back(static_cast<char>(kCanonicalVersion));
  put_u32(out, static_cast<std::uint32_t>(registers_.size()));
  put_u32(out, static_cast<std::uint32_t>(counters_.size()));
  for (const auto& c : registers_) {
    put_u64(out, c.writes);
    put_u32(out, static_cast<std::uint32_t>(c.value.size()));
    out.append(c.value);
  }
  for (auto r : counters_) put_u64(out, r);
  return out;
}

AsoVector AsoVector::from_canonical(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(1) != kCanonicalVersion) {
    throw std::invalid_argument("unsupported canonical encoding version");
  }
  const auto m = in.take(4);
  const auto n = in.take(4);
  std::vector<RegisterCell> cells;
  cells.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    RegisterCell c;
    c.writes = in.take(8);
    c.value = in.take_string(in.take(4));
    cells.push_back(std::move(c));
  }
  std::vector<std::uint64_t> counters;
  counters.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) counters.push_back(in.take(8));
  if (!in.done()) throw std::invalid_argument("trailing bytes in canonical encoding");
  return AsoVector(std::move(cells), std::move(counters));
}

bool leq(const AsoVector& a, const AsoVector& b, PayloadLess less) {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.m(); ++i) {
    if (!cell_leq(a.registers()[i], b.registers()[i], less)) return false;
  }
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (a.counters()[i] > b.counters()[i]) return false;
  }
  return true;
}

bool strictly_below(const AsoVector& a, const AsoVector& b, PayloadLess less) {
  return leq(a, b, less) && !(a == b);
}

AsoVector join(const AsoVector& a, const AsoVector& b, PayloadLess less) {
  require_same_shape(a, b);
  std::vector<RegisterCell> cells;
  cells.reserve(a.m());
  for (std::size_t i = 0; i < a.m(); ++i) {
    const auto& x = a.registers()[i];
    const auto& y = b.registers()[i];
    cells.push_back(cell_leq(x, y, less) ? y : x);
  }
  std::vector<std::uint64_t> counters(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    counters[i] = std::max(a.counters()[i], b.counters()[i]);
  }
  return AsoVector(std::move(cells), std::move(counters));
}

bool comparable(const AsoVector& a, const AsoVector& b, PayloadLess less) {
  return leq(a, b, less) || leq(b, a, less);
}

AsoVector make_update_vector(const LatticeConfig& cfg, std::size_t i,
                             std::uint64_t writes, std::string value) {
  if (i >= cfg.m) throw std::out_of_range("register index out of range");
  if (writes == 0) throw std::invalid_argument("update vector requires writes >= 1");
  auto x = AsoVector::bottom(cfg);
  auto cells = x.registers();
  cells[i] = RegisterCell{writes, std::move(value)};
  return AsoVector(std::move(cells), x.counters());
}

AsoVector make_snapshot_vector(const LatticeConfig& cfg, std::size_t i,
                               std::uint64_t reads) {
  if (i >= cfg.n) throw std::out_of_range("process index out of range");
  if (reads == 0) throw std::invalid_argument("snapshot vector requires reads >= 1");
  auto x = AsoVector::bottom(cfg);
  auto counters = x.counters();
  counters[i] = reads;
  return AsoVector(x.registers(), std::move(counters));
}

std::vector<std::string> project_registers(const AsoVector& x) {
  std::vector<std::string> out;
  out.reserve(x.m());
  for (const auto& c : x.registers()) out.push_back(c.value);
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_string(const AsoVector& x) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < x.m(); ++i) {
    if (i) os << ',';
    os << '(' << x.registers()[i].writes << ',' << '"' << x.registers()[i].value << '"' << ')';
  }
  os << '|';
  for (std::size_t i = 0; i < x.n(); ++i) {
    if (i) os << ',';
    os << x.counters()[i];
  }
  os << ']';
  return os.str();
}

}  // namespace lasnap
