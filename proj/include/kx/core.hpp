#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kx {

// Error taxonomy. The CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Unknown element / item identifier, malformed domain data.
struct DomainError : Error {
  using Error::Error;
};
// Caller violated an operation precondition.
struct ContractError : Error {
  using Error::Error;
};
// Work refused because a configured size/candidate cap would be exceeded.
struct CapError : Error {
  using Error::Error;
};
// An internal invariant failed; always a bug, never expected input behavior.
struct InvariantError : Error {
  using Error::Error;
};
// int64 rational arithmetic left the representable range.
struct OverflowError : Error {
  using Error::Error;
};
struct ParseError : Error {
  int line = 0;
  ParseError(int ln, const std::string& msg)
      : Error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

using Elem = int;

// Subset of a ground set of at most 64 elements, stored as a bitmask.
// Every ground set in this library is tiny (the k-replacement scan is
// O(n^{k^2+1}) anyway), so 64 elements is not a practical restriction.
struct ElemSet {
  std::uint64_t bits = 0;

  constexpr ElemSet() = default;
  constexpr explicit ElemSet(std::uint64_t b) : bits(b) {}
  ElemSet(std::initializer_list<Elem> es) {
    for (Elem e : es) bits |= mask(e);
  }

  static constexpr std::uint64_t mask(Elem e) { return std::uint64_t{1} << e; }
  static ElemSet full(int n) {
    return ElemSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  bool contains(Elem e) const { return (bits & mask(e)) != 0; }
  ElemSet with(Elem e) const { return ElemSet(bits | mask(e)); }
  ElemSet without(Elem e) const { return ElemSet(bits & ~mask(e)); }
  int size() const { return __builtin_popcountll(bits); }
  bool empty() const { return bits == 0; }
  bool subset_of(ElemSet o) const { return (bits & ~o.bits) == 0; }
  bool intersects(ElemSet o) const { return (bits & o.bits) != 0; }

  ElemSet operator|(ElemSet o) const { return ElemSet(bits | o.bits); }
  ElemSet operator&(ElemSet o) const { return ElemSet(bits & o.bits); }
  ElemSet operator-(ElemSet o) const { return ElemSet(bits & ~o.bits); }
  bool operator==(const ElemSet&) const = default;
  auto operator<=>(const ElemSet&) const = default;

  Elem lowest() const { return __builtin_ctzll(bits); }

  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    out.reserve(size());
    for (std::uint64_t b = bits; b != 0; b &= b - 1)
      out.push_back(__builtin_ctzll(b));
    return out;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (Elem e : elements()) {
      if (!first) s += ",";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }
};

// Compares subsets as ascending element lists (shorter prefix wins).
// This is the tie-break order used by the exact solver, and it is not
// the numeric order of the bitmasks.
inline bool lex_before(ElemSet a, ElemSet b) {
  return a.elements() < b.elements();
}

// Enumerates subsets of `pool` with size 0..max_size, ordered by
// (size, lexicographic element list).  `fn(ElemSet) -> bool` returns
// false to stop the enumeration; the function returns false when stopped.
template <typename Fn>
bool for_each_combination(const std::vector<Elem>& pool, int max_size, Fn&& fn) {
  const int n = static_cast<int>(pool.size());
  if (max_size > n) max_size = n;
  std::vector<int> idx;
  for (int sz = 0; sz <= max_size; ++sz) {
    idx.assign(sz, 0);
    for (int i = 0; i < sz; ++i) idx[i] = i;
    while (true) {
      ElemSet s;
      for (int i : idx) s = s.with(pool[i]);
      if (!fn(s)) return false;
      if (sz == 0) break;
      int i = sz - 1;
      while (i >= 0 && idx[i] == n - sz + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < sz; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return true;
}

}  // namespace kx
