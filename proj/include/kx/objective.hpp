#pragma once

#include <atomic>
#include <optional>
#include <variant>
#include <vector>

#include "kx/core.hpp"
#include "kx/rational.hpp"

namespace kx {

// Weighted coverage oracle: f(S) = total item weight of the union of the
// covers of the elements of S.  Items live in a universe of at most 64
// identifiers so covers are bitmasks; weights default to 1.
struct CoverageObjective {
  int universe_size = 0;
  std::vector<std::uint64_t> covers;   // one mask per ground element
  std::vector<Rational> item_weight;   // one weight per universe item

  CoverageObjective() = default;
  CoverageObjective(int usize, std::vector<std::uint64_t> cv,
                    std::vector<Rational> iw = {})
      : universe_size(usize), covers(std::move(cv)), item_weight(std::move(iw)) {
    if (universe_size < 0 || universe_size > 64)
      throw DomainError("coverage universe must have 0..64 items");
    if (item_weight.empty()) item_weight.assign(universe_size, Rational(1));
    if (static_cast<int>(item_weight.size()) != universe_size)
      throw DomainError("item weight table does not match universe size");
    for (const auto& w : item_weight)
      if (w.sign() < 0) throw DomainError("negative item weight");
    const std::uint64_t valid =
        universe_size >= 64 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << universe_size) - 1;
    for (auto c : covers) {
      if (c == 0) throw DomainError("ground element with empty cover set");
      if ((c & ~valid) != 0) throw DomainError("cover refers to unknown item");
    }
  }

  Rational value_of_items(std::uint64_t items) const {
    Rational total;
    for (std::uint64_t b = items; b != 0; b &= b - 1)
      total += item_weight[__builtin_ctzll(b)];
    return total;
  }
};

// Modular oracle: f(S) = sum of per-element weights.
struct LinearObjective {
  std::vector<Rational> elem_weight;

  LinearObjective() = default;
  explicit LinearObjective(std::vector<Rational> w) : elem_weight(std::move(w)) {
    for (const auto& x : elem_weight)
      if (x.sign() < 0) throw DomainError("negative element weight");
  }
};

struct CertWitness {
  ElemSet S, T;
  Elem x = -1;
  std::string what;
};

struct CertReport {
  bool pass = true;
  std::optional<CertWitness> violation;
};

// Value oracle with a built-in call counter.  Immutable after
// construction; evaluate/marginal are const and safe to call
// concurrently (the counter is atomic).
class Objective {
 public:
  Objective() = default;
  explicit Objective(CoverageObjective c) : impl_(std::move(c)) {}
  explicit Objective(LinearObjective l) : impl_(std::move(l)) {}

  Objective(const Objective& o) : impl_(o.impl_), calls_(o.calls_.load()) {}
  Objective& operator=(const Objective& o) {
    impl_ = o.impl_;
    calls_ = o.calls_.load();
    return *this;
  }

  int ground_size() const {
    if (auto* c = std::get_if<CoverageObjective>(&impl_))
      return static_cast<int>(c->covers.size());
    return static_cast<int>(std::get<LinearObjective>(impl_).elem_weight.size());
  }

  bool is_linear() const { return std::holds_alternative<LinearObjective>(impl_); }

  const CoverageObjective* coverage() const {
    return std::get_if<CoverageObjective>(&impl_);
  }
  const LinearObjective* linear() const {
    return std::get_if<LinearObjective>(&impl_);
  }

  Rational evaluate(ElemSet S) const {
    check_domain(S);
    calls_.fetch_add(1, std::memory_order_relaxed);
    if (auto* c = std::get_if<CoverageObjective>(&impl_)) {
      std::uint64_t items = 0;
      for (Elem e : S.elements()) items |= c->covers[e];
      return c->value_of_items(items);
    }
    const auto& lin = std::get<LinearObjective>(impl_);
    Rational total;
    for (Elem e : S.elements()) total += lin.elem_weight[e];
    return total;
  }

  // f(base + e) - f(base); requires e outside base.
  Rational marginal(ElemSet base, Elem e) const {
    if (e < 0 || e >= ground_size()) throw DomainError("unknown element");
    if (base.contains(e)) throw ContractError("marginal: element already in base");
    return evaluate(base.with(e)) - evaluate(base);
  }

  long long calls() const { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() const { calls_.store(0, std::memory_order_relaxed); }

 private:
  std::variant<CoverageObjective, LinearObjective> impl_;
  mutable std::atomic<long long> calls_{0};

  void check_domain(ElemSet S) const {
    if (!S.subset_of(ElemSet::full(ground_size())))
      throw DomainError("subset contains unknown element");
  }
};

// Exhaustive certification that an oracle is monotone with decreasing
// marginals over the given ground set.  Checking all adjacent pairs
// f(S+x) - f(S) >= f(S+y+x) - f(S+y) certifies the full S <= T chain,
// since any chain factors into single-element steps.  Refuses ground
// sets past the cap instead of attempting them.  `value` is any
// ElemSet -> Rational callable.
template <typename ValueFn>
CertReport certify_monotone_submodular_fn(ValueFn&& value, int n, int max_n = 15) {
  if (n > max_n)
    throw CapError("certification refused: ground set larger than cap");
  if (n > 60) throw CapError("certification refused: ground set too large");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Rational> f(count);
  for (std::uint64_t m = 0; m < count; ++m) f[m] = value(ElemSet(m));

  CertReport rep;
  for (std::uint64_t m = 0; m < count; ++m) {
    for (Elem x = 0; x < n; ++x) {
      if (m & ElemSet::mask(x)) continue;
      const std::uint64_t mx = m | ElemSet::mask(x);
      if (f[mx] < f[m]) {
        rep.pass = false;
        rep.violation = {ElemSet(m), ElemSet(mx), x, "monotonicity"};
        return rep;
      }
      for (Elem y = 0; y < n; ++y) {
        if (y == x || (m & ElemSet::mask(y))) continue;
        const std::uint64_t my = m | ElemSet::mask(y);
        if (f[mx] - f[m] < f[my | ElemSet::mask(x)] - f[my]) {
          rep.pass = false;
          rep.violation = {ElemSet(m), ElemSet(my), x, "decreasing marginals"};
          return rep;
        }
      }
    }
  }
  return rep;
}

inline CertReport certify_monotone_submodular(const Objective& obj, int n,
                                              int max_n = 15) {
  return certify_monotone_submodular_fn(
      [&](ElemSet s) { return obj.evaluate(s); }, n, max_n);
}

}  // namespace kx
