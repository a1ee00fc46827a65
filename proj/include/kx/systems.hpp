#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kx/core.hpp"

namespace kx {

// k-set packing: each ground element is a set of at most k items over a
// shared item universe (<= 64 items); a subcollection is independent iff
// its sets are pairwise disjoint.
struct SetPackingSystem {
  int k = 0;
  std::vector<std::uint64_t> elem_items;  // one item mask per ground element

  SetPackingSystem() = default;
  SetPackingSystem(int kk, std::vector<std::uint64_t> items)
      : k(kk), elem_items(std::move(items)) {
    if (k < 1) throw DomainError("set packing requires k >= 1");
    for (auto m : elem_items) {
      int sz = __builtin_popcountll(m);
      if (sz < 1 || sz > k)
        throw DomainError("packing set cardinality outside [1, k]");
    }
  }

  bool is_independent(ElemSet S) const {
    std::uint64_t used = 0;
    for (Elem e : S.elements()) {
      if (used & elem_items[e]) return false;
      used |= elem_items[e];
    }
    return true;
  }
};

// Downward closure of an explicit list of maximal sets.  declared_k is
// trusted as stated by the instance (global verification of the exchange
// property is exponential); specific (A,B) pairs can be spot-checked via
// verify_witness against an externally supplied witness.
struct ExplicitSystem {
  int declared_k = 0;
  int n = 0;
  std::vector<ElemSet> maximal_sets;

  ExplicitSystem() = default;
  ExplicitSystem(int k, int ground, std::vector<ElemSet> maxes)
      : declared_k(k), n(ground), maximal_sets(std::move(maxes)) {
    if (declared_k < 1) throw DomainError("explicit system requires k >= 1");
    for (auto m : maximal_sets)
      if (!m.subset_of(ElemSet::full(n)))
        throw DomainError("maximal set refers to unknown element");
  }

  bool is_independent(ElemSet S) const {
    if (S.empty()) return true;
    for (ElemSet m : maximal_sets)
      if (S.subset_of(m)) return true;
    return false;
  }
};

class System {
 public:
  System() = default;
  explicit System(SetPackingSystem s) : impl_(std::move(s)) {}
  explicit System(ExplicitSystem s) : impl_(std::move(s)) {}

  int k() const {
    if (auto* p = std::get_if<SetPackingSystem>(&impl_)) return p->k;
    return std::get<ExplicitSystem>(impl_).declared_k;
  }

  int ground_size() const {
    if (auto* p = std::get_if<SetPackingSystem>(&impl_))
      return static_cast<int>(p->elem_items.size());
    return std::get<ExplicitSystem>(impl_).n;
  }

  const SetPackingSystem* packing() const {
    return std::get_if<SetPackingSystem>(&impl_);
  }
  const ExplicitSystem* explicit_sys() const {
    return std::get_if<ExplicitSystem>(&impl_);
  }

  bool is_independent(ElemSet S) const {
    if (!S.subset_of(ElemSet::full(ground_size())))
      throw DomainError("subset contains unknown element");
    if (auto* p = std::get_if<SetPackingSystem>(&impl_))
      return p->is_independent(S);
    return std::get<ExplicitSystem>(impl_).is_independent(S);
  }

 private:
  std::variant<SetPackingSystem, ExplicitSystem> impl_;
};

// Exchange neighborhoods: for each e in A \ B the elements of B \ A it
// conflicts with, extended with Y_x = {x} for x in the intersection.
struct ExchangeWitness {
  std::map<Elem, ElemSet> nbr;

  ElemSet of(Elem e) const {
    auto it = nbr.find(e);
    return it == nbr.end() ? ElemSet{} : it->second;
  }
};

// Witness construction for set packing: Y_e collects the elements of
// B \ A whose sets intersect e's set.
inline ExchangeWitness build_witness(const SetPackingSystem& sys, ElemSet A,
                                     ElemSet B) {
  if (!sys.is_independent(A) || !sys.is_independent(B))
    throw ContractError("build_witness: A and B must be independent");
  ExchangeWitness w;
  for (Elem e : (A - B).elements()) {
    ElemSet y;
    for (Elem b : (B - A).elements())
      if (sys.elem_items[e] & sys.elem_items[b]) y = y.with(b);
    w.nbr[e] = y;
  }
  for (Elem x : (A & B).elements()) w.nbr[x] = ElemSet{x};
  return w;
}

struct WitnessReport {
  bool pass = true;
  std::string violated;   // "K1" | "K2" | "K3"
  Elem elem = -1;         // offending e (K1) or x (K2)
  ElemSet bad_C;          // offending subset for K3
};

// Checks the three exchange axioms for a supplied witness. K1 and K2 are
// direct counts; K3 enumerates every C subseteq A \ B in increasing
// cardinality and short-circuits on the first violation, so failure
// reports are reproducible.
inline WitnessReport verify_witness(const System& sys, ElemSet A, ElemSet B,
                                    const ExchangeWitness& Y, int k,
                                    int c_cap = 20) {
  const ElemSet AmB = A - B;
  if (AmB.size() > c_cap)
    throw CapError("verify_witness refused: |A \\ B| exceeds K3 enumeration cap");

  WitnessReport rep;
  std::map<Elem, int> occurs;
  for (Elem e : AmB.elements()) {
    ElemSet y = Y.of(e);
    if (!y.subset_of(B - A)) {
      rep = {false, "K1", e, {}};  // neighborhood escapes B \ A
      return rep;
    }
    if (y.size() > k) {
      rep = {false, "K1", e, {}};
      return rep;
    }
    for (Elem x : y.elements()) ++occurs[x];
  }
  // Intersection extension also counts toward K2 occurrences.
  for (Elem x : (A & B).elements())
    for (Elem z : Y.of(x).elements()) ++occurs[z];
  for (auto& [x, cnt] : occurs) {
    if (cnt > k) {
      rep = {false, "K2", x, {}};
      return rep;
    }
  }
  bool ok = for_each_combination(AmB.elements(), AmB.size(), [&](ElemSet C) {
    ElemSet removed;
    for (Elem e : C.elements()) removed = removed | Y.of(e);
    if (!sys.is_independent((B - removed) | C)) {
      rep = {false, "K3", -1, C};
      return false;
    }
    return true;
  });
  (void)ok;
  return rep;
}

}  // namespace kx
