#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "kx/core.hpp"
#include "kx/instance.hpp"
#include "kx/objective.hpp"
#include "kx/rational.hpp"
#include "kx/systems.hpp"

namespace kx {

// Total order on the ground set, stored as a rank permutation.
struct Ordering {
  std::vector<int> rank;

  static Ordering initial(int n) {
    Ordering o;
    o.rank.resize(n);
    for (int i = 0; i < n; ++i) o.rank[i] = i;
    return o;
  }

  bool before(Elem x, Elem y) const { return rank[x] < rank[y]; }

  std::vector<Elem> sorted(ElemSet s) const {
    auto v = s.elements();
    std::sort(v.begin(), v.end(),
              [&](Elem a, Elem b) { return rank[a] < rank[b]; });
    return v;
  }

  // Order after applying a replacement that inserts A: every element of A
  // moves behind all other elements, keeping its relative order; all
  // other relative orders are unchanged.  In particular all of S \ B ends
  // up before all of A, which is what the weight monotonicity argument
  // needs.
  Ordering after_insertion(ElemSet A) const {
    const int n = static_cast<int>(rank.size());
    std::vector<Elem> by_rank(n);
    for (Elem e = 0; e < n; ++e) by_rank[rank[e]] = e;
    Ordering out;
    out.rank.resize(n);
    int next = 0;
    for (Elem e : by_rank)
      if (!A.contains(e)) out.rank[e] = next++;
    for (Elem e : by_rank)
      if (A.contains(e)) out.rank[e] = next++;
    return out;
  }
};

struct SearchParams {
  Rational epsilon{1, 2};
  long long candidate_cap = 1'000'000'000;
  // Compare candidate potentials against w^2(S) instead of w^2(B), i.e.
  // the pseudocode text taken literally.  Off by default: the analysis
  // needs the w^2(B) comparison.
  bool literal_rule = false;
};

// Weight table for the current solution: integer multiples of alpha,
// indexed by element (zero outside S).  Potentials are carried as plain
// integers in alpha^2 units so every comparison is exact.
struct SolutionState {
  ElemSet S;
  std::vector<long long> mult;
  Rational value;
  long long potential = 0;
};

struct KReplacement {
  ElemSet A, B;
  std::vector<std::pair<Elem, long long>> a_mult;  // in ordering of A

  long long potential_gain_over(const SolutionState& st, bool literal,
                                ElemSet S) const {
    long long in = 0;
    for (auto& [e, m] : a_mult) in += m * m;
    long long out = 0;
    for (Elem b : (literal ? S : B).elements()) out += st.mult[b] * st.mult[b];
    return in - out;
  }
};

struct ImprovementRecord {
  int step;
  ElemSet A, B;
  long long potential_before, potential_after;
  Rational value_before, value_after;
};

struct SearchTrace {
  std::vector<ImprovementRecord> improvements;
  long long oracle_calls = 0;
  Rational alpha, delta;
  bool degenerate = false;
};

struct SearchResult {
  SolutionState state;
  Ordering ordering;
  SearchTrace trace;
};

// delta = (1 + (k+3)/(2 eps))^-1 and alpha = f_init * delta / n.
// Returns nothing when f_init = 0: monotonicity plus singleton
// maximality make the whole objective identically zero, so the caller
// short-circuits instead of dividing by alpha = 0.
inline std::optional<std::pair<Rational, Rational>> compute_scale(
    int n, int k, const Rational& eps, const Rational& f_init) {
  if (!(eps > Rational(0)) || eps > Rational(1))
    throw ContractError("epsilon must be in (0, 1]");
  if (f_init.sign() < 0) throw ContractError("negative objective value");
  if (f_init.is_zero()) return std::nullopt;
  Rational delta = Rational(1) / (Rational(1) + Rational(k + 3) / (Rational(2) * eps));
  Rational alpha = f_init * delta / Rational(n);
  return std::make_pair(delta, alpha);
}

// argmax_e f({e}), ties broken by smallest rank in `ord`.
inline Elem init_element(const Objective& obj, const Ordering& ord) {
  const int n = obj.ground_size();
  if (n == 0) throw DomainError("empty ground set");
  Elem best = -1;
  Rational best_val;
  for (int r = 0; r < n; ++r) {
    Elem e = 0;
    while (ord.rank[e] != r) ++e;
    Rational v = obj.evaluate(ElemSet{e});
    if (best < 0 || v > best_val) {
      best = e;
      best_val = v;
    }
  }
  return best;
}

// w(s_i) = floor((f(S_{i-1} + s_i) - f(S_{i-1})) / alpha), as an integer
// multiple of alpha, where S_{i-1} is the prefix of S under `ord`.
inline std::vector<long long> solution_weights(ElemSet S, const Ordering& ord,
                                               const Rational& alpha,
                                               const Objective& obj) {
  std::vector<long long> mult(obj.ground_size(), 0);
  ElemSet prefix;
  Rational prev = obj.evaluate(prefix);
  for (Elem e : ord.sorted(S)) {
    prefix = prefix.with(e);
    Rational cur = obj.evaluate(prefix);
    mult[e] = (cur - prev).floor_div(alpha);
    if (mult[e] < 0) throw InvariantError("negative weight from monotone oracle");
    prev = cur;
  }
  return mult;
}

// The per-replacement weights w_{(A,B)}: prefix marginals of A's elements
// on top of S \ B, floored to multiples of alpha.
inline std::vector<std::pair<Elem, long long>> replacement_weights(
    ElemSet S, ElemSet A, ElemSet B, const Ordering& ord, const Rational& alpha,
    const Objective& obj) {
  std::vector<std::pair<Elem, long long>> out;
  ElemSet X = S - B;
  Rational prev = obj.evaluate(X);
  for (Elem a : ord.sorted(A)) {
    X = X.with(a);
    Rational cur = obj.evaluate(X);
    long long m = (cur - prev).floor_div(alpha);
    if (m < 0) throw InvariantError("negative weight from monotone oracle");
    out.emplace_back(a, m);
    prev = cur;
  }
  return out;
}

inline long long potential_of(const SolutionState& st) {
  long long p = 0;
  for (Elem e : st.S.elements()) p += st.mult[e] * st.mult[e];
  return p;
}

// Upper bound on the number of candidate (A, B) pairs for the current
// scan: (#subsets of G with |A| <= k) * (#subsets of S with |B| <= bmax).
inline long long candidate_estimate(int n, int s, int k, int bmax) {
  auto sum_binom = [](int m, int top) {
    __int128 total = 0, c = 1;
    for (int i = 0; i <= std::min(m, top); ++i) {
      total += c;
      c = c * (m - i) / (i + 1);
      if (total > (__int128)4e18) return (__int128)4e18;
    }
    return total;
  };
  __int128 est = sum_binom(n, k) * sum_binom(s, bmax);
  if (est > (__int128)4e18) est = (__int128)4e18;
  return static_cast<long long>(est);
}

// Enumerates all k-replacements (A, B) of the current solution S:
// A over ground subsets with |A| <= k, B over subsets of S with
// |B| <= k^2 - k + 1 and B containing A's overlap with S (so that
// A avoids S \ B), feasibility (S \ B) u A in I checked by the
// membership oracle.  Order is deterministic: (|A|, A, |B|, B), all
// lexicographic by element list.  Dependent A prune the whole B loop,
// valid because I is hereditary.  fn(A, B) -> bool, false stops.
template <typename Fn>
void for_each_k_replacement(const System& sys, ElemSet S,
                            const SearchParams& params, Fn&& fn) {
  const int n = sys.ground_size();
  const int k = sys.k();
  const int bmax = std::min(S.size(), k * k - k + 1);
  if (candidate_estimate(n, S.size(), k, bmax) > params.candidate_cap)
    throw CapError("k-replacement scan refused: estimated " +
                   std::to_string(candidate_estimate(n, S.size(), k, bmax)) +
                   " candidate pairs exceed cap " +
                   std::to_string(params.candidate_cap));

  std::vector<Elem> ground(n);
  for (int e = 0; e < n; ++e) ground[e] = e;
  const std::vector<Elem> s_elems = S.elements();

  for_each_combination(ground, k, [&](ElemSet A) {
    if (!sys.is_independent(A)) return true;  // prune: A must stay independent
    const ElemSet overlap = A & S;
    return for_each_combination(s_elems, bmax, [&](ElemSet B) {
      if (!overlap.subset_of(B)) return true;
      if (!sys.is_independent((S - B) | A)) return true;
      return static_cast<bool>(fn(A, B));
    });
  });
}

// First k-replacement (in enumeration order) whose squared replacement
// weights beat the squared weights of B, or nothing at a local optimum.
inline std::optional<KReplacement> find_improvement(const Instance& inst,
                                                    const SolutionState& state,
                                                    const Ordering& ord,
                                                    const Rational& alpha,
                                                    const SearchParams& params) {
  std::optional<KReplacement> found;
  for_each_k_replacement(inst.system, state.S, params, [&](ElemSet A, ElemSet B) {
    KReplacement cand{A, B,
                      replacement_weights(state.S, A, B, ord, alpha, inst.objective)};
    if (cand.potential_gain_over(state, params.literal_rule, state.S) > 0) {
      found = std::move(cand);
      return false;
    }
    return true;
  });
  return found;
}

namespace detail {

inline SolutionState make_state(ElemSet S, const Ordering& ord,
                                const Rational& alpha, const Objective& obj) {
  SolutionState st;
  st.S = S;
  st.mult = solution_weights(S, ord, alpha, obj);
  st.value = obj.evaluate(S);
  st.potential = potential_of(st);
  // rounded weight-sum sandwich, rechecked on every recomputation
  Rational wsum;
  for (Elem e : S.elements()) wsum += Rational(st.mult[e]) * alpha;
  if (wsum > st.value || wsum < st.value - Rational(S.size()) * alpha)
    throw InvariantError("weight sum left the [f(S) - |S|a, f(S)] sandwich");
  return st;
}

}  // namespace detail

// The non-oblivious local search.  Starts from the best singleton,
// repeatedly applies the first improving k-replacement, and maintains
// the ordering so that surviving elements precede inserted ones.  Every
// accepted step is checked on the spot: the potential must grow by at
// least one alpha^2 unit and no surviving or inserted element's weight
// may drop; violations are bugs and raise InvariantError.
inline SearchResult run_search(const Instance& inst, const SearchParams& params) {
  if (!(params.epsilon > Rational(0)) || !(params.epsilon < Rational(1)))
    throw ContractError("epsilon must be in (0, 1)");
  const int n = inst.n();
  const long long calls0 = inst.objective.calls();

  SearchResult res;
  res.ordering = Ordering::initial(n);
  Elem e0 = init_element(inst.objective, res.ordering);
  Rational f_init = inst.objective.evaluate(ElemSet{e0});

  auto scale = compute_scale(n, inst.k(), params.epsilon, f_init);
  if (!scale) {
    // f identically zero; any independent set is optimal.
    res.state.S = ElemSet{e0};
    res.state.mult.assign(n, 0);
    res.state.value = Rational(0);
    res.trace.degenerate = true;
    res.trace.oracle_calls = inst.objective.calls() - calls0;
    return res;
  }
  auto [delta, alpha] = *scale;
  res.trace.delta = delta;
  res.trace.alpha = alpha;

  res.state = detail::make_state(ElemSet{e0}, res.ordering, alpha, inst.objective);
  const Rational improvement_bound =
      Rational(n - 1) * (Rational(n) / delta) * (Rational(n) / delta);

  int step = 0;
  while (true) {
    auto imp = find_improvement(inst, res.state, res.ordering, alpha, params);
    if (!imp) break;
    ++step;

    const ElemSet old_S = res.state.S;
    const std::vector<long long> old_mult = res.state.mult;
    const long long old_potential = res.state.potential;
    const Rational old_value = res.state.value;

    const ElemSet new_S = (old_S - imp->B) | imp->A;
    Ordering new_ord = res.ordering.after_insertion(imp->A);
    SolutionState new_state =
        detail::make_state(new_S, new_ord, alpha, inst.objective);

    // Weight monotonicity across the step (the termination argument).
    for (Elem x : (old_S - imp->B).elements())
      if (new_state.mult[x] < old_mult[x])
        throw InvariantError("surviving element weight decreased");
    for (auto& [y, m] : imp->a_mult)
      if (new_state.mult[y] < m)
        throw InvariantError("inserted element weight fell below w_{(A,B)}");
    if (new_state.potential < old_potential + 1)
      throw InvariantError("potential did not gain an alpha^2 unit");
    if (Rational(step) > improvement_bound)
      throw InvariantError("improvement count exceeded (n-1)(n/delta)^2");

    res.state = std::move(new_state);
    res.ordering = std::move(new_ord);
    res.trace.improvements.push_back({step, imp->A, imp->B, old_potential,
                                      res.state.potential, old_value,
                                      res.state.value});
  }

  res.trace.oracle_calls = inst.objective.calls() - calls0;
  return res;
}

}  // namespace kx
