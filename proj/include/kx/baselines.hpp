#pragma once

#include <optional>
#include <set>
#include <vector>

#include "kx/core.hpp"
#include "kx/instance.hpp"
#include "kx/search.hpp"

namespace kx {

struct BaselineResult {
  ElemSet solution;
  Rational value;
  long long iterations = 0;
  bool terminated = true;       // false: iteration cap hit (or cycle)
  bool cycle_detected = false;
  std::vector<ElemSet> sequence;  // visited solutions, starting solution first
};

// Plain greedy: repeatedly add the feasible element of maximum marginal
// gain (ties by smallest identifier) while some positive gain exists.
inline BaselineResult greedy(const Instance& inst) {
  BaselineResult res;
  ElemSet S;
  while (true) {
    Elem best = -1;
    Rational best_gain;
    for (Elem e = 0; e < inst.n(); ++e) {
      if (S.contains(e) || !inst.system.is_independent(S.with(e))) continue;
      Rational g = inst.objective.marginal(S, e);
      if (g > Rational(0) && (best < 0 || g > best_gain)) {
        best = e;
        best_gain = g;
      }
    }
    if (best < 0) break;
    S = S.with(best);
    ++res.iterations;
  }
  res.solution = S;
  res.value = inst.objective.evaluate(S);
  res.sequence.push_back(S);
  return res;
}

// Oblivious local search over the same k-replacement neighborhood:
// accept (A, B) iff f((S\B) u A) > (1 + eps/n) f(S).  The relative
// threshold makes the number of accepted steps logarithmic in the value
// range.  Defaults to a greedy start; `start` overrides it (used for the
// unit-weight comparison against the linear non-oblivious search).
inline BaselineResult oblivious_ls(const Instance& inst, const Rational& eps,
                                   const SearchParams& base_params = {},
                                   std::optional<ElemSet> start = std::nullopt) {
  if (!(eps > Rational(0)) || !(eps < Rational(1)))
    throw ContractError("epsilon must be in (0, 1)");
  SearchParams params = base_params;
  params.epsilon = eps;

  BaselineResult res;
  ElemSet S = start ? *start : greedy(inst).solution;
  if (start && !inst.system.is_independent(S))
    throw ContractError("oblivious_ls start must be independent");
  res.sequence.push_back(S);
  const Rational growth = Rational(1) + eps / Rational(inst.n());
  const long long hard_cap = 1'000'000;

  while (true) {
    Rational fS = inst.objective.evaluate(S);
    std::optional<ElemSet> next;
    for_each_k_replacement(inst.system, S, params, [&](ElemSet A, ElemSet B) {
      if (inst.objective.evaluate((S - B) | A) > growth * fS) {
        next = (S - B) | A;
        return false;
      }
      return true;
    });
    if (!next) break;
    S = *next;
    res.sequence.push_back(S);
    if (++res.iterations > hard_cap)
      throw InvariantError("oblivious local search failed to converge");
  }
  res.solution = S;
  res.value = inst.objective.evaluate(S);
  return res;
}

// The linear-objective non-oblivious search: static element weights
// rounded down to multiples of alpha = w(S_init) eps / n once up front,
// then first-improvement steps on the squared-weight potential.
inline BaselineResult linear_nols(const Instance& inst, const Rational& eps,
                                  const SearchParams& base_params = {}) {
  const auto* lin = inst.objective.linear();
  if (!lin) throw ContractError("linear_nols requires a linear objective");
  if (!(eps > Rational(0)) || !(eps < Rational(1)))
    throw ContractError("epsilon must be in (0, 1)");
  SearchParams params = base_params;
  params.epsilon = eps;
  const int n = inst.n();

  Elem e0 = 0;
  for (Elem e = 1; e < n; ++e)
    if (lin->elem_weight[e] > lin->elem_weight[e0]) e0 = e;

  BaselineResult res;
  ElemSet S{e0};
  res.sequence.push_back(S);
  const Rational w_init = lin->elem_weight[e0];
  if (w_init.is_zero()) {  // f identically zero
    res.solution = S;
    res.value = Rational(0);
    return res;
  }
  const Rational alpha = w_init * eps / Rational(n);
  std::vector<long long> m(n);
  for (Elem e = 0; e < n; ++e) m[e] = lin->elem_weight[e].floor_div(alpha);

  while (true) {
    std::optional<ElemSet> next;
    for_each_k_replacement(inst.system, S, params, [&](ElemSet A, ElemSet B) {
      long long in = 0, out = 0;
      for (Elem a : A.elements()) in += m[a] * m[a];
      for (Elem b : B.elements()) out += m[b] * m[b];
      if (in > out) {
        next = (S - B) | A;
        return false;
      }
      return true;
    });
    if (!next) break;
    S = *next;
    res.sequence.push_back(S);
    ++res.iterations;
  }
  res.solution = S;
  res.value = inst.objective.evaluate(S);
  return res;
}

// The broken marginal-weight variant's weight table: w(e) = f(S + e) - f(S - e).
inline std::vector<Rational> naive_weights(const Instance& inst, ElemSet S) {
  std::vector<Rational> w(inst.n());
  for (Elem e = 0; e < inst.n(); ++e) {
    w[e] = S.contains(e)
               ? inst.objective.evaluate(S) - inst.objective.evaluate(S.without(e))
               : inst.objective.evaluate(S.with(e)) - inst.objective.evaluate(S);
  }
  return w;
}

// Local search on the squared naive marginal weights.  Takes the best
// improving k-replacement each round (which is what makes the two-base
// fixture oscillate between its bases).  Detects revisited solutions and
// reports them as a cycle; otherwise stops at a fixpoint or at max_iters.
inline BaselineResult naive_marginal_nols(const Instance& inst, long long max_iters,
                                          const SearchParams& base_params = {},
                                          std::optional<ElemSet> start = std::nullopt) {
  if (max_iters < 1) throw ContractError("max_iters must be >= 1");
  BaselineResult res;
  ElemSet S = start ? *start : greedy(inst).solution;
  res.sequence.push_back(S);
  std::set<ElemSet> visited{S};

  for (long long it = 0; it < max_iters; ++it) {
    const std::vector<Rational> w = naive_weights(inst, S);
    std::optional<ElemSet> next;
    Rational best_gain(0);
    for_each_k_replacement(inst.system, S, base_params, [&](ElemSet A, ElemSet B) {
      Rational gain;
      for (Elem a : A.elements()) gain += w[a] * w[a];
      for (Elem b : B.elements()) gain -= w[b] * w[b];
      if (gain > best_gain) {
        best_gain = gain;
        next = (S - B) | A;
      }
      return true;
    });
    if (!next) {
      res.terminated = true;
      res.solution = S;
      res.value = inst.objective.evaluate(S);
      res.iterations = it;
      return res;
    }
    S = *next;
    ++res.iterations;
    res.sequence.push_back(S);
    if (!visited.insert(S).second) {
      res.cycle_detected = true;
      break;
    }
  }
  res.terminated = false;
  res.solution = S;
  res.value = inst.objective.evaluate(S);
  return res;
}

}  // namespace kx
