#pragma once

#include <map>
#include <string>
#include <vector>

#include "kx/core.hpp"
#include "kx/instance.hpp"
#include "kx/search.hpp"
#include "kx/systems.hpp"

namespace kx {

// Exhaustive maximum-value independent set.  DFS over the subset lattice
// in include-first order, pruning dependent branches (valid because the
// family is hereditary); strict improvement keeps the lexicographically
// first maximizer.
inline std::pair<ElemSet, Rational> brute_force_opt(const System& sys,
                                                    const Objective& obj,
                                                    int cap = 20) {
  const int n = sys.ground_size();
  if (n > cap) throw CapError("brute force refused: ground set exceeds cap");
  ElemSet best;
  Rational best_val = obj.evaluate(ElemSet{});
  auto dfs = [&](auto&& self, Elem next, ElemSet cur) -> void {
    Rational v = obj.evaluate(cur);
    if (v > best_val) {
      best_val = v;
      best = cur;
    }
    for (Elem e = next; e < n; ++e)
      if (sys.is_independent(cur.with(e))) self(self, e + 1, cur.with(e));
  };
  dfs(dfs, 0, ElemSet{});
  return {best, best_val};
}

// The analysis objects built from a locally optimal S and an optimum O:
// the exchange witness Y for (O, S), the classes P_x of optimum elements
// whose heaviest conflicting solution element is x, and their conflict
// unions N_x.  Optimum elements with an empty neighborhood (no conflict
// with S) go to `unassigned` and are audited via the pure-insertion
// replacement ({e}, {}).
struct PartitionWitness {
  ExchangeWitness Y;
  std::map<Elem, ElemSet> P;
  std::map<Elem, ElemSet> N;
  std::vector<Elem> unassigned;
};

inline PartitionWitness build_partition_witness(const SetPackingSystem& sys,
                                                ElemSet S, ElemSet O,
                                                const std::vector<long long>& mult) {
  if (!sys.is_independent(S) || !sys.is_independent(O))
    throw ContractError("build_partition_witness: S and O must be independent");
  PartitionWitness pw;
  pw.Y = build_witness(sys, O, S);
  for (Elem e : O.elements()) {
    ElemSet y = pw.Y.of(e);
    if (y.empty()) {
      pw.unassigned.push_back(e);
      continue;
    }
    Elem heaviest = -1;
    for (Elem x : y.elements())
      if (heaviest < 0 || mult[x] > mult[heaviest]) heaviest = x;
    pw.P[heaviest] = pw.P[heaviest].with(e);
  }
  const int k = sys.k;
  int assigned = 0;
  for (auto& [x, px] : pw.P) {
    ElemSet nx;
    for (Elem e : px.elements()) nx = nx | pw.Y.of(e);
    pw.N[x] = nx;
    assigned += px.size();
    if (px.size() > k) throw InvariantError("|P_x| exceeds k");
    if (nx.size() > k * k - k + 1) throw InvariantError("|N_x| exceeds k^2-k+1");
    if (!nx.subset_of(S)) throw InvariantError("N_x escapes S");
    if (!sys.is_independent((S - nx) | px))
      throw InvariantError("(P_x, N_x) is not a feasible replacement");
  }
  if (assigned + static_cast<int>(pw.unassigned.size()) != O.size())
    throw InvariantError("P classes do not partition O");
  return pw;
}

// Sum over partition blocks of T \ S of the marginal of the block over S
// dominates the marginal of all of T.
inline bool check_lemma1(const Objective& obj, ElemSet S, ElemSet T,
                         const std::vector<ElemSet>& blocks) {
  ElemSet covered;
  for (ElemSet b : blocks) {
    if (b.empty() || b.intersects(covered) || b.intersects(S) || !b.subset_of(T))
      throw ContractError("blocks must partition T \\ S");
    covered = covered | b;
  }
  if (covered != T - S) throw ContractError("blocks must cover T \\ S");
  Rational fS = obj.evaluate(S);
  Rational lhs;
  for (ElemSet b : blocks) lhs += obj.evaluate(S | b) - fS;
  return lhs >= obj.evaluate(S | T) - fS;
}

// The squared-weight inequality: with w_x dominating every weight in the
// neighborhood, w_e^2 - sum z^2 >= w_x (2 w_e - w(Y_e)), where
// yw_minus_x are the neighborhood weights besides x and
// w(Y_e) = w_x + sum(yw_minus_x).
inline bool check_lemma2(const Rational& w_x, const Rational& w_e,
                         const std::vector<Rational>& yw_minus_x) {
  if (w_x.sign() < 0 || w_e.sign() < 0)
    throw ContractError("weights must be nonnegative");
  Rational y_total = w_x;
  Rational sq_sum;
  for (const Rational& z : yw_minus_x) {
    if (z.sign() < 0) throw ContractError("weights must be nonnegative");
    if (z > w_x) throw ContractError("w_x must dominate the neighborhood weights");
    y_total += z;
    sq_sum += z * z;
  }
  return w_e * w_e - sq_sum >= w_x * (Rational(2) * w_e - y_total);
}

struct LemmaCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct AuditReport {
  Rational sol_value, opt_value, ratio, bound;
  ElemSet opt;
  std::vector<LemmaCheck> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Rebuilds the locality-gap analysis on a finished search run and checks
// it inequality by inequality with the same alpha-rounded weights the
// run used.  Any failed check signals an implementation bug, not a bad
// instance.  Witness-based checks need a set packing system; explicit
// systems get the ratio check only.
inline AuditReport audit_run(const Instance& inst, const SearchResult& res,
                             const SearchParams& params, int brute_cap = 20) {
  AuditReport rep;
  const ElemSet S = res.state.S;
  const int k = inst.k();
  rep.bound = Rational(k + 3, 2) + params.epsilon;
  rep.sol_value = res.state.value;
  auto [O, fO] = brute_force_opt(inst.system, inst.objective, brute_cap);
  rep.opt = O;
  rep.opt_value = fO;
  rep.ratio = rep.sol_value.is_zero() ? Rational(1) : fO / rep.sol_value;

  if (res.trace.degenerate) {
    rep.checks.push_back({"degenerate", fO.is_zero(), "f(O)=" + fO.str()});
    return rep;
  }
  const Rational alpha = res.trace.alpha;

  {
    auto again = find_improvement(inst, res.state, res.ordering, alpha, params);
    rep.checks.push_back({"local_optimum", !again.has_value(),
                          again ? "improving pair " + again->A.str() + "," +
                                      again->B.str()
                                : ""});
  }
  {
    Rational wsum;
    for (Elem x : S.elements()) wsum += Rational(res.state.mult[x]) * alpha;
    bool ok = wsum <= rep.sol_value &&
              wsum >= rep.sol_value - Rational(S.size()) * alpha;
    rep.checks.push_back({"eq3_weight_sandwich", ok, "sum w = " + wsum.str()});
  }
  rep.checks.push_back(
      {"theorem1_ratio", rep.ratio <= rep.bound,
       "ratio " + rep.ratio.str() + " vs bound " + rep.bound.str()});

  const auto* pack = inst.system.packing();
  if (!pack) {
    rep.checks.push_back({"witness_checks", true, "skipped: explicit system"});
    return rep;
  }

  PartitionWitness pw;
  try {
    pw = build_partition_witness(*pack, S, O, res.state.mult);
  } catch (const InvariantError& e) {
    rep.checks.push_back({"partition_witness", false, e.what()});
    return rep;
  }
  rep.checks.push_back({"partition_witness", true, ""});

  auto wt = [&](Elem x) { return Rational(res.state.mult[x]) * alpha; };
  auto y_weight = [&](Elem e) {
    Rational t;
    for (Elem z : pw.Y.of(e).elements()) t += wt(z);
    return t;
  };

  // Local optimality forces the rounded insertion weight of every
  // conflict-free optimum element to zero.
  {
    bool ok = true;
    std::string detail;
    for (Elem e : pw.unassigned) {
      auto rw = replacement_weights(S, ElemSet{e}, ElemSet{}, res.ordering, alpha,
                                    inst.objective);
      if (rw[0].second != 0) {
        ok = false;
        detail = "element " + std::to_string(e);
        break;
      }
    }
    rep.checks.push_back({"free_insertion_zero", ok, detail});
  }

  bool lemma2_ok = true, lemma3_ok = true, eq4_ok = true;
  std::string l2d, l3d, e4d;
  for (auto& [x, px] : pw.P) {
    auto rw = replacement_weights(S, px, pw.N.at(x), res.ordering, alpha,
                                  inst.objective);
    std::map<Elem, Rational> wab;
    for (auto& [a, m] : rw) wab[a] = Rational(m) * alpha;

    Rational rw_sum;
    for (auto& [a, v] : wab) rw_sum += v;
    Rational marg = inst.objective.evaluate(S | px) - rep.sol_value;
    if (rw_sum < marg - Rational(px.size()) * alpha) {
      eq4_ok = false;
      e4d = "x=" + std::to_string(x);
    }

    Rational charge;
    for (Elem e : px.elements()) {
      std::vector<Rational> others;
      for (Elem z : pw.Y.of(e).without(x).elements()) others.push_back(wt(z));
      if (!check_lemma2(wt(x), wab.at(e), others)) {
        lemma2_ok = false;
        l2d = "x=" + std::to_string(x) + " e=" + std::to_string(e);
      }
      charge += Rational(2) * wab.at(e) - y_weight(e);
    }
    if (wt(x) < charge) {
      lemma3_ok = false;
      l3d = "x=" + std::to_string(x);
    }
  }
  rep.checks.push_back({"eq4_replacement_sum", eq4_ok, e4d});
  rep.checks.push_back({"lemma2_squared_weights", lemma2_ok, l2d});
  rep.checks.push_back({"lemma3_charging", lemma3_ok, l3d});

  {
    Rational total;
    for (Elem e : O.elements()) total += y_weight(e);
    rep.checks.push_back({"kfold_counting",
                          total <= Rational(k) * rep.sol_value,
                          "sum w(Y_e) = " + total.str()});
  }
  {
    std::vector<ElemSet> blocks;
    for (auto& [x, px] : pw.P)
      if (!(px - S).empty()) blocks.push_back(px - S);
    for (Elem e : pw.unassigned) blocks.push_back(ElemSet{e});
    bool ok = check_lemma1(inst.objective, S, O, blocks);
    rep.checks.push_back({"lemma1_partition", ok, ""});
  }
  return rep;
}

}  // namespace kx
