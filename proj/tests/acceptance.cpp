// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Exercises the library end to end on the bundled two-base fixture and on
// seeded random set packing instances.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "kx/kx.hpp"

using namespace kx;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int num, const std::string& what, bool ok, const std::string& note = "") {
  std::printf("criterion %d  %-58s %s%s%s\n", num, what.c_str(),
              ok ? "PASS" : "FAIL", note.empty() ? "" : "  -- ",
              note.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// One completed search kept around for the invariant criteria.
struct Run {
  Instance inst;
  SearchParams params;
  SearchResult res;
  ElemSet opt;
  Rational f_opt;
};

// Random independent set in a packing system, greedily grown in a
// shuffled element order.
ElemSet random_independent(const System& sys, std::mt19937_64& rng) {
  std::vector<Elem> order(sys.ground_size());
  for (int e = 0; e < sys.ground_size(); ++e) order[e] = e;
  std::shuffle(order.begin(), order.end(), rng);
  ElemSet S;
  for (Elem e : order)
    if (rng() % 2 == 0 && sys.is_independent(S.with(e))) S = S.with(e);
  return S;
}

}  // namespace

int main() {
  // ---- 1: the worked two-base example ------------------------------------
  {
    auto t0 = Clock::now();
    Instance fix = fixture_two_base_cycle();

    BaselineResult naive = naive_marginal_nols(fix, 100);
    auto w = naive_weights(fix, ElemSet{0, 1});
    bool weights_ok = w[0] == Rational(1) && w[1] == Rational(1) &&
                      w[2] == Rational(2) && w[3] == Rational(2);
    bool cycle_ok = naive.cycle_detected && !naive.terminated &&
                    naive.iterations <= 3 && naive.sequence.size() == 3 &&
                    naive.sequence[0] == ElemSet{0, 1} &&
                    naive.sequence[1] == ElemSet{2, 3} &&
                    naive.sequence[2] == ElemSet{0, 1};

    SearchParams params;
    params.epsilon = Rational(1, 2);
    SearchResult run = run_search(fix, params);
    bool nols_ok = run.state.value == Rational(3) &&
                   (run.state.S == ElemSet{0, 1} || run.state.S == ElemSet{2, 3});
    bool fast = seconds_since(t0) < 1.0;
    report(1, "fixture: naive weights oscillate, rounded search stops",
           weights_ok && cycle_ok && nols_ok && fast,
           fast ? "" : "took over 1s");
  }

  // ---- 2: locality gap on seeded random instances ------------------------
  std::vector<Run> runs;
  {
    auto t0 = Clock::now();
    std::vector<Instance> instances;
    for (int n = 6; n <= 10; ++n)
      for (int s = 0; s < 24; ++s)
        instances.push_back(generate_packing(n, 2, 10, 0.8, 10'000 + 100 * n + s));
    for (int n = 6; n <= 8; ++n)
      for (int s = 0; s < 30; ++s)
        instances.push_back(generate_packing(n, 3, 10, 0.7, 20'000 + 100 * n + s));

    int violations = 0, total = 0;
    std::string first_bad;
    for (const Instance& inst : instances) {
      auto [O, fO] = brute_force_opt(inst.system, inst.objective);
      for (const Rational& eps : {Rational(1, 4), Rational(1, 2)}) {
        SearchParams params;
        params.epsilon = eps;
        SearchResult res = run_search(inst, params);
        ++total;
        Rational bound = Rational(inst.k() + 3, 2) + eps;
        bool ok = res.trace.degenerate ? fO.is_zero()
                                       : fO <= bound * res.state.value;
        if (!ok) {
          ++violations;
          if (first_bad.empty()) first_bad = inst.name + " eps=" + eps.str();
        }
        runs.push_back({inst, params, std::move(res), O, fO});
      }
    }
    bool fast = seconds_since(t0) < 600.0;
    report(2,
           std::to_string(instances.size()) + " instances, " +
               std::to_string(total) + " runs: f(O) <= ((k+3)/2+eps) f(S)",
           violations == 0 && fast,
           violations ? first_bad : (fast ? "" : "took over 10min"));
  }

  // ---- 3: every accepted step gains a full squared-weight unit -----------
  {
    int bad = 0;
    for (const Run& r : runs)
      for (const ImprovementRecord& rec : r.res.trace.improvements)
        if (rec.potential_after < rec.potential_before + 1) ++bad;
    // per-element weight monotonicity is asserted inside run_search itself;
    // any violation would have aborted criterion 2 with InvariantError.
    report(3, "potential gains >= 1 unit on every accepted improvement",
           bad == 0);
  }

  // ---- 4: improvement count bound ----------------------------------------
  {
    int bad = 0;
    for (const Run& r : runs) {
      if (r.res.trace.degenerate) continue;
      Rational d = r.res.trace.delta;
      Rational n(r.inst.n());
      Rational limit = Rational(r.inst.n() - 1) * (n / d) * (n / d);
      if (Rational((long long)r.res.trace.improvements.size()) > limit) ++bad;
    }
    report(4, "improvements <= (n-1)(n/delta)^2 on every run", bad == 0);
  }

  // ---- 5: weight sandwiches ----------------------------------------------
  {
    int bad_sum = 0, bad_repl = 0;
    for (const Run& r : runs) {
      if (r.res.trace.degenerate) continue;
      const Rational alpha = r.res.trace.alpha;
      const SolutionState& st = r.res.state;

      auto mult = solution_weights(st.S, r.res.ordering, alpha, r.inst.objective);
      Rational wsum;
      for (Elem e : st.S.elements()) wsum += Rational(mult[e]) * alpha;
      if (wsum > st.value || wsum < st.value - Rational(st.S.size()) * alpha)
        ++bad_sum;

      for_each_k_replacement(r.inst.system, st.S, r.params,
                             [&](ElemSet A, ElemSet B) {
        auto rw = replacement_weights(st.S, A, B, r.res.ordering, alpha,
                                      r.inst.objective);
        Rational sum;
        for (auto& [a, m] : rw) sum += Rational(m) * alpha;
        Rational marg = r.inst.objective.evaluate(st.S | A) - st.value;
        if (sum < marg - Rational(A.size()) * alpha) ++bad_repl;
        return true;
      });
    }
    report(5, "solution and replacement weight sums stay in their bands",
           bad_sum == 0 && bad_repl == 0);
  }

  // ---- 6: exchange axioms on random replacement pairs --------------------
  {
    auto t0 = Clock::now();
    std::mt19937_64 rng(4242);
    int checked = 0, bad = 0;
    std::string first_bad;
    while (checked < 600) {
      Instance inst = generate_packing(6 + (int)(rng() % 5), 2 + (int)(rng() % 2),
                                       10, 0.7, 30'000 + checked);
      const auto* pack = inst.system.packing();
      for (int pair = 0; pair < 4 && checked < 600; ++pair) {
        ElemSet A = random_independent(inst.system, rng);
        ElemSet B = random_independent(inst.system, rng);
        if ((A - B).size() > 8) continue;
        ExchangeWitness Y = build_witness(*pack, A, B);
        WitnessReport rep = verify_witness(inst.system, A, B, Y, inst.k());
        ++checked;
        if (!rep.pass) {
          ++bad;
          if (first_bad.empty())
            first_bad = inst.name + " " + rep.violated + " A=" + A.str() +
                        " B=" + B.str();
        }
      }
    }
    bool fast = seconds_since(t0) < 120.0;
    report(6, std::to_string(checked) + " random witnesses satisfy K1-K3",
           bad == 0 && fast, bad ? first_bad : (fast ? "" : "took over 2min"));
  }

  // ---- 7: lemma checks and the full audit chain --------------------------
  {
    std::mt19937_64 rng(777);
    int l1_bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      Instance r = generate_packing(8, 3, 10, 0.8, 40'000 + trial);
      ElemSet T(rng() % 256), S(rng() % 256);
      std::vector<ElemSet> blocks;
      for (Elem e : (T - S).elements()) blocks.push_back(ElemSet{e});
      // merge random block pairs to vary the partition shape
      while (blocks.size() > 1 && rng() % 3 != 0) {
        size_t at = rng() % (blocks.size() - 1);
        blocks[at] = blocks[at] | blocks.back();
        blocks.pop_back();
      }
      if (!check_lemma1(r.objective, S, T, blocks)) ++l1_bad;
    }

    int l2_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto draw = [&] {
        return Rational((long long)(rng() % 25), 1 + (long long)(rng() % 4));
      };
      std::vector<Rational> others(rng() % 4);
      Rational w_x = draw();
      for (auto& z : others) {
        z = draw();
        if (z > w_x) w_x = z;
      }
      if (!check_lemma2(w_x, draw(), others)) ++l2_bad;
    }

    int audit_bad = 0;
    std::string first_bad;
    for (const Run& r : runs) {
      AuditReport rep = audit_run(r.inst, r.res, r.params);
      if (!rep.pass()) {
        ++audit_bad;
        if (first_bad.empty()) {
          for (const auto& c : rep.checks)
            if (!c.pass) first_bad = r.inst.name + " " + c.name;
        }
      }
    }
    report(7, "lemma 1/2 spot checks and full audits on every run",
           l1_bad == 0 && l2_bad == 0 && audit_bad == 0,
           audit_bad ? first_bad : "");
  }

  // ---- 8: linear objectives ----------------------------------------------
  {
    int ratio_bad = 0, seq_bad = 0, total = 0;
    for (int n = 6; n <= 10; ++n) {
      for (int s = 0; s < 24; ++s) {
        Instance inst =
            generate_packing(n, 2, 10, 0.8, 50'000 + 100 * n + s, true);
        ++total;
        BaselineResult b = linear_nols(inst, Rational(1, 4));
        auto [O, fO] = brute_force_opt(inst.system, inst.objective);
        Rational bound = Rational(inst.k() + 1, 2) + Rational(1, 4);
        if (b.value.is_zero() ? !fO.is_zero() : fO > bound * b.value)
          ++ratio_bad;
      }
    }
    for (int s = 0; s < 30; ++s) {
      Instance inst = generate_packing(7, 2, 9, 0.8, 60'000 + s, true);
      inst.objective =
          Objective(LinearObjective(std::vector<Rational>(7, Rational(1))));
      BaselineResult nl = linear_nols(inst, Rational(1, 2));
      BaselineResult ob =
          oblivious_ls(inst, Rational(1, 2), {}, nl.sequence.front());
      if (nl.sequence != ob.sequence) ++seq_bad;
    }
    report(8,
           std::to_string(total) +
               " linear runs meet (k+1)/2+eps; unit weights match oblivious",
           ratio_bad == 0 && seq_bad == 0);
  }

  // ---- 9: determinism and the oracle-call soft ceiling -------------------
  {
    CampaignSpec spec;
    spec.n_min = 6;
    spec.n_max = 8;
    spec.seed = 77;
    spec.reps = 2;
    spec.epsilons = {Rational(1, 4)};
    spec.algorithms = {"nols", "greedy", "naive"};
    spec.with_audit = true;
    auto run_once = [&] {
      return run_campaign(spec, generate_campaign_instances(spec)).csv;
    };
    std::string a = run_once(), b = run_once();

    int over_ceiling = 0;
    for (const Run& r : runs)
      if (!oracle_count_within_ceiling(
              r.res.trace.oracle_calls,
              (long long)r.res.trace.improvements.size(), r.inst.n(),
              r.inst.k()))
        ++over_ceiling;
    if (over_ceiling > 0)
      std::printf("warning: %d run(s) above the oracle-call soft ceiling\n",
                  over_ceiling);
    report(9, "identical seeds give byte-identical campaign CSV", a == b,
           over_ceiling ? "soft ceiling warnings logged" : "");
  }

  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
