#pragma once

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "kx/baselines.hpp"
#include "kx/core.hpp"
#include "kx/exact.hpp"
#include "kx/instance.hpp"
#include "kx/search.hpp"

namespace kx {

struct CampaignSpec {
  // generator grid
  int n_min = 6, n_max = 8;
  int k = 2;
  int universe = 10;
  double density = 0.8;
  std::uint64_t seed = 1;
  int reps = 1;
  bool linear_objective = false;

  std::vector<Rational> epsilons{Rational(1, 4)};
  std::vector<std::string> algorithms{"nols"};

  int brute_cap = 20;
  bool with_opt = true;
  bool with_audit = false;
  long long candidate_cap = 1'000'000'000;
  bool literal_rule = false;
  long long naive_max_iters = 100;
  bool include_times = false;  // off by default so CSV is seed-deterministic
};

struct CampaignResult {
  std::string csv;
  std::vector<std::string> warnings;
};

inline std::vector<Instance> generate_campaign_instances(const CampaignSpec& spec) {
  std::vector<Instance> out;
  std::uint64_t s = spec.seed;
  for (int n = spec.n_min; n <= spec.n_max; ++n)
    for (int r = 0; r < spec.reps; ++r)
      out.push_back(generate_packing(n, spec.k, spec.universe, spec.density, s++,
                                     spec.linear_objective));
  return out;
}

// Documented constant for the oracle-count soft ceiling
// calls <= ORACLE_CEILING_C * (I + 1) * k^2 * n^(k^2 + 1).
inline constexpr long long ORACLE_CEILING_C = 4;

inline bool oracle_count_within_ceiling(long long calls, long long improvements,
                                        int n, int k) {
  __int128 ceil = ORACLE_CEILING_C * (__int128)(improvements + 1) * k * k;
  for (int i = 0; i < k * k + 1; ++i) {
    ceil *= n;
    if (ceil > (__int128)4e18) return true;
  }
  return calls <= static_cast<long long>(ceil);
}

// Runs every (instance, epsilon, algorithm) cell and emits one CSV row
// per cell, ordered by cell key.  Per-cell failures become rows with an
// error status; the campaign keeps going.
inline CampaignResult run_campaign(const CampaignSpec& spec,
                                   const std::vector<Instance>& instances) {
  CampaignResult out;
  std::ostringstream csv;
  csv << "instance,n,k,epsilon,algorithm,f_S,f_opt,ratio,bound,improvements,"
         "oracle_calls,audit,status";
  if (spec.include_times) csv << ",wall_ms";
  csv << "\n";

  SearchParams params;
  params.candidate_cap = spec.candidate_cap;
  params.literal_rule = spec.literal_rule;

  for (const Instance& inst : instances) {
    bool have_opt = false;
    Rational f_opt;
    if (spec.with_opt && inst.n() <= spec.brute_cap) {
      auto [o, v] = brute_force_opt(inst.system, inst.objective, spec.brute_cap);
      f_opt = v;
      have_opt = true;
    }
    for (const Rational& eps : spec.epsilons) {
      params.epsilon = eps;
      for (const std::string& algo : spec.algorithms) {
        std::string status = "ok", audit_col = "-";
        Rational f_S;
        long long improvements = 0;
        const long long calls0 = inst.objective.calls();
        auto t0 = std::chrono::steady_clock::now();
        try {
          if (algo == "nols") {
            SearchResult r = run_search(inst, params);
            f_S = r.state.value;
            improvements = static_cast<long long>(r.trace.improvements.size());
            if (spec.with_audit && have_opt) {
              AuditReport rep = audit_run(inst, r, params, spec.brute_cap);
              audit_col = rep.pass() ? "pass" : "FAIL";
            }
          } else if (algo == "oblivious") {
            BaselineResult r = oblivious_ls(inst, eps, params);
            f_S = r.value;
            improvements = r.iterations;
          } else if (algo == "greedy") {
            BaselineResult r = greedy(inst);
            f_S = r.value;
            improvements = r.iterations;
          } else if (algo == "linear-nols") {
            BaselineResult r = linear_nols(inst, eps, params);
            f_S = r.value;
            improvements = r.iterations;
          } else if (algo == "naive") {
            BaselineResult r = naive_marginal_nols(inst, spec.naive_max_iters, params);
            f_S = r.value;
            improvements = r.iterations;
            if (r.cycle_detected)
              status = "cycle";
            else if (!r.terminated)
              status = "cap";
          } else {
            throw ContractError("unknown algorithm: " + algo);
          }
        } catch (const CapError& e) {
          status = std::string("cap-refused:") + e.what();
        } catch (const Error& e) {
          status = std::string("error:") + e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        const long long calls = inst.objective.calls() - calls0;

        if (algo == "nols" && status == "ok" &&
            !oracle_count_within_ceiling(calls, improvements, inst.n(), inst.k()))
          out.warnings.push_back("oracle calls above soft ceiling on " + inst.name);

        Rational bound = Rational(inst.k() + 3, 2) + eps;
        std::string ratio = "-";
        if (have_opt && status == "ok")
          ratio = (f_S.is_zero() ? Rational(1) : f_opt / f_S).decimal(6);
        csv << inst.name << "," << inst.n() << "," << inst.k() << ","
            << eps.str() << "," << algo << "," << f_S.str() << ","
            << (have_opt ? f_opt.str() : "-") << "," << ratio << ","
            << bound.decimal(6) << "," << improvements << "," << calls << ","
            << audit_col << "," << status;
        if (spec.include_times)
          csv << ","
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                     .count();
        csv << "\n";
      }
    }
  }
  out.csv = csv.str();
  return out;
}

}  // namespace kx
