#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kx/kx.hpp"

namespace {

constexpr int EXIT_USAGE = 1;
constexpr int EXIT_PARSE = 2;
constexpr int EXIT_CAP = 3;
constexpr int EXIT_INVARIANT = 4;

kx::Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kx::ParseError(0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return kx::parse_instance(buf.str());
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw kx::Error("cannot write " + path);
  out << content;
}

std::string trace_log(const kx::SearchTrace& tr) {
  std::ostringstream os;
  for (const auto& r : tr.improvements)
    os << "step " << r.step << " |A|=" << r.A.size() << " |B|=" << r.B.size()
       << " dpot=" << (r.potential_after - r.potential_before)
       << " f " << r.value_before.str() << " -> " << r.value_after.str() << "\n";
  return os.str();
}

std::string show_set(const kx::Instance& inst, kx::ElemSet s) {
  std::string out = "{";
  bool first = true;
  for (kx::Elem e : s.elements()) {
    if (!first) out += ",";
    out += inst.elem_names[e];
    first = false;
  }
  return out + "}";
}

int cmd_run(const kx::Instance& inst, const std::string& algo,
            const kx::Rational& eps, const kx::SearchParams& params,
            long long naive_iters, const std::string& out_path) {
  std::ostringstream os;
  if (algo == "nols") {
    kx::SearchResult r = kx::run_search(inst, params);
    os << "algorithm nols\n"
       << "solution " << show_set(inst, r.state.S) << "\n"
       << "value " << r.state.value.str() << "\n"
       << "improvements " << r.trace.improvements.size() << "\n"
       << "oracle_calls " << r.trace.oracle_calls << "\n"
       << "alpha " << r.trace.alpha.str() << " delta " << r.trace.delta.str()
       << "\n"
       << trace_log(r.trace);
    if (r.trace.degenerate) os << "degenerate: objective is identically zero\n";
  } else {
    kx::BaselineResult r;
    if (algo == "greedy")
      r = kx::greedy(inst);
    else if (algo == "oblivious")
      r = kx::oblivious_ls(inst, eps, params);
    else if (algo == "linear-nols")
      r = kx::linear_nols(inst, eps, params);
    else if (algo == "naive")
      r = kx::naive_marginal_nols(inst, naive_iters, params);
    else
      throw kx::ContractError("unknown algorithm: " + algo);
    os << "algorithm " << algo << "\n"
       << "solution " << show_set(inst, r.solution) << "\n"
       << "value " << r.value.str() << "\n"
       << "iterations " << r.iterations << "\n"
       << "terminated " << (r.terminated ? "yes" : "no") << "\n";
    if (r.cycle_detected) os << "cycle detected\n";
  }
  write_out(out_path, os.str());
  return 0;
}

int cmd_audit(const kx::Instance& inst, const kx::SearchParams& params,
              int brute_cap, const std::string& out_path) {
  kx::SearchResult r = kx::run_search(inst, params);
  kx::AuditReport rep = kx::audit_run(inst, r, params, brute_cap);
  std::ostringstream os;
  os << "check,result,detail\n";
  for (const auto& c : rep.checks)
    os << c.name << "," << (c.pass ? "pass" : "FAIL") << "," << c.detail << "\n";
  os << "ratio," << rep.ratio.decimal(6) << ",f(O)=" << rep.opt_value.str()
     << " f(S)=" << rep.sol_value.str() << "\n";
  os << "bound," << rep.bound.decimal(6) << ",(k+3)/2+eps\n";
  write_out(out_path, os.str());
  std::cerr << (rep.pass() ? "audit passed" : "AUDIT FAILED") << ", ratio "
            << rep.ratio.decimal(6) << " <= bound " << rep.bound.decimal(6)
            << "\n";
  return rep.pass() ? 0 : EXIT_INVARIANT;
}

int cmd_check(const kx::Instance& inst, int cap) {
  kx::CertReport rep =
      kx::certify_monotone_submodular(inst.objective, inst.n(), cap);
  if (rep.pass) {
    std::cout << "objective certified monotone submodular (n=" << inst.n()
              << ")\n";
    return 0;
  }
  std::cout << "certification FAILED: " << rep.violation->what << " violated at S="
            << show_set(inst, rep.violation->S) << " T="
            << show_set(inst, rep.violation->T) << " x="
            << inst.elem_names[rep.violation->x] << "\n";
  return EXIT_INVARIANT;
}

int cmd_demo_cycle(const kx::Instance& inst, const kx::SearchParams& params) {
  std::cout << "instance " << inst.name << " (n=" << inst.n() << ", k=" << inst.k()
            << ")\n\n";
  kx::ElemSet start = kx::greedy(inst).solution;
  std::cout << "naive marginal weights at S=" << show_set(inst, start) << ":\n";
  auto w = kx::naive_weights(inst, start);
  for (kx::Elem e = 0; e < inst.n(); ++e)
    std::cout << "  w(" << inst.elem_names[e] << ") = " << w[e].str() << "\n";

  kx::BaselineResult nv = kx::naive_marginal_nols(inst, 100, params, start);
  std::cout << "\nnaive squared-marginal search:\n";
  for (kx::ElemSet s : nv.sequence) std::cout << "  S = " << show_set(inst, s) << "\n";
  if (nv.cycle_detected)
    std::cout << "  cycle detected after " << nv.iterations << " iterations\n";
  else
    std::cout << "  " << (nv.terminated ? "fixpoint" : "iteration cap") << " after "
              << nv.iterations << " iterations\n";

  kx::SearchResult r = kx::run_search(inst, params);
  std::cout << "\nnon-oblivious search (prefix weights + ordering updates):\n"
            << "  terminated at S = " << show_set(inst, r.state.S) << " with f = "
            << r.state.value.str() << " after " << r.trace.improvements.size()
            << " improvements\n";
  return nv.cycle_detected ? 0 : EXIT_INVARIANT;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-oblivious local search for monotone submodular maximization "
               "over k-exchange systems"};
  app.require_subcommand(1);

  std::string instance_path, out_path, algo = "nols";
  std::string eps_str = "0.5";
  long long cap_candidates = 1'000'000'000;
  int brute_cap = 20, cert_cap = 15;
  bool literal = false;
  long long naive_iters = 100;

  auto add_common = [&](CLI::App* c, bool need_instance) {
    auto* opt = c->add_option("--instance", instance_path, "instance file (.kx)");
    if (need_instance) opt->required();
    c->add_option("--epsilon", eps_str, "approximation parameter in (0,1)");
    c->add_option("--cap-candidates", cap_candidates,
                  "refuse k-replacement scans above this many candidate pairs");
    c->add_flag("--literal-pseudocode", literal,
                "compare candidate potentials against w^2(S) instead of w^2(B)");
    c->add_option("--out", out_path, "output file (default stdout)");
  };

  auto* run = app.add_subcommand("run", "run one algorithm on one instance");
  add_common(run, true);
  run->add_option("--algorithm", algo, "nols|oblivious|greedy|linear-nols|naive");
  run->add_option("--naive-max-iters", naive_iters, "iteration cap for naive");

  auto* audit = app.add_subcommand(
      "audit", "run the search, then machine-check the analysis on the result");
  add_common(audit, true);
  audit->add_option("--brute-cap", brute_cap, "max n for the exact solver");

  auto* check = app.add_subcommand("check", "certify the objective oracle");
  check->add_option("--instance", instance_path, "instance file (.kx)")->required();
  check->add_option("--cert-cap", cert_cap, "max n for certification");

  auto* demo = app.add_subcommand(
      "demo-cycle", "show the naive variant cycling while the search terminates");
  add_common(demo, false);

  kx::CampaignSpec spec;
  std::vector<std::string> eps_list{"0.25"};
  auto* compare = app.add_subcommand(
      "compare", "campaign over generated (or one given) instance(s), CSV out");
  compare->add_option("--instance", instance_path, "run on this instance only");
  compare->add_option("--n-min", spec.n_min, "smallest generated n");
  compare->add_option("--n-max", spec.n_max, "largest generated n");
  compare->add_option("--k", spec.k, "exchange parameter for generation");
  compare->add_option("--universe", spec.universe, "item universe size");
  compare->add_option("--density", spec.density, "item pool density in (0,1]");
  compare->add_option("--seed", spec.seed, "base RNG seed");
  compare->add_option("--reps", spec.reps, "instances per n");
  compare->add_flag("--linear", spec.linear_objective,
                    "generate linear objectives instead of coverage");
  compare->add_option("--epsilon", eps_list, "epsilon values (repeatable)");
  compare->add_option("--algorithm", spec.algorithms,
                      "algorithms (repeatable): nols|oblivious|greedy|linear-nols|naive");
  compare->add_option("--brute-cap", spec.brute_cap, "max n for the exact solver");
  compare->add_flag("--audit", spec.with_audit, "audit every nols run");
  compare->add_flag("--times", spec.include_times, "append a wall_ms column");
  compare->add_option("--cap-candidates", spec.candidate_cap, "candidate pair cap");
  compare->add_flag("--literal-pseudocode", spec.literal_rule,
                    "literal-pseudocode acceptance rule");
  compare->add_option("--out", out_path, "output CSV file (default stdout)");

  int gen_n = 8, gen_k = 2, gen_u = 10;
  double gen_density = 0.8;
  std::uint64_t gen_seed = 1;
  bool gen_linear = false;
  auto* gen = app.add_subcommand("gen", "generate a random packing instance");
  gen->add_option("--n", gen_n, "ground set size")->required();
  gen->add_option("--k", gen_k, "maximum set cardinality")->required();
  gen->add_option("--universe", gen_u, "item universe size");
  gen->add_option("--density", gen_density, "item pool density in (0,1]");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_flag("--linear", gen_linear, "linear objective with random weights");
  gen->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : EXIT_USAGE;
  }

  try {
    kx::SearchParams params;
    params.candidate_cap = cap_candidates;
    params.literal_rule = literal;
    params.epsilon = kx::Rational::parse(eps_str);

    if (gen->parsed()) {
      kx::Instance inst = kx::generate_packing(gen_n, gen_k, gen_u, gen_density,
                                               gen_seed, gen_linear);
      write_out(out_path, kx::serialize_instance(inst));
      return 0;
    }
    if (compare->parsed()) {
      spec.epsilons.clear();
      for (const auto& s : eps_list) spec.epsilons.push_back(kx::Rational::parse(s));
      std::vector<kx::Instance> instances =
          instance_path.empty() ? kx::generate_campaign_instances(spec)
                                : std::vector<kx::Instance>{load_instance(instance_path)};
      kx::CampaignResult res = kx::run_campaign(spec, instances);
      write_out(out_path, res.csv);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }

    kx::Instance inst = instance_path.empty() ? kx::fixture_two_base_cycle()
                                              : load_instance(instance_path);
    if (run->parsed())
      return cmd_run(inst, algo, params.epsilon, params, naive_iters, out_path);
    if (audit->parsed()) return cmd_audit(inst, params, brute_cap, out_path);
    if (check->parsed()) return cmd_check(inst, cert_cap);
    if (demo->parsed()) return cmd_demo_cycle(inst, params);
    return EXIT_USAGE;
  } catch (const kx::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return EXIT_PARSE;
  } catch (const kx::CapError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return EXIT_CAP;
  } catch (const kx::InvariantError& e) {
    std::cerr << "internal invariant failure: " << e.what() << "\n";
    return EXIT_INVARIANT;
  } catch (const kx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_USAGE;
  }
}
