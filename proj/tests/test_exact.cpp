#include <random>

#include "doctest.h"
#include "kx/baselines.hpp"
#include "kx/exact.hpp"
#include "kx/instance.hpp"

using namespace kx;

TEST_CASE("brute force optimum") {
  Instance inst = fixture_two_base_cycle();
  auto [O, fO] = brute_force_opt(inst.system, inst.objective);
  CHECK(fO == Rational(3));
  CHECK(O == ElemSet{0, 1});  // both bases tie; lexicographically first wins

  SUBCASE("empty instance") {
    System empty{ExplicitSystem(1, 0, {})};
    Objective obj(LinearObjective(std::vector<Rational>{}));
    auto [o, v] = brute_force_opt(empty, obj);
    CHECK(o == ElemSet{});
    CHECK(v == Rational(0));
  }
  SUBCASE("single basis") {
    Instance basis = parse_instance(
        "kx 1\nname s\nsystem explicit k=2\nelements a b\nbase a b\n"
        "objective linear\nweight a = 1\nweight b = 2\nend\n");
    auto [o, v] = brute_force_opt(basis.system, basis.objective);
    CHECK(o == ElemSet{0, 1});
    CHECK(v == Rational(3));
  }
  SUBCASE("cap refusal") {
    Instance big = generate_packing(22, 2, 44, 1.0, 5);
    CHECK_THROWS_AS(brute_force_opt(big.system, big.objective, 20), CapError);
  }
  SUBCASE("agrees with unpruned enumeration") {
    for (int trial = 0; trial < 20; ++trial) {
      Instance r = generate_packing(8, 2, 10, 0.8, 1200 + trial);
      auto [o, v] = brute_force_opt(r.system, r.objective);
      Rational best(0);
      for (std::uint64_t m = 0; m < (1u << 8); ++m) {
        ElemSet S(m);
        if (!r.system.is_independent(S)) continue;
        Rational f = r.objective.evaluate(S);
        if (f > best) best = f;
      }
      CHECK(v == best);
    }
  }
}

TEST_CASE("partition witness construction") {
  SUBCASE("O = S gives singleton classes via the extension") {
    SetPackingSystem sys(2, {0b0011, 0b1100});
    ElemSet S{0, 1};
    std::vector<long long> mult{5, 2};
    PartitionWitness pw = build_partition_witness(sys, S, S, mult);
    CHECK(pw.unassigned.empty());
    CHECK(pw.P.at(0) == ElemSet{0});
    CHECK(pw.P.at(1) == ElemSet{1});
    CHECK(pw.N.at(0) == ElemSet{0});
    CHECK(pw.N.at(1) == ElemSet{1});
  }
  SUBCASE("disjoint universes leave everything unassigned") {
    // S covers items {4..7}, O covers items {0..3}: no conflicts at all
    SetPackingSystem sys(2, {0b00000011, 0b00001100, 0b00110000, 0b11000000});
    std::vector<long long> mult{0, 0, 3, 3};
    PartitionWitness pw =
        build_partition_witness(sys, ElemSet{2, 3}, ElemSet{0, 1}, mult);
    CHECK(pw.P.empty());
    CHECK(pw.unassigned == std::vector<Elem>{0, 1});
  }
  SUBCASE("heaviest neighbor wins, ties to the smallest identifier") {
    // optimum element 0 conflicts with both solution elements 1 and 2
    SetPackingSystem sys(2, {0b011, 0b001, 0b010});
    PartitionWitness pw =
        build_partition_witness(sys, ElemSet{1, 2}, ElemSet{0}, {0, 4, 4});
    CHECK(pw.P.at(1) == ElemSet{0});  // tie between 1 and 2 goes to 1
    CHECK(pw.N.at(1) == ElemSet{1, 2});
  }
  SUBCASE("class sizes respect the exchange axioms on random instances") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      Instance inst = generate_packing(8, 2, 9, 0.7, 1500 + trial);
      SearchParams params;
      params.epsilon = Rational(1, 4);
      SearchResult res = run_search(inst, params);
      auto [O, fO] = brute_force_opt(inst.system, inst.objective);
      if (res.trace.degenerate) continue;
      PartitionWitness pw = build_partition_witness(*inst.system.packing(),
                                                    res.state.S, O, res.state.mult);
      int covered = static_cast<int>(pw.unassigned.size());
      for (auto& [x, px] : pw.P) {
        CHECK(px.size() <= 2);
        CHECK(pw.N.at(x).size() <= 3);
        covered += px.size();
        for (Elem e : px.elements()) {
          // x is the heaviest conflicting element for each of its charges
          CHECK(pw.Y.of(e).contains(x));
          for (Elem z : pw.Y.of(e).elements())
            CHECK(res.state.mult[z] <= res.state.mult[x]);
        }
      }
      CHECK(covered == O.size());
    }
  }
}

TEST_CASE("lemma 1: partition marginals dominate the union marginal") {
  Instance inst = fixture_two_base_cycle();
  SUBCASE("singleton blocks reduce to submodularity") {
    CHECK(check_lemma1(inst.objective, ElemSet{0}, ElemSet{0, 2, 3},
                       {ElemSet{2}, ElemSet{3}}));
  }
  SUBCASE("T inside S gives an empty partition") {
    CHECK(check_lemma1(inst.objective, ElemSet{0, 1}, ElemSet{1}, {}));
  }
  SUBCASE("malformed partitions are rejected") {
    CHECK_THROWS_AS(check_lemma1(inst.objective, ElemSet{0}, ElemSet{2, 3},
                                 {ElemSet{2}}),
                    ContractError);
    CHECK_THROWS_AS(check_lemma1(inst.objective, ElemSet{0}, ElemSet{2},
                                 {ElemSet{2}, ElemSet{2}}),
                    ContractError);
  }
  SUBCASE("random coverage instances and random partitions") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
      Instance r = generate_packing(8, 3, 10, 0.8, 2000 + trial);
      ElemSet T(rng() % 256), S(rng() % 256);
      std::vector<ElemSet> blocks;
      for (Elem e : (T - S).elements()) {
        if (size_t at = blocks.empty() ? 0 : rng() % blocks.size();
            !blocks.empty() && rng() % 2 == 0)
          blocks[at] = blocks[at].with(e);
        else
          blocks.push_back(ElemSet{e});
      }
      CHECK(check_lemma1(r.objective, S, T, blocks));
    }
  }
}

TEST_CASE("lemma 2: squared-weight inequality") {
  CHECK(check_lemma2(Rational(0), Rational(0), {}));
  SUBCASE("equality at the b = c parametrization") {
    // w_x = w_e = 2 with one neighborhood weight of 2: both sides vanish
    Rational lhs = Rational(4) - Rational(4);
    Rational rhs = Rational(2) * (Rational(4) - Rational(4));
    CHECK(lhs == rhs);
    CHECK(check_lemma2(Rational(2), Rational(2), {Rational(2)}));
  }
  SUBCASE("precondition violations are contract errors") {
    CHECK_THROWS_AS(check_lemma2(Rational(1), Rational(1), {Rational(2)}),
                    ContractError);
    CHECK_THROWS_AS(check_lemma2(Rational(-1), Rational(1), {}), ContractError);
  }
  SUBCASE("random precondition-respecting tuples all pass") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
      auto draw = [&]() {
        return Rational(static_cast<long long>(rng() % 20),
                        1 + static_cast<long long>(rng() % 5));
      };
      std::vector<Rational> others(rng() % 4);
      Rational w_x = draw();
      for (auto& z : others) {
        z = draw();
        if (z > w_x) w_x = z;  // keep w_x dominant
      }
      CHECK(check_lemma2(w_x, draw(), others));
    }
  }
}

TEST_CASE("full audit on the two-base fixture") {
  Instance inst = fixture_two_base_cycle();
  SearchParams params;
  params.epsilon = Rational(1, 2);
  SearchResult res = run_search(inst, params);
  AuditReport rep = audit_run(inst, res, params);
  CHECK(rep.pass());
  CHECK(rep.ratio == Rational(1));
  CHECK(rep.bound == Rational(3));
  CHECK(rep.opt_value == Rational(3));
}

TEST_CASE("audit passes on random packing runs, k = 2 and k = 3") {
  for (int k : {2, 3}) {
    const int n = k == 2 ? 8 : 7;
    for (int trial = 0; trial < 12; ++trial) {
      Instance inst = generate_packing(n, k, 10, 0.8, 3000 + 100 * k + trial);
      SearchParams params;
      params.epsilon = Rational(1, 4);
      SearchResult res = run_search(inst, params);
      AuditReport rep = audit_run(inst, res, params);
      CHECK(rep.pass());
      CHECK(rep.ratio <= rep.bound);
    }
  }
}

TEST_CASE("audit covers the S = O case") {
  Instance basis = parse_instance(
      "kx 1\nname s\nsystem set_packing k=2\nelement a: u v\nelement b: w z\n"
      "objective coverage\nuniverse u v w z\ncover a: u v\ncover b: w z\nend\n");
  SearchParams params;
  params.epsilon = Rational(1, 4);
  SearchResult res = run_search(basis, params);
  AuditReport rep = audit_run(basis, res, params);
  CHECK(rep.pass());
  CHECK(rep.ratio == Rational(1));
}
