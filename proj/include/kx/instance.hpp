#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kx/core.hpp"
#include "kx/objective.hpp"
#include "kx/systems.hpp"

namespace kx {

// A problem instance: independence system + value oracle over a shared
// ground set, plus the naming needed to round-trip the text format.
struct Instance {
  std::string name = "unnamed";
  std::vector<std::string> elem_names;
  std::vector<std::string> pack_item_names;   // set_packing systems only
  std::vector<std::string> cover_item_names;  // coverage objectives only
  System system;
  Objective objective;

  int n() const { return system.ground_size(); }
  int k() const { return system.k(); }

  Elem elem_id(const std::string& nm) const {
    for (size_t i = 0; i < elem_names.size(); ++i)
      if (elem_names[i] == nm) return static_cast<Elem>(i);
    throw DomainError("unknown element name: " + nm);
  }
};

namespace detail {

struct Line {
  int no;
  std::vector<std::string> tok;
};

inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::istringstream ls(raw);
    Line line{no, {}};
    std::string t;
    while (ls >> t) line.tok.push_back(t);
    if (!line.tok.empty()) out.push_back(std::move(line));
  }
  return out;
}

// Splits "name:" into "name" and separator, tolerating "name :" too.
inline std::string strip_colon(std::vector<std::string>& tok, size_t at, int ln) {
  if (at >= tok.size()) throw ParseError(ln, "missing name before ':'");
  std::string nm = tok[at];
  if (!nm.empty() && nm.back() == ':') {
    nm.pop_back();
    return nm;
  }
  if (at + 1 < tok.size() && tok[at + 1] == ":") {
    tok.erase(tok.begin() + at + 1);
    return nm;
  }
  throw ParseError(ln, "expected ':' after '" + nm + "'");
}

inline int parse_k(const std::string& t, int ln) {
  if (t.rfind("k=", 0) != 0) throw ParseError(ln, "expected k=<int>, got " + t);
  try {
    return std::stoi(t.substr(2));
  } catch (const std::exception&) {
    throw ParseError(ln, "bad k value: " + t);
  }
}

inline int lookup(const std::vector<std::string>& names, const std::string& nm,
                  const char* what, int ln) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == nm) return static_cast<int>(i);
  throw ParseError(ln, std::string("unknown ") + what + ": " + nm);
}

}  // namespace detail

// Parses the documented ".kx" text format (see README for the grammar).
inline Instance parse_instance(const std::string& text) {
  using detail::Line;
  auto lines = detail::tokenize(text);
  size_t i = 0;
  auto peek = [&]() -> Line* { return i < lines.size() ? &lines[i] : nullptr; };
  auto need = [&](const char* what) -> Line& {
    if (i >= lines.size()) throw ParseError(lines.empty() ? 1 : lines.back().no,
                                            std::string("unexpected end, expected ") + what);
    return lines[i];
  };

  Instance inst;
  {
    Line& hdr = need("'kx 1' header");
    if (hdr.tok.size() != 2 || hdr.tok[0] != "kx" || hdr.tok[1] != "1")
      throw ParseError(hdr.no, "expected version header 'kx 1'");
    ++i;
  }
  while (peek() && (peek()->tok[0] == "name" || peek()->tok[0] == "seed")) {
    Line& l = *peek();
    if (l.tok.size() != 2) throw ParseError(l.no, l.tok[0] + " takes one value");
    if (l.tok[0] == "name") inst.name = l.tok[1];
    ++i;  // seed is carried as metadata only; accepted and ignored here
  }

  Line& sys = need("system section");
  if (sys.tok[0] != "system" || sys.tok.size() != 3)
    throw ParseError(sys.no, "expected 'system <kind> k=<int>'");
  const std::string kind = sys.tok[1];
  const int k = detail::parse_k(sys.tok[2], sys.no);
  ++i;

  if (kind == "set_packing") {
    std::vector<std::uint64_t> sets;
    while (peek() && peek()->tok[0] == "element") {
      Line l = *peek();
      std::string nm = detail::strip_colon(l.tok, 1, l.no);
      if (l.tok.size() < 3) throw ParseError(l.no, "element '" + nm + "' has no items");
      std::uint64_t mask = 0;
      for (size_t t = 2; t < l.tok.size(); ++t) {
        const std::string& it = l.tok[t];
        int id = -1;
        for (size_t j = 0; j < inst.pack_item_names.size(); ++j)
          if (inst.pack_item_names[j] == it) id = static_cast<int>(j);
        if (id < 0) {
          if (inst.pack_item_names.size() >= 64)
            throw ParseError(l.no, "packing item universe exceeds 64 items");
          id = static_cast<int>(inst.pack_item_names.size());
          inst.pack_item_names.push_back(it);
        }
        mask |= std::uint64_t{1} << id;
      }
      inst.elem_names.push_back(nm);
      sets.push_back(mask);
      ++i;
    }
    if (sets.empty()) throw ParseError(sys.no, "set_packing system has no elements");
    if (sets.size() > 64) throw ParseError(sys.no, "ground set exceeds 64 elements");
    try {
      inst.system = System(SetPackingSystem(k, std::move(sets)));
    } catch (const DomainError& e) {
      throw ParseError(sys.no, e.what());
    }
  } else if (kind == "explicit") {
    Line& el = need("elements line");
    if (el.tok[0] != "elements" || el.tok.size() < 2)
      throw ParseError(el.no, "explicit system needs 'elements <name>...'");
    for (size_t t = 1; t < el.tok.size(); ++t) inst.elem_names.push_back(el.tok[t]);
    if (inst.elem_names.size() > 64)
      throw ParseError(el.no, "ground set exceeds 64 elements");
    ++i;
    std::vector<ElemSet> bases;
    while (peek() && peek()->tok[0] == "base") {
      Line& l = *peek();
      ElemSet b;
      for (size_t t = 1; t < l.tok.size(); ++t)
        b = b.with(detail::lookup(inst.elem_names, l.tok[t], "element", l.no));
      bases.push_back(b);
      ++i;
    }
    if (bases.empty()) throw ParseError(el.no, "explicit system has no base lines");
    inst.system = System(
        ExplicitSystem(k, static_cast<int>(inst.elem_names.size()), std::move(bases)));
  } else {
    throw ParseError(sys.no, "unknown system kind: " + kind);
  }

  Line& ob = need("objective section");
  if (ob.tok[0] != "objective" || ob.tok.size() != 2)
    throw ParseError(ob.no, "expected 'objective <kind>'");
  const std::string okind = ob.tok[1];
  ++i;
  const int n = static_cast<int>(inst.elem_names.size());

  if (okind == "coverage") {
    Line& ul = need("universe line");
    if (ul.tok[0] != "universe" || ul.tok.size() < 2)
      throw ParseError(ul.no, "coverage objective needs 'universe <item>...'");
    std::vector<Rational> iw;
    for (size_t t = 1; t < ul.tok.size(); ++t) {
      std::string it = ul.tok[t];
      Rational w(1);
      if (auto eq = it.find('='); eq != std::string::npos) {
        try {
          w = Rational::parse(it.substr(eq + 1));
        } catch (const Error& e) {
          throw ParseError(ul.no, e.what());
        }
        it.resize(eq);
      }
      inst.cover_item_names.push_back(it);
      iw.push_back(w);
    }
    if (inst.cover_item_names.size() > 64)
      throw ParseError(ul.no, "coverage universe exceeds 64 items");
    ++i;
    std::vector<std::uint64_t> covers(n, 0);
    std::vector<bool> seen(n, false);
    while (peek() && peek()->tok[0] == "cover") {
      Line l = *peek();
      std::string nm = detail::strip_colon(l.tok, 1, l.no);
      int e = detail::lookup(inst.elem_names, nm, "element", l.no);
      if (seen[e]) throw ParseError(l.no, "duplicate cover for element " + nm);
      seen[e] = true;
      for (size_t t = 2; t < l.tok.size(); ++t)
        covers[e] |= std::uint64_t{1}
                     << detail::lookup(inst.cover_item_names, l.tok[t], "item", l.no);
      ++i;
    }
    for (int e = 0; e < n; ++e)
      if (!seen[e])
        throw ParseError(ob.no, "missing cover for element " + inst.elem_names[e]);
    try {
      inst.objective = Objective(CoverageObjective(
          static_cast<int>(inst.cover_item_names.size()), std::move(covers),
          std::move(iw)));
    } catch (const DomainError& e) {
      throw ParseError(ob.no, e.what());
    }
  } else if (okind == "linear") {
    std::vector<Rational> w(n, Rational(0));
    while (peek() && peek()->tok[0] == "weight") {
      Line& l = *peek();
      if (l.tok.size() != 4 || l.tok[2] != "=")
        throw ParseError(l.no, "expected 'weight <elem> = <rational>'");
      int e = detail::lookup(inst.elem_names, l.tok[1], "element", l.no);
      try {
        w[e] = Rational::parse(l.tok[3]);
      } catch (const Error& err) {
        throw ParseError(l.no, err.what());
      }
      if (w[e].sign() < 0) throw ParseError(l.no, "negative weight");
      ++i;
    }
    inst.objective = Objective(LinearObjective(std::move(w)));
  } else {
    throw ParseError(ob.no, "unknown objective kind: " + okind);
  }

  Line& fin = need("'end'");
  if (fin.tok.size() != 1 || fin.tok[0] != "end")
    throw ParseError(fin.no, "expected 'end'");
  ++i;
  if (peek()) throw ParseError(peek()->no, "trailing content after 'end'");
  return inst;
}

inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "kx 1\n";
  out << "name " << inst.name << "\n";
  if (const auto* p = inst.system.packing()) {
    out << "system set_packing k=" << p->k << "\n";
    // Emit items in first-appearance order: the parser numbers items the
    // same way, so serialization is a fixpoint under parse/serialize.
    std::vector<int> pos(inst.pack_item_names.size(), -1);
    int next = 0;
    for (int e = 0; e < inst.n(); ++e)
      for (std::uint64_t b = p->elem_items[e]; b != 0; b &= b - 1)
        if (int id = __builtin_ctzll(b); pos[id] < 0) pos[id] = next++;
    for (int e = 0; e < inst.n(); ++e) {
      out << "element " << inst.elem_names[e] << ":";
      std::vector<int> ids;
      for (std::uint64_t b = p->elem_items[e]; b != 0; b &= b - 1)
        ids.push_back(__builtin_ctzll(b));
      std::sort(ids.begin(), ids.end(),
                [&](int x, int y) { return pos[x] < pos[y]; });
      for (int id : ids) out << " " << inst.pack_item_names[id];
      out << "\n";
    }
  } else {
    const auto* x = inst.system.explicit_sys();
    out << "system explicit k=" << x->declared_k << "\n";
    out << "elements";
    for (const auto& nm : inst.elem_names) out << " " << nm;
    out << "\n";
    for (ElemSet b : x->maximal_sets) {
      out << "base";
      for (Elem e : b.elements()) out << " " << inst.elem_names[e];
      out << "\n";
    }
  }
  if (const auto* c = inst.objective.coverage()) {
    out << "objective coverage\n";
    out << "universe";
    for (int it = 0; it < c->universe_size; ++it) {
      out << " " << inst.cover_item_names[it];
      if (!(c->item_weight[it] == Rational(1))) out << "=" << c->item_weight[it].str();
    }
    out << "\n";
    for (int e = 0; e < inst.n(); ++e) {
      out << "cover " << inst.elem_names[e] << ":";
      for (std::uint64_t b = c->covers[e]; b != 0; b &= b - 1)
        out << " " << inst.cover_item_names[__builtin_ctzll(b)];
      out << "\n";
    }
  } else {
    const auto* l = inst.objective.linear();
    out << "objective linear\n";
    for (int e = 0; e < inst.n(); ++e)
      out << "weight " << inst.elem_names[e] << " = " << l->elem_weight[e].str()
          << "\n";
  }
  out << "end\n";
  return out.str();
}

// The two-base 2-exchange fixture with the unweighted coverage objective
// whose naive marginal weights cycle.  Bundled in text form as
// fixtures/section2.kx as well.
inline Instance fixture_two_base_cycle() {
  return parse_instance(
      "kx 1\n"
      "name section2\n"
      "system explicit k=2\n"
      "elements 1 2 3 4\n"
      "base 1 2\n"
      "base 3 4\n"
      "objective coverage\n"
      "universe a b c x y z\n"
      "cover 1: a b\n"
      "cover 2: a c\n"
      "cover 3: x y\n"
      "cover 4: x z\n"
      "end\n");
}

// Deterministic random k-set packing generator.  Sets are drawn from a
// pool of round(density * universe_size) items (at least k), so lower
// density means more overlap between sets.  With linear_weights the
// objective is a random integer-weight linear function instead of the
// unit-weight coverage of the packing sets.
inline Instance generate_packing(int n, int k, int universe_size, double density,
                                 std::uint64_t seed, bool linear_weights = false,
                                 int max_weight = 10) {
  if (k < 1 || universe_size < k)
    throw DomainError("generate_packing requires k >= 1 and universe_size >= k");
  if (n < 1 || n > 64) throw DomainError("generate_packing requires 1 <= n <= 64");
  if (universe_size > 64) throw DomainError("universe_size must be <= 64");
  if (!(density > 0.0 && density <= 1.0))
    throw DomainError("density must be in (0, 1]");
  int pool = static_cast<int>(density * universe_size + 0.5);
  if (pool < k) pool = k;
  if (pool > universe_size) pool = universe_size;

  std::mt19937_64 rng(seed);
  Instance inst;
  inst.name = "rand-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s" +
              std::to_string(seed);
  std::vector<std::uint64_t> sets(n);
  for (int e = 0; e < n; ++e) {
    inst.elem_names.push_back("e" + std::to_string(e + 1));
    int sz = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    std::uint64_t m = 0;
    while (__builtin_popcountll(m) < sz)
      m |= std::uint64_t{1} << (rng() % static_cast<std::uint64_t>(pool));
    sets[e] = m;
  }
  for (int it = 0; it < universe_size; ++it)
    inst.pack_item_names.push_back("u" + std::to_string(it + 1));
  inst.system = System(SetPackingSystem(k, sets));
  if (linear_weights) {
    std::vector<Rational> w(n);
    for (int e = 0; e < n; ++e)
      w[e] = Rational(1 + static_cast<long long>(
                              rng() % static_cast<std::uint64_t>(max_weight)));
    inst.objective = Objective(LinearObjective(std::move(w)));
  } else {
    inst.cover_item_names = inst.pack_item_names;
    inst.objective =
        Objective(CoverageObjective(universe_size, sets));
  }
  return inst;
}

}  // namespace kx
