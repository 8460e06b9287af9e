#pragma once

// Independent reference reasoner for normalized EL-bottom TBoxes: naive
// completion-rule application over explicit sets until nothing changes.

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace trepan::testing {

// Concept ids: 0 = TOP, 1 = BOTTOM, 2.. = named atoms.
struct NormalAxiom {
  enum Kind { Sub, Conj, ExistsRight, ExistsLeft } kind;
  std::size_t a = 0, a2 = 0, b = 0;  // Sub: a <= b; Conj: a & a2 <= b
  std::size_t role = 0;              // ExistsRight: a <= r.b; ExistsLeft: r.a <= b
};

struct NormalTBox {
  std::size_t atoms = 0;  // named atoms, excluding TOP/BOTTOM
  std::size_t roles = 0;
  std::vector<NormalAxiom> axioms;

  std::size_t concepts() const { return atoms + 2; }

  static std::string name(std::size_t c) {
    if (c == 0) return "TOP";
    if (c == 1) return "BOTTOM";
    return "A" + std::to_string(c - 2);
  }
  static std::string role_name(std::size_t r) { return "r" + std::to_string(r); }

  std::string source() const {
    std::string out;
    for (std::size_t i = 0; i < atoms; ++i) out += "CONCEPT " + name(i + 2) + "\n";
    for (std::size_t r = 0; r < roles; ++r) out += "ROLE " + role_name(r) + "\n";
    for (const auto& ax : axioms) {
      switch (ax.kind) {
        case NormalAxiom::Sub: out += name(ax.a) + " SUBCLASSOF " + name(ax.b); break;
        case NormalAxiom::Conj:
          out += name(ax.a) + " AND " + name(ax.a2) + " SUBCLASSOF " + name(ax.b);
          break;
        case NormalAxiom::ExistsRight:
          out += name(ax.a) + " SUBCLASSOF EXISTS " + role_name(ax.role) + "." + name(ax.b);
          break;
        case NormalAxiom::ExistsLeft:
          out += "EXISTS " + role_name(ax.role) + "." + name(ax.a) + " SUBCLASSOF " + name(ax.b);
          break;
      }
      out += "\n";
    }
    return out;
  }
};

// entails[a][b] for every pair of concept ids.
inline std::vector<std::vector<bool>> brute_force_closure(const NormalTBox& t) {
  const std::size_t n = t.concepts();
  std::vector<std::set<std::size_t>> s(n);
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> r(t.roles);
  for (std::size_t a = 0; a < n; ++a) s[a] = {a, 0};
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](std::size_t a, std::size_t b) {
      if (s[a].insert(b).second) changed = true;
    };
    for (std::size_t x = 0; x < n; ++x) {
      for (const auto& ax : t.axioms) {
        const std::set<std::size_t> sx = s[x];
        switch (ax.kind) {
          case NormalAxiom::Sub:
            if (sx.count(ax.a)) add(x, ax.b);
            break;
          case NormalAxiom::Conj:
            if (sx.count(ax.a) && sx.count(ax.a2)) add(x, ax.b);
            break;
          case NormalAxiom::ExistsRight:
            if (sx.count(ax.a) && r[ax.role].insert({x, ax.b}).second) changed = true;
            break;
          case NormalAxiom::ExistsLeft:
            for (const auto& [p, q] : r[ax.role]) {
              if (p == x && s[q].count(ax.a)) add(x, ax.b);
            }
            break;
        }
      }
      for (std::size_t role = 0; role < t.roles; ++role) {
        for (const auto& [p, q] : r[role]) {
          if (p == x && s[q].count(1)) add(x, 1);
        }
      }
    }
  }
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      out[a][b] = a == 1 || b == 0 || s[a].count(b) > 0 || s[a].count(1) > 0;
    }
  }
  return out;
}

inline NormalTBox random_normal_tbox(std::mt19937_64& rng, std::size_t max_atoms = 12,
                                     std::size_t max_axioms = 20) {
  NormalTBox t;
  t.atoms = std::uniform_int_distribution<std::size_t>(1, max_atoms)(rng);
  t.roles = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_axioms)(rng);
  std::uniform_int_distribution<std::size_t> atom(2, t.atoms + 1);
  std::uniform_int_distribution<std::size_t> role(0, t.roles - 1);
  std::uniform_int_distribution<int> pct(0, 99);
  auto lhs = [&] { return pct(rng) < 5 ? std::size_t{0} : atom(rng); };
  auto rhs = [&] { return pct(rng) < 4 ? std::size_t{1} : atom(rng); };
  auto filler = [&] { return pct(rng) < 10 ? std::size_t{0} : atom(rng); };
  for (std::size_t i = 0; i < m; ++i) {
    NormalAxiom ax{};
    const int k = pct(rng);
    if (k < 45) {
      ax.kind = NormalAxiom::Sub;
      ax.a = lhs();
      ax.b = rhs();
    } else if (k < 65) {
      ax.kind = NormalAxiom::Conj;
      ax.a = atom(rng);
      ax.a2 = atom(rng);
      ax.b = rhs();
    } else if (k < 83) {
      ax.kind = NormalAxiom::ExistsRight;
      ax.a = lhs();
      ax.role = role(rng);
      ax.b = pct(rng) < 5 ? std::size_t{1} : atom(rng);
    } else {
      ax.kind = NormalAxiom::ExistsLeft;
      ax.role = role(rng);
      ax.a = filler();
      ax.b = rhs();
    }
    t.axioms.push_back(ax);
  }
  return t;
}

}  // namespace trepan::testing
