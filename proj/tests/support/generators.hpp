#pragma once

#include <random>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/weyl.hpp"

namespace sft::gen {

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

// Random monomial over the given table: each q/p variable gets an exponent
// (at most 1 for odd degrees), hbar in [h_lo, h_hi].
inline Monomial random_monomial(std::mt19937_64& rng, const SymbolTable& t, int max_exp, int h_lo,
                                int h_hi, bool allow_p = true) {
  std::vector<Factor> w;
  std::uniform_int_distribution<int> e(0, max_exp);
  for (std::uint32_t i = 0; i < t.orbit_count(); ++i) {
    for (SymbolKind k : {SymbolKind::Q, SymbolKind::P}) {
      if (k == SymbolKind::P && !allow_p) continue;
      SymbolKey key{k, i};
      int x = e(rng);
      if (t.degree(key) & 1) x = x > 0 ? (x % 2) : 0;
      if (x > 0 && (rng() % 2)) w.push_back({key, static_cast<std::uint32_t>(x)});
    }
  }
  std::uniform_int_distribution<int> h(h_lo, h_hi);
  auto n = normalize(t, w, h(rng));
  return n->monomial;
}

inline GradedSeries random_series(std::mt19937_64& rng, const TablePtr& t, int terms, int max_exp,
                                  int h_lo, int h_hi, bool allow_p = true) {
  GradedSeries s(t);
  for (int i = 0; i < terms; ++i) {
    s.add_term(random_monomial(rng, *t, max_exp, h_lo, h_hi, allow_p), random_rational(rng));
  }
  return s;
}

// Homogeneous variant: keeps only the terms of the degree of the first term.
inline GradedSeries homogeneous_part(const GradedSeries& s) {
  if (s.is_zero()) return s;
  int d = s.terms().begin()->first.degree(*s.table());
  return s.filter([&](const Monomial& m) { return m.degree(*s.table()) == d; });
}

inline OrbitSystem random_orbit_system(std::mt19937_64& rng, int orbits) {
  std::uniform_int_distribution<int> n(2, 5), cz(-2, 2), kappa(1, 3);
  std::vector<Orbit> os;
  for (int i = 0; i < orbits; ++i) {
    os.push_back({"g" + std::to_string(i + 1), cz(rng), kappa(rng), true, Side::Single});
  }
  return OrbitSystem(n(rng), os);
}

// Random H whose terms use q-variables of one orbit set and p-variables of a
// disjoint one; such H satisfy H*H = 0 and have no p-free terms.
inline GradedSeries random_split_hamiltonian(std::mt19937_64& rng, const OrbitSystem& sys,
                                      bool require_q = false) {
  const auto& t = sys.table();
  std::size_t n = t->orbit_count();
  std::vector<bool> source(n);
  for (std::size_t i = 0; i < n; ++i) source[i] = rng() % 2;
  int hd = t->hbar_degree();
  GradedSeries H(t);
  for (int k = 0; k < 40 && H.terms().size() < 4; ++k) {
    auto m = random_monomial(rng, *t, 2, 0, 0);
    bool ok = m.p_degree() > 0 && (!require_q || m.q_degree() > 0);
    for (const auto& f : m.factors()) {
      if (f.key.kind == SymbolKind::Q && source[f.key.index]) ok = false;
      if (f.key.kind == SymbolKind::P && !source[f.key.index]) ok = false;
    }
    if (!ok) continue;
    int gap = -1 - m.degree(*t);
    int h = 0;
    if (hd == 0) {
      if (gap != 0) continue;
      h = static_cast<int>(rng() % 3) - 1;
    } else {
      if (gap % hd != 0) continue;
      h = gap / hd;
    }
    if (h < -1 || h > 1) continue;
    m.set_hbar(h);
    H.add_term(m, random_rational(rng));
  }
  return H;
}

}  // namespace sft::gen
