#include <algorithm>
#include <set>

#include "sft/cotangent.hpp"

namespace sft {

namespace {

const char* kConvention =
    "e = +1 on (i, partner(i)) with i < partner(i); a = -cobracket/kappa, "
    "b = bracket/(kappa kappa); H = e^{-F} * core * e^{F}";

GradedSeries q_of(const OrbitSystem& sys, std::size_t i) {
  return GradedSeries::symbol(sys.table(), {SymbolKind::Q, static_cast<std::uint32_t>(i)});
}

GradedSeries p_of(const OrbitSystem& sys, std::size_t i) {
  return GradedSeries::symbol(sys.table(), {SymbolKind::P, static_cast<std::uint32_t>(i)});
}

std::string shape_of(const Monomial& m) {
  return "q^" + std::to_string(m.q_degree()) + " p^" + std::to_string(m.p_degree()) + " h^" +
         std::to_string(m.hbar());
}

int p_length(const Monomial& m, const std::vector<int>& lengths) {
  int len = 0;
  for (const auto& f : m.factors()) {
    if (f.key.kind == SymbolKind::P) len += static_cast<int>(f.exp) * lengths.at(f.key.index);
  }
  return len;
}

// e^{s F} X e^{-s F} for F = (1/hbar) sum p_i p_j, by substitution in q.
GradedSeries conjugate(const GradedSeries& X, const GradedSeries& F, int s) {
  const auto ctx = TruncationContext::unbounded();
  const TablePtr& table = X.table();
  std::map<std::uint32_t, GradedSeries> pair_of;
  for (const auto& [m, c] : F.terms()) {
    GradedSeries t(table);
    t.add_term(m, c);
    for (const auto& f : m.factors()) pair_of.emplace(f.key.index, t);
  }
  std::map<std::uint32_t, GradedSeries> image;
  auto image_of = [&](std::uint32_t i) -> const GradedSeries& {
    auto it = image.find(i);
    if (it != image.end()) return it->second;
    GradedSeries q = GradedSeries::symbol(table, {SymbolKind::Q, i});
    auto pf = pair_of.find(i);
    if (pf == pair_of.end()) return image.emplace(i, q).first->second;
    GradedSeries one(table, 1);
    auto left = one + pf->second * s, right = one - pf->second * s;
    return image.emplace(i, star(star(left, q, ctx), right, ctx)).first->second;
  };
  GradedSeries out(table);
  for (const auto& [m, c] : X.terms()) {
    GradedSeries t = GradedSeries(table, c).shift_hbar(m.hbar());
    for (const auto& f : m.factors()) {
      for (std::uint32_t e = 0; e < f.exp; ++e) {
        t = star(t, f.key.kind == SymbolKind::Q ? image_of(f.key.index)
                                                : GradedSeries::symbol(table, f.key), ctx);
      }
    }
    out += t;
  }
  return out;
}

}  // namespace

std::optional<std::size_t> GeodesicAlphabet::index_of(const CyclicWord& w) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), w);
  if (it == classes.end() || *it != w) return std::nullopt;
  return static_cast<std::size_t>(it - classes.begin());
}

GeodesicAlphabet make_alphabet(const Surface& surface, std::vector<CyclicWord> classes,
                               const ClassDictionary* dict) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  GeodesicAlphabet a;
  a.classes = std::move(classes);
  for (const auto& w : a.classes) {
    auto inv = a.index_of(surface.inverse(w));
    if (!inv) throw PreconditionError("unpaired class " + surface.render(w, ""));
    if (a.classes[*inv] == w) throw PreconditionError("class " + surface.render(w, "") + " is its own inverse");
    a.partner.push_back(*inv);
    a.names.push_back(dict ? dict->name_of(w) : surface.render(w, ""));
  }
  return a;
}

OrbitSystem alphabet_system(const Surface& surface, const GeodesicAlphabet& alphabet) {
  std::vector<Orbit> orbits;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    Orbit o;
    o.name = alphabet.names[i];
    o.cz = 0;
    o.kappa = surface.root_power(alphabet.classes[i]);
    o.side = Side::Plus;
    orbits.push_back(o);
  }
  return OrbitSystem(2, orbits);
}

std::vector<CyclicWord> close_alphabet(const Surface& surface, std::vector<CyclicWord> seeds,
                                       int max_len) {
  std::set<CyclicWord> have;
  std::vector<CyclicWord> todo;
  auto push = [&](const CyclicWord& w) {
    if (static_cast<int>(w.length()) > max_len) return;
    for (const auto& v : {w, surface.inverse(w)}) {
      if (have.insert(v).second) todo.push_back(v);
    }
  };
  for (const auto& w : seeds) {
    if (static_cast<int>(w.length()) > max_len) {
      throw PreconditionError("seed " + surface.render(w, "") + " is longer than the cap");
    }
    push(w);
  }
  auto ops = string_bialgebra(surface);
  std::vector<CyclicWord> done;
  while (!todo.empty()) {
    CyclicWord x = todo.back();
    todo.pop_back();
    done.push_back(x);
    for (const auto& [uv, c] : ops.delta(x)) {
      push(uv.first);
      push(uv.second);
    }
    for (std::size_t i = 0; i < done.size(); ++i) {
      if (static_cast<int>(x.length() + done[i].length()) > max_len) continue;
      for (const auto& [w, c] : ops.mu(x, done[i])) push(w);
      for (const auto& [w, c] : ops.mu(done[i], x)) push(w);
    }
  }
  return {have.begin(), have.end()};
}

std::vector<CyclicWord> missing_classes(const Surface& surface, const GeodesicAlphabet& alphabet,
                                        int max_len) {
  std::set<CyclicWord> missing;
  auto note = [&](const CyclicWord& w) {
    if (static_cast<int>(w.length()) <= max_len && !alphabet.index_of(w)) missing.insert(w);
  };
  auto ops = string_bialgebra(surface);
  for (const auto& x : alphabet.classes) {
    note(surface.inverse(x));
    for (const auto& [uv, c] : ops.delta(x)) {
      note(uv.first);
      note(uv.second);
    }
    for (const auto& y : alphabet.classes) {
      if (static_cast<int>(x.length() + y.length()) > max_len) continue;
      for (const auto& [w, c] : ops.mu(x, y)) note(w);
    }
  }
  return {missing.begin(), missing.end()};
}

GradedSeries build_F(const OrbitSystem& system, const GeodesicAlphabet& alphabet) {
  if (system.orbits().size() != alphabet.size()) {
    throw PreconditionError("orbit system does not match the alphabet");
  }
  GradedSeries F = system.zero();
  const auto ctx = TruncationContext::unbounded();
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    std::size_t j = alphabet.partner[i];
    if (j >= alphabet.size() || alphabet.partner[j] != i || j == i) {
      throw PreconditionError("inconsistent pairing at " + alphabet.names[i]);
    }
    if (i < j) F += mul(p_of(system, i), p_of(system, j), ctx).shift_hbar(-1);
  }
  return F;
}

SurfaceHamiltonian build_H_surface(const Surface& surface, const GeodesicAlphabet& alphabet,
                                   const OrbitSystem& system, int cap) {
  auto missing = missing_classes(surface, alphabet, cap);
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 12; ++i) {
      list += (i ? ", " : "") + surface.render(missing[i], "");
    }
    if (missing.size() > 12) list += ", ...";
    throw PreconditionError("alphabet is not closed up to length " + std::to_string(cap) + "; missing " +
                            std::to_string(missing.size()) + " classes: " + list);
  }
  SurfaceHamiltonian out;
  out.convention = kConvention;
  out.F = build_F(system, alphabet);
  const auto ctx = TruncationContext::unbounded();
  const TablePtr& table = system.table();
  auto kappa = [&](std::size_t i) { return table->kappa(static_cast<std::uint32_t>(i)); };
  auto ops = string_bialgebra(surface);
  const std::size_t N = alphabet.size();

  GradedSeries core = system.zero();
  for (std::size_t k = 0; k < N; ++k) {
    if (kappa(k) != 1) out.iterated = true;
    for (const auto& [uv, c] : ops.delta(alphabet.classes[k])) {
      auto u = alphabet.index_of(uv.first), v = alphabet.index_of(uv.second);
      if (!u || !v) continue;
      auto term = mul(mul(q_of(system, *u), q_of(system, *v), ctx), p_of(system, k), ctx);
      core += term.shift_hbar(-1) * (-c / (2 * kappa(k)));
    }
  }
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b) {
      if (a == b) continue;
      if (static_cast<int>(alphabet.classes[a].length() + alphabet.classes[b].length()) > cap) continue;
      for (const auto& [w, c] : ops.mu(alphabet.classes[a], alphabet.classes[b])) {
        auto wi = alphabet.index_of(w);
        if (!wi) continue;
        auto term = mul(q_of(system, *wi), mul(p_of(system, a), p_of(system, b), ctx), ctx);
        core += term.shift_hbar(-1) * (c / (2 * kappa(a) * kappa(b)));
      }
    }
  }
  out.core = core;

  GradedSeries H = conjugate(core, out.F, -1);
  out.H = H;
  out.cap = cap;
  for (const auto& w : alphabet.classes) out.lengths.push_back(static_cast<int>(w.length()));
  split_families(H, out);
  return out;
}

void split_families(const GradedSeries& H, SurfaceHamiltonian& out) {
  out.a.clear();
  out.b.clear();
  out.c.clear();
  out.d.clear();
  for (const auto& [m, c] : H.terms()) {
    std::vector<std::uint32_t> idx;
    for (const auto& f : m.factors()) {
      for (std::uint32_t e = 0; e < f.exp; ++e) idx.push_back(f.key.index);
    }
    int q = m.q_degree(), p = m.p_degree();
    if (m.coefficient_length() != 0) continue;
    if (m.hbar() == -1 && q == 2 && p == 1) out.a[idx] = c;
    else if (m.hbar() == -1 && q == 1 && p == 2) out.b[idx] = c;
    else if (m.hbar() == -1 && q == 0 && p == 3) out.c[idx] = c;
    else if (m.hbar() == 0 && q == 0 && p == 1) out.d[idx] = c;
  }
}

CheckReport check_shapes(const GradedSeries& H) {
  CheckReport r;
  r.name = "shapes";
  const auto& table = *H.table();
  for (const auto& [m, c] : H.terms()) {
    int q = m.q_degree(), p = m.p_degree();
    bool ok = m.coefficient_length() == 0 &&
              ((m.hbar() == -1 && q + p == 3 && p >= 1) || (m.hbar() == 0 && q == 0 && p == 1));
    if (!ok) r.fail(monomial_to_string(table, m), c, shape_of(m));
  }
  return r;
}

CheckReport check_surface_master(const SurfaceHamiltonian& H, const TruncationContext& ctx) {
  Stopwatch sw;
  CheckReport r;
  if (H.cap > 0) {
    // e^F * H = G * e^F, so e^F <- H vanishes iff G has no q-free term.
    GradedSeries G = conjugate(H.H, H.F, 1);
    auto keep = [&H](const Monomial& m) { return p_length(m, H.lengths) <= H.cap; };
    r = check_master_H(G, ctx, keep);
    r.caps["max_word_len"] = H.cap;
    CheckReport filling = report_from_residual(
        "filling", G.filter([](const Monomial& m) { return m.q_degree() == 0; }));
    r.absorb(filling);
  } else {
    r = check_master_H(H.H, ctx);
  }
  r.name = "surface-master";
  if (!H.H.is_zero()) r.absorb(check_shapes(H.H));
  if (!H.convention.empty()) r.notes.push_back("convention: " + H.convention);
  if (H.iterated) r.notes.push_back("alphabet has iterated classes; 1/kappa weights applied");
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

CyclicWord psi_map(const GeodesicAlphabet& alphabet, std::size_t orbit) {
  return alphabet.classes.at(orbit);
}

Augmentation augmentation_from_F(const OrbitSystem& system, const GradedSeries& F) {
  Augmentation beta;
  const auto ctx = TruncationContext::unbounded();
  const std::size_t N = system.variable_count();
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      auto w = mul(q_of(system, i), q_of(system, j), ctx);
      auto v = act_left(F, w, ctx).filter([](const Monomial& m) { return m.factors().empty(); });
      if (!v.is_zero()) beta.values[w.terms().begin()->first] = v;
    }
  }
  return beta;
}

CheckReport check_psi(const Surface& surface, const GeodesicAlphabet& alphabet,
                      const OrbitSystem& system, const SurfaceHamiltonian& H,
                      const TruncationContext& ctx, int max_word) {
  Stopwatch sw;
  CheckReport r;
  r.name = "psi";
  FreeAlgebra alg(system.table());
  auto D = BvOperator::from_weyl(alg, H.H, ctx, std::max(max_word, 2));
  auto beta = augmentation_from_F(system, H.F);
  r.absorb(check_augmentation(D, beta));
  auto twist = twist_by_augmentation(D, beta);
  auto lin = linearize(twist.twisted, 2);
  auto ops = string_bialgebra(surface);
  const std::size_t N = alphabet.size();
  auto name = [&](std::size_t i) { return alphabet.names[i]; };
  for (std::size_t j = 0; j < N; ++j) {
    for (const auto& [i, c] : lin.dlin[j]) r.fail("dlin " + name(j) + " -> " + name(i), c);
    Vec2<std::size_t> expected;
    for (const auto& [uv, c] : ops.delta(psi_map(alphabet, j))) {
      auto u = alphabet.index_of(uv.first), v = alphabet.index_of(uv.second);
      if (u && v) add_to(expected, {*u, *v}, c);
    }
    add_scaled(expected, lin.delta[j], -1);
    for (const auto& [uv, c] : expected) {
      r.fail("delta " + name(j) + " : " + name(uv.first) + " (x) " + name(uv.second), c);
    }
  }
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b) {
      Vec1<std::size_t> expected;
      auto x = psi_map(alphabet, a), y = psi_map(alphabet, b);
      if (H.cap > 0 && static_cast<int>(x.length() + y.length()) > H.cap) continue;
      for (const auto& [w, c] : ops.mu(x, y)) {
        if (auto wi = alphabet.index_of(w)) add_to(expected, *wi, c);
      }
      if (auto it = lin.mu.find({a, b}); it != lin.mu.end()) add_scaled(expected, it->second, -1);
      for (const auto& [w, c] : expected) {
        r.fail("mu " + name(a) + ", " + name(b) + " : " + name(w), c);
      }
    }
  }
  r.set_caps(ctx);
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

}  // namespace sft
