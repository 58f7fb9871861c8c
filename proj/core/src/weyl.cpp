#include "sft/weyl.hpp"

#include <algorithm>
#include <unordered_map>

namespace sft {

namespace {

int factor_parity(const SymbolTable& t, const Factor& f) {
  return static_cast<int>((static_cast<long>(t.degree(f.key)) * f.exp) & 1);
}

int block_parity(const SymbolTable& t, const std::vector<Factor>& block) {
  int p = 0;
  for (const auto& f : block) p ^= factor_parity(t, f);
  return p;
}

Rational binomial(std::uint32_t n, std::uint32_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

Rational factorial(std::uint32_t n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return Rational(r);
}

struct Split {
  std::vector<Factor> coeff, q, p;
};

Split split(const Monomial& m) {
  Split s;
  for (const auto& f : m.factors()) {
    switch (f.key.kind) {
      case SymbolKind::Coefficient:
        s.coeff.push_back(f);
        break;
      case SymbolKind::Q:
        s.q.push_back(f);
        break;
      case SymbolKind::P:
        s.p.push_back(f);
        break;
      case SymbolKind::Hbar:
        break;
    }
  }
  return s;
}

bool shares_contraction(const Monomial& a, const Monomial& b) {
  // p's of a against q's of b; both lists sorted by index within their block
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0, j = 0;
  while (i < fa.size() && fa[i].key.kind != SymbolKind::P) ++i;
  while (j < fb.size() && fb[j].key.kind != SymbolKind::Q) ++j;
  while (i < fa.size() && j < fb.size() && fb[j].key.kind == SymbolKind::Q) {
    if (fa[i].key.index == fb[j].key.index) return true;
    if (fa[i].key.index < fb[j].key.index) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

struct ContractionState {
  Rational weight;
  int sign;
  std::vector<Factor> acc_q;
  std::vector<Factor> p_rem;
  int hbar;
};

template <class Sink>
void star_monomials(const SymbolTable& t, const Monomial& A, const Monomial& B, Sink&& sink) {
  if (!shares_contraction(A, B)) {
    if (auto r = merge(t, A, B)) sink(r->monomial, Rational(r->sign));
    return;
  }
  Split sa = split(A);
  Split sb = split(B);

  std::vector<ContractionState> states;
  states.push_back({Rational(1), 1, {}, sa.p, 0});

  // c_A Q_A (P_A * c_B Q_B) P_B: first move c_B left through P_A
  int base_sign = (block_parity(t, sb.coeff) & block_parity(t, sa.p)) ? -1 : 1;

  for (const Factor& x : sb.q) {
    std::vector<ContractionState> next;
    for (auto& st : states) {
      auto it = std::find_if(st.p_rem.begin(), st.p_rem.end(),
                             [&](const Factor& f) { return f.key.index == x.key.index; });
      if (it == st.p_rem.end()) {
        if (factor_parity(t, x) && block_parity(t, st.p_rem)) st.sign = -st.sign;
        st.acc_q.push_back(x);
        next.push_back(std::move(st));
        continue;
      }
      auto pos = static_cast<std::size_t>(it - st.p_rem.begin());
      int par_left = 0, par_right = 0;
      for (std::size_t i = 0; i < pos; ++i) par_left ^= factor_parity(t, st.p_rem[i]);
      for (std::size_t i = pos + 1; i < st.p_rem.size(); ++i) par_right ^= factor_parity(t, st.p_rem[i]);
      const std::uint32_t m = it->exp;
      const std::uint32_t n = x.exp;
      const int qdeg = t.degree(x.key) & 1;
      const int pdeg = t.degree(it->key) & 1;
      const Rational& kappa = t.kappa(x.key.index);
      for (std::uint32_t k = 0; k <= std::min(m, n); ++k) {
        ContractionState ns = st;
        int s = ns.sign;
        if (factor_parity(t, x) && par_right) s = -s;
        int q_rest = static_cast<int>(qdeg * ((n - k) & 1));
        int p_rest = static_cast<int>(pdeg * ((m - k) & 1));
        if (q_rest && p_rest) s = -s;
        if (q_rest && par_left) s = -s;
        ns.sign = s;
        if (k > 0) {
          Rational kp = 1;
          for (std::uint32_t i = 0; i < k; ++i) kp *= kappa;
          ns.weight *= factorial(k) * binomial(m, k) * binomial(n, k) * kp;
        }
        if (m - k == 0) {
          ns.p_rem.erase(ns.p_rem.begin() + static_cast<long>(pos));
        } else {
          ns.p_rem[pos].exp = m - k;
        }
        if (n - k > 0) ns.acc_q.push_back({x.key, n - k});
        ns.hbar += static_cast<int>(k);
        next.push_back(std::move(ns));
      }
    }
    states = std::move(next);
  }

  std::vector<Factor> head = sa.coeff;
  head.insert(head.end(), sa.q.begin(), sa.q.end());
  Monomial m_head(std::move(head), A.hbar() + B.hbar());
  Monomial m_cb(sb.coeff, 0);
  auto first = merge(t, m_head, m_cb);
  if (!first) return;
  Monomial m_pb(sb.p, 0);

  for (auto& st : states) {
    auto r1 = merge(t, first->monomial, Monomial(std::move(st.acc_q), st.hbar));
    if (!r1) continue;
    auto r2 = merge(t, r1->monomial, Monomial(std::move(st.p_rem), 0));
    if (!r2) continue;
    auto r3 = merge(t, r2->monomial, m_pb);
    if (!r3) continue;
    int sign = base_sign * first->sign * st.sign * r1->sign * r2->sign * r3->sign;
    sink(r3->monomial, sign * st.weight);
  }
}

}  // namespace

std::string side_name(Side s) {
  switch (s) {
    case Side::Single:
      return "single";
    case Side::Plus:
      return "plus";
    case Side::Minus:
      return "minus";
  }
  return "?";
}

OrbitSystem::OrbitSystem(int n, std::vector<Orbit> orbits)
    : n_(n), orbits_(std::move(orbits)), table_(std::make_shared<SymbolTable>(2 * (n - 3))) {
  for (const auto& o : orbits_) {
    if (o.kappa <= 0) throw PreconditionError("orbit '" + o.name + "': kappa must be positive");
    if (!o.good) continue;
    table_->add_orbit(o.name, q_degree(o), p_degree(o), Rational(o.kappa));
    variable_side_.push_back(o.side);
  }
}

std::optional<std::uint32_t> OrbitSystem::variable(const std::string& name) const {
  return table_->find_orbit(name);
}

std::uint32_t OrbitSystem::require_variable(const std::string& name) const {
  auto v = variable(name);
  if (!v) throw PreconditionError("unknown or bad orbit '" + name + "'");
  return *v;
}

GradedSeries OrbitSystem::q(const std::string& name, std::uint32_t exp) const {
  return GradedSeries::symbol(table_, {SymbolKind::Q, require_variable(name)}, exp);
}

GradedSeries OrbitSystem::p(const std::string& name, std::uint32_t exp) const {
  return GradedSeries::symbol(table_, {SymbolKind::P, require_variable(name)}, exp);
}

GradedSeries star(const GradedSeries& a, const GradedSeries& b, const TruncationContext& ctx,
                  const MonomialFilter& keep) {
  if (a.table() && b.table() && a.table() != b.table()) {
    throw PreconditionError("star: series over different orbit systems");
  }
  GradedSeries out(a.table() ? a.table() : b.table());
  if (a.is_zero() || b.is_zero()) return out;
  const SymbolTable& t = *out.table();
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      star_monomials(t, ma, mb, [&](const Monomial& m, const Rational& w) {
        if (!ctx.admits(m)) return;
        if (keep && !keep(m)) return;
        acc[m] += w * ca * cb;
      });
    }
  }
  for (auto& [m, c] : acc) out.add_term(m, c);
  return out;
}

namespace {

// Normal-orders a word of single letters (exponents expanded) by bubbling,
// splitting on each p_g q_g inversion into the swapped word plus a contraction.
void transposition_order(const SymbolTable& t, std::vector<Factor> word, Rational coef, int hbar,
                         std::map<Monomial, Rational>& out) {
  for (std::size_t i = 1; i < word.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && word[j].key < word[j - 1].key) {
      const Factor& l = word[j - 1];
      const Factor& r = word[j];
      bool weyl = l.key.kind == SymbolKind::P && r.key.kind == SymbolKind::Q &&
                  l.key.index == r.key.index;
      if (weyl) {
        std::vector<Factor> contracted;
        for (std::size_t k = 0; k < word.size(); ++k) {
          if (k != j - 1 && k != j) contracted.push_back(word[k]);
        }
        transposition_order(t, std::move(contracted), coef * t.kappa(l.key.index), hbar + 1, out);
      }
      if ((t.degree(l.key) & 1) && (t.degree(r.key) & 1)) coef = -coef;
      std::swap(word[j - 1], word[j]);
      --j;
    }
  }
  auto n = normalize(t, word, hbar);
  if (!n) return;
  out[n->monomial] += n->sign * coef;
}

std::vector<Factor> expand_letters(const Monomial& m) {
  std::vector<Factor> w;
  for (const auto& f : m.factors()) {
    for (std::uint32_t e = 0; e < f.exp; ++e) w.push_back({f.key, 1});
  }
  return w;
}

}  // namespace

GradedSeries star_by_transposition(const GradedSeries& a, const GradedSeries& b,
                                   const TruncationContext& ctx) {
  GradedSeries out(a.table() ? a.table() : b.table());
  if (a.is_zero() || b.is_zero()) return out;
  const SymbolTable& t = *out.table();
  std::map<Monomial, Rational> acc;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      auto w = expand_letters(ma);
      auto wb = expand_letters(mb);
      w.insert(w.end(), wb.begin(), wb.end());
      transposition_order(t, std::move(w), ca * cb, ma.hbar() + mb.hbar(), acc);
    }
  }
  for (const auto& [m, c] : acc) {
    if (ctx.admits(m)) out.add_term(m, c);
  }
  return out;
}

GradedSeries act_right(const GradedSeries& F, const GradedSeries& g, const TruncationContext& ctx,
                       const OrbitPredicate& kill) {
  return star(F, g, ctx, [&](const Monomial& m) {
    for (const auto& f : m.factors()) {
      if (f.key.kind == SymbolKind::P && (!kill || kill(f.key.index))) return false;
    }
    return true;
  });
}

GradedSeries act_left(const GradedSeries& g, const GradedSeries& H, const TruncationContext& ctx,
                      const OrbitPredicate& kill) {
  return star(g, H, ctx, [&](const Monomial& m) {
    for (const auto& f : m.factors()) {
      if (f.key.kind == SymbolKind::Q && (!kill || kill(f.key.index))) return false;
    }
    return true;
  });
}

GradedSeries supercommutator(const GradedSeries& a, const GradedSeries& b,
                             const TruncationContext& ctx) {
  auto da = a.homogeneous_degree();
  auto db = b.homogeneous_degree();
  if (!a.is_zero() && !b.is_zero() && (!da || !db)) {
    throw PreconditionError("supercommutator: inputs must be homogeneous");
  }
  int sign = (da.value_or(0) & db.value_or(0) & 1) ? -1 : 1;
  GradedSeries ab = star(a, b, ctx);
  GradedSeries ba = star(b, a, ctx);
  return ab - ba * Rational(sign);
}

namespace {

// H*H of H in (1/h)W starts at hbar^{2 min}.
TruncationContext doubled_floor(const TruncationContext& ctx) {
  TruncationContext c = ctx;
  if (ctx.min_hbar < 0) c.min_hbar = 2 * ctx.min_hbar;
  return c;
}

}  // namespace

CheckReport check_master_H(const GradedSeries& H, const TruncationContext& ctx,
                           const MonomialFilter& keep) {
  Stopwatch sw;
  ctx.validate();
  GradedSeries hh = star(H, H, doubled_floor(ctx), keep);
  CheckReport r = report_from_residual("master-H", hh);
  r.set_caps(ctx);
  auto deg = H.homogeneous_degree();
  if (!H.is_zero() && deg != -1) {
    r.notes.push_back("H is not homogeneous of degree -1");
  }
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

namespace {

int weight(const Monomial& m) {
  int w = m.hbar();
  for (const auto& f : m.factors()) w += static_cast<int>(f.exp);
  return w;
}

}  // namespace

bool ExpWindow::admits(const Monomial& m) const {
  return m.p_degree() <= max_p && m.q_degree() <= max_q &&
         m.coefficient_length() <= max_coeff_len && weight(m) <= max_weight;
}

GradedSeries exp_star(const GradedSeries& F, const ExpWindow& window) {
  std::vector<bool> has_p, has_q;
  for (const auto& [m, c] : F.terms()) {
    if (weight(m) < 0 || (m.factors().empty() && m.hbar() <= 0)) {
      throw PreconditionError("exp: F has a term of negative weight or a pure constant at hbar^" +
                              std::to_string(m.hbar()));
    }
    for (const auto& f : m.factors()) {
      auto& v = f.key.kind == SymbolKind::P ? has_p : has_q;
      if (f.key.kind == SymbolKind::Coefficient) continue;
      if (v.size() <= f.key.index) v.resize(f.key.index + 1, false);
      v[f.key.index] = true;
    }
  }
  for (std::size_t i = 0; i < std::min(has_p.size(), has_q.size()); ++i) {
    if (has_p[i] && has_q[i]) throw PreconditionError("exp: F contains both p and q of one orbit");
  }
  TruncationContext loose = TruncationContext::unbounded();
  GradedSeries result(F.table(), 1);
  GradedSeries power(F.table(), 1);
  GradedSeries window_F = F.filter([&](const Monomial& m) { return window.admits(m); });
  for (std::uint32_t k = 1; !power.is_zero(); ++k) {
    power = mul(power, window_F, loose).filter([&](const Monomial& m) { return window.admits(m); });
    result += power * (Rational(1) / factorial(k));
  }
  return result;
}

GradedSeries apply_to_coefficients(const GradedSeries& s, const CoefficientMap& op,
                                   const TruncationContext& ctx) {
  GradedSeries out(s.table());
  const SymbolTable& t = *s.table();
  for (const auto& [m, c] : s.terms()) {
    Monomial coeff = m.restricted(SymbolKind::Coefficient);
    std::vector<Factor> rest;
    for (const auto& f : m.factors()) {
      if (f.key.kind != SymbolKind::Coefficient) rest.push_back(f);
    }
    Monomial tail(std::move(rest), m.hbar());
    GradedSeries img = op(coeff);
    for (const auto& [cm, cc] : img.terms()) {
      auto r = merge(t, cm, tail);
      if (!r || !ctx.admits(r->monomial)) continue;
      out.add_term(r->monomial, r->sign * cc * c);
    }
  }
  return out;
}

CheckReport check_master_chain(const GradedSeries& H, const CoefficientMap& coeff_boundary,
                               const TruncationContext& ctx) {
  Stopwatch sw;
  ctx.validate();
  GradedSeries lhs = star(H, H, doubled_floor(ctx)) * Rational(1, 2);
  if (coeff_boundary) lhs += apply_to_coefficients(H, coeff_boundary, doubled_floor(ctx));
  CheckReport r = report_from_residual("master-chain", lhs);
  r.set_caps(ctx);
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

CheckReport check_master_F(const OrbitSystem& system, const GradedSeries& F,
                           const GradedSeries& Hplus, const GradedSeries& Hminus,
                           const TruncationContext& ctx) {
  Stopwatch sw;
  ctx.validate();
  auto side_is = [&](Side s) {
    return [&system, s](std::uint32_t v) { return system.side_of(v) == s; };
  };
  for (const auto& [m, c] : F.terms()) {
    for (const auto& f : m.factors()) {
      Side s = system.side_of(f.key.index);
      if ((f.key.kind == SymbolKind::P && s != Side::Plus) ||
          (f.key.kind == SymbolKind::Q && s != Side::Minus)) {
        throw PreconditionError("master-F: F may only contain p+ and q- variables");
      }
    }
  }
  int q_plus = 0, p_minus = 0;
  for (const auto& [m, c] : Hplus.terms()) q_plus = std::max(q_plus, m.q_degree());
  for (const auto& [m, c] : Hminus.terms()) p_minus = std::max(p_minus, m.p_degree());
  // Residual monomials R are compared for p, q <= max_p and hbar <= max_hbar.
  // A term E of e^F feeding R through k contractions with an H-term (hbar >= -1)
  // has p(E) <= p(R) + k, q(E) <= q(R) + k and weight(E) <= weight(R) + 1.
  ExpWindow w;
  w.max_p = ctx.max_p_degree + q_plus;
  w.max_q = ctx.max_p_degree + p_minus;
  w.max_coeff_len = ctx.max_coeff_len;
  w.max_weight = ctx.max_hbar + 2 * ctx.max_p_degree + ctx.max_coeff_len + 1;
  GradedSeries eF = exp_star(F, w);

  TruncationContext loose = TruncationContext::unbounded();
  GradedSeries lhs = act_left(eF, Hplus, loose, side_is(Side::Plus));
  GradedSeries rhs = act_right(Hminus, eF, loose, side_is(Side::Minus));
  GradedSeries diff = (lhs - rhs).filter([&](const Monomial& m) {
    return m.p_degree() <= ctx.max_p_degree && m.q_degree() <= ctx.max_p_degree &&
           m.hbar() <= ctx.max_hbar && m.coefficient_length() <= ctx.max_coeff_len;
  });
  CheckReport r = report_from_residual("master-F", diff);
  r.set_caps(ctx);
  r.caps["exp_max_weight"] = w.max_weight;
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

}  // namespace sft
