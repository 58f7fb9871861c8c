#include <algorithm>
#include <numeric>
#include <sstream>

#include "sft/surface.hpp"

namespace sft {

namespace {

bool odd_strings(int n) { return (3 - n) & 1; }

int sign_of(long long e) { return (e & 1) ? -1 : 1; }

}  // namespace

int tuple_degree(std::size_t k, int n) { return static_cast<int>(k) * (n - 3); }

StringSum StringSum::unit(int n) {
  StringSum s(n);
  s.terms_[{}] = 1;
  return s;
}

StringSum StringSum::single(const CyclicWord& w, int n) {
  StringSum s(n);
  s.terms_[{w}] = 1;
  return s;
}

void StringSum::add(StringTuple tuple, const Rational& c) {
  if (c == 0) return;
  int sign = 1;
  // Insertion sort keeps track of the permutation parity.
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    for (std::size_t j = i; j > 0 && tuple[j] < tuple[j - 1]; --j) {
      std::swap(tuple[j], tuple[j - 1]);
      sign = -sign;
    }
  }
  if (odd_strings(n_)) {
    for (std::size_t i = 1; i < tuple.size(); ++i) {
      if (tuple[i] == tuple[i - 1]) return;
    }
  } else {
    sign = 1;
  }
  add_to(terms_, tuple, c * sign);
}

StringSum& StringSum::operator+=(const StringSum& other) {
  if (other.n_ != n_) throw PreconditionError("multi-strings for different n");
  for (const auto& [t, c] : other.terms_) add_to(terms_, t, c);
  return *this;
}

StringSum& StringSum::operator-=(const StringSum& other) {
  if (other.n_ != n_) throw PreconditionError("multi-strings for different n");
  for (const auto& [t, c] : other.terms_) add_to(terms_, t, -c);
  return *this;
}

StringSum StringSum::operator*(const Rational& c) const {
  StringSum out(n_);
  for (const auto& [t, v] : terms_) add_to(out.terms_, t, v * c);
  return out;
}

std::string StringSum::to_string(const Surface& s) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [t, c] : terms_) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (t.empty()) {
      out << sft::to_string(a);
      continue;
    }
    if (a != 1) out << sft::to_string(a) << " ";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out << " x ";
      out << "(" << s.render(t[i]) << ")";
    }
  }
  return out.str();
}

StringSum multi_product(const StringSum& a, const StringSum& b) {
  if (a.n() != b.n()) throw PreconditionError("multi-strings for different n");
  const int n = a.n();
  StringSum out(n);
  for (const auto& [s, cs] : a.terms()) {
    long long i = tuple_degree(s.size(), n);
    for (const auto& [t, ct] : b.terms()) {
      StringTuple u = s;
      u.insert(u.end(), t.begin(), t.end());
      out.add(std::move(u), cs * ct * sign_of(i * static_cast<long long>(t.size()) * (3 - n)));
    }
  }
  return out;
}

StringSum delta_tuple(const StringTuple& t, const Surface& surface, int n) {
  StringSum out(n);
  const std::size_t k = t.size();
  for (std::size_t r = 1; r <= k; ++r) {
    int sign = sign_of(static_cast<long long>(r + k) * (3 - n));
    for (const auto& [uv, c] : turaev_cobracket(surface, t[r - 1])) {
      StringTuple u(t.begin(), t.begin() + static_cast<long>(r - 1));
      u.push_back(uv.first);
      u.push_back(uv.second);
      u.insert(u.end(), t.begin() + static_cast<long>(r), t.end());
      out.add(std::move(u), c * sign);
    }
  }
  return out;
}

StringSum nabla_tuple(const StringTuple& t, const Surface& surface, int n) {
  StringSum out(n);
  const std::size_t k = t.size();
  if (k < 2) return out;
  for (std::size_t r1 = 1; r1 <= k; ++r1) {
    for (std::size_t r2 = r1 + 1; r2 <= k; ++r2) {
      int sign = sign_of(static_cast<long long>(r2 - 1 + k) * (3 - n));
      for (const auto& [w, c] : goldman_bracket(surface, t[r1 - 1], t[r2 - 1])) {
        StringTuple u;
        for (std::size_t i = 1; i <= k; ++i) {
          if (i == r1) u.push_back(w);
          else if (i != r2) u.push_back(t[i - 1]);
        }
        out.add(std::move(u), c * sign);
      }
    }
  }
  return out;
}

StringSum delta_op(const StringSum& s, const Surface& surface) {
  StringSum out(s.n());
  for (const auto& [t, c] : s.terms()) out += delta_tuple(t, surface, s.n()) * c;
  return out;
}

StringSum nabla_op(const StringSum& s, const Surface& surface) {
  StringSum out(s.n());
  for (const auto& [t, c] : s.terms()) out += nabla_tuple(t, surface, s.n()) * c;
  return out;
}

// ---------------------------------------------------------------- checks

namespace {

std::string tuple_text(const Surface& s, const std::vector<StringSum>& items) {
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "; ";
    out += items[i].to_string(s);
  }
  return out + ")";
}

void report_sum(CheckReport& r, const Surface& s, const StringSum& residual, const std::string& what) {
  for (const auto& [t, c] : residual.terms()) {
    StringSum one(residual.n());
    one.add(t, 1);
    r.fail(what + " at " + one.to_string(s), c);
  }
}

int degree_of(const StringSum& c) {
  return c.terms().empty() ? 0 : tuple_degree(c.terms().begin()->first.size(), c.n());
}

}  // namespace

CheckReport check_string_identities(const Surface& surface, const StringCheckOptions& opts) {
  Stopwatch sw;
  CheckReport r;
  r.name = "string-identities";
  auto basis = surface.classes(opts.max_word);
  auto pair_basis = surface.classes(opts.pair_word);
  auto ops = string_bialgebra(surface);
  std::mt19937_64 rng(opts.seed);
  auto pick = [&](const std::vector<CyclicWord>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };

  if (!basis.empty()) {
    for (const auto& v : basis) {
      check_coantisymmetry(ops, v, r);
      check_cojacobi(ops, v, r);
      check_involutivity(ops, v, r);
    }
    for (const auto& a : pair_basis) {
      for (const auto& b : pair_basis) {
        check_antisymmetry(ops, a, b, r);
        check_drinfeld(ops, a, b, r);
      }
    }
    for (int t = 0; t < opts.samples; ++t) {
      auto a = pick(basis), b = pick(basis), c = pick(basis);
      check_antisymmetry(ops, a, b, r);
      check_drinfeld(ops, a, b, r);
      check_jacobi(ops, a, b, c, r);
    }
  }

  // Multi-strings of one to three classes.
  const int n = 2;
  auto random_multi = [&](int max_len) {
    std::uniform_int_distribution<int> len(1, max_len);
    int k = len(rng);
    StringSum s = StringSum::unit(n);
    for (int i = 0; i < k; ++i) s = multi_product(s, StringSum::single(pick(basis), n));
    return s;
  };
  for (int t = 0; t < opts.samples && !basis.empty(); ++t) {
    StringSum c1 = random_multi(2), c2 = random_multi(2), c3 = random_multi(1);
    if (c1.is_zero() || c2.is_zero() || c3.is_zero()) continue;
    int d1 = degree_of(c1), d2 = degree_of(c2), d3 = degree_of(c3);
    auto D = [&](const StringSum& x) { return delta_op(x, surface); };
    auto N = [&](const StringSum& x) { return nabla_op(x, surface); };
    auto P = [](const StringSum& x, const StringSum& y) { return multi_product(x, y); };

    StringSum c12 = P(c1, c2);
    report_sum(r, surface, D(D(c12)), "Delta^2 " + tuple_text(surface, {c1, c2}));

    StringSum lhs = D(c12);
    lhs -= P(D(c1), c2);
    lhs -= P(c1, D(c2)) * sign_of(d1);
    report_sum(r, surface, lhs, "co-derivation " + tuple_text(surface, {c1, c2}));

    StringSum c123 = P(c12, c3);
    report_sum(r, surface, N(N(c123)), "nabla^2 " + tuple_text(surface, {c1, c2, c3}));

    StringSum seven = N(c123);
    seven -= P(N(c12), c3);
    seven -= P(c1, N(P(c2, c3))) * sign_of(d1);
    seven -= P(N(P(c1, c3)), c2) * sign_of(static_cast<long long>(d2) * d3);
    seven += P(P(N(c1), c2), c3);
    seven += P(P(c1, N(c2)), c3) * sign_of(d1);
    seven += P(c12, N(c3)) * sign_of(d1 + d2);
    report_sum(r, surface, seven, "seven-term " + tuple_text(surface, {c1, c2, c3}));

    StringSum anti = D(N(c123));
    anti += N(D(c123));
    report_sum(r, surface, anti, "Delta nabla + nabla Delta " + tuple_text(surface, {c1, c2, c3}));
  }

  r.caps["max_word"] = opts.max_word;
  r.caps["pair_word"] = opts.pair_word;
  r.caps["samples"] = opts.samples;
  r.caps["classes"] = static_cast<long long>(basis.size());
  if (surface.torus()) r.notes.push_back("torus: bracket from the straight-line oracle");
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

// ---------------------------------------------------------------- series

void ClassDictionary::add(const std::string& name, const CyclicWord& w) {
  auto it = by_name_.find(name);
  if (it != by_name_.end() && !(it->second == w)) {
    throw PreconditionError("class '" + name + "' declared twice");
  }
  by_name_[name] = w;
  by_word_.try_emplace(w, name);
}

std::optional<CyclicWord> ClassDictionary::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  return std::nullopt;
}

std::string ClassDictionary::name_of(const CyclicWord& w) const {
  auto it = by_word_.find(w);
  if (it != by_word_.end()) return it->second;
  return surface_->render(w, "");
}

namespace {

CyclicWord resolve(const ClassDictionary& dict, const std::string& name) {
  if (auto w = dict.find(name)) return *w;
  auto w = dict.surface().reduce(std::string_view(name));
  if (!w) throw PreconditionError("string coefficient '" + name + "' is a trivial class");
  return *w;
}

// c1 . c2 ... ck = (-1)^{(3-n) k(k-1)/2} c1 x ... x ck
int product_to_tuple_sign(std::size_t k, int n) {
  return sign_of(static_cast<long long>(3 - n) * static_cast<long long>(k * (k - 1) / 2));
}

}  // namespace

StringSum coefficient_to_strings(const Monomial& coeff, const SymbolTable& table,
                                 const ClassDictionary& dict) {
  StringTuple t;
  for (const auto& f : coeff.factors()) {
    if (f.key.kind != SymbolKind::Coefficient) continue;
    CyclicWord w = resolve(dict, table.name(f.key));
    for (std::uint32_t e = 0; e < f.exp; ++e) t.push_back(w);
  }
  StringSum out(2);
  out.add(t, product_to_tuple_sign(t.size(), 2));
  return out;
}

GradedSeries strings_to_coefficient(const StringSum& s, const TablePtr& table,
                                    const ClassDictionary& dict) {
  GradedSeries out(table);
  for (const auto& [t, c] : s.terms()) {
    std::vector<Factor> word;
    for (const auto& w : t) {
      word.push_back({table->intern_coefficient(dict.name_of(w), s.n() - 3), 1});
    }
    auto m = normalize(*table, word);
    if (!m) continue;
    out.add_term(m->monomial, c * m->sign * product_to_tuple_sign(t.size(), s.n()));
  }
  return out;
}

CheckReport check_master_L(const OrbitSystem& system, const ClassDictionary& dict,
                           const GradedSeries& L, const GradedSeries& Hplus,
                           const GradedSeries& Hminus, const TruncationContext& ctx) {
  Stopwatch sw;
  ctx.validate();
  const TablePtr& table = system.table();
  for (const auto& [m, c] : L.terms()) {
    for (const auto& f : m.factors()) {
      if (f.key.kind == SymbolKind::Coefficient) {
        if (table->degree(f.key) != system.n() - 3) {
          throw PreconditionError("string coefficient of the wrong degree in L");
        }
        continue;
      }
      Side s = system.side_of(f.key.index);
      if ((f.key.kind == SymbolKind::P && s != Side::Plus && s != Side::Single) ||
          (f.key.kind == SymbolKind::Q && s != Side::Minus)) {
        throw PreconditionError("master-L: L may only contain p+ and q- variables");
      }
    }
  }
  auto side_is = [&](Side s) {
    return [&system, s](std::uint32_t v) {
      Side t = system.side_of(v);
      return t == s || (s == Side::Plus && t == Side::Single);
    };
  };
  int q_plus = 0, p_minus = 0;
  for (const auto& [m, c] : Hplus.terms()) q_plus = std::max(q_plus, m.q_degree());
  for (const auto& [m, c] : Hminus.terms()) p_minus = std::max(p_minus, m.p_degree());
  ExpWindow w;
  w.max_p = ctx.max_p_degree + q_plus;
  w.max_q = ctx.max_p_degree + p_minus;
  w.max_coeff_len = ctx.max_coeff_len + 1;
  w.max_weight = ctx.max_hbar + 2 * ctx.max_p_degree + ctx.max_coeff_len + 2;
  GradedSeries eL = exp_star(L, w);

  const Surface& surface = dict.surface();
  CoefficientMap dstring = [&](const Monomial& coeff) {
    StringSum s = coefficient_to_strings(coeff, *table, dict);
    GradedSeries out = strings_to_coefficient(delta_op(s, surface), table, dict);
    out += strings_to_coefficient(nabla_op(s, surface), table, dict).shift_hbar(1);
    return out;
  };
  TruncationContext loose = TruncationContext::unbounded();
  GradedSeries lhs = apply_to_coefficients(eL, dstring, loose);
  lhs -= act_left(eL, Hplus, loose, side_is(Side::Plus));
  lhs += act_right(Hminus, eL, loose, side_is(Side::Minus));
  GradedSeries diff = lhs.filter([&](const Monomial& m) {
    return m.p_degree() <= ctx.max_p_degree && m.q_degree() <= ctx.max_p_degree &&
           m.hbar() <= ctx.max_hbar && m.coefficient_length() <= ctx.max_coeff_len;
  });
  CheckReport r = report_from_residual("master-L", diff);
  r.set_caps(ctx);
  r.caps["exp_max_weight"] = w.max_weight;
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

}  // namespace sft
