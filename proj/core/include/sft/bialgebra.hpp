#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/report.hpp"

namespace sft {

// Sparse tensors over an ordered basis type.
template <class Key>
using Vec1 = std::map<Key, Rational>;
template <class Key>
using Vec2 = std::map<std::pair<Key, Key>, Rational>;
template <class Key>
using Vec3 = std::map<std::tuple<Key, Key, Key>, Rational>;

template <class M>
void add_to(M& target, const typename M::key_type& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = target.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) target.erase(it);
  }
}

template <class M>
void add_scaled(M& target, const M& source, const Rational& c) {
  for (const auto& [k, v] : source) add_to(target, k, v * c);
}

// Structure maps of a graded space with bracket mu (degree d2) and cobracket
// delta (degree d1). `describe` renders a key in witnesses.
template <class Key>
struct BialgebraOps {
  int d1 = -1;
  int d2 = 1;
  std::function<int(const Key&)> degree;
  std::function<Vec1<Key>(const Key&, const Key&)> mu;
  std::function<Vec2<Key>(const Key&)> delta;
  std::function<std::string(const Key&)> describe;
};

namespace detail {

inline int sign_of(long long e) { return (e & 1) ? -1 : 1; }

template <class Key>
std::string tuple_text(const BialgebraOps<Key>& ops, const std::vector<Key>& keys) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out << ", ";
    out << ops.describe(keys[i]);
  }
  out << ")";
  return out.str();
}

template <class Key, class M, class F>
void report_nonzero(CheckReport& r, const M& residual, const std::string& where, F&& render) {
  for (const auto& [k, c] : residual) r.fail(where + " at " + render(k), c);
}

}  // namespace detail

template <class Key>
Vec1<Key> mu_linear(const BialgebraOps<Key>& ops, const Vec2<Key>& t) {
  Vec1<Key> out;
  for (const auto& [k, c] : t) add_scaled(out, ops.mu(k.first, k.second), c);
  return out;
}

template <class Key>
Vec2<Key> tau(const BialgebraOps<Key>& ops, const Vec2<Key>& t, int d) {
  Vec2<Key> out;
  for (const auto& [k, c] : t) {
    long long e = static_cast<long long>(ops.degree(k.first) + d) * (ops.degree(k.second) + d);
    add_to(out, {k.second, k.first}, c * detail::sign_of(e));
  }
  return out;
}

template <class Key>
Vec3<Key> rho(const BialgebraOps<Key>& ops, const Vec3<Key>& t, int d) {
  Vec3<Key> out;
  for (const auto& [k, c] : t) {
    const auto& [a, b, x] = k;
    long long e = static_cast<long long>(ops.degree(a) + ops.degree(b)) * (ops.degree(x) + d);
    add_to(out, {x, a, b}, c * detail::sign_of(e));
  }
  return out;
}

template <class Key>
Vec3<Key> cyclic_sum(const BialgebraOps<Key>& ops, const Vec3<Key>& t, int d) {
  Vec3<Key> r1 = rho(ops, t, d);
  Vec3<Key> r2 = rho(ops, r1, d);
  Vec3<Key> out = t;
  add_scaled(out, r1, 1);
  add_scaled(out, r2, 1);
  return out;
}

template <class Key>
auto pair_renderer(const BialgebraOps<Key>& ops) {
  return [&ops](const std::pair<Key, Key>& k) {
    return ops.describe(k.first) + " (x) " + ops.describe(k.second);
  };
}

template <class Key>
auto triple_renderer(const BialgebraOps<Key>& ops) {
  return [&ops](const std::tuple<Key, Key, Key>& k) {
    return ops.describe(std::get<0>(k)) + " (x) " + ops.describe(std::get<1>(k)) + " (x) " +
           ops.describe(std::get<2>(k));
  };
}

// tau_d delta(v) = -delta(v)
template <class Key>
void check_coantisymmetry(const BialgebraOps<Key>& ops, const Key& v, CheckReport& r) {
  Vec2<Key> d = ops.delta(v);
  Vec2<Key> res = tau(ops, d, ops.d1);
  add_scaled(res, d, 1);
  detail::report_nonzero<Key>(r, res, "co-antisymmetry " + detail::tuple_text(ops, {v}),
                              pair_renderer(ops));
}

// (1 + rho + rho^2)(delta x 1) delta(v) = 0
template <class Key>
void check_cojacobi(const BialgebraOps<Key>& ops, const Key& v, CheckReport& r) {
  Vec3<Key> t;
  for (const auto& [k, c] : ops.delta(v)) {
    for (const auto& [k2, c2] : ops.delta(k.first)) add_to(t, {k2.first, k2.second, k.second}, c * c2);
  }
  detail::report_nonzero<Key>(r, cyclic_sum(ops, t, ops.d1),
                              "co-Jacobi " + detail::tuple_text(ops, {v}), triple_renderer(ops));
}

// mu tau_d = -mu
template <class Key>
void check_antisymmetry(const BialgebraOps<Key>& ops, const Key& a, const Key& b, CheckReport& r) {
  Vec2<Key> t{{{a, b}, 1}};
  Vec1<Key> res = mu_linear(ops, tau(ops, t, ops.d2));
  add_scaled(res, ops.mu(a, b), 1);
  detail::report_nonzero<Key>(r, res, "antisymmetry " + detail::tuple_text(ops, {a, b}),
                              [&ops](const Key& k) { return ops.describe(k); });
}

// mu (mu x 1)(1 + rho + rho^2)(a x b x c) = 0
template <class Key>
void check_jacobi(const BialgebraOps<Key>& ops, const Key& a, const Key& b, const Key& c,
                  CheckReport& r) {
  Vec3<Key> t{{{a, b, c}, 1}};
  Vec1<Key> res;
  for (const auto& [k, coef] : cyclic_sum(ops, t, ops.d2)) {
    const auto& [x, y, z] = k;
    for (const auto& [w, c1] : ops.mu(x, y)) add_scaled(res, ops.mu(w, z), coef * c1);
  }
  detail::report_nonzero<Key>(r, res, "Jacobi " + detail::tuple_text(ops, {a, b, c}),
                              [&ops](const Key& k) { return ops.describe(k); });
}

template <class Key>
void check_drinfeld(const BialgebraOps<Key>& ops, const Key& a, const Key& b, CheckReport& r) {
  Vec2<Key> lhs;
  for (const auto& [w, c] : ops.mu(a, b)) add_scaled(lhs, ops.delta(w), c);
  Vec2<Key> rhs;
  int da = ops.degree(a), db = ops.degree(b);
  int s = detail::sign_of(static_cast<long long>(da) * db + da + db);
  for (const auto& [k, c] : ops.delta(a)) {
    for (const auto& [w, c2] : ops.mu(k.second, b)) add_to(rhs, {k.first, w}, c * c2);
    for (const auto& [w, c2] : ops.mu(b, k.first)) add_to(rhs, {w, k.second}, c * c2 * s);
  }
  for (const auto& [k, c] : ops.delta(b)) {
    for (const auto& [w, c2] : ops.mu(a, k.first)) add_to(rhs, {w, k.second}, c * c2);
    for (const auto& [w, c2] : ops.mu(k.second, a)) add_to(rhs, {k.first, w}, c * c2 * s);
  }
  add_scaled(lhs, rhs, -1);
  detail::report_nonzero<Key>(r, lhs, "Drinfeld " + detail::tuple_text(ops, {a, b}),
                              pair_renderer(ops));
}

// mu delta = 0. When d1 and d2 differ in parity the identity is automatic in
// degrees of the parity of d1; a failure there is flagged separately.
template <class Key>
void check_involutivity(const BialgebraOps<Key>& ops, const Key& v, CheckReport& r) {
  Vec1<Key> res = mu_linear(ops, ops.delta(v));
  bool automatic = ((ops.d1 - ops.d2) & 1) && (((ops.degree(v) - ops.d1) & 1) == 0);
  std::string tag = automatic ? "involutivity (automatic degree) " : "involutivity ";
  detail::report_nonzero<Key>(r, res, tag + detail::tuple_text(ops, {v}),
                              [&ops](const Key& k) { return ops.describe(k); });
}

// Every axiom on every tuple of `basis`.
template <class Key>
CheckReport check_bialgebra_axioms(const BialgebraOps<Key>& ops, const std::vector<Key>& basis,
                                   bool involutive = true) {
  Stopwatch sw;
  CheckReport r;
  r.name = "lie-bialgebra";
  for (const auto& v : basis) {
    check_coantisymmetry(ops, v, r);
    check_cojacobi(ops, v, r);
    if (involutive) check_involutivity(ops, v, r);
  }
  for (const auto& a : basis) {
    for (const auto& b : basis) {
      check_antisymmetry(ops, a, b, r);
      check_drinfeld(ops, a, b, r);
    }
  }
  for (const auto& a : basis) {
    for (const auto& b : basis) {
      for (const auto& c : basis) check_jacobi(ops, a, b, c, r);
    }
  }
  r.caps["basis"] = static_cast<long long>(basis.size());
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

}  // namespace sft
