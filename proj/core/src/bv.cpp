#include "sft/bv.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sft/weyl.hpp"

namespace sft {

namespace {

int parity_sign(long long e) { return (e & 1) ? -1 : 1; }

SymbolKey qkey(std::size_t i) { return {SymbolKind::Q, static_cast<std::uint32_t>(i)}; }

Monomial strip_hbar(const Monomial& m) { return Monomial(m.factors(), 0); }

bool is_constant(const Monomial& m) { return m.factors().empty(); }

GradedSeries cap_hbar(const GradedSeries& s, int max_hbar) {
  return s.filter([max_hbar](const Monomial& m) { return m.hbar() <= max_hbar; });
}

GradedSeries hbar_part(const GradedSeries& s, int h) {
  GradedSeries out(s.table());
  for (const auto& [m, c] : s.terms()) {
    if (m.hbar() == h) out.add_term(strip_hbar(m), c);
  }
  return out;
}

GradedSeries length_part(const GradedSeries& s, int len) {
  return s.filter([len](const Monomial& m) { return word_length(m) == len; });
}

TruncationContext widened(TruncationContext ctx, int extra_hbar) {
  ctx.max_hbar += extra_hbar;
  ctx.min_hbar = std::min(ctx.min_hbar, -1) - extra_hbar - 1;
  return ctx;
}

std::vector<int> letter_degrees(const SymbolTable& table, std::span<const std::uint32_t> ls) {
  std::vector<int> out;
  out.reserve(ls.size());
  for (auto l : ls) out.push_back(table.degree(qkey(l)));
  return out;
}

std::string describe_word(const SymbolTable& table, const Monomial& m) {
  return monomial_to_string(table, m);
}

}  // namespace

FreeAlgebra::FreeAlgebra(int hbar_degree, const std::vector<Generator>& generators)
    : table_(std::make_shared<SymbolTable>(hbar_degree)) {
  for (const auto& g : generators) table_->add_orbit(g.name, g.degree, hbar_degree - g.degree, 1);
}

FreeAlgebra::FreeAlgebra(TablePtr table) : table_(std::move(table)) {
  if (!table_) throw PreconditionError("free algebra needs a symbol table");
}

int FreeAlgebra::degree(std::size_t i) const { return table_->degree(qkey(i)); }

const std::string& FreeAlgebra::name(std::size_t i) const { return table_->name(qkey(i)); }

std::optional<std::size_t> FreeAlgebra::find(const std::string& name) const {
  if (auto o = table_->find_orbit(name)) return *o;
  return std::nullopt;
}

GradedSeries FreeAlgebra::generator(std::size_t i) const {
  if (i >= rank()) throw PreconditionError("generator index out of range");
  return GradedSeries::symbol(table_, qkey(i));
}

GradedSeries FreeAlgebra::word(const Monomial& m) const {
  GradedSeries s(table_);
  s.add_term(m, 1);
  return s;
}

std::vector<Monomial> FreeAlgebra::words(int max_len) const {
  std::vector<Monomial> out;
  std::vector<Factor> current;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
    if (i == rank()) {
      out.emplace_back(current, 0);
      return;
    }
    rec(i + 1, remaining);
    int cap = (degree(i) & 1) ? std::min(remaining, 1) : remaining;
    for (int e = 1; e <= cap; ++e) {
      current.push_back({qkey(i), static_cast<std::uint32_t>(e)});
      rec(i + 1, remaining - e);
      current.pop_back();
    }
  };
  if (max_len >= 0) rec(0, max_len);
  std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    int la = word_length(a), lb = word_length(b);
    if (la != lb) return la < lb;
    return a < b;
  });
  return out;
}

int word_length(const Monomial& m) { return m.q_degree(); }

std::vector<std::uint32_t> letters(const Monomial& m) {
  std::vector<std::uint32_t> out;
  for (const auto& f : m.factors()) {
    if (f.key.kind != SymbolKind::Q) throw PreconditionError("word contains a non-generator symbol");
    for (std::uint32_t e = 0; e < f.exp; ++e) out.push_back(f.key.index);
  }
  return out;
}

Monomial word_of(std::span<const std::uint32_t> ls) {
  std::vector<Factor> fs;
  for (auto l : ls) {
    if (!fs.empty() && fs.back().key.index == l) {
      ++fs.back().exp;
    } else {
      fs.push_back({qkey(l), 1});
    }
  }
  return Monomial(std::move(fs), 0);
}

GradedSeries apply_linear(const WordMap& f, const GradedSeries& x, const TablePtr& target) {
  GradedSeries out(target);
  for (const auto& [m, c] : x.terms()) {
    GradedSeries v = f(strip_hbar(m));
    if (m.hbar() != 0) v = v.shift_hbar(m.hbar());
    out += v * c;
  }
  return out;
}

// ---------------------------------------------------------------------------

BvOperator::BvOperator(FreeAlgebra algebra, WordMap values, int max_word, int max_order,
                       TruncationContext ctx)
    : algebra_(std::move(algebra)),
      values_(std::move(values)),
      max_word_(max_word),
      max_order_(max_order),
      ctx_(ctx),
      cache_(std::make_shared<std::unordered_map<Monomial, GradedSeries, MonomialHash>>()) {}

BvOperator BvOperator::from_weyl(const FreeAlgebra& algebra, const GradedSeries& H,
                                 const TruncationContext& ctx, int max_word) {
  if (H.table() && H.table() != algebra.table()) {
    throw PreconditionError("Hamiltonian and algebra use different symbol tables");
  }
  auto h = std::make_shared<GradedSeries>(H);
  FreeAlgebra alg = algebra;
  WordMap values = [h, alg, ctx](const Monomial& w) {
    return act_right(*h, alg.word(w), ctx);
  };
  return BvOperator(algebra, values, max_word, std::max(H.max_p_degree(), 0), ctx);
}

BvOperator BvOperator::derivation(const FreeAlgebra& algebra,
                                  std::vector<GradedSeries> on_generators,
                                  const TruncationContext& ctx, int max_word) {
  if (on_generators.size() != algebra.rank()) {
    throw PreconditionError("derivation needs one value per generator");
  }
  auto vals = std::make_shared<std::vector<GradedSeries>>(std::move(on_generators));
  FreeAlgebra alg = algebra;
  WordMap values = [vals, alg, ctx](const Monomial& w) {
    auto ls = letters(w);
    GradedSeries out = alg.zero();
    int before = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      auto prefix = alg.word(word_of(std::span(ls).subspan(0, i)));
      auto suffix = alg.word(word_of(std::span(ls).subspan(i + 1)));
      auto term = mul(mul(prefix, (*vals)[ls[i]], ctx), suffix, ctx);
      out += term * parity_sign(before);
      before += alg.degree(ls[i]);
    }
    return out;
  };
  return BvOperator(algebra, values, max_word, 1, ctx);
}

BvOperator BvOperator::from_table(const FreeAlgebra& algebra,
                                  std::map<Monomial, GradedSeries> values, const TruncationContext& ctx,
                                  int max_word, int max_order) {
  auto table = std::make_shared<std::map<Monomial, GradedSeries>>(std::move(values));
  FreeAlgebra alg = algebra;
  WordMap f = [table, alg, max_word](const Monomial& w) {
    auto it = table->find(w);
    if (it != table->end()) return it->second;
    if (word_length(w) <= max_word) return alg.zero();
    throw UnknownValue("operator value unknown on " + describe_word(*alg.table(), w));
  };
  return BvOperator(algebra, f, max_word, max_order, ctx);
}

BvOperator BvOperator::zero(const FreeAlgebra& algebra, const TruncationContext& ctx, int max_word) {
  FreeAlgebra alg = algebra;
  return BvOperator(algebra, [alg](const Monomial&) { return alg.zero(); }, max_word, 0, ctx);
}

GradedSeries BvOperator::on_word(const Monomial& w) const {
  auto it = cache_->find(w);
  if (it != cache_->end()) return it->second;
  GradedSeries v = cap_hbar(values_(w), ctx_.max_hbar);
  cache_->emplace(w, v);
  return v;
}

GradedSeries BvOperator::operator()(const GradedSeries& x) const {
  return cap_hbar(apply_linear([this](const Monomial& w) { return on_word(w); }, x, algebra_.table()),
                  ctx_.max_hbar);
}

GradedSeries BvOperator::component(int k, const GradedSeries& x) const {
  return apply_linear([this, k](const Monomial& w) { return hbar_part(on_word(w), k - 1); }, x,
                      algebra_.table());
}

LinearMap BvOperator::as_map() const {
  BvOperator self = *this;
  return [self](const GradedSeries& x) { return self(x); };
}

LinearMap BvOperator::component_map(int k) const {
  BvOperator self = *this;
  return [self, k](const GradedSeries& x) { return self.component(k, x); };
}

// ---------------------------------------------------------------------------

CheckReport check_order(const FreeAlgebra& algebra, const LinearMap& op, int op_degree, int k,
                        int cap, const TruncationContext& ctx) {
  Stopwatch sw;
  CheckReport r;
  r.name = "order<=" + std::to_string(k);
  r.caps["max-word-len"] = cap;
  if (k < -1) throw PreconditionError("order must be at least -1");
  if (cap < k + 1) {
    r.inconclusive("max-word-len", "word cap must be at least order + 1");
    r.elapsed_ms = sw.elapsed_ms();
    return r;
  }
  const std::size_t arity = static_cast<std::size_t>(k + 1);
  auto xs = algebra.words(cap - k - 1);
  std::vector<std::size_t> tuple(arity, 0);
  const std::size_t rank = algebra.rank();
  std::function<GradedSeries(std::size_t, const GradedSeries&)> nest =
      [&](std::size_t j, const GradedSeries& x) -> GradedSeries {
    if (j == 0) return op(x);
    auto a = algebra.generator(tuple[j - 1]);
    int inner = op_degree;
    for (std::size_t i = 0; i + 1 < j; ++i) inner += algebra.degree(tuple[i]);
    int s = parity_sign(static_cast<long long>(inner) * algebra.degree(tuple[j - 1]));
    return nest(j - 1, mul(a, x, ctx)) - mul(a, nest(j - 1, x), ctx) * s;
  };
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos == arity) {
      for (const auto& xw : xs) {
        auto res = nest(arity, algebra.word(xw));
        if (res.is_zero()) continue;
        std::ostringstream item;
        item << "x=" << describe_word(*algebra.table(), xw) << " a=(";
        for (std::size_t i = 0; i < arity; ++i) item << (i ? "," : "") << algebra.name(tuple[i]);
        item << ") -> " << describe_word(*algebra.table(), res.terms().begin()->first);
        r.fail(item.str(), res.terms().begin()->second);
      }
      return;
    }
    if (rank == 0) return;
    for (std::size_t g = from; g < rank; ++g) {
      tuple[pos] = g;
      rec(pos + 1, g);
    }
  };
  rec(0, 0);
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

CheckReport check_derivation(const FreeAlgebra& algebra, const LinearMap& op, int cap,
                             const TruncationContext& ctx) {
  Stopwatch sw;
  CheckReport r;
  r.name = "derivation";
  r.caps["max-word-len"] = cap;
  auto ws = algebra.words(cap);
  for (const auto& x : ws) {
    for (const auto& y : ws) {
      if (word_length(x) + word_length(y) > cap) continue;
      auto X = algebra.word(x), Y = algebra.word(y);
      int dx = x.degree(*algebra.table());
      auto res = op(mul(X, Y, ctx)) - mul(op(X), Y, ctx) - mul(X, op(Y), ctx) * parity_sign(dx);
      for (const auto& [m, c] : res.terms()) {
        r.fail(describe_word(*algebra.table(), x) + " * " + describe_word(*algebra.table(), y) +
                   " at " + describe_word(*algebra.table(), m),
               c);
      }
    }
  }
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

CheckReport check_bv_operator(const BvOperator& D) {
  Stopwatch sw;
  CheckReport r;
  r.name = "bv-operator";
  r.set_caps(D.context());
  r.caps["max-word-len"] = D.max_word();
  const auto& alg = D.algebra();
  const auto& table = *alg.table();
  auto ws = alg.words(D.max_word());

  auto unit = D(alg.one());
  for (const auto& [m, c] : unit.terms()) r.fail("D(1) at " + describe_word(table, m), c);

  int top = -1;
  for (const auto& w : ws) {
    auto v = D.on_word(w);
    int expected = w.degree(table) - 1;
    for (const auto& [m, c] : v.terms()) {
      if (m.hbar() < 0) r.fail("D^0 component on " + describe_word(table, w) + " at " +
                                   describe_word(table, m), c);
      if (m.degree(table) != expected) {
        r.fail("degree of D(" + describe_word(table, w) + ") at " + describe_word(table, m), c,
               "expected degree " + std::to_string(expected));
      }
      top = std::max(top, m.hbar() + 1);
    }
    try {
      auto dd = D(v);
      for (const auto& [m, c] : dd.terms()) r.fail("DD(" + describe_word(table, w) + ") at " +
                                                       describe_word(table, m), c);
    } catch (const UnknownValue& e) {
      r.inconclusive("max-word-len", e.what());
    }
  }
  for (int k = 1; k <= top; ++k) {
    int deg = -1 - (k - 1) * table.hbar_degree();
    int bound = std::min(k, D.max_order());
    auto sub = check_order(alg, D.component_map(k), deg, bound, D.max_word(), D.context());
    sub.name = "order(D^" + std::to_string(k) + ")<=" + std::to_string(bound);
    r.absorb(sub);
  }
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

GradedSeries bv_bracket(const LinearMap& D, const GradedSeries& a, const GradedSeries& b,
                        const TruncationContext& ctx) {
  auto da = a.homogeneous_degree();
  if (!a.is_zero() && !da) throw PreconditionError("bracket needs a homogeneous first argument");
  if (a.is_zero() || b.is_zero()) return GradedSeries(a.table() ? a.table() : b.table());
  int s = parity_sign(*da);
  return (D(mul(a, b, ctx)) - mul(D(a), b, ctx) - mul(a, D(b), ctx) * s) * s;
}

// ---------------------------------------------------------------------------

namespace {

struct PartitionSum {
  const WordMap& phi;
  const TablePtr& target;
  const TruncationContext& ctx;
  const std::vector<std::uint32_t>& ls;
  std::vector<int> degrees;
  GradedSeries total;

  void run() {
    std::vector<bool> used(ls.size(), false);
    std::vector<std::size_t> order;
    recurse(used, order, GradedSeries(target, 1));
  }

  void recurse(std::vector<bool>& used, std::vector<std::size_t>& order, const GradedSeries& acc) {
    std::size_t first = 0;
    while (first < ls.size() && used[first]) ++first;
    if (first == ls.size()) {
      total += acc * koszul_sign(degrees, order);
      return;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = first + 1; i < ls.size(); ++i) {
      if (!used[i]) rest.push_back(i);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
      std::vector<std::size_t> block = {first};
      for (std::size_t j = 0; j < rest.size(); ++j) {
        if (mask >> j & 1) block.push_back(rest[j]);
      }
      std::vector<std::uint32_t> bl;
      for (auto i : block) bl.push_back(ls[i]);
      GradedSeries v = phi(word_of(bl));
      if (v.is_zero()) continue;
      for (auto i : block) used[i] = true;
      std::size_t mark = order.size();
      order.insert(order.end(), block.begin(), block.end());
      recurse(used, order, mul(acc, v, ctx));
      order.resize(mark);
      for (auto i : block) used[i] = false;
    }
  }
};

}  // namespace

GradedSeries exp_morphism(const WordMap& phi, const GradedSeries& x, const TablePtr& target,
                          const TruncationContext& ctx) {
  const SymbolTable& source = *x.table();
  WordMap on_word = [&](const Monomial& w) {
    auto ls = letters(w);
    PartitionSum ps{phi, target, ctx, ls, letter_degrees(source, ls), GradedSeries(target)};
    ps.run();
    return ps.total;
  };
  return cap_hbar(apply_linear(on_word, x, target), ctx.max_hbar);
}

CheckReport check_bv_morphism(const WordMap& phi, const BvOperator& DA, const BvOperator& DB) {
  Stopwatch sw;
  CheckReport r;
  r.name = "bv-morphism";
  r.set_caps(DA.context());
  r.caps["max-word-len"] = DA.max_word();
  const auto& A = DA.algebra();
  const auto& target = DB.algebra().table();
  const auto& ctx = DA.context();

  const auto at_unit = phi(Monomial{});

  for (const auto& [m, c] : at_unit.terms()) {
    r.fail("phi(1) at " + describe_word(*target, m), c);
  }
  auto ws = A.words(DA.max_word());
  for (const auto& w : ws) {
    int len = word_length(w);
    if (len == 0) continue;
    const auto value = phi(w);
    for (const auto& [m, c] : value.terms()) {
      if (m.hbar() < len - 1) {
        r.fail("phi^" + std::to_string(m.hbar() + 1) + " on longer word " +
                   describe_word(*A.table(), w),
               c);
      }
    }
  }
  for (const auto& w : ws) {
    try {
      auto lhs = exp_morphism(phi, DA(A.word(w)), target, ctx);
      auto rhs = DB(exp_morphism(phi, A.word(w), target, ctx));
      auto res = (lhs - rhs).truncated(ctx);
      for (const auto& [m, c] : res.terms()) {
        r.fail("e^phi D_A - D_B e^phi on " + describe_word(*A.table(), w) + " at " +
                   describe_word(*target, m),
               c);
      }
    } catch (const UnknownValue& e) {
      r.inconclusive("max-word-len", e.what());
    }
  }
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

WordMap Augmentation::as_map(const TablePtr& table) const {
  auto vals = std::make_shared<std::map<Monomial, GradedSeries>>(values);
  return [vals, table](const Monomial& w) {
    auto it = vals->find(w);
    if (it == vals->end()) return GradedSeries(table);
    return it->second;
  };
}

CheckReport check_augmentation(const BvOperator& D, const Augmentation& beta) {
  for (const auto& [w, v] : beta.values) {
    for (const auto& [m, c] : v.terms()) {
      if (!is_constant(m)) throw PreconditionError("augmentation values must be hbar-series");
    }
  }
  auto r = check_bv_morphism(beta.as_map(D.algebra().table()), D,
                             BvOperator::zero(D.algebra(), D.context(), D.max_word()));
  r.name = "augmentation";
  return r;
}

// ---------------------------------------------------------------------------

AugmentationTwist twist_by_augmentation(const BvOperator& D, const Augmentation& beta) {
  const FreeAlgebra alg = D.algebra();
  const TablePtr table = alg.table();
  const TruncationContext ctx = D.context();
  WordMap b = beta.as_map(table);
  if (!b(Monomial{}).is_zero()) throw PreconditionError("augmentation must vanish on 1");
  auto exp_cache = std::make_shared<std::map<Monomial, GradedSeries>>();
  auto exp_beta = [b, table, ctx, exp_cache, alg](const Monomial& w) {
    auto it = exp_cache->find(w);
    if (it != exp_cache->end()) return it->second;
    auto v = exp_morphism(b, alg.word(w), table, ctx);
    exp_cache->emplace(w, v);
    return v;
  };
  // N = Phi - id; strictly lowers word length.
  WordMap N = [exp_beta, table, ctx, alg](const Monomial& w) {
    auto ls = letters(w);
    auto degs = letter_degrees(*table, ls);
    GradedSeries out(table);
    const std::size_t n = ls.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::size_t> perm;
      std::vector<std::uint32_t> in, outl;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          perm.push_back(i);
          in.push_back(ls[i]);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1)) {
          perm.push_back(i);
          outl.push_back(ls[i]);
        }
      }
      auto e = exp_beta(word_of(in));
      if (e.is_zero()) continue;
      out += mul(e, alg.word(word_of(outl)), ctx) * koszul_sign(degs, perm);
    }
    return out;
  };
  LinearMap phi = [N, table, ctx](const GradedSeries& x) {
    return (x + apply_linear(N, x, table)).truncated(ctx);
  };
  LinearMap phi_inv = [N, table, ctx](const GradedSeries& x) {
    GradedSeries total(table);
    GradedSeries term = x;
    while (!term.is_zero()) {
      total += term;
      term = -apply_linear(N, term, table).truncated(ctx);
    }
    return total;
  };
  BvOperator Dc = D;
  WordMap twisted = [phi, phi_inv, Dc, alg](const Monomial& w) {
    auto v = phi(Dc(phi_inv(alg.word(w))));
    for (const auto& [m, c] : v.terms()) {
      if (is_constant(m)) {
        throw PreconditionError("twisted operator has a constant term on " +
                                describe_word(*alg.table(), w) + " (coefficient " +
                                to_string(c) + "): not an augmentation");
      }
    }
    return v;
  };
  BvOperator Dbeta(alg, twisted, D.max_word(), D.max_order(), ctx);
  for (const auto& w : alg.words(D.max_word())) Dbeta.on_word(w);
  return {phi, phi_inv, Dbeta};
}

CheckReport check_twisted(const BvOperator& Dbeta) {
  auto r = check_bv_operator(Dbeta);
  r.name = "twisted-operator";
  for (const auto& w : Dbeta.algebra().words(Dbeta.max_word())) {
    const auto value = Dbeta.on_word(w);
    for (const auto& [m, c] : value.terms()) {
      if (is_constant(m)) r.fail("constant term on " + describe_word(*Dbeta.algebra().table(), w), c);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

Vec1<std::size_t> LieBialgebraData::bracket(std::size_t a, std::size_t b) const {
  auto it = mu.find({a, b});
  if (it == mu.end()) return {};
  return it->second;
}

Matrix LieBialgebraData::dlin_matrix() const {
  Matrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    for (const auto& [i, c] : dlin[j]) m(i, j) = c;
  }
  return m;
}

BialgebraOps<std::size_t> LieBialgebraData::ops() const {
  BialgebraOps<std::size_t> o;
  o.d1 = d1;
  o.d2 = d2;
  o.degree = [this](const std::size_t& i) { return degrees[i]; };
  o.mu = [this](const std::size_t& a, const std::size_t& b) { return bracket(a, b); };
  o.delta = [this](const std::size_t& i) { return delta[i]; };
  o.describe = [this](const std::size_t& i) { return names[i]; };
  return o;
}

LieBialgebraData linearize(const BvOperator& Dbeta, int n) {
  const auto& alg = Dbeta.algebra();
  const auto& table = *alg.table();
  const std::size_t r = alg.rank();
  LieBialgebraData out;
  out.d1 = -1;
  out.d2 = -2 * (n - 3) - 1;
  out.dlin.resize(r);
  out.delta.resize(r);
  for (std::size_t j = 0; j < r; ++j) {
    out.names.push_back(alg.name(j));
    out.degrees.push_back(alg.degree(j));
  }
  for (std::size_t j = 0; j < r; ++j) {
    auto d = Dbeta.component(1, alg.generator(j));
    for (const auto& [m, c] : d.terms()) {
      if (is_constant(m)) throw PreconditionError("linearization needs an operator without constant terms");
      auto ls = letters(m);
      if (ls.size() == 1) {
        add_to(out.dlin[j], ls[0], c);
      } else if (ls.size() == 2) {
        int da = out.degrees[ls[0]], db = out.degrees[ls[1]];
        add_to(out.delta[j], {ls[0], ls[1]}, c * parity_sign(da));
        add_to(out.delta[j], {ls[1], ls[0]}, c * parity_sign(static_cast<long long>(da) * db + db));
      }
    }
  }
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      auto prod = mul(alg.generator(a), alg.generator(b), Dbeta.context());
      if (prod.is_zero()) continue;
      auto v = length_part(Dbeta.component(2, prod), 1);
      Vec1<std::size_t> img;
      for (const auto& [m, c] : v.terms()) add_to(img, letters(m)[0], c * parity_sign(out.degrees[a]));
      if (!img.empty()) out.mu[{a, b}] = std::move(img);
    }
  }
  (void)table;
  return out;
}

Homology homology(const LieBialgebraData& data) {
  Homology h;
  const std::size_t n = data.dim();
  Matrix d = data.dlin_matrix();
  if (d.is_zero()) {
    h.splitting.projection = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> e(n);
      e[i] = 1;
      h.splitting.representatives.push_back(std::move(e));
    }
  } else {
    h.splitting = homology_splitting(d);
  }
  const auto& reps = h.splitting.representatives;
  const Matrix& pi = h.splitting.projection;
  LieBialgebraData& ind = h.induced;
  ind.d1 = data.d1;
  ind.d2 = data.d2;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    std::optional<int> deg;
    std::string name;
    for (std::size_t i = 0; i < n; ++i) {
      if (reps[k][i] == 0) continue;
      if (deg && *deg != data.degrees[i]) throw PreconditionError("inhomogeneous homology representative");
      deg = data.degrees[i];
      if (name.empty()) name = "[" + data.names[i] + "]";
    }
    ind.names.push_back(name);
    ind.degrees.push_back(*deg);
    ++h.dimensions[*deg];
  }
  const std::size_t m = reps.size();
  auto project = [&](const Vec1<std::size_t>& v) {
    Vec1<std::size_t> out;
    for (std::size_t k = 0; k < m; ++k) {
      Rational s = 0;
      for (const auto& [i, c] : v) s += pi(k, i) * c;
      add_to(out, k, s);
    }
    return out;
  };
  ind.dlin.assign(m, {});
  ind.delta.assign(m, {});
  for (std::size_t k = 0; k < m; ++k) {
    Vec2<std::size_t> dz;
    for (std::size_t i = 0; i < n; ++i) {
      if (reps[k][i] != 0) add_scaled(dz, data.delta[i], reps[k][i]);
    }
    for (const auto& [pr, c] : dz) {
      Vec1<std::size_t> e1{{pr.first, 1}}, e2{{pr.second, 1}};
      for (const auto& [x, cx] : project(e1)) {
        for (const auto& [y, cy] : project(e2)) add_to(ind.delta[k], {x, y}, c * cx * cy);
      }
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      Vec1<std::size_t> acc;
      for (std::size_t i = 0; i < n; ++i) {
        if (reps[k][i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (reps[l][j] == 0) continue;
          add_scaled(acc, data.bracket(i, j), reps[k][i] * reps[l][j]);
        }
      }
      auto img = project(acc);
      if (!img.empty()) ind.mu[{k, l}] = std::move(img);
    }
  }
  return h;
}

CheckReport check_descent(const LieBialgebraData& data) {
  CheckReport r;
  r.name = "descent";
  const std::size_t n = data.dim();
  auto d = [&](std::size_t i) { return data.dlin[i]; };
  auto render1 = [&](std::size_t i) { return data.names[i]; };
  for (std::size_t j = 0; j < n; ++j) {
    Vec1<std::size_t> dd;
    for (const auto& [i, c] : d(j)) add_scaled(dd, d(i), c);
    for (const auto& [i, c] : dd) r.fail("dlin^2(" + data.names[j] + ") at " + render1(i), c);
  }
  // delta d = (d x 1) delta - (iota x d) delta
  for (std::size_t v = 0; v < n; ++v) {
    Vec2<std::size_t> res;
    for (const auto& [i, c] : d(v)) add_scaled(res, data.delta[i], c);
    for (const auto& [pr, c] : data.delta[v]) {
      for (const auto& [i, c2] : d(pr.first)) add_to(res, {i, pr.second}, -c * c2);
      for (const auto& [i, c2] : d(pr.second)) {
        add_to(res, {pr.first, i}, c * c2 * parity_sign(data.degrees[pr.first]));
      }
    }
    for (const auto& [pr, c] : res) {
      r.fail("delta chain map at " + data.names[v] + " -> " + data.names[pr.first] + " (x) " +
                 data.names[pr.second],
             c);
    }
  }
  // d mu(a,b) = mu(da,b) - (-1)^{|a|} mu(a,db)
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Vec1<std::size_t> res;
      for (const auto& [i, c] : data.bracket(a, b)) add_scaled(res, d(i), c);
      for (const auto& [i, c] : d(a)) add_scaled(res, data.bracket(i, b), -c);
      for (const auto& [i, c] : d(b)) add_scaled(res, data.bracket(a, i), c * parity_sign(data.degrees[a]));
      for (const auto& [i, c] : res) {
        r.fail("mu chain map at (" + data.names[a] + ", " + data.names[b] + ") -> " + render1(i), c);
      }
    }
  }
  return r;
}

CheckReport check_lie_bialgebra(const LieBialgebraData& data) {
  Stopwatch sw;
  CheckReport r;
  r.name = "lie-bialgebra";
  auto descent = check_descent(data);
  r.absorb(descent);
  if (!descent.passed()) {
    r.elapsed_ms = sw.elapsed_ms();
    return r;
  }
  bool trivial = std::all_of(data.dlin.begin(), data.dlin.end(), [](const auto& v) { return v.empty(); });
  LieBialgebraData on_h = trivial ? data : homology(data).induced;
  std::vector<std::size_t> basis(on_h.dim());
  std::iota(basis.begin(), basis.end(), 0);
  auto axioms = check_bialgebra_axioms(on_h.ops(), basis);
  axioms.name = "axioms";
  r.absorb(axioms);
  r.caps["dim-homology"] = static_cast<long long>(on_h.dim());
  r.elapsed_ms = sw.elapsed_ms();
  return r;
}

// ---------------------------------------------------------------------------

GradedSeries exp_element(const GradedSeries& a, int max_word, const TruncationContext& ctx) {
  const TablePtr& table = a.table();
  for (const auto& [m, c] : a.terms()) {
    if (m.hbar() + word_length(m) < 0 || (m.hbar() + word_length(m) == 0 && word_length(m) == 0)) {
      throw PreconditionError("exponent has a term of non-positive weight");
    }
    if (is_constant(m) && m.hbar() <= 0) throw PreconditionError("exponent has a constant term");
  }
  const int max_weight = ctx.max_hbar + max_word;
  auto keep = [&](const Monomial& m) {
    return word_length(m) <= max_word && m.hbar() + word_length(m) <= max_weight;
  };
  TruncationContext wide = widened(ctx, max_word);
  GradedSeries total(table, 1);
  GradedSeries power(table, 1);
  for (int k = 1;; ++k) {
    power = (mul(power, a, wide) * Rational(1, k)).filter(keep);
    if (power.is_zero()) break;
    total += power;
  }
  return total.filter([&](const Monomial& m) { return m.hbar() <= ctx.max_hbar; });
}

McTwist twist_by_mc(const BvOperator& D, const GradedSeries& a) {
  Stopwatch sw;
  const FreeAlgebra alg = D.algebra();
  const TablePtr table = alg.table();
  if (a.table() && a.table() != table) throw PreconditionError("element lives in another algebra");
  if (!a.is_zero()) {
    auto deg = a.homogeneous_degree();
    if (!deg || *deg != 0) throw PreconditionError("Maurer-Cartan element must have degree 0");
    if (a.min_hbar() < -1) throw PreconditionError("Maurer-Cartan element must lie in (1/h)A[[h]]");
  }
  const int K = D.max_order();
  TruncationContext out_ctx = D.context();
  out_ctx.max_hbar -= K;
  McTwist result{D, {}};
  result.report.name = "maurer-cartan";
  result.report.set_caps(out_ctx);
  if (out_ctx.max_hbar < 0) {
    result.report.inconclusive("max-hbar", "twisting needs hbar headroom equal to the operator order");
    return result;
  }
  TruncationContext wide = widened(D.context(), K);
  auto powers = std::make_shared<std::vector<GradedSeries>>();
  powers->push_back(alg.one());
  for (int i = 1; i <= K; ++i) powers->push_back(mul(powers->back(), a, wide));
  std::vector<Rational> inv_fact(K + 1, 1);
  for (int i = 1; i <= K; ++i) inv_fact[i] = inv_fact[i - 1] / i;
  BvOperator Dc = D;
  auto apply = [Dc, powers, inv_fact, K, wide, out_ctx, table](const GradedSeries& x) {
    GradedSeries out(table);
    for (int m = 0; m <= K; ++m) {
      auto inner = Dc(mul((*powers)[m], x, wide));
      for (int i = 0; i + m <= K; ++i) {
        out += mul((*powers)[i], inner, wide) * (inv_fact[i] * inv_fact[m] * parity_sign(i));
      }
    }
    return out.filter([&](const Monomial& mm) { return mm.hbar() <= out_ctx.max_hbar; });
  };
  auto unit = apply(alg.one());
  if (!unit.is_zero()) {
    const auto& [m, c] = *unit.terms().begin();
    throw NotMaurerCartan("D(e^a) != 0: coefficient " + to_string(c) + " at " +
                          describe_word(*table, m));
  }
  WordMap values = [apply, alg](const Monomial& w) { return apply(alg.word(w)); };
  result.twisted = BvOperator(alg, values, D.max_word(), K, out_ctx);
  if (K <= 2) {
    auto d2 = D.component_map(2);
    auto quad = D(a) + bv_bracket(d2, a, a, wide).shift_hbar(1) * Rational(1, 2);
    quad = quad.filter([&](const Monomial& mm) { return mm.hbar() <= out_ctx.max_hbar; });
    if (!quad.is_zero()) {
      const auto& [m, c] = *quad.terms().begin();
      result.report.fail("quadratic Maurer-Cartan form at " + describe_word(*table, m), c,
                         "e^{-a}D(e^a) vanishes but Da + (h/2)[a,a] does not");
    }
    result.report.notes.push_back("quadratic form cross-checked");
  }
  auto sub = check_bv_operator(result.twisted);
  sub.name = "twisted";
  result.report.absorb(sub);
  result.report.elapsed_ms = sw.elapsed_ms();
  return result;
}

// ---------------------------------------------------------------------------

MorphismLinearization linearize_morphism(const WordMap& phi, const BvOperator& DA,
                                         const Augmentation& alpha, const BvOperator& DB,
                                         const Augmentation& beta) {
  MorphismLinearization out;
  out.report.name = "linearized-morphism";
  const auto& A = DA.algebra();
  const auto& B = DB.algebra();
  const auto& ctx = DA.context();
  out.report.set_caps(ctx);
  out.report.caps["max-word-len"] = DA.max_word();
  WordMap a_map = alpha.as_map(A.table());
  WordMap b_map = beta.as_map(B.table());
  auto hbar_terms = [](const GradedSeries& s) {
    std::map<int, Rational> t;
    for (const auto& [m, c] : s.terms()) {
      if (!is_constant(m)) throw PreconditionError("augmentation produced a non-scalar value");
      t[m.hbar()] += c;
    }
    return t;
  };
  for (const auto& w : A.words(DA.max_word())) {
    auto lhs = hbar_terms(exp_morphism(a_map, A.word(w), A.table(), ctx));
    auto rhs = hbar_terms(exp_morphism(b_map, exp_morphism(phi, A.word(w), B.table(), ctx),
                                       B.table(), ctx));
    for (auto& [h, c] : rhs) lhs[h] -= c;
    for (const auto& [h, c] : lhs) {
      if (c != 0) {
        out.report.fail("e^alpha - e^beta e^phi on " + describe_word(*A.table(), w) + " at h^" +
                            std::to_string(h),
                        c);
      }
    }
  }
  auto tA = twist_by_augmentation(DA, alpha);
  auto tB = twist_by_augmentation(DB, beta);
  out.map = Matrix(B.rank(), A.rank());
  for (std::size_t j = 0; j < A.rank(); ++j) {
    auto x = tA.phi_inverse(A.generator(j));
    auto y = tB.phi(exp_morphism(phi, x, B.table(), ctx));
    for (const auto& [m, c] : y.terms()) {
      if (m.hbar() == 0 && word_length(m) == 1) out.map(letters(m)[0], j) += c;
    }
  }
  auto dA = linearize(tA.twisted, 3).dlin_matrix();
  auto dB = linearize(tB.twisted, 3).dlin_matrix();
  Matrix lhs = dB * out.map;
  Matrix rhs = out.map * dA;
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      if (lhs(i, j) != rhs(i, j)) {
        out.report.fail("chain map at " + A.name(j) + " -> " + B.name(i), lhs(i, j) - rhs(i, j));
      }
    }
  }
  return out;
}

}  // namespace sft
