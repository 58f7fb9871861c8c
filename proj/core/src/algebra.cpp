#include "sft/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace sft {

std::string to_string(const Rational& r) { return r.get_str(); }

SymbolTable::SymbolTable(int hbar_degree) : hbar_degree_(hbar_degree) {}

std::uint32_t SymbolTable::add_orbit(const std::string& name, int q_degree, int p_degree,
                                     const Rational& kappa) {
  std::lock_guard lock(mutex_);
  if (orbit_index_.count(name)) {
    throw PreconditionError("duplicate orbit '" + name + "'");
  }
  if (((q_degree - p_degree) & 1) != 0) {
    throw PreconditionError("orbit '" + name + "': p and q must have equal parity");
  }
  auto idx = static_cast<std::uint32_t>(orbits_.size());
  orbits_.push_back({name, q_degree, p_degree, kappa});
  orbit_index_.emplace(name, idx);
  return idx;
}

SymbolKey SymbolTable::intern_coefficient(const std::string& name, int degree) {
  std::lock_guard lock(mutex_);
  auto it = coefficient_index_.find(name);
  if (it != coefficient_index_.end()) {
    if (coefficients_[it->second].degree != degree) {
      throw PreconditionError("coefficient symbol '" + name + "' re-declared with another degree");
    }
    return {SymbolKind::Coefficient, it->second};
  }
  auto idx = static_cast<std::uint32_t>(coefficients_.size());
  coefficients_.push_back({name, degree, SymbolKind::Coefficient});
  coefficient_index_.emplace(name, idx);
  return {SymbolKind::Coefficient, idx};
}

std::optional<SymbolKey> SymbolTable::find_coefficient(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = coefficient_index_.find(name);
  if (it == coefficient_index_.end()) return std::nullopt;
  return SymbolKey{SymbolKind::Coefficient, it->second};
}

std::optional<std::uint32_t> SymbolTable::find_orbit(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = orbit_index_.find(name);
  if (it == orbit_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SymbolTable::orbit_count() const {
  std::lock_guard lock(mutex_);
  return orbits_.size();
}

std::size_t SymbolTable::coefficient_count() const {
  std::lock_guard lock(mutex_);
  return coefficients_.size();
}

int SymbolTable::degree(SymbolKey key) const {
  switch (key.kind) {
    case SymbolKind::Q:
      return orbits_[key.index].q_degree;
    case SymbolKind::P:
      return orbits_[key.index].p_degree;
    case SymbolKind::Hbar:
      return hbar_degree_;
    case SymbolKind::Coefficient: {
      std::lock_guard lock(mutex_);
      return coefficients_[key.index].degree;
    }
  }
  return 0;
}

const std::string& SymbolTable::name(SymbolKey key) const {
  static const std::string hbar = "h";
  switch (key.kind) {
    case SymbolKind::Q:
    case SymbolKind::P:
      return orbits_[key.index].name;
    case SymbolKind::Hbar:
      return hbar;
    case SymbolKind::Coefficient: {
      std::lock_guard lock(mutex_);
      return coefficients_[key.index].name;
    }
  }
  return hbar;
}

const Rational& SymbolTable::kappa(std::uint32_t orbit) const { return orbits_[orbit].kappa; }

std::string SymbolTable::display(SymbolKey key) const {
  switch (key.kind) {
    case SymbolKind::Q:
      return "q[" + name(key) + "]";
    case SymbolKind::P:
      return "p[" + name(key) + "]";
    case SymbolKind::Hbar:
      return "h";
    case SymbolKind::Coefficient:
      return "s[" + name(key) + "]";
  }
  return "?";
}

std::uint32_t Monomial::exponent(SymbolKey key) const {
  for (const auto& f : factors_) {
    if (f.key == key) return f.exp;
  }
  return 0;
}

int Monomial::p_degree() const {
  int total = 0;
  for (const auto& f : factors_) {
    if (f.key.kind == SymbolKind::P) total += static_cast<int>(f.exp);
  }
  return total;
}

int Monomial::q_degree() const {
  int total = 0;
  for (const auto& f : factors_) {
    if (f.key.kind == SymbolKind::Q) total += static_cast<int>(f.exp);
  }
  return total;
}

int Monomial::coefficient_length() const {
  int total = 0;
  for (const auto& f : factors_) {
    if (f.key.kind == SymbolKind::Coefficient) total += static_cast<int>(f.exp);
  }
  return total;
}

bool Monomial::has_kind(SymbolKind kind) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [kind](const Factor& f) { return f.key.kind == kind; });
}

int Monomial::degree(const SymbolTable& table) const {
  int total = hbar_ * table.hbar_degree();
  for (const auto& f : factors_) total += static_cast<int>(f.exp) * table.degree(f.key);
  return total;
}

Monomial Monomial::restricted(SymbolKind kind) const {
  std::vector<Factor> out;
  for (const auto& f : factors_) {
    if (f.key.kind == kind) out.push_back(f);
  }
  return Monomial(std::move(out), kind == SymbolKind::Hbar ? hbar_ : 0);
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = std::hash<int>{}(m.hbar());
  for (const auto& f : m.factors()) {
    std::size_t v = (static_cast<std::size_t>(f.key.kind) << 56) ^
                    (static_cast<std::size_t>(f.key.index) << 20) ^ f.exp;
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool TruncationContext::admits(const Monomial& m) const {
  if (m.hbar() < min_hbar) {
    throw TruncationUnderflow("hbar exponent " + std::to_string(m.hbar()) +
                              " below context minimum " + std::to_string(min_hbar));
  }
  return m.hbar() <= max_hbar && m.p_degree() <= max_p_degree &&
         m.coefficient_length() <= max_coeff_len;
}

void TruncationContext::validate() const {
  if (max_p_degree < 0 || max_hbar < 0 || max_coeff_len < 0 || min_hbar < -1 ||
      min_hbar > max_hbar) {
    throw PreconditionError("invalid truncation context");
  }
}

TruncationContext TruncationContext::unbounded() {
  return TruncationContext{1 << 20, 1 << 20, -(1 << 20), 1 << 20};
}

int koszul_sign(std::span<const int> degrees, std::span<const std::size_t> permutation) {
  // permutation[i] = source position of the element placed at slot i
  const std::size_t n = permutation.size();
  if (degrees.size() != n) throw PreconditionError("koszul_sign: size mismatch");
  std::vector<bool> seen(n, false);
  for (auto p : permutation) {
    if (p >= n || seen[p]) throw PreconditionError("koszul_sign: not a permutation");
    seen[p] = true;
  }
  int sign = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if ((degrees[permutation[i]] & 1) == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (permutation[j] < permutation[i] && (degrees[permutation[j]] & 1)) sign = -sign;
    }
  }
  return sign;
}

std::optional<SignedMonomial> normalize(const SymbolTable& table, std::span<const Factor> word,
                                        int hbar) {
  std::vector<std::size_t> order(word.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return word[a].key < word[b].key; });

  std::vector<int> parity(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i].key.kind == SymbolKind::Hbar) {
      parity[i] = 0;
    } else {
      parity[i] = static_cast<int>((static_cast<long>(table.degree(word[i].key)) * word[i].exp) & 1);
    }
  }
  // a p before a q of the same orbit needs the Weyl relation, not a sign
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i].key.kind != SymbolKind::P) continue;
    for (std::size_t j = i + 1; j < word.size(); ++j) {
      if (word[j].key.kind == SymbolKind::Q && word[j].key.index == word[i].key.index) {
        throw PreconditionError("normalize: p and q of orbit '" + table.name(word[i].key) +
                                "' out of order; use the star product");
      }
    }
  }

  int sign = koszul_sign(parity, order);
  std::vector<Factor> out;
  for (auto idx : order) {
    const Factor& f = word[idx];
    if (f.exp == 0) continue;
    if (f.key.kind == SymbolKind::Hbar) {
      hbar += static_cast<int>(f.exp);
      continue;
    }
    if (!out.empty() && out.back().key == f.key) {
      out.back().exp += f.exp;
    } else {
      out.push_back(f);
    }
  }
  for (const auto& f : out) {
    if ((table.degree(f.key) & 1) && f.exp > 1) return std::nullopt;
  }
  return SignedMonomial{sign, Monomial(std::move(out), hbar)};
}

std::optional<SignedMonomial> merge(const SymbolTable& table, const Monomial& a, const Monomial& b) {
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::vector<Factor> out;
  out.reserve(fa.size() + fb.size());

  // parity of the suffix of a still waiting to be placed
  std::vector<int> par_a(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    par_a[i] = static_cast<int>((static_cast<long>(table.degree(fa[i].key)) * fa[i].exp) & 1);
  }
  int remaining = 0;
  for (int p : par_a) remaining ^= p;

  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < fa.size() || j < fb.size()) {
    if (j == fb.size() || (i < fa.size() && fa[i].key < fb[j].key)) {
      out.push_back(fa[i]);
      remaining ^= par_a[i];
      ++i;
    } else if (i == fa.size() || fb[j].key < fa[i].key) {
      int pb = static_cast<int>((static_cast<long>(table.degree(fb[j].key)) * fb[j].exp) & 1);
      if (pb && remaining) sign = -sign;
      out.push_back(fb[j]);
      ++j;
    } else {
      if (table.degree(fa[i].key) & 1) return std::nullopt;
      out.push_back({fa[i].key, fa[i].exp + fb[j].exp});
      remaining ^= par_a[i];
      ++i;
      ++j;
    }
  }
  return SignedMonomial{sign, Monomial(std::move(out), a.hbar() + b.hbar())};
}

GradedSeries::GradedSeries(TablePtr table, const Rational& constant) : table_(std::move(table)) {
  if (constant != 0) terms_.emplace(Monomial{}, constant);
}

GradedSeries GradedSeries::symbol(TablePtr table, SymbolKey key, std::uint32_t exp) {
  GradedSeries s(table);
  if (key.kind == SymbolKind::Hbar) {
    s.add_term(Monomial({}, static_cast<int>(exp)), 1);
    return s;
  }
  if ((table->degree(key) & 1) && exp > 1) return s;
  s.add_term(Monomial({Factor{key, exp}}, 0), 1);
  return s;
}

GradedSeries GradedSeries::hbar_power(TablePtr table, int h) {
  GradedSeries s(std::move(table));
  s.add_term(Monomial({}, h), 1);
  return s;
}

void GradedSeries::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational GradedSeries::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& other) {
  if (!table_) table_ = other.table_;
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& other) {
  if (!table_) table_ = other.table_;
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

GradedSeries& GradedSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

GradedSeries GradedSeries::operator-() const {
  GradedSeries out = *this;
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

GradedSeries GradedSeries::shift_hbar(int h) const {
  GradedSeries out(table_);
  for (const auto& [m, c] : terms_) {
    Monomial s = m;
    s.set_hbar(m.hbar() + h);
    out.terms_.emplace_hint(out.terms_.end(), std::move(s), c);
  }
  return out;
}

GradedSeries GradedSeries::truncated(const TruncationContext& ctx) const {
  GradedSeries out(table_);
  for (const auto& [m, c] : terms_) {
    if (ctx.admits(m)) out.terms_.emplace_hint(out.terms_.end(), m, c);
  }
  return out;
}

GradedSeries GradedSeries::filter(const std::function<bool(const Monomial&)>& keep) const {
  GradedSeries out(table_);
  for (const auto& [m, c] : terms_) {
    if (keep(m)) out.terms_.emplace_hint(out.terms_.end(), m, c);
  }
  return out;
}

std::optional<int> GradedSeries::homogeneous_degree() const {
  std::optional<int> deg;
  for (const auto& [m, c] : terms_) {
    int d = m.degree(*table_);
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg;
}

int GradedSeries::min_hbar() const {
  int h = 0;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (first || m.hbar() < h) h = m.hbar();
    first = false;
  }
  return h;
}

int GradedSeries::max_p_degree() const {
  int p = 0;
  for (const auto& [m, c] : terms_) p = std::max(p, m.p_degree());
  return p;
}

std::string monomial_to_string(const SymbolTable& table, const Monomial& m) {
  std::vector<std::string> parts;
  if (m.hbar() < 0) {
    for (int i = 0; i < -m.hbar(); ++i) parts.push_back("(1/h)");
  }
  for (const auto& f : m.factors()) {
    std::string s = table.display(f.key);
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
    parts.push_back(std::move(s));
  }
  if (m.hbar() == 1) parts.push_back("h");
  if (m.hbar() > 1) parts.push_back("h^" + std::to_string(m.hbar()));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out.empty() ? "1" : out;
}

std::string GradedSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (m.factors().empty() && m.hbar() == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << monomial_to_string(*table_, m);
  }
  return os.str();
}

GradedSeries mul(const GradedSeries& a, const GradedSeries& b, const TruncationContext& ctx) {
  if (a.table() && b.table() && a.table() != b.table()) {
    throw PreconditionError("mul: series over different symbol tables");
  }
  GradedSeries out(a.table() ? a.table() : b.table());
  if (a.is_zero() || b.is_zero()) return out;
  const SymbolTable& table = *out.table();
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      auto r = merge(table, ma, mb);
      if (!r || !ctx.admits(r->monomial)) continue;
      out.add_term(r->monomial, r->sign * ca * cb);
    }
  }
  return out;
}

}  // namespace sft
