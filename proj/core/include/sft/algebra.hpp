#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sft {

using Rational = mpq_class;

std::string to_string(const Rational& r);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class TruncationUnderflow : public Error {
 public:
  using Error::Error;
};

// Coefficient symbols sort before q-variables, q before p. The hbar exponent
// lives outside the factor list and is printed last.
enum class SymbolKind : std::uint8_t { Coefficient = 0, Q = 1, P = 2, Hbar = 3 };

struct SymbolKey {
  SymbolKind kind = SymbolKind::Coefficient;
  std::uint32_t index = 0;

  auto operator<=>(const SymbolKey&) const = default;
  bool operator==(const SymbolKey&) const = default;
};

struct GradedSymbol {
  std::string name;
  int degree = 0;
  SymbolKind kind = SymbolKind::Coefficient;
};

class SymbolTable {
 public:
  explicit SymbolTable(int hbar_degree = 0);

  int hbar_degree() const { return hbar_degree_; }

  // Registers q_name and p_name sharing one orbit index.
  std::uint32_t add_orbit(const std::string& name, int q_degree, int p_degree,
                          const Rational& kappa);
  SymbolKey intern_coefficient(const std::string& name, int degree);
  std::optional<SymbolKey> find_coefficient(const std::string& name) const;
  std::optional<std::uint32_t> find_orbit(const std::string& name) const;

  std::size_t orbit_count() const;
  std::size_t coefficient_count() const;

  int degree(SymbolKey key) const;
  const std::string& name(SymbolKey key) const;
  const Rational& kappa(std::uint32_t orbit) const;
  std::string display(SymbolKey key) const;

 private:
  struct OrbitEntry {
    std::string name;
    int q_degree;
    int p_degree;
    Rational kappa;
  };
  int hbar_degree_;
  std::vector<OrbitEntry> orbits_;
  std::unordered_map<std::string, std::uint32_t> orbit_index_;
  std::vector<GradedSymbol> coefficients_;
  std::unordered_map<std::string, std::uint32_t> coefficient_index_;
  mutable std::mutex mutex_;
};

using TablePtr = std::shared_ptr<SymbolTable>;

struct Factor {
  SymbolKey key;
  std::uint32_t exp = 1;

  bool operator==(const Factor&) const = default;
  auto operator<=>(const Factor&) const = default;
};

class Monomial {
 public:
  Monomial() = default;
  Monomial(std::vector<Factor> factors, int hbar) : factors_(std::move(factors)), hbar_(hbar) {}

  const std::vector<Factor>& factors() const { return factors_; }
  int hbar() const { return hbar_; }
  void set_hbar(int h) { hbar_ = h; }
  bool is_unit() const { return factors_.empty() && hbar_ == 0; }

  std::uint32_t exponent(SymbolKey key) const;
  int p_degree() const;
  int q_degree() const;
  int coefficient_length() const;
  bool has_kind(SymbolKind kind) const;

  int degree(const SymbolTable& table) const;
  int parity(const SymbolTable& table) const { return degree(table) & 1; }

  Monomial restricted(SymbolKind kind) const;

  auto operator<=>(const Monomial& other) const = default;
  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<Factor> factors_;
  int hbar_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

struct TruncationContext {
  int max_p_degree = 4;
  int max_hbar = 4;
  int min_hbar = -1;
  int max_coeff_len = 4;

  // true when the monomial survives; throws TruncationUnderflow below min_hbar.
  bool admits(const Monomial& m) const;
  void validate() const;
  static TruncationContext unbounded();
};

int koszul_sign(std::span<const int> degrees, std::span<const std::size_t> permutation);

struct SignedMonomial {
  int sign = 1;
  Monomial monomial;
};

// Stable sort into canonical order with the Koszul sign of the rearrangement.
std::optional<SignedMonomial> normalize(const SymbolTable& table, std::span<const Factor> word,
                                        int hbar = 0);

// Graded-commutative product of two canonical monomials.
std::optional<SignedMonomial> merge(const SymbolTable& table, const Monomial& a, const Monomial& b);

class GradedSeries {
 public:
  using TermMap = std::map<Monomial, Rational>;

  GradedSeries() = default;
  explicit GradedSeries(TablePtr table) : table_(std::move(table)) {}
  GradedSeries(TablePtr table, const Rational& constant);

  static GradedSeries symbol(TablePtr table, SymbolKey key, std::uint32_t exp = 1);
  static GradedSeries hbar_power(TablePtr table, int h);

  const TablePtr& table() const { return table_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Rational& c);
  Rational coefficient(const Monomial& m) const;

  GradedSeries& operator+=(const GradedSeries& other);
  GradedSeries& operator-=(const GradedSeries& other);
  GradedSeries& operator*=(const Rational& c);
  GradedSeries operator-() const;
  friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
  friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
  friend GradedSeries operator*(GradedSeries a, const Rational& c) { return a *= c; }
  friend GradedSeries operator*(const Rational& c, GradedSeries a) { return a *= c; }
  bool operator==(const GradedSeries& other) const { return terms_ == other.terms_; }

  // Multiplies every monomial by hbar^h.
  GradedSeries shift_hbar(int h) const;
  GradedSeries truncated(const TruncationContext& ctx) const;
  GradedSeries filter(const std::function<bool(const Monomial&)>& keep) const;

  std::optional<int> homogeneous_degree() const;
  int min_hbar() const;
  int max_p_degree() const;

  std::string to_string() const;

 private:
  TablePtr table_;
  TermMap terms_;
};

std::string monomial_to_string(const SymbolTable& table, const Monomial& m);

GradedSeries mul(const GradedSeries& a, const GradedSeries& b, const TruncationContext& ctx);

}  // namespace sft
