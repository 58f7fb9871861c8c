#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/bialgebra.hpp"
#include "sft/report.hpp"
#include "sft/weyl.hpp"

namespace sft {

struct SurfaceSpec {
  int genus = 2;
  int boundary = 0;
};

// Letter 2k is generator k, letter 2k+1 its inverse.
using Letter = std::uint8_t;

inline Letter inverse_letter(Letter l) { return static_cast<Letter>(l ^ 1); }

// Canonical representative of a nontrivial free homotopy class.
class CyclicWord {
 public:
  CyclicWord() = default;

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }

  auto operator<=>(const CyclicWord& other) const {
    if (letters_.size() != other.letters_.size()) return letters_.size() <=> other.letters_.size();
    return letters_ <=> other.letters_;
  }
  bool operator==(const CyclicWord&) const = default;

 private:
  friend class Surface;
  explicit CyclicWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

struct CyclicWordHash {
  std::size_t operator()(const CyclicWord& w) const;
};

class Surface {
 public:
  explicit Surface(SurfaceSpec spec);

  const SurfaceSpec& spec() const { return spec_; }
  bool closed() const { return spec_.boundary == 0; }
  bool torus() const { return closed() && spec_.genus == 1; }
  std::size_t rank() const { return names_.size() / 2; }
  std::size_t letter_count() const { return names_.size(); }

  const std::string& letter_name(Letter l) const { return names_[l]; }
  std::optional<Letter> find_letter(std::string_view name) const;
  // Letters are [aAbBcC] followed by digits; whitespace between them is optional.
  std::vector<Letter> parse(std::string_view text) const;
  std::string render(std::span<const Letter> word, const char* sep = " ") const;
  std::string render(const CyclicWord& w, const char* sep = " ") const {
    return render(w.letters(), sep);
  }

  // Half-edges around the single vertex, counterclockwise.
  const std::vector<Letter>& vertex_order() const { return order_; }
  int vertex_position(Letter l) const { return position_[l]; }
  // Defining relator of a closed surface; empty when boundary > 0.
  const std::vector<Letter>& relator() const { return relator_; }

  // Free and cyclic reduction, then reduction modulo the relator;
  // nullopt for the trivial class.
  std::optional<CyclicWord> reduce(std::span<const Letter> word) const;
  std::optional<CyclicWord> reduce(std::string_view text) const { return reduce(parse(text)); }
  CyclicWord require(std::string_view text) const;
  CyclicWord inverse(const CyclicWord& w) const;

  // Lattice class of a torus word.
  std::pair<long, long> torus_vector(const CyclicWord& w) const;
  std::optional<CyclicWord> torus_class(long m, long n) const;

  // All nontrivial classes whose canonical word has length <= max_len.
  std::vector<CyclicWord> classes(int max_len) const;

  // Largest k with w = u^k.
  int root_power(const CyclicWord& w) const;

 private:
  std::optional<CyclicWord> reduce_closed(std::vector<Letter> w) const;
  bool dehn_shorten(std::vector<Letter>& w) const;

  SurfaceSpec spec_;
  std::vector<std::string> names_;
  std::vector<Letter> order_;
  std::vector<int> position_;
  std::vector<Letter> relator_;
  std::vector<int> relator_position_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Free reduction followed by cyclic reduction of a word in the free group.
std::vector<Letter> free_cyclic_reduce(std::span<const Letter> word);

// Least rotation in letter order.
std::vector<Letter> least_rotation(std::span<const Letter> word);

// Crossing of two strands at the vertex, found on cyclically reduced words.
// Position i is the visit between letters i-1 and i.
struct LinkedPair {
  std::size_t i = 0;
  std::size_t j = 0;
  int sign = 1;
};

// Linked pairs of (x at i, y at j); x and y are cyclically reduced free words.
std::vector<LinkedPair> linked_pairs(const Surface& s, std::span<const Letter> x,
                                     std::span<const Letter> y);
// Ordered pairs of distinct visits of x that cross; both orders are listed.
std::vector<LinkedPair> self_linked_pairs(const Surface& s, std::span<const Letter> x);

// Bracket and cobracket from the ribbon graph of the punctured surface,
// pushed forward to classes of `s`. Valid for every surface.
Vec1<CyclicWord> linked_pair_bracket(const Surface& s, const CyclicWord& x, const CyclicWord& y);
Vec2<CyclicWord> linked_pair_cobracket(const Surface& s, const CyclicWord& x);

// Straight-line bracket on the flat torus: (mq - np) (m+p, n+q).
Vec1<CyclicWord> torus_bracket_oracle(const Surface& torus, long m, long n, long p, long q);

// Goldman bracket and Turaev cobracket; the closed torus uses the oracle.
Vec1<CyclicWord> goldman_bracket(const Surface& s, const CyclicWord& x, const CyclicWord& y);
Vec2<CyclicWord> turaev_cobracket(const Surface& s, const CyclicWord& x);

// mu = bracket (degree 1), delta = cobracket (degree -1), classes of degree -1.
// Results are memoized in the returned closures.
BialgebraOps<CyclicWord> string_bialgebra(const Surface& s);

// ------------------------------------------------------------ multi-strings

// Ordered tuple of classes; the shifted degree of a k-tuple of classes is k(n-3).
using StringTuple = std::vector<CyclicWord>;

class StringSum {
 public:
  using TermMap = std::map<StringTuple, Rational>;

  explicit StringSum(int n = 2) : n_(n) {}
  static StringSum unit(int n = 2);
  static StringSum single(const CyclicWord& w, int n = 2);

  int n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds c * (tuple), reordered to canonical order with sign (sgn rho)^{3-n}.
  void add(StringTuple tuple, const Rational& c);
  StringSum& operator+=(const StringSum& other);
  StringSum& operator-=(const StringSum& other);
  StringSum operator*(const Rational& c) const;
  bool operator==(const StringSum& other) const { return terms_ == other.terms_; }

  std::string to_string(const Surface& s) const;

 private:
  int n_;
  TermMap terms_;
};

int tuple_degree(std::size_t k, int n);

// sigma . tau = (-1)^{i l (3-n)} sigma x tau.
StringSum multi_product(const StringSum& a, const StringSum& b);

// Delta and nabla on one (not necessarily canonical) tuple.
StringSum delta_tuple(const StringTuple& t, const Surface& surface, int n = 2);
StringSum nabla_tuple(const StringTuple& t, const Surface& surface, int n = 2);

StringSum delta_op(const StringSum& s, const Surface& surface);
StringSum nabla_op(const StringSum& s, const Surface& surface);

struct StringCheckOptions {
  int max_word = 3;       // classes used exhaustively
  int pair_word = 3;      // pairs exhaustive up to this length
  int samples = 200;      // random triples and tuples
  std::uint64_t seed = 1;
};

CheckReport check_string_identities(const Surface& surface, const StringCheckOptions& opts);

// Class dictionary for string coefficients s[NAME] in series.
class ClassDictionary {
 public:
  explicit ClassDictionary(const Surface& surface) : surface_(&surface) {}

  const Surface& surface() const { return *surface_; }
  void add(const std::string& name, const CyclicWord& w);
  std::optional<CyclicWord> find(const std::string& name) const;
  // Name for a class: the declared one, else the spaceless word.
  std::string name_of(const CyclicWord& w) const;

 private:
  const Surface* surface_;
  std::map<std::string, CyclicWord> by_name_;
  std::map<CyclicWord, std::string> by_word_;
};

// Coefficient monomial s[c1]...s[ck] <-> multi-string c1 . ... . ck.
StringSum coefficient_to_strings(const Monomial& coeff, const SymbolTable& table,
                                 const ClassDictionary& dict);
GradedSeries strings_to_coefficient(const StringSum& s, const TablePtr& table,
                                    const ClassDictionary& dict);

// (Delta + hbar nabla) e^L = e^L <-H+ - ->H- e^L on the window of ctx.
CheckReport check_master_L(const OrbitSystem& system, const ClassDictionary& dict,
                           const GradedSeries& L, const GradedSeries& Hplus,
                           const GradedSeries& Hminus, const TruncationContext& ctx);

}  // namespace sft
