#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/bialgebra.hpp"
#include "sft/linalg.hpp"
#include "sft/report.hpp"

namespace sft {

// S(V) over a symbol table; generator i is the q-variable of orbit i.
class FreeAlgebra {
 public:
  struct Generator {
    std::string name;
    int degree = 0;
  };

  FreeAlgebra(int hbar_degree, const std::vector<Generator>& generators);
  explicit FreeAlgebra(TablePtr table);

  const TablePtr& table() const { return table_; }
  std::size_t rank() const { return table_->orbit_count(); }
  int degree(std::size_t i) const;
  const std::string& name(std::size_t i) const;
  std::optional<std::size_t> find(const std::string& name) const;

  GradedSeries zero() const { return GradedSeries(table_); }
  GradedSeries one() const { return GradedSeries(table_, 1); }
  GradedSeries generator(std::size_t i) const;
  GradedSeries word(const Monomial& m) const;

  // Basis monomials (hbar-free) of word length <= max_len, shortest first.
  std::vector<Monomial> words(int max_len) const;

 private:
  TablePtr table_;
};

int word_length(const Monomial& m);
// Generators of a word with multiplicity, in canonical order.
std::vector<std::uint32_t> letters(const Monomial& m);
Monomial word_of(std::span<const std::uint32_t> letters);

// Value of a map on an hbar-free basis word.
using WordMap = std::function<GradedSeries(const Monomial&)>;
using LinearMap = std::function<GradedSeries(const GradedSeries&)>;

// hbar-linear extension of a word map; `target` types the zero result.
GradedSeries apply_linear(const WordMap& f, const GradedSeries& x, const TablePtr& target);

// D = sum_k D^k hbar^(k-1), evaluated word by word and cached.
class BvOperator {
 public:
  BvOperator(FreeAlgebra algebra, WordMap values, int max_word, int max_order,
             TruncationContext ctx);

  // Operator hbar^{-1} H acting from the right on q-polynomials.
  static BvOperator from_weyl(const FreeAlgebra& algebra, const GradedSeries& H,
                              const TruncationContext& ctx, int max_word);
  // Leibniz extension of values on generators.
  static BvOperator derivation(const FreeAlgebra& algebra, std::vector<GradedSeries> on_generators,
                               const TruncationContext& ctx, int max_word);
  // Values given on every word up to max_word; other words are unknown.
  static BvOperator from_table(const FreeAlgebra& algebra, std::map<Monomial, GradedSeries> values,
                               const TruncationContext& ctx, int max_word, int max_order);
  static BvOperator zero(const FreeAlgebra& algebra, const TruncationContext& ctx, int max_word);

  const FreeAlgebra& algebra() const { return algebra_; }
  const TruncationContext& context() const { return ctx_; }
  int max_word() const { return max_word_; }
  int max_order() const { return max_order_; }

  GradedSeries on_word(const Monomial& w) const;
  GradedSeries operator()(const GradedSeries& x) const;
  // D^k(x), returned with the hbar power of x unchanged.
  GradedSeries component(int k, const GradedSeries& x) const;
  LinearMap as_map() const;
  LinearMap component_map(int k) const;

 private:
  FreeAlgebra algebra_;
  WordMap values_;
  int max_word_;
  int max_order_;
  TruncationContext ctx_;
  std::shared_ptr<std::unordered_map<Monomial, GradedSeries, MonomialHash>> cache_;
};

// Value requested outside the data an extensional operator carries.
class UnknownValue : public Error {
 public:
  using Error::Error;
};

// Order <= k test on all words up to cap: x -> op(ax) - (-1)^{|a||op|} a op(x)
// must have order <= k-1 for every generator a; order -1 is the zero map.
CheckReport check_order(const FreeAlgebra& algebra, const LinearMap& op, int op_degree, int k,
                        int cap, const TruncationContext& ctx);

// (BV1) DD = 0, (BV2) order of D^k <= k, (BV3) D(1) = 0, all on words up to max_word.
CheckReport check_bv_operator(const BvOperator& D);
// D^1 satisfies the Leibniz rule on pairs of words up to max_word.
CheckReport check_derivation(const FreeAlgebra& algebra, const LinearMap& op, int cap,
                             const TruncationContext& ctx);

GradedSeries bv_bracket(const LinearMap& D, const GradedSeries& a, const GradedSeries& b,
                        const TruncationContext& ctx);

// e^phi on S(V): sum over set partitions of the letters with Koszul signs.
// phi maps words of the source into the target table and satisfies phi(1) = 0.
GradedSeries exp_morphism(const WordMap& phi, const GradedSeries& x, const TablePtr& target,
                          const TruncationContext& ctx);

// e^phi D_A = D_B e^phi together with phi(1) = 0 and the vanishing of phi^k on
// words longer than k, on all source words up to max_word.
CheckReport check_bv_morphism(const WordMap& phi, const BvOperator& DA, const BvOperator& DB);

// beta: S(V) -> K[[hbar]], stored as hbar-only series in the algebra's table.
struct Augmentation {
  std::map<Monomial, GradedSeries> values;

  WordMap as_map(const TablePtr& table) const;
};

// beta(1) = 0, beta^k vanishes beyond length k, and e^beta D = 0 up to max_word.
CheckReport check_augmentation(const BvOperator& D, const Augmentation& beta);

struct AugmentationTwist {
  LinearMap phi;
  LinearMap phi_inverse;
  BvOperator twisted;
};

AugmentationTwist twist_by_augmentation(const BvOperator& D, const Augmentation& beta);

// (D^beta)^2 = 0 and no constant terms, on words up to max_word.
CheckReport check_twisted(const BvOperator& Dbeta);

struct LieBialgebraData {
  std::vector<std::string> names;
  std::vector<int> degrees;
  std::vector<Vec1<std::size_t>> dlin;   // dlin[j] = image of basis vector j
  std::vector<Vec2<std::size_t>> delta;  // delta[j]
  std::map<std::pair<std::size_t, std::size_t>, Vec1<std::size_t>> mu;
  int d1 = -1;
  int d2 = 1;

  std::size_t dim() const { return names.size(); }
  Vec1<std::size_t> bracket(std::size_t a, std::size_t b) const;
  Matrix dlin_matrix() const;
  BialgebraOps<std::size_t> ops() const;
};

LieBialgebraData linearize(const BvOperator& Dbeta, int n);

struct Homology {
  std::map<int, std::size_t> dimensions;  // by degree
  HomologySplitting splitting;
  LieBialgebraData induced;               // delta and mu on the homology basis, dlin = 0
};

Homology homology(const LieBialgebraData& data);

// dlin^2 = 0 and compatibility of delta and mu with dlin.
CheckReport check_descent(const LieBialgebraData& data);
// Passes to homology first when dlin is nonzero.
CheckReport check_lie_bialgebra(const LieBialgebraData& data);

struct McTwist {
  BvOperator twisted;
  CheckReport report;
};

// a has degree 0 and lies in (1/hbar)A[[hbar]]; requires D(e^a) = 0.
McTwist twist_by_mc(const BvOperator& D, const GradedSeries& a);

class NotMaurerCartan : public Error {
 public:
  using Error::Error;
};

// e^a truncated to words up to max_word.
GradedSeries exp_element(const GradedSeries& a, int max_word, const TruncationContext& ctx);

struct MorphismLinearization {
  Matrix map;  // dim V_B x dim V_A
  CheckReport report;
};

MorphismLinearization linearize_morphism(const WordMap& phi, const BvOperator& DA,
                                         const Augmentation& alpha, const BvOperator& DB,
                                         const Augmentation& beta);

}  // namespace sft
