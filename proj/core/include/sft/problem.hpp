#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/bv.hpp"
#include "sft/surface.hpp"
#include "sft/weyl.hpp"

namespace sft {

// 1-based line and column of the first character.
struct SourceSpan {
  int line = 1;
  int column = 1;

  std::string to_string() const;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, Undefined, Grading, Semantic };

  ParseError(Kind kind, SourceSpan span, const std::string& message);

  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  Kind kind_;
  SourceSpan span_;
  std::string message_;
};

std::string parse_error_kind_name(ParseError::Kind k);

// Expression tree of a series declaration; evaluated with the Weyl product.
struct Expr {
  enum class Op { Number, Hbar, InverseHbar, Q, P, String, Add, Sub, Neg, Mul, Pow };

  Op op = Op::Number;
  Rational value;
  std::string name;
  unsigned exponent = 1;
  std::vector<std::unique_ptr<Expr>> args;
  SourceSpan span;
};

struct HeaderDecl {
  int n = 2;
  std::optional<int> max_p_degree;
  std::optional<int> max_hbar;
  std::optional<int> max_coeff_len;
  std::optional<int> max_word_len;
  SourceSpan span;
  bool present = false;
};

struct OrbitDecl {
  Orbit orbit;
  SourceSpan span;
};

struct SurfaceDecl {
  SurfaceSpec spec;
  SourceSpan span;
};

struct ClassDecl {
  std::string name;
  CyclicWord word;
  SourceSpan span;
};

struct SeriesDecl {
  std::string name;
  std::optional<int> degree;
  std::shared_ptr<const Expr> expr;
  GradedSeries value;
  SourceSpan span;
};

struct AugEntry {
  Monomial word;
  GradedSeries value;
  SourceSpan span;
};

struct AugDecl {
  std::string name;
  std::vector<AugEntry> entries;
  SourceSpan span;

  Augmentation augmentation() const;
};

struct ProblemFile {
  HeaderDecl header;
  std::vector<OrbitDecl> orbits;
  std::optional<SurfaceDecl> surface_decl;
  std::vector<ClassDecl> classes;
  std::vector<SeriesDecl> series;
  std::vector<AugDecl> augmentations;

  std::shared_ptr<OrbitSystem> system;
  std::shared_ptr<Surface> surface;
  std::shared_ptr<ClassDictionary> dictionary;

  const SeriesDecl* find_series(const std::string& name) const;
  const AugDecl* find_augmentation(const std::string& name) const;
  // Series by name, or zero when `optional` and absent.
  GradedSeries series_or_zero(const std::string& name) const;
};

// Statements, one per line:
//   header n=INT [max_p_degree=INT] [max_hbar=INT] [max_coeff_len=INT] [max_word_len=INT]
//   orbit NAME cz=INT kappa=INT [bad] [side=plus|minus]
//   surface genus=INT boundary=INT
//   class NAME = WORD
//   series NAME [: DEGREE] = EXPR
//   aug NAME { WORD -> EXPR ... }
// '#' starts a comment. An expression continues on the next line after a
// binary operator or inside parentheses.
ProblemFile parse_problem(std::string_view text);

// Canonical text; parse_problem(print_problem(p)) prints identically.
std::string print_problem(const ProblemFile& problem);

// Series built without a file, printed in the same format.
struct EmittedSeries {
  std::string name;
  GradedSeries value;
  std::optional<int> degree;
};

std::string print_series_file(const OrbitSystem& system, const std::optional<SurfaceSpec>& surface,
                              const std::vector<EmittedSeries>& series);

}  // namespace sft
