#include "sft/problem.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace sft {

std::string SourceSpan::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

ParseError::ParseError(Kind kind, SourceSpan span, const std::string& message)
    : Error(span.to_string() + ": " + parse_error_kind_name(kind) + " error: " + message),
      kind_(kind),
      span_(span),
      message_(message) {}

std::string parse_error_kind_name(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::Syntax:
      return "syntax";
    case ParseError::Kind::Undefined:
      return "undefined symbol";
    case ParseError::Kind::Grading:
      return "grading";
    case ParseError::Kind::Semantic:
      return "semantic";
  }
  return "?";
}

namespace {

enum class Tok { Ident, Number, LBracket, RBracket, LParen, RParen, LBrace, RBrace, Plus, Minus,
                 Star, Slash, Caret, Equals, Colon, Comma, Arrow, Newline, End };

std::string tok_text(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Equals: return "'='";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'->'";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    char c = src[i];
    SourceSpan here{line, col};
    std::size_t start = i;
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", here, start});
      advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        advance();
      }
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), here, start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
      out.push_back({Tok::Number, std::string(src.substr(start, i - start)), here, start});
      continue;
    }
    Tok t;
    switch (c) {
      case '[': t = Tok::LBracket; break;
      case ']': t = Tok::RBracket; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '{': t = Tok::LBrace; break;
      case '}': t = Tok::RBrace; break;
      case '+': t = Tok::Plus; break;
      case '*': t = Tok::Star; break;
      case '/': t = Tok::Slash; break;
      case '^': t = Tok::Caret; break;
      case '=': t = Tok::Equals; break;
      case ':': t = Tok::Colon; break;
      case ',': t = Tok::Comma; break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          advance();
          advance();
          out.push_back({Tok::Arrow, "->", here, start});
          continue;
        }
        t = Tok::Minus;
        break;
      default:
        throw ParseError(ParseError::Kind::Syntax, here,
                         std::string("unexpected character '") + c + "'");
    }
    advance();
    out.push_back({t, std::string(1, c), here, start});
  }
  out.push_back({Tok::End, "", {line, col}, src.size()});
  return out;
}

struct RawClass {
  std::string name;
  std::string word;
  SourceSpan span;
  SourceSpan word_span;
};

struct RawAugEntry {
  std::unique_ptr<Expr> word;
  std::unique_ptr<Expr> value;
  SourceSpan span;
};

struct RawAug {
  std::string name;
  std::vector<RawAugEntry> entries;
  SourceSpan span;
};

class Parser {
 public:
  Parser(std::string_view src) : src_(src), toks_(tokenize(src)) {}

  void run(ProblemFile& out, std::vector<RawClass>& classes, std::vector<RawAug>& augs) {
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::End) break;
      const Token& kw = expect(Tok::Ident, "a declaration keyword");
      if (kw.text == "header") {
        header(out, kw.span);
      } else if (kw.text == "orbit") {
        orbit(out, kw.span);
      } else if (kw.text == "surface") {
        surface(out, kw.span);
      } else if (kw.text == "class") {
        classes.push_back(class_decl(kw.span));
      } else if (kw.text == "series") {
        out.series.push_back(series(kw.span));
      } else if (kw.text == "aug") {
        augs.push_back(aug(kw.span));
      } else {
        throw ParseError(ParseError::Kind::Syntax, kw.span, "unknown declaration '" + kw.text + "'");
      }
      end_statement();
    }
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    take();
    return true;
  }
  const Token& expect(Tok t, const std::string& what) {
    if (peek().kind != t) {
      const Token& got = peek();
      std::string found = got.kind == Tok::Ident || got.kind == Tok::Number
                              ? "'" + got.text + "'"
                              : tok_text(got.kind);
      throw ParseError(ParseError::Kind::Syntax, got.span, "expected " + what + ", found " + found);
    }
    return take();
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) take();
  }
  void end_statement() {
    if (peek().kind != Tok::Newline && peek().kind != Tok::End) {
      expect(Tok::Newline, "end of line");
    }
  }

  int integer() {
    bool neg = accept(Tok::Minus);
    const Token& t = expect(Tok::Number, "an integer");
    try {
      int v = std::stoi(t.text);
      return neg ? -v : v;
    } catch (const std::out_of_range&) {
      throw ParseError(ParseError::Kind::Syntax, t.span, "integer out of range");
    }
  }

  // key=INT pairs and bare flags until end of line.
  template <class F>
  void attributes(F&& on) {
    while (peek().kind == Tok::Ident) {
      const Token& key = take();
      if (accept(Tok::Equals)) {
        if (peek().kind == Tok::Ident) {
          const Token& v = take();
          on(key, std::optional<int>{}, v.text);
        } else {
          on(key, std::optional<int>{integer()}, std::string{});
        }
      } else {
        on(key, std::optional<int>{}, std::string{});
      }
    }
  }

  [[noreturn]] static void bad_attribute(const Token& key) {
    throw ParseError(ParseError::Kind::Syntax, key.span, "unexpected attribute '" + key.text + "'");
  }

  void header(ProblemFile& out, SourceSpan span) {
    if (out.header.present) {
      throw ParseError(ParseError::Kind::Semantic, span, "duplicate header");
    }
    if (!out.orbits.empty() || !out.series.empty()) {
      throw ParseError(ParseError::Kind::Semantic, span, "header must precede declarations");
    }
    out.header.present = true;
    out.header.span = span;
    attributes([&](const Token& key, std::optional<int> v, const std::string&) {
      if (!v) bad_attribute(key);
      if (key.text == "n") {
        out.header.n = *v;
      } else if (key.text == "max_p_degree") {
        out.header.max_p_degree = v;
      } else if (key.text == "max_hbar") {
        out.header.max_hbar = v;
      } else if (key.text == "max_coeff_len") {
        out.header.max_coeff_len = v;
      } else if (key.text == "max_word_len") {
        out.header.max_word_len = v;
      } else {
        bad_attribute(key);
      }
    });
  }

  void orbit(ProblemFile& out, SourceSpan span) {
    OrbitDecl d;
    d.span = span;
    d.orbit.name = expect(Tok::Ident, "an orbit name").text;
    bool cz = false;
    attributes([&](const Token& key, std::optional<int> v, const std::string& word) {
      if (key.text == "cz" && v) {
        d.orbit.cz = *v;
        cz = true;
      } else if (key.text == "kappa" && v) {
        if (*v < 1) throw ParseError(ParseError::Kind::Semantic, key.span, "kappa must be positive");
        d.orbit.kappa = *v;
      } else if (key.text == "bad" && !v && word.empty()) {
        d.orbit.good = false;
      } else if (key.text == "side" && word == "plus") {
        d.orbit.side = Side::Plus;
      } else if (key.text == "side" && word == "minus") {
        d.orbit.side = Side::Minus;
      } else {
        bad_attribute(key);
      }
    });
    if (!cz) throw ParseError(ParseError::Kind::Syntax, peek().span, "orbit needs cz=INT");
    out.orbits.push_back(std::move(d));
  }

  void surface(ProblemFile& out, SourceSpan span) {
    if (out.surface_decl) throw ParseError(ParseError::Kind::Semantic, span, "duplicate surface");
    SurfaceDecl d;
    d.span = span;
    attributes([&](const Token& key, std::optional<int> v, const std::string&) {
      if (key.text == "genus" && v) {
        d.spec.genus = *v;
      } else if (key.text == "boundary" && v) {
        d.spec.boundary = *v;
      } else {
        bad_attribute(key);
      }
    });
    out.surface_decl = d;
  }

  RawClass class_decl(SourceSpan span) {
    RawClass c;
    c.span = span;
    c.name = expect(Tok::Ident, "a class name").text;
    expect(Tok::Equals, "'='");
    c.word_span = peek().span;
    std::size_t start = peek().offset;
    std::size_t end = start;
    while (peek().kind == Tok::Ident || peek().kind == Tok::Number) {
      const Token& t = take();
      end = t.offset + t.text.size();
    }
    if (end == start) expect(Tok::Ident, "a word");
    c.word = std::string(src_.substr(start, end - start));
    return c;
  }

  SeriesDecl series(SourceSpan span) {
    SeriesDecl d;
    d.span = span;
    d.name = expect(Tok::Ident, "a series name").text;
    if (accept(Tok::Colon)) d.degree = integer();
    expect(Tok::Equals, "'='");
    d.expr = expression();
    return d;
  }

  RawAug aug(SourceSpan span) {
    RawAug a;
    a.span = span;
    a.name = expect(Tok::Ident, "an augmentation name").text;
    const Token& open = expect(Tok::LBrace, "'{'");
    while (true) {
      while (peek().kind == Tok::Newline || peek().kind == Tok::Comma) take();
      if (accept(Tok::RBrace)) break;
      if (peek().kind == Tok::End) throw ParseError(ParseError::Kind::Syntax, open.span, "unclosed '{'");
      RawAugEntry e;
      e.span = peek().span;
      e.word = expression();
      expect(Tok::Arrow, "'->'");
      e.value = expression();
      a.entries.push_back(std::move(e));
      if (peek().kind != Tok::Newline && peek().kind != Tok::Comma && peek().kind != Tok::RBrace) {
        expect(Tok::RBrace, "'}'");
      }
    }
    return a;
  }

  static std::unique_ptr<Expr> node(Expr::Op op, SourceSpan span) {
    auto e = std::make_unique<Expr>();
    e->op = op;
    e->span = span;
    return e;
  }
  static std::unique_ptr<Expr> binary(Expr::Op op, SourceSpan span, std::unique_ptr<Expr> a,
                                      std::unique_ptr<Expr> b) {
    auto e = node(op, span);
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  void continuation() { skip_newlines(); }

  std::unique_ptr<Expr> expression() {
    auto lhs = term();
    while (true) {
      skip_if_nested();
      if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
        const Token& op = take();
        continuation();
        lhs = binary(op.kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub, op.span, std::move(lhs),
                     term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Expr> term() {
    auto lhs = unary();
    while (true) {
      skip_if_nested();
      if (peek().kind != Tok::Star) return lhs;
      const Token& op = take();
      continuation();
      lhs = binary(Expr::Op::Mul, op.span, std::move(lhs), unary());
    }
  }

  std::unique_ptr<Expr> unary() {
    if (peek().kind == Tok::Minus) {
      const Token& op = take();
      auto e = node(Expr::Op::Neg, op.span);
      e->args.push_back(unary());
      return e;
    }
    auto base = primary();
    skip_if_nested();
    if (peek().kind == Tok::Caret) {
      const Token& op = take();
      const Token& n = expect(Tok::Number, "a non-negative integer exponent");
      auto e = node(Expr::Op::Pow, op.span);
      try {
        e->exponent = static_cast<unsigned>(std::stoul(n.text));
      } catch (const std::out_of_range&) {
        throw ParseError(ParseError::Kind::Syntax, n.span, "exponent out of range");
      }
      e->args.push_back(std::move(base));
      return e;
    }
    return base;
  }

  void skip_if_nested() {
    if (depth_ > 0) skip_newlines();
  }

  std::unique_ptr<Expr> primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        auto e = node(Expr::Op::Number, t.span);
        std::string text = t.text;
        if (peek().kind == Tok::Slash && peek(1).kind == Tok::Number) {
          take();
          const Token& d = take();
          if (d.text.find_first_not_of('0') == std::string::npos) {
            throw ParseError(ParseError::Kind::Syntax, d.span, "division by zero");
          }
          text += "/" + d.text;
        }
        e->value = Rational(text);
        e->value.canonicalize();
        return e;
      }
      case Tok::LParen: {
        if (peek(1).kind == Tok::Number && peek(1).text == "1" && peek(2).kind == Tok::Slash &&
            peek(3).kind == Tok::Ident && peek(3).text == "h" && peek(4).kind == Tok::RParen) {
          for (int i = 0; i < 5; ++i) take();
          return node(Expr::Op::InverseHbar, t.span);
        }
        take();
        ++depth_;
        skip_newlines();
        auto e = expression();
        skip_newlines();
        --depth_;
        if (peek().kind != Tok::RParen) {
          throw ParseError(ParseError::Kind::Syntax, t.span,
                           "unclosed '(' (found " + tok_text(peek().kind) + " at " +
                               peek().span.to_string() + ")");
        }
        take();
        return e;
      }
      case Tok::Ident: {
        take();
        if (t.text == "h") return node(Expr::Op::Hbar, t.span);
        Expr::Op op;
        if (t.text == "q") {
          op = Expr::Op::Q;
        } else if (t.text == "p") {
          op = Expr::Op::P;
        } else if (t.text == "s") {
          op = Expr::Op::String;
        } else {
          throw ParseError(ParseError::Kind::Syntax, t.span,
                           "unexpected identifier '" + t.text + "' (use q[..], p[..], s[..] or h)");
        }
        if (peek().kind != Tok::LBracket) expect(Tok::LBracket, "'['");
        const Token& open = take();
        const Token& name = expect(Tok::Ident, "a name");
        if (peek().kind != Tok::RBracket) {
          throw ParseError(ParseError::Kind::Syntax, open.span, "unclosed '['");
        }
        take();
        auto e = node(op, t.span);
        e->name = name.text;
        return e;
      }
      default:
        expect(Tok::Number, "an expression");
        return nullptr;
    }
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

struct Evaluator {
  const ProblemFile& file;
  const TruncationContext ctx = TruncationContext::unbounded();

  GradedSeries operator()(const Expr& e) const {
    const TablePtr& table = file.system->table();
    switch (e.op) {
      case Expr::Op::Number:
        return GradedSeries(table, e.value);
      case Expr::Op::Hbar:
        return GradedSeries::hbar_power(table, 1);
      case Expr::Op::InverseHbar:
        return GradedSeries::hbar_power(table, -1);
      case Expr::Op::Q:
      case Expr::Op::P: {
        auto v = file.system->variable(e.name);
        if (!v) {
          bool declared = false;
          for (const auto& o : file.orbits) declared = declared || o.orbit.name == e.name;
          throw ParseError(ParseError::Kind::Undefined, e.span,
                           declared ? "orbit '" + e.name + "' is bad and has no variables"
                                    : "undefined orbit '" + e.name + "'");
        }
        return GradedSeries::symbol(table, {e.op == Expr::Op::Q ? SymbolKind::Q : SymbolKind::P, *v});
      }
      case Expr::Op::String: {
        if (!file.dictionary || !file.dictionary->find(e.name)) {
          throw ParseError(ParseError::Kind::Undefined, e.span, "undefined class '" + e.name + "'");
        }
        return GradedSeries::symbol(table, *table->find_coefficient(e.name));
      }
      case Expr::Op::Add:
        return (*this)(*e.args[0]) + (*this)(*e.args[1]);
      case Expr::Op::Sub:
        return (*this)(*e.args[0]) - (*this)(*e.args[1]);
      case Expr::Op::Neg:
        return -(*this)(*e.args[0]);
      case Expr::Op::Mul:
        return star((*this)(*e.args[0]), (*this)(*e.args[1]), ctx);
      case Expr::Op::Pow: {
        GradedSeries base = (*this)(*e.args[0]);
        GradedSeries out(table, 1);
        for (unsigned i = 0; i < e.exponent; ++i) out = star(out, base, ctx);
        return out;
      }
    }
    return GradedSeries(table);
  }
};

std::string orbit_line(const Orbit& o) {
  std::string s = "orbit " + o.name + " cz=" + std::to_string(o.cz) + " kappa=" + std::to_string(o.kappa);
  if (!o.good) s += " bad";
  if (o.side == Side::Plus) s += " side=plus";
  if (o.side == Side::Minus) s += " side=minus";
  return s;
}

std::string series_line(const std::string& name, const std::optional<int>& degree,
                        const GradedSeries& value) {
  std::string s = "series " + name;
  if (degree) s += " : " + std::to_string(*degree);
  return s + " = " + value.to_string();
}

}  // namespace

Augmentation AugDecl::augmentation() const {
  Augmentation a;
  for (const auto& e : entries) a.values.emplace(e.word, e.value);
  return a;
}

const SeriesDecl* ProblemFile::find_series(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const AugDecl* ProblemFile::find_augmentation(const std::string& name) const {
  for (const auto& a : augmentations) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

GradedSeries ProblemFile::series_or_zero(const std::string& name) const {
  const SeriesDecl* s = find_series(name);
  return s ? s->value : system->zero();
}

ProblemFile parse_problem(std::string_view text) {
  ProblemFile out;
  std::vector<RawClass> raw_classes;
  std::vector<RawAug> raw_augs;
  Parser(text).run(out, raw_classes, raw_augs);

  if (out.header.n < 1) {
    throw ParseError(ParseError::Kind::Semantic, out.header.span, "n must be positive");
  }
  std::set<std::string> names;
  std::vector<Orbit> orbits;
  for (const auto& o : out.orbits) {
    if (!names.insert(o.orbit.name).second) {
      throw ParseError(ParseError::Kind::Semantic, o.span, "duplicate orbit '" + o.orbit.name + "'");
    }
    orbits.push_back(o.orbit);
  }
  try {
    out.system = std::make_shared<OrbitSystem>(out.header.n, orbits);
  } catch (const PreconditionError& e) {
    throw ParseError(ParseError::Kind::Semantic, out.orbits.empty() ? out.header.span : out.orbits[0].span,
                     e.what());
  }

  if (out.surface_decl) {
    try {
      out.surface = std::make_shared<Surface>(out.surface_decl->spec);
    } catch (const Error& e) {
      throw ParseError(ParseError::Kind::Semantic, out.surface_decl->span, e.what());
    }
    out.dictionary = std::make_shared<ClassDictionary>(*out.surface);
  }
  std::set<std::string> class_names;
  for (const auto& c : raw_classes) {
    if (!out.surface) {
      throw ParseError(ParseError::Kind::Semantic, c.span, "class declared without a surface");
    }
    if (!class_names.insert(c.name).second) {
      throw ParseError(ParseError::Kind::Semantic, c.span, "duplicate class '" + c.name + "'");
    }
    std::optional<CyclicWord> w;
    try {
      w = out.surface->reduce(c.word);
    } catch (const Error& e) {
      throw ParseError(ParseError::Kind::Syntax, c.word_span, e.what());
    }
    if (!w) throw ParseError(ParseError::Kind::Semantic, c.word_span, "class '" + c.name + "' is trivial");
    try {
      out.dictionary->add(c.name, *w);
      out.system->table()->intern_coefficient(c.name, out.header.n - 3);
    } catch (const Error& e) {
      throw ParseError(ParseError::Kind::Semantic, c.span, e.what());
    }
    out.classes.push_back({c.name, *w, c.span});
  }

  Evaluator eval{out};
  std::set<std::string> series_names;
  for (auto& s : out.series) {
    if (!series_names.insert(s.name).second) {
      throw ParseError(ParseError::Kind::Semantic, s.span, "duplicate series '" + s.name + "'");
    }
    s.value = eval(*s.expr);
    if (s.degree) {
      auto d = s.value.homogeneous_degree();
      if (!s.value.is_zero() && (!d || *d != *s.degree)) {
        throw ParseError(ParseError::Kind::Grading, s.span,
                         "series '" + s.name + "' is " +
                             (d ? "of degree " + std::to_string(*d) : std::string("not homogeneous")) +
                             ", declared " + std::to_string(*s.degree));
      }
    }
  }

  std::set<std::string> aug_names;
  for (auto& raw : raw_augs) {
    if (!aug_names.insert(raw.name).second) {
      throw ParseError(ParseError::Kind::Semantic, raw.span, "duplicate augmentation '" + raw.name + "'");
    }
    AugDecl a;
    a.name = raw.name;
    a.span = raw.span;
    std::set<Monomial> seen;
    for (auto& e : raw.entries) {
      GradedSeries w = eval(*e.word);
      if (w.size() != 1) {
        throw ParseError(ParseError::Kind::Semantic, e.span, "augmentation key must be one word in q's");
      }
      const auto& [m, c] = *w.terms().begin();
      if (m.hbar() != 0 || m.has_kind(SymbolKind::P) || m.has_kind(SymbolKind::Coefficient) ||
          m.factors().empty() || (c != 1 && c != -1)) {
        throw ParseError(ParseError::Kind::Semantic, e.span, "augmentation key must be one word in q's");
      }
      GradedSeries v = eval(*e.value);
      for (const auto& [vm, vc] : v.terms()) {
        if (!vm.factors().empty()) {
          throw ParseError(ParseError::Kind::Semantic, e.value->span,
                           "augmentation value must be a polynomial in h");
        }
      }
      if (!seen.insert(m).second) {
        throw ParseError(ParseError::Kind::Semantic, e.span, "duplicate augmentation key");
      }
      a.entries.push_back({m, v * c, e.span});
    }
    out.augmentations.push_back(std::move(a));
  }
  return out;
}

std::string print_problem(const ProblemFile& p) {
  std::ostringstream os;
  os << "header n=" << p.header.n;
  if (p.header.max_p_degree) os << " max_p_degree=" << *p.header.max_p_degree;
  if (p.header.max_hbar) os << " max_hbar=" << *p.header.max_hbar;
  if (p.header.max_coeff_len) os << " max_coeff_len=" << *p.header.max_coeff_len;
  if (p.header.max_word_len) os << " max_word_len=" << *p.header.max_word_len;
  os << "\n";
  for (const auto& o : p.orbits) os << orbit_line(o.orbit) << "\n";
  if (p.surface_decl) {
    os << "surface genus=" << p.surface_decl->spec.genus << " boundary=" << p.surface_decl->spec.boundary
       << "\n";
  }
  for (const auto& c : p.classes) os << "class " << c.name << " = " << p.surface->render(c.word) << "\n";
  for (const auto& s : p.series) os << series_line(s.name, s.degree, s.value) << "\n";
  for (const auto& a : p.augmentations) {
    os << "aug " << a.name << " {\n";
    std::map<Monomial, const AugEntry*> sorted;
    for (const auto& e : a.entries) sorted.emplace(e.word, &e);
    for (const auto& [m, e] : sorted) {
      os << "  " << monomial_to_string(*p.system->table(), m) << " -> " << e->value.to_string() << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

std::string print_series_file(const OrbitSystem& system, const std::optional<SurfaceSpec>& surface,
                              const std::vector<EmittedSeries>& series) {
  std::ostringstream os;
  os << "header n=" << system.n() << "\n";
  for (const auto& o : system.orbits()) os << orbit_line(o) << "\n";
  if (surface) os << "surface genus=" << surface->genus << " boundary=" << surface->boundary << "\n";
  for (const auto& s : series) os << series_line(s.name, s.degree, s.value) << "\n";
  return os.str();
}

}  // namespace sft
