#include "sft/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sft/bv.hpp"
#include "sft/cotangent.hpp"
#include "sft/problem.hpp"
#include "sft/surface.hpp"
#include "sft/weyl.hpp"

namespace sft::cli {

using json = nlohmann::ordered_json;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Caps {
  int max_p_degree = 4;
  int max_hbar = 4;
  int max_coeff_len = 4;
  int max_word_len = 3;
  int samples = 200;
  std::uint64_t seed = 1;

  TruncationContext context() const {
    TruncationContext ctx;
    ctx.max_p_degree = max_p_degree;
    ctx.max_hbar = max_hbar;
    ctx.max_coeff_len = max_coeff_len;
    return ctx;
  }
};

struct Options {
  std::string input;
  std::optional<int> max_p_degree, max_hbar, max_coeff_len, max_word_len, samples;
  std::optional<std::uint64_t> seed;
  bool json = false;

  std::string series = "H";
  std::string f = "F";
  std::string l = "L";
  std::string hplus = "Hplus";
  std::string hminus = "Hminus";
  std::string aug;
  int genus = 2;
  int boundary = 0;
  int pair_word_len = 2;
  std::optional<int> cap;
  std::vector<std::string> words;
  std::string output;
  bool psi = false;
  bool no_check = false;
};

struct Outcome {
  std::vector<CheckReport> reports;
  std::string text;
  json result = json::object();
};

std::string rational_text(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

void apply_env(Caps& caps) {
  const char* env = std::getenv(kCapsEnv);
  if (!env || !*env) return;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError(std::string(kCapsEnv) + ": expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    long long v;
    try {
      std::size_t used = 0;
      v = std::stoll(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(kCapsEnv) + ": bad value in '" + item + "'");
    }
    if (key == "max_p_degree") {
      caps.max_p_degree = static_cast<int>(v);
    } else if (key == "max_hbar") {
      caps.max_hbar = static_cast<int>(v);
    } else if (key == "max_coeff_len") {
      caps.max_coeff_len = static_cast<int>(v);
    } else if (key == "max_word_len") {
      caps.max_word_len = static_cast<int>(v);
    } else if (key == "samples") {
      caps.samples = static_cast<int>(v);
    } else if (key == "seed") {
      caps.seed = static_cast<std::uint64_t>(v);
    } else {
      throw UsageError(std::string(kCapsEnv) + ": unknown key '" + key + "'");
    }
  }
}

Caps resolve_caps(const Options& o, const ProblemFile* file) {
  Caps caps;
  apply_env(caps);
  if (file) {
    const auto& h = file->header;
    if (h.max_p_degree) caps.max_p_degree = *h.max_p_degree;
    if (h.max_hbar) caps.max_hbar = *h.max_hbar;
    if (h.max_coeff_len) caps.max_coeff_len = *h.max_coeff_len;
    if (h.max_word_len) caps.max_word_len = *h.max_word_len;
  }
  if (o.max_p_degree) caps.max_p_degree = *o.max_p_degree;
  if (o.max_hbar) caps.max_hbar = *o.max_hbar;
  if (o.max_coeff_len) caps.max_coeff_len = *o.max_coeff_len;
  if (o.max_word_len) caps.max_word_len = *o.max_word_len;
  if (o.samples) caps.samples = *o.samples;
  if (o.seed) caps.seed = *o.seed;
  if (caps.max_p_degree < 0 || caps.max_hbar < 0 || caps.max_coeff_len < 0 || caps.max_word_len < 1 ||
      caps.samples < 0) {
    throw UsageError("caps must be non-negative and max_word_len positive");
  }
  return caps;
}

ProblemFile load(const Options& o) {
  if (o.input.empty()) throw UsageError("--input is required");
  std::ifstream in(o.input);
  if (!in) throw UsageError("cannot read '" + o.input + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

const GradedSeries& require_series(const ProblemFile& p, const std::string& name) {
  const SeriesDecl* s = p.find_series(name);
  if (!s) throw UsageError("no series '" + name + "' in input");
  return s->value;
}

Surface make_surface(const Options& o) {
  try {
    return Surface({o.genus, o.boundary});
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

CyclicWord require_class(const Surface& s, const std::string& text) {
  std::optional<CyclicWord> w;
  try {
    w = s.reduce(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!w) throw UsageError("'" + text + "' is the trivial class");
  return *w;
}

template <class Key, class Render>
std::string vec_text(const std::map<Key, Rational>& v, Render&& render) {
  if (v.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : v) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    out += rational_text(mag) + " · " + render(k);
  }
  return out;
}

template <class Key, class Render>
json vec_json(const std::map<Key, Rational>& v, Render&& render) {
  json terms = json::array();
  for (const auto& [k, c] : v) {
    json t = render(k);
    t["coefficient"] = rational_text(c);
    terms.push_back(std::move(t));
  }
  return terms;
}

json report_json(const CheckReport& r) {
  json j;
  j["name"] = r.name;
  j["status"] = status_name(r.status);
  j["witness_count"] = r.witness_count;
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json x;
    x["item"] = w.item;
    x["coefficient"] = rational_text(w.coefficient);
    if (!w.note.empty()) x["note"] = w.note;
    ws.push_back(std::move(x));
  }
  j["witnesses"] = std::move(ws);
  j["caps"] = json::object();
  for (const auto& [k, v] : r.caps) j["caps"][k] = v;
  j["elapsed_ms"] = r.elapsed_ms;
  if (!r.missing_cap.empty()) j["missing_cap"] = r.missing_cap;
  j["notes"] = r.notes;
  return j;
}

Status overall(const std::vector<CheckReport>& reports) {
  Status s = Status::Pass;
  for (const auto& r : reports) {
    if (r.status == Status::Fail) return Status::Fail;
    if (r.status == Status::Inconclusive) s = Status::Inconclusive;
  }
  return s;
}

void stamp_caps(CheckReport& r, const Caps& caps, bool words) {
  if (!r.caps.count("max_p_degree")) r.caps["max_p_degree"] = caps.max_p_degree;
  if (!r.caps.count("max_hbar")) r.caps["max_hbar"] = caps.max_hbar;
  if (words && !r.caps.count("max_word_len") && !r.caps.count("max-word-len")) r.caps["max_word_len"] = caps.max_word_len;
}

// ------------------------------------------------------------------ commands

Outcome cmd_check_master(const Options& o) {
  auto p = load(o);
  auto caps = resolve_caps(o, &p);
  Outcome out;
  out.reports.push_back(check_master_H(require_series(p, o.series), caps.context()));
  stamp_caps(out.reports.back(), caps, false);
  return out;
}

Outcome cmd_check_master_f(const Options& o) {
  auto p = load(o);
  auto caps = resolve_caps(o, &p);
  Outcome out;
  out.reports.push_back(check_master_F(*p.system, require_series(p, o.f), p.series_or_zero(o.hplus),
                                       p.series_or_zero(o.hminus), caps.context()));
  stamp_caps(out.reports.back(), caps, false);
  return out;
}

Outcome cmd_check_master_l(const Options& o) {
  auto p = load(o);
  auto caps = resolve_caps(o, &p);
  if (!p.dictionary) throw UsageError("check-master-l needs a surface declaration");
  Outcome out;
  out.reports.push_back(check_master_L(*p.system, *p.dictionary, require_series(p, o.l),
                                       p.series_or_zero(o.hplus), p.series_or_zero(o.hminus),
                                       caps.context()));
  stamp_caps(out.reports.back(), caps, false);
  return out;
}

Outcome cmd_linearize(const Options& o, bool axioms) {
  auto p = load(o);
  auto caps = resolve_caps(o, &p);
  const GradedSeries& H = require_series(p, o.series);
  const AugDecl* aug = nullptr;
  if (!o.aug.empty()) {
    aug = p.find_augmentation(o.aug);
    if (!aug) throw UsageError("no augmentation '" + o.aug + "' in input");
  } else if (p.augmentations.size() == 1) {
    aug = &p.augmentations.front();
  } else {
    throw UsageError(p.augmentations.empty() ? "no augmentation in input" : "several augmentations; pick one with --aug");
  }
  const auto ctx = caps.context();
  FreeAlgebra alg(p.system->table());
  auto D = BvOperator::from_weyl(alg, H, ctx, std::max(caps.max_word_len, 2));
  auto beta = aug->augmentation();

  Outcome out;
  out.reports.push_back(check_augmentation(D, beta));
  stamp_caps(out.reports.back(), caps, true);
  if (!out.reports.back().passed()) return out;
  auto tw = twist_by_augmentation(D, beta);
  auto lin = linearize(tw.twisted, p.header.n);
  out.reports.push_back(check_descent(lin));
  if (axioms) out.reports.push_back(check_lie_bialgebra(lin));

  auto name = [&](std::size_t i) { return lin.names[i]; };
  auto one = [&](std::size_t i) { return "(" + name(i) + ")"; };
  auto two = [&](const std::pair<std::size_t, std::size_t>& k) {
    return "(" + name(k.first) + " ⊗ " + name(k.second) + ")";
  };
  auto one_json = [&](std::size_t i) { return json{{"basis", name(i)}}; };
  auto two_json = [&](const std::pair<std::size_t, std::size_t>& k) {
    return json{{"left", name(k.first)}, {"right", name(k.second)}};
  };
  std::ostringstream os;
  os << "basis:";
  json basis = json::array();
  for (std::size_t i = 0; i < lin.dim(); ++i) {
    os << (i ? ", " : " ") << lin.names[i] << " [" << lin.degrees[i] << "]";
    basis.push_back({{"name", lin.names[i]}, {"degree", lin.degrees[i]}});
  }
  os << "\ndlin:\n";
  json dlin = json::object(), delta = json::object(), mu = json::array();
  for (std::size_t i = 0; i < lin.dim(); ++i) {
    if (lin.dlin[i].empty()) continue;
    os << "  " << name(i) << " -> " << vec_text(lin.dlin[i], one) << "\n";
    dlin[name(i)] = vec_json(lin.dlin[i], one_json);
  }
  os << "delta:\n";
  for (std::size_t i = 0; i < lin.dim(); ++i) {
    if (lin.delta[i].empty()) continue;
    os << "  " << name(i) << " -> " << vec_text(lin.delta[i], two) << "\n";
    delta[name(i)] = vec_json(lin.delta[i], two_json);
  }
  os << "mu:\n";
  for (const auto& [ab, v] : lin.mu) {
    if (v.empty()) continue;
    os << "  [" << name(ab.first) << ", " << name(ab.second) << "] -> " << vec_text(v, one) << "\n";
    mu.push_back({{"left", name(ab.first)}, {"right", name(ab.second)}, {"value", vec_json(v, one_json)}});
  }
  auto h = homology(lin);
  os << "homology:";
  json hom = json::object();
  if (h.dimensions.empty()) os << " 0";
  for (const auto& [d, dim] : h.dimensions) {
    os << " H[" << d << "]=" << dim;
    hom[std::to_string(d)] = dim;
  }
  os << "\n";
  out.text = os.str();
  out.result = {{"basis", basis}, {"dlin", dlin}, {"delta", delta}, {"mu", mu}, {"homology", hom}};
  return out;
}

Outcome cmd_bracket(const Options& o) {
  if (o.words.size() != 2) throw UsageError("bracket takes two classes");
  auto s = make_surface(o);
  auto v = goldman_bracket(s, require_class(s, o.words[0]), require_class(s, o.words[1]));
  Outcome out;
  auto render = [&](const CyclicWord& w) { return "(" + s.render(w) + ")"; };
  out.text = vec_text(v, render) + "\n";
  out.result["terms"] = vec_json(v, [&](const CyclicWord& w) { return json{{"class", s.render(w)}}; });
  return out;
}

Outcome cmd_cobracket(const Options& o) {
  if (o.words.size() != 1) throw UsageError("cobracket takes one class");
  auto s = make_surface(o);
  auto v = turaev_cobracket(s, require_class(s, o.words[0]));
  Outcome out;
  auto render = [&](const std::pair<CyclicWord, CyclicWord>& k) {
    return "(" + s.render(k.first) + ") ⊗ (" + s.render(k.second) + ")";
  };
  out.text = vec_text(v, render) + "\n";
  out.result["terms"] = vec_json(v, [&](const std::pair<CyclicWord, CyclicWord>& k) {
    return json{{"left", s.render(k.first)}, {"right", s.render(k.second)}};
  });
  return out;
}

Outcome cmd_check_axioms(const Options& o) {
  auto s = make_surface(o);
  auto caps = resolve_caps(o, nullptr);
  StringCheckOptions opts;
  opts.max_word = caps.max_word_len;
  opts.pair_word = std::min(o.pair_word_len, caps.max_word_len);
  opts.samples = caps.samples;
  opts.seed = caps.seed;
  Outcome out;
  out.reports.push_back(check_string_identities(s, opts));
  out.reports.back().caps["max_word_len"] = opts.max_word;
  out.reports.back().caps["pair_word_len"] = opts.pair_word;
  out.reports.back().caps["samples"] = opts.samples;
  out.reports.back().caps["seed"] = static_cast<long long>(opts.seed);
  return out;
}

std::vector<CyclicWord> seeds_of(const Options& o, const Surface& s, const ProblemFile* p) {
  std::vector<CyclicWord> seeds;
  if (p) {
    for (const auto& c : p->classes) seeds.push_back(c.word);
  }
  for (const auto& w : o.words) seeds.push_back(require_class(s, w));
  if (seeds.empty()) throw UsageError("no seed classes");
  return seeds;
}

Outcome cmd_closure(const Options& o) {
  auto s = make_surface(o);
  auto caps = resolve_caps(o, nullptr);
  int cap = o.cap.value_or(caps.max_word_len);
  std::vector<CyclicWord> cls;
  try {
    cls = close_alphabet(s, seeds_of(o, s, nullptr), cap);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  Outcome out;
  json list = json::array();
  for (const auto& w : cls) {
    out.text += s.render(w) + "\n";
    list.push_back(s.render(w));
  }
  out.result = {{"cap", cap}, {"classes", list}};
  return out;
}

Outcome cmd_build_h(const Options& o) {
  std::optional<ProblemFile> p;
  if (!o.input.empty()) p = load(o);
  auto caps = resolve_caps(o, p ? &*p : nullptr);
  std::optional<Surface> s;
  if (p) {
    if (!p->surface) throw UsageError("build-h input needs a surface declaration");
    s.emplace(*p->surface);
  } else {
    s.emplace(make_surface(o));
  }
  int cap = o.cap.value_or(caps.max_word_len);
  std::vector<CyclicWord> cls;
  try {
    cls = close_alphabet(*s, seeds_of(o, *s, p ? &*p : nullptr), cap);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  auto A = make_alphabet(*s, cls);
  auto sys = alphabet_system(*s, A);
  auto H = build_H_surface(*s, A, sys, cap);

  Outcome out;
  const auto ctx = caps.context();
  if (!o.no_check) out.reports.push_back(check_surface_master(H, ctx));
  if (o.psi) out.reports.push_back(check_psi(*s, A, sys, H, ctx, std::min(caps.max_word_len, 3)));

  std::string file = "# convention: " + H.convention + "\n";
  if (H.iterated) file += "# alphabet contains iterated classes\n";
  file += print_series_file(sys, s->spec(), {{"H", H.H, -1}, {"F", H.F, 0}});
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw UsageError("cannot write '" + o.output + "'");
    f << file;
  } else {
    out.text = file;
  }
  json fam = {{"a", H.a.size()}, {"b", H.b.size()}, {"c", H.c.size()}, {"d", H.d.size()}};
  out.result = {{"cap", cap},           {"classes", A.size()}, {"terms", H.H.size()},
                {"families", fam},      {"iterated", H.iterated},
                {"convention", H.convention}};
  if (o.output.empty()) out.result["problem"] = file;
  return out;
}

// ----------------------------------------------------------------- plumbing

void add_caps(CLI::App* c, Options& o, bool input) {
  if (input) c->add_option("--input", o.input, "Problem file (.sft)");
  c->add_option("--max-p-degree", o.max_p_degree, "Largest p-degree kept");
  c->add_option("--max-hbar", o.max_hbar, "Largest hbar power kept");
  c->add_option("--max-coeff-len", o.max_coeff_len, "Longest coefficient word kept");
  c->add_option("--max-word-len", o.max_word_len, "Word length cap");
  c->add_option("--samples", o.samples, "Random samples");
  c->add_option("--seed", o.seed, "Random seed");
  c->add_flag("--json", o.json, "Structured output");
}

void add_surface(CLI::App* c, Options& o) {
  c->add_option("--genus", o.genus, "Genus")->capture_default_str();
  c->add_option("--boundary", o.boundary, "Boundary components")->capture_default_str();
}

std::string text_output(const std::string& command, const Outcome& out) {
  std::string s = out.text;
  bool commented = command == "build-h" && !out.text.empty();
  for (const auto& r : out.reports) {
    std::string t = report_text(r);
    if (commented) {
      std::string c;
      std::stringstream ss(t);
      std::string line;
      while (std::getline(ss, line)) c += "# " + line + "\n";
      t = c;
    }
    s += t;
  }
  return s;
}

}  // namespace

std::string report_text(const CheckReport& r) {
  std::ostringstream os;
  std::string st = status_name(r.status);
  for (auto& ch : st) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  os << r.name << ": " << st << " (" << r.elapsed_ms << " ms)\n";
  if (!r.caps.empty()) {
    os << "  caps:";
    for (const auto& [k, v] : r.caps) os << " " << k << "=" << v;
    os << "\n";
  }
  if (!r.missing_cap.empty()) os << "  missing cap: " << r.missing_cap << "\n";
  for (const auto& w : r.witnesses) {
    os << "  witness: " << rational_text(w.coefficient) << " · " << w.item;
    if (!w.note.empty()) os << "  [" << w.note << "]";
    os << "\n";
  }
  if (r.witness_count > r.witnesses.size()) {
    os << "  ... " << r.witness_count - r.witnesses.size() << " more witnesses\n";
  }
  for (const auto& n : r.notes) os << "  note: " << n << "\n";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  std::string prog = args.empty() ? "sft" : args[0];
  auto slash = prog.find_last_of('/');
  if (slash != std::string::npos) prog = prog.substr(slash + 1);
  CLI::App app{"Symplectic field theory algebra and string topology checks", prog};
  app.require_subcommand(1);

  std::map<std::string, std::function<Outcome()>> commands;
  auto sub = [&](const std::string& name, const std::string& help, std::function<Outcome()> f) {
    commands[name] = std::move(f);
    return app.add_subcommand(name, help);
  };

  auto* c = sub("check-master", "H * H = 0 within caps", [&] { return cmd_check_master(o); });
  add_caps(c, o, true);
  c->add_option("--series", o.series, "Hamiltonian series name")->capture_default_str();

  c = sub("check-master-f", "Master equation of a cobordism potential", [&] { return cmd_check_master_f(o); });
  add_caps(c, o, true);
  c->add_option("--f", o.f, "Potential series name")->capture_default_str();
  c->add_option("--hplus", o.hplus, "Positive end Hamiltonian")->capture_default_str();
  c->add_option("--hminus", o.hminus, "Negative end Hamiltonian")->capture_default_str();

  c = sub("check-master-l", "Master equation with Lagrangian boundary", [&] { return cmd_check_master_l(o); });
  add_caps(c, o, true);
  c->add_option("--l", o.l, "Potential series name")->capture_default_str();
  c->add_option("--hplus", o.hplus, "Positive end Hamiltonian")->capture_default_str();
  c->add_option("--hminus", o.hminus, "Negative end Hamiltonian")->capture_default_str();

  for (bool axioms : {false, true}) {
    c = sub(axioms ? "check-bialgebra" : "linearize",
            axioms ? "Involutive Lie bialgebra axioms on linearized homology"
                   : "Linearized differential, cobracket, bracket and homology",
            [&o, axioms] { return cmd_linearize(o, axioms); });
    add_caps(c, o, true);
    c->add_option("--series", o.series, "Hamiltonian series name")->capture_default_str();
    c->add_option("--aug", o.aug, "Augmentation name");
  }

  c = sub("bracket", "Goldman bracket of two classes", [&] { return cmd_bracket(o); });
  add_surface(c, o);
  c->add_option("words", o.words, "Two words")->expected(2);
  c->add_flag("--json", o.json, "Structured output");

  c = sub("cobracket", "Turaev cobracket of a class", [&] { return cmd_cobracket(o); });
  add_surface(c, o);
  c->add_option("words", o.words, "One word")->expected(1);
  c->add_flag("--json", o.json, "Structured output");

  c = sub("check-axioms", "Lie bialgebra and multi-string identities", [&] { return cmd_check_axioms(o); });
  add_surface(c, o);
  add_caps(c, o, false);
  c->add_option("--pair-word-len", o.pair_word_len, "Pairs checked exhaustively up to this length")
      ->capture_default_str();

  c = sub("closure", "Close seed classes under bracket and cobracket", [&] { return cmd_closure(o); });
  add_surface(c, o);
  add_caps(c, o, false);
  c->add_option("--cap", o.cap, "Word length cap (default: max word length)");
  c->add_option("words", o.words, "Seed words");

  c = sub("build-h", "Hamiltonian and potential of a geodesic alphabet", [&] { return cmd_build_h(o); });
  add_surface(c, o);
  add_caps(c, o, true);
  c->add_option("--cap", o.cap, "Word length cap (default: max word length)");
  c->add_option("--output", o.output, "Write the series file here");
  c->add_flag("--psi", o.psi, "Also check the linearized structure against the string operations");
  c->add_flag("--no-check", o.no_check, "Skip the master equation check");
  c->add_option("words", o.words, "Seed words");

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  std::string command;
  auto fail_usage = [&](const std::string& kind, const std::string& message,
                        std::optional<SourceSpan> span) {
    if (o.json) {
      json j{{"schema", kSchemaVersion}, {"command", command}, {"status", "error"}, {"exit_code", kUsage}};
      json e{{"kind", kind}, {"message", message}};
      if (span) {
        e["line"] = span->line;
        e["column"] = span->column;
      }
      j["error"] = e;
      out << j.dump(2) << "\n" << std::flush;
    } else {
      err << prog << ": " << message << "\n" << std::flush;
    }
    return static_cast<int>(kUsage);
  };
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << std::flush;
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All) << std::flush;
    return kPass;
  } catch (const CLI::ParseError& e) {
    for (auto* s : app.get_subcommands()) command = s->get_name();
    o.json = std::find(args.begin(), args.end(), "--json") != args.end();
    return fail_usage("usage", e.what(), std::nullopt);
  }
  command = app.get_subcommands().front()->get_name();

  Outcome result;
  try {
    result = commands.at(command)();
  } catch (const ParseError& e) {
    std::string where = o.input.empty() ? "" : o.input + ":";
    return fail_usage(parse_error_kind_name(e.kind()), where + e.what(), e.span());
  } catch (const UsageError& e) {
    return fail_usage("usage", e.what(), std::nullopt);
  } catch (const Error& e) {
    return fail_usage("usage", e.what(), std::nullopt);
  }

  Status st = overall(result.reports);
  int code = st == Status::Pass ? kPass : kFail;
  if (o.json) {
    json j{{"schema", kSchemaVersion}, {"command", command}, {"status", status_name(st)}, {"exit_code", code}};
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(report_json(r));
    j["reports"] = std::move(reports);
    j["result"] = result.result;
    out << j.dump(2) << "\n";
  } else {
    out << text_output(command, result);
  }
  out << std::flush;
  return code;
}

}  // namespace sft::cli
