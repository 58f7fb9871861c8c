#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

#include "sft/surface.hpp"

namespace sft {

struct Surface::Cache {
  std::mutex mutex;
  std::unordered_map<std::string, std::optional<CyclicWord>> reduced;
};

std::size_t CyclicWordHash::operator()(const CyclicWord& w) const {
  std::size_t h = w.length();
  for (Letter l : w.letters()) h = h * 131 + l;
  return h;
}

std::vector<Letter> free_cyclic_reduce(std::span<const Letter> word) {
  std::vector<Letter> out;
  for (Letter l : word) {
    if (!out.empty() && out.back() == inverse_letter(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  std::size_t lo = 0, hi = out.size();
  while (hi - lo >= 2 && out[lo] == inverse_letter(out[hi - 1])) {
    ++lo;
    --hi;
  }
  return {out.begin() + static_cast<long>(lo), out.begin() + static_cast<long>(hi)};
}

std::vector<Letter> least_rotation(std::span<const Letter> word) {
  std::vector<Letter> best(word.begin(), word.end());
  std::vector<Letter> cur = best;
  for (std::size_t r = 1; r < word.size(); ++r) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

Surface::Surface(SurfaceSpec spec) : spec_(spec), cache_(std::make_shared<Cache>()) {
  if (spec.genus < 1) throw PreconditionError("surface genus must be >= 1");
  if (spec.boundary < 0) throw PreconditionError("boundary count must be >= 0");
  auto add = [this](const std::string& base) {
    names_.push_back(base);
    std::string inv = base;
    inv[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(inv[0])));
    names_.push_back(inv);
  };
  for (int i = 1; i <= spec.genus; ++i) {
    add("a" + std::to_string(i));
    add("b" + std::to_string(i));
  }
  for (int j = 1; j < spec.boundary; ++j) add("c" + std::to_string(j));

  // Boundary word of the face glued in (closed case) or of one boundary
  // component; the other components are the loops c_j.
  std::vector<Letter> face;
  for (int i = 0; i < spec.genus; ++i) {
    auto a = static_cast<Letter>(4 * i), b = static_cast<Letter>(4 * i + 2);
    face.insert(face.end(), {a, b, inverse_letter(a), inverse_letter(b)});
  }
  for (int j = 1; j < spec.boundary; ++j) face.push_back(static_cast<Letter>(4 * spec.genus + 2 * (j - 1)));

  // Face walk: the letter after x is next(x^-1).
  std::size_t N = names_.size();
  std::vector<int> next(N, -1);
  for (std::size_t t = 0; t < face.size(); ++t) {
    next[inverse_letter(face[t])] = face[(t + 1) % face.size()];
  }
  for (int j = 1; j < spec.boundary; ++j) {
    auto c = static_cast<Letter>(4 * spec.genus + 2 * (j - 1));
    next[c] = inverse_letter(c);
  }
  Letter cur = 0;
  for (std::size_t t = 0; t < N; ++t) {
    order_.push_back(cur);
    cur = static_cast<Letter>(next[cur]);
  }
  position_.assign(N, -1);
  for (std::size_t t = 0; t < N; ++t) position_[order_[t]] = static_cast<int>(t);
  if (std::count(position_.begin(), position_.end(), -1) != 0 || cur != 0) {
    throw PreconditionError("ribbon structure does not have a single vertex");
  }

  if (closed()) {
    relator_ = face;
    relator_position_.assign(N, -1);
    for (std::size_t t = 0; t < relator_.size(); ++t) relator_position_[relator_[t]] = static_cast<int>(t);
  }
}

std::optional<Letter> Surface::find_letter(std::string_view name) const {
  for (std::size_t l = 0; l < names_.size(); ++l) {
    if (names_[l] == name) return static_cast<Letter>(l);
  }
  return std::nullopt;
}

std::vector<Letter> Surface::parse(std::string_view text) const {
  std::vector<Letter> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    auto name = text.substr(start, i - start);
    auto l = find_letter(name);
    if (!l) {
      throw PreconditionError("unknown letter '" + std::string(name) + "' at position " +
                              std::to_string(start));
    }
    out.push_back(*l);
  }
  return out;
}

std::string Surface::render(std::span<const Letter> word, const char* sep) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += sep;
    out += names_[word[i]];
  }
  return out;
}

bool Surface::dehn_shorten(std::vector<Letter>& w) const {
  const int half = 2 * spec_.genus;
  const int rl = 4 * spec_.genus;
  const std::size_t L = w.size();
  for (int dir : {1, -1}) {
    for (std::size_t s = 0; s < L; ++s) {
      // Position in R (dir 1) or R^-1 (dir -1) of the letter w[s].
      auto rel_at = [&](int p) -> Letter {
        p = ((p % rl) + rl) % rl;
        return dir == 1 ? relator_[p] : inverse_letter(relator_[rl - 1 - p]);
      };
      int p0 = dir == 1 ? relator_position_[w[s]] : rl - 1 - relator_position_[inverse_letter(w[s])];
      std::size_t run = 0;
      while (run < L && static_cast<int>(run) < rl && w[(s + run) % L] == rel_at(p0 + static_cast<int>(run))) ++run;
      if (static_cast<int>(run) <= half) continue;
      std::vector<Letter> out;
      for (int t = rl - 1; t >= static_cast<int>(run); --t) out.push_back(inverse_letter(rel_at(p0 + t)));
      for (std::size_t t = run; t < L; ++t) out.push_back(w[(s + t) % L]);
      w = free_cyclic_reduce(out);
      return true;
    }
  }
  return false;
}

std::optional<CyclicWord> Surface::reduce_closed(std::vector<Letter> w) const {
  const int half = 2 * spec_.genus;
  const int rl = 4 * spec_.genus;
  for (;;) {
    while (!w.empty() && dehn_shorten(w)) {
    }
    if (w.empty()) return std::nullopt;
    // Substitutions of relator runs of length >= half - 1 through words at
    // most two letters longer; a shorter word restarts the search.
    const std::size_t L = w.size();
    std::set<std::vector<Letter>> seen{least_rotation(w)};
    std::deque<std::vector<Letter>> queue{*seen.begin()};
    bool restart = false;
    while (!queue.empty() && !restart) {
      auto cur = queue.front();
      queue.pop_front();
      const std::size_t M = cur.size();
      for (int dir : {1, -1}) {
        auto rel_at = [&](int p) -> Letter {
          p = ((p % rl) + rl) % rl;
          return dir == 1 ? relator_[p] : inverse_letter(relator_[rl - 1 - p]);
        };
        for (std::size_t s = 0; s < M && !restart; ++s) {
          int p0 = dir == 1 ? relator_position_[cur[s]]
                            : rl - 1 - relator_position_[inverse_letter(cur[s])];
          std::size_t run = 0;
          while (run < M && static_cast<int>(run) < rl &&
                 cur[(s + run) % M] == rel_at(p0 + static_cast<int>(run))) {
            ++run;
          }
          for (auto len = static_cast<std::size_t>(half - 1); len <= run && !restart; ++len) {
            std::vector<Letter> out;
            for (int t = rl - 1; t >= static_cast<int>(len); --t) out.push_back(inverse_letter(rel_at(p0 + t)));
            for (std::size_t t = len; t < M; ++t) out.push_back(cur[(s + t) % M]);
            auto r = free_cyclic_reduce(out);
            if (r.empty()) return std::nullopt;
            if (r.size() < L) {
              w = std::move(r);
              restart = true;
              break;
            }
            if (r.size() > L + 2) continue;
            auto rot = least_rotation(r);
            if (seen.insert(rot).second) queue.push_back(std::move(rot));
          }
        }
      }
    }
    if (restart) continue;
    for (const auto& c : seen) {
      if (c.size() == L) return CyclicWord(c);
    }
  }
}

std::optional<CyclicWord> Surface::reduce(std::span<const Letter> word) const {
  for (Letter l : word) {
    if (l >= names_.size()) throw PreconditionError("letter out of range");
  }
  auto w = free_cyclic_reduce(word);
  if (w.empty()) return std::nullopt;
  w = least_rotation(w);
  std::string key(w.begin(), w.end());
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->reduced.find(key);
    if (it != cache_->reduced.end()) return it->second;
  }
  std::optional<CyclicWord> out;
  if (torus()) {
    long m = 0, n = 0;
    for (Letter l : w) {
      long e = (l & 1) ? -1 : 1;
      if (l / 2 == 0) m += e;
      else n += e;
    }
    out = torus_class(m, n);
  } else if (closed()) {
    out = reduce_closed(w);
  } else {
    out = CyclicWord(w);
  }
  std::lock_guard lock(cache_->mutex);
  cache_->reduced.emplace(std::move(key), out);
  return out;
}

CyclicWord Surface::require(std::string_view text) const {
  auto w = reduce(text);
  if (!w) throw PreconditionError("word '" + std::string(text) + "' is trivial");
  return *w;
}

CyclicWord Surface::inverse(const CyclicWord& w) const {
  std::vector<Letter> inv(w.letters().rbegin(), w.letters().rend());
  for (auto& l : inv) l = inverse_letter(l);
  return *reduce(inv);
}

std::pair<long, long> Surface::torus_vector(const CyclicWord& w) const {
  if (!torus()) throw PreconditionError("lattice vectors exist only on the torus");
  long m = 0, n = 0;
  for (Letter l : w.letters()) {
    long e = (l & 1) ? -1 : 1;
    if (l / 2 == 0) m += e;
    else n += e;
  }
  return {m, n};
}

std::optional<CyclicWord> Surface::torus_class(long m, long n) const {
  if (!torus()) throw PreconditionError("lattice vectors exist only on the torus");
  if (m == 0 && n == 0) return std::nullopt;
  std::vector<Letter> w;
  for (long i = 0; i < std::labs(m); ++i) w.push_back(m > 0 ? 0 : 1);
  for (long i = 0; i < std::labs(n); ++i) w.push_back(n > 0 ? 2 : 3);
  return CyclicWord(least_rotation(w));
}

std::vector<CyclicWord> Surface::classes(int max_len) const {
  std::set<CyclicWord> found;
  std::vector<Letter> w;
  const auto N = static_cast<Letter>(letter_count());
  std::function<void()> grow = [&]() {
    if (!w.empty() && w.front() != inverse_letter(w.back()) && least_rotation(w) == w) {
      if (auto c = reduce(w); c && static_cast<int>(c->length()) <= max_len) found.insert(*c);
    }
    if (static_cast<int>(w.size()) == max_len) return;
    for (Letter l = 0; l < N; ++l) {
      if (!w.empty() && l == inverse_letter(w.back())) continue;
      if (!w.empty() && l < w.front()) continue;
      w.push_back(l);
      grow();
      w.pop_back();
    }
  };
  grow();
  return {found.begin(), found.end()};
}

int Surface::root_power(const CyclicWord& w) const {
  if (torus()) {
    auto [m, n] = torus_vector(w);
    return static_cast<int>(std::gcd(std::labs(m), std::labs(n)));
  }
  const auto& l = w.letters();
  const std::size_t L = l.size();
  for (std::size_t d = 1; d <= L; ++d) {
    if (L % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < L && periodic; ++i) periodic = l[i] == l[i - d];
    if (periodic) return static_cast<int>(L / d);
  }
  return 1;
}

}  // namespace sft
