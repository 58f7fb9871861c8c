#include <mutex>
#include <numeric>
#include <unordered_map>

#include "sft/surface.hpp"

namespace sft {

namespace {

// Ray of a cyclic word leaving the vertex at visit `start`.
struct Ray {
  std::span<const Letter> w;
  std::size_t start;
  bool forward;

  Letter at(std::size_t t) const {
    const std::size_t L = w.size();
    if (forward) return w[(start + t) % L];
    return inverse_letter(w[(start + L - 1 - (t % L)) % L]);
  }
};

// Order of the ends of two rays from the vertex: counterclockwise around the
// vertex, then around each vertex after the shared prefix. 0 when equal.
int compare_ends(const Surface& s, const Ray& a, const Ray& b, std::size_t horizon) {
  const int N = static_cast<int>(s.letter_count());
  for (std::size_t k = 0; k < horizon; ++k) {
    Letter x = a.at(k), y = b.at(k);
    if (x == y) continue;
    int px = s.vertex_position(x), py = s.vertex_position(y);
    if (k > 0) {
      int in = s.vertex_position(inverse_letter(a.at(k - 1)));
      px = (px - in + N) % N;
      py = (py - in + N) % N;
    }
    return px < py ? -1 : 1;
  }
  return 0;
}

// Sign of the crossing of (x at i) with (y at j), 0 if they do not cross here.
int crossing(const Surface& s, std::span<const Letter> x, std::size_t i, std::span<const Letter> y,
             std::size_t j) {
  Ray fx{x, i, true}, bx{x, i, false}, fy{y, j, true}, by{y, j, false};
  Letter back = bx.at(0);
  if (back == by.at(0) || back == fy.at(0)) return 0;
  const std::size_t horizon = x.size() + y.size() + 2;
  int c_fb = compare_ends(s, fx, bx, horizon);
  int c1 = compare_ends(s, fx, fy, horizon), c2 = compare_ends(s, bx, fy, horizon);
  int c3 = compare_ends(s, fx, by, horizon), c4 = compare_ends(s, bx, by, horizon);
  if (c1 == 0 || c2 == 0 || c3 == 0 || c4 == 0) return 0;
  // Between the two ends of x in the linear order.
  bool fy_in = c1 != c2;
  bool by_in = c3 != c4;
  if (fy_in == by_in) return 0;
  // y leaves to the left of x when its forward end lies counterclockwise
  // from the forward end of x and before the backward one.
  bool left = (c_fb < 0) == fy_in;
  return left ? 1 : -1;
}

std::vector<Letter> rotated(std::span<const Letter> w, std::size_t i) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (std::size_t t = 0; t < w.size(); ++t) out.push_back(w[(i + t) % w.size()]);
  return out;
}

std::vector<Letter> segment(std::span<const Letter> w, std::size_t from, std::size_t to) {
  std::vector<Letter> out;
  const std::size_t L = w.size();
  for (std::size_t t = from; t % L != to % L || out.empty(); ++t) {
    out.push_back(w[t % L]);
    if (out.size() > L) break;
  }
  return out;
}

}  // namespace

std::vector<LinkedPair> linked_pairs(const Surface& s, std::span<const Letter> x,
                                     std::span<const Letter> y) {
  std::vector<LinkedPair> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (int e = crossing(s, x, i, y, j)) out.push_back({i, j, e});
    }
  }
  return out;
}

std::vector<LinkedPair> self_linked_pairs(const Surface& s, std::span<const Letter> x) {
  std::vector<LinkedPair> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j) continue;
      if (int e = crossing(s, x, i, x, j)) out.push_back({i, j, e});
    }
  }
  return out;
}

Vec1<CyclicWord> linked_pair_bracket(const Surface& s, const CyclicWord& x, const CyclicWord& y) {
  Vec1<CyclicWord> out;
  const auto& xl = x.letters();
  const auto& yl = y.letters();
  for (const auto& lp : linked_pairs(s, xl, yl)) {
    auto w = rotated(xl, lp.i);
    auto v = rotated(yl, lp.j);
    w.insert(w.end(), v.begin(), v.end());
    if (auto c = s.reduce(w)) add_to(out, *c, lp.sign);
  }
  return out;
}

Vec2<CyclicWord> linked_pair_cobracket(const Surface& s, const CyclicWord& x) {
  Vec2<CyclicWord> out;
  const auto& xl = x.letters();
  for (const auto& lp : self_linked_pairs(s, xl)) {
    auto u = s.reduce(segment(xl, lp.i, lp.j));
    auto v = s.reduce(segment(xl, lp.j, lp.i));
    if (u && v) add_to(out, {*u, *v}, lp.sign);
  }
  return out;
}

Vec1<CyclicWord> torus_bracket_oracle(const Surface& torus, long m, long n, long p, long q) {
  if (!torus.torus()) throw PreconditionError("the oracle needs the closed torus");
  if ((m == 0 && n == 0) || (p == 0 && q == 0)) throw PreconditionError("zero lattice vector");
  Vec1<CyclicWord> out;
  long det = m * q - n * p;
  if (auto c = torus.torus_class(m + p, n + q)) add_to(out, *c, Rational(-det));
  return out;
}

Vec1<CyclicWord> goldman_bracket(const Surface& s, const CyclicWord& x, const CyclicWord& y) {
  if (s.torus()) {
    auto [m, n] = s.torus_vector(x);
    auto [p, q] = s.torus_vector(y);
    return torus_bracket_oracle(s, m, n, p, q);
  }
  return linked_pair_bracket(s, x, y);
}

Vec2<CyclicWord> turaev_cobracket(const Surface& s, const CyclicWord& x) {
  if (s.torus()) return {};
  return linked_pair_cobracket(s, x);
}

BialgebraOps<CyclicWord> string_bialgebra(const Surface& s) {
  struct Memo {
    std::mutex mutex;
    std::map<std::pair<CyclicWord, CyclicWord>, Vec1<CyclicWord>> mu;
    std::map<CyclicWord, Vec2<CyclicWord>> delta;
  };
  auto memo = std::make_shared<Memo>();
  BialgebraOps<CyclicWord> ops;
  ops.d1 = -1;
  ops.d2 = 1;
  ops.degree = [](const CyclicWord&) { return -1; };
  ops.mu = [s, memo](const CyclicWord& a, const CyclicWord& b) {
    {
      std::lock_guard lock(memo->mutex);
      auto it = memo->mu.find({a, b});
      if (it != memo->mu.end()) return it->second;
    }
    auto v = goldman_bracket(s, a, b);
    std::lock_guard lock(memo->mutex);
    return memo->mu.emplace(std::make_pair(a, b), std::move(v)).first->second;
  };
  ops.delta = [s, memo](const CyclicWord& a) {
    {
      std::lock_guard lock(memo->mutex);
      auto it = memo->delta.find(a);
      if (it != memo->delta.end()) return it->second;
    }
    auto v = turaev_cobracket(s, a);
    std::lock_guard lock(memo->mutex);
    return memo->delta.emplace(a, std::move(v)).first->second;
  };
  ops.describe = [s](const CyclicWord& w) { return s.render(w); };
  return ops;
}

}  // namespace sft
