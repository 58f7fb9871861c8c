#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/bv.hpp"
#include "sft/report.hpp"
#include "sft/surface.hpp"
#include "sft/weyl.hpp"

namespace sft {

// Classes of closed geodesics, closed under orientation reversal. Orbit i of
// the induced system is classes[i]; partner[i] is the index of its inverse.
struct GeodesicAlphabet {
  std::vector<CyclicWord> classes;
  std::vector<std::string> names;
  std::vector<std::size_t> partner;

  std::size_t size() const { return classes.size(); }
  std::optional<std::size_t> index_of(const CyclicWord& w) const;
};

// Sorts the classes and pairs each with its inverse; names come from `dict`
// when given, else the spaceless word.
GeodesicAlphabet make_alphabet(const Surface& surface, std::vector<CyclicWord> classes,
                               const ClassDictionary* dict = nullptr);

// n = 2, every orbit good with cz = 0, kappa = root power, on the positive side.
OrbitSystem alphabet_system(const Surface& surface, const GeodesicAlphabet& alphabet);

// Adds inverses, cobracket pieces and brackets of pairs of total length
// <= max_len until nothing changes.
std::vector<CyclicWord> close_alphabet(const Surface& surface, std::vector<CyclicWord> seeds,
                                       int max_len);
// Classes produced as in close_alphabet but missing from the alphabet.
std::vector<CyclicWord> missing_classes(const Surface& surface, const GeodesicAlphabet& alphabet,
                                        int max_len);

// F = (1/hbar) sum p_i p_j over pairs {i, j = partner(i)} with i < j.
GradedSeries build_F(const OrbitSystem& system, const GeodesicAlphabet& alphabet);

// Orbit indices of one monomial of H: a(i,j,k) for q_i q_j p_k, b(i,j,k) for
// q_i p_j p_k, c(i,j,k) for p_i p_j p_k (all with 1/hbar) and d(i) for p_i.
using CoefficientFamily = std::map<std::vector<std::uint32_t>, Rational>;

struct SurfaceHamiltonian {
  GradedSeries H;
  GradedSeries F;
  // (1/hbar)(sum a q q p + sum b q p p) before conjugation by e^F.
  GradedSeries core;
  CoefficientFamily a, b, c, d;
  // Word length of each orbit and the closure cap; 0 disables the window.
  std::vector<int> lengths;
  int cap = 0;
  bool iterated = false;
  std::string convention;
};

// Core Hamiltonian from the cobracket of every class and the bracket of pairs
// of total length <= cap, with 1/kappa weights; H = e^{-F} * core * e^{F}.
SurfaceHamiltonian build_H_surface(const Surface& surface, const GeodesicAlphabet& alphabet,
                                   const OrbitSystem& system, int cap);

// Splits H into the four families; other monomials are reported by check_shapes.
void split_families(const GradedSeries& H, SurfaceHamiltonian& out);
CheckReport check_shapes(const GradedSeries& H);

// G * G = 0 for G = e^{F} H e^{-F}, on monomials whose p-variables have total
// word length <= cap. Core terms never have more q-length than p-length, so
// every class contracted inside such a monomial is in the alphabet. Also
// checks e^F <- H = 0, which holds exactly iff G has no q-free term.
CheckReport check_surface_master(const SurfaceHamiltonian& H, const TruncationContext& ctx);

CyclicWord psi_map(const GeodesicAlphabet& alphabet, std::size_t orbit);

// beta(q_i q_j) = constant part of F * q_i q_j.
Augmentation augmentation_from_F(const OrbitSystem& system, const GradedSeries& F);

// Linearizes H at the augmentation of F and compares (dlin, delta, mu) with
// (0, cobracket, bracket) through psi; brackets of pairs longer than the cap
// are expected to vanish. The augmentation is checked on words up to max_word.
CheckReport check_psi(const Surface& surface, const GeodesicAlphabet& alphabet,
                      const OrbitSystem& system, const SurfaceHamiltonian& H,
                      const TruncationContext& ctx, int max_word = 3);

}  // namespace sft
