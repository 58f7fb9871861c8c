#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sft/algebra.hpp"
#include "sft/report.hpp"

namespace sft {

enum class Side { Single, Plus, Minus };

std::string side_name(Side s);

struct Orbit {
  std::string name;
  int cz = 0;
  int kappa = 1;
  bool good = true;
  Side side = Side::Single;
};

class OrbitSystem {
 public:
  OrbitSystem(int n, std::vector<Orbit> orbits);

  int n() const { return n_; }
  const TablePtr& table() const { return table_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }

  int p_degree(const Orbit& o) const { return n_ - 3 - o.cz; }
  int q_degree(const Orbit& o) const { return n_ - 3 + o.cz; }
  int hbar_degree() const { return 2 * (n_ - 3); }

  // Variable index for a good orbit; bad orbits have none.
  std::optional<std::uint32_t> variable(const std::string& name) const;
  std::uint32_t require_variable(const std::string& name) const;
  Side side_of(std::uint32_t variable) const { return variable_side_[variable]; }
  std::size_t variable_count() const { return variable_side_.size(); }

  GradedSeries zero() const { return GradedSeries(table_); }
  GradedSeries one() const { return GradedSeries(table_, 1); }
  GradedSeries q(const std::string& name, std::uint32_t exp = 1) const;
  GradedSeries p(const std::string& name, std::uint32_t exp = 1) const;
  GradedSeries hbar(int exp = 1) const { return GradedSeries::hbar_power(table_, exp); }

 private:
  int n_;
  std::vector<Orbit> orbits_;
  TablePtr table_;
  std::vector<Side> variable_side_;
};

using MonomialFilter = std::function<bool(const Monomial&)>;

// Weyl product of standard-form series; terms rejected by `keep` are dropped
// before accumulation (the filter sees the normalized product monomial).
GradedSeries star(const GradedSeries& a, const GradedSeries& b, const TruncationContext& ctx,
                  const MonomialFilter& keep = {});

// Reference implementation by repeated adjacent transposition; used as a test oracle.
GradedSeries star_by_transposition(const GradedSeries& a, const GradedSeries& b,
                                   const TruncationContext& ctx);

using OrbitPredicate = std::function<bool(std::uint32_t)>;

// (F * g) with p_v set to zero for every variable v accepted by `kill` (default: all).
GradedSeries act_right(const GradedSeries& F, const GradedSeries& g, const TruncationContext& ctx,
                       const OrbitPredicate& kill = {});
// (g * H) with q_v set to zero for every variable v accepted by `kill` (default: all).
GradedSeries act_left(const GradedSeries& g, const GradedSeries& H, const TruncationContext& ctx,
                      const OrbitPredicate& kill = {});

// Supercommutator a*b - (-1)^{|a||b|} b*a on homogeneous inputs.
GradedSeries supercommutator(const GradedSeries& a, const GradedSeries& b,
                             const TruncationContext& ctx);

// Residual monomials rejected by `keep` are ignored.
CheckReport check_master_H(const GradedSeries& H, const TruncationContext& ctx,
                           const MonomialFilter& keep = {});

CheckReport check_master_F(const OrbitSystem& system, const GradedSeries& F,
                           const GradedSeries& Hplus, const GradedSeries& Hminus,
                           const TruncationContext& ctx);

// Linear map on the coefficient part of a monomial (coefficient symbols only).
using CoefficientMap = std::function<GradedSeries(const Monomial&)>;

// Applies a coefficient operator term-wise; the coefficient block is leftmost,
// so no Koszul sign arises.
GradedSeries apply_to_coefficients(const GradedSeries& s, const CoefficientMap& op,
                                   const TruncationContext& ctx);

CheckReport check_master_chain(const GradedSeries& H, const CoefficientMap& coeff_boundary,
                               const TruncationContext& ctx);

// Window for exponentials. The weight of a monomial is hbar + (number of
// variables and coefficient symbols, with multiplicity).
struct ExpWindow {
  int max_p = 4;
  int max_q = 4;
  int max_coeff_len = 4;
  int max_weight = 8;

  bool admits(const Monomial& m) const;
};

// e^F = sum_k F^k/k! restricted to the window. F must not contain p_v and q_v
// of a common variable, so powers involve no contractions and every degree in
// the window is additive. Each term of F has weight >= 0 (hbar >= -1, and a
// bare constant needs hbar >= 1), so truncating partial powers to the window
// is exact. Weight-0 terms add a variable and the rest add weight, so the sum
// stops after at most max_p + max_q + max_coeff_len + max_weight factors.
GradedSeries exp_star(const GradedSeries& F, const ExpWindow& window);

}  // namespace sft
