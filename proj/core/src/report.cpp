#include "sft/report.hpp"

namespace sft {

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

void CheckReport::fail(const std::string& item, const Rational& coefficient,
                       const std::string& note) {
  status = Status::Fail;
  ++witness_count;
  if (witnesses.size() < kMaxStoredWitnesses) witnesses.push_back({item, coefficient, note});
}

void CheckReport::inconclusive(const std::string& cap, const std::string& note) {
  if (status == Status::Pass) status = Status::Inconclusive;
  if (missing_cap.empty()) missing_cap = cap;
  if (!note.empty()) notes.push_back(note);
}

void CheckReport::absorb(const CheckReport& sub) {
  for (const auto& w : sub.witnesses) {
    if (witnesses.size() < kMaxStoredWitnesses) {
      witnesses.push_back({sub.name + ": " + w.item, w.coefficient, w.note});
    }
  }
  witness_count += sub.witness_count;
  if (sub.status == Status::Fail) {
    status = Status::Fail;
  } else if (sub.status == Status::Inconclusive && status == Status::Pass) {
    status = Status::Inconclusive;
  }
  if (missing_cap.empty()) missing_cap = sub.missing_cap;
  for (const auto& n : sub.notes) notes.push_back(sub.name + ": " + n);
}

void CheckReport::set_caps(const TruncationContext& ctx) {
  caps["max_p_degree"] = ctx.max_p_degree;
  caps["max_hbar"] = ctx.max_hbar;
  caps["min_hbar"] = ctx.min_hbar;
  caps["max_coeff_len"] = ctx.max_coeff_len;
}

CheckReport report_from_residual(const std::string& name, const GradedSeries& residual) {
  CheckReport r;
  r.name = name;
  for (const auto& [m, c] : residual.terms()) {
    r.fail(monomial_to_string(*residual.table(), m), c);
  }
  return r;
}

}  // namespace sft
