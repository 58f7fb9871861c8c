#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "sft/algebra.hpp"

namespace sft {

enum class Status { Pass, Fail, Inconclusive };

std::string status_name(Status s);

struct Witness {
  std::string item;
  Rational coefficient;
  std::string note;
};

struct CheckReport {
  std::string name;
  Status status = Status::Pass;
  std::vector<Witness> witnesses;
  std::size_t witness_count = 0;
  std::map<std::string, long long> caps;
  double elapsed_ms = 0;
  std::string missing_cap;
  std::vector<std::string> notes;

  static constexpr std::size_t kMaxStoredWitnesses = 64;

  bool passed() const { return status == Status::Pass; }
  void fail(const std::string& item, const Rational& coefficient, const std::string& note = {});
  void inconclusive(const std::string& cap, const std::string& note = {});
  // Folds a sub-check into this one; witnesses are prefixed with the sub-check name.
  void absorb(const CheckReport& sub);
  void set_caps(const TruncationContext& ctx);
};

// Every nonzero coefficient of the residual becomes a witness.
CheckReport report_from_residual(const std::string& name, const GradedSeries& residual);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace sft
