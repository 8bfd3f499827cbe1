#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pca {

// Shared result shape for every property suite.  A failure is a definite
// counterexample; an inconclusive case ran out of fuel before settling and
// is reported separately so exhaustion is never mistaken for truth.
struct CheckReport {
  std::string property;
  std::uint64_t cases = 0;
  std::vector<std::string> failures;
  std::uint64_t inconclusive = 0;
  std::uint64_t skipped = 0;

  bool pass() const { return failures.empty() && inconclusive == 0; }

  void fail(std::string what) { failures.push_back(std::move(what)); }
  void merge(const CheckReport& other) {
    cases += other.cases;
    inconclusive += other.inconclusive;
    skipped += other.skipped;
    for (const auto& f : other.failures) failures.push_back(f);
  }
};

std::string render_report(const CheckReport& r);

}  // namespace pca
