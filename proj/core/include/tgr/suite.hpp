#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgr/parallel.hpp"
#include "tgr/random.hpp"
#include "tgr/workspace.hpp"

namespace tgr {

struct SuiteConfig {
  std::uint64_t seed = 0;
  /// Cases per property; properties with their own default use it when 0.
  std::size_t cases = 0;
  RandomSizes sizes;
  std::size_t soundness_depth = 32;
  std::size_t chain_depth = 32;
  std::size_t morphism_depth = 16;
  std::size_t budget = 20000;
  /// 0 uses the hardware concurrency.
  std::size_t threads = 0;
  /// Property names to run; all when empty.
  std::set<std::string> only;
  /// Per-property case counts, overriding `cases`.
  std::map<std::string, std::size_t> case_counts;
};

struct CaseOutcome {
  enum class Status { kPass, kFail, kSkip };
  Status status = Status::kPass;
  /// Individual checks performed (matches verified, pairs compared, ...).
  std::size_t checks = 0;
  std::string message;
  /// Shrunk input that still fails, as workspace text when applicable.
  std::string counterexample;

  static CaseOutcome fail(std::string message) {
    return CaseOutcome{Status::kFail, 0, std::move(message), {}};
  }
  static CaseOutcome skip(std::string message) {
    return CaseOutcome{Status::kSkip, 0, std::move(message), {}};
  }
};

struct PropertyResult {
  std::string name;
  std::string about;
  /// Cases that ran to a verdict.
  std::size_t cases = 0;
  /// Cases drawn but set aside (oracle budget exceeded) and replaced.
  std::size_t skipped = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> counterexamples;
  double seconds = 0;

  bool pass() const { return failures == 0; }
  std::string to_text() const;
};

struct SuiteSummary {
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool pass() const;
  const PropertyResult* find(const std::string& name) const;
  std::string to_text() const;
};

/// A property runs one case per derived seed. Cases are independent and may
/// run concurrently; results are gathered in case order.
struct Property {
  std::string name;
  std::string about;
  std::size_t default_cases;
  std::function<CaseOutcome(std::uint64_t case_seed, const SuiteConfig& config)> run;
};

const std::vector<Property>& properties();

/// Runs one property until `cases` non-skipped cases are in, drawing at most
/// ten times as many.
PropertyResult run_property(const Property& p, const SuiteConfig& config);
SuiteSummary run_property_suite(const SuiteConfig& config);

/// Greedily drops rules, then graph nodes (redirecting their in-edges to the
/// root), while `fails` keeps holding.
Workspace shrink_workspace(const Workspace& w, const std::function<bool(const Workspace&)>& fails);

/// Result of developing Φ computed bottom-up, one redex per node: an
/// independent oracle for complete developments with finite right-hand sides.
Term develop_bottom_up(const Term& t, const FiniteParallelRedex& phi, const TRS& trs);

/// Total term over the TRS signature with lhs instances planted at random
/// positions.
Term random_redex_term(Rng& rng, const TRS& trs, std::size_t height);

}  // namespace tgr
