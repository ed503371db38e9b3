#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenav/nn/dense_net.hpp"
#include "scenav/verify/property.hpp"

namespace scenav::verify {

struct Budget {
  long max_splits = 20000;
  long max_trials = 2000;
  /// 0 derives the cap from max_splits.
  int max_depth = 0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless both limits are positive.
  void validate() const;
  int depth_cap() const;
};

struct SearchStats {
  long splits = 0;
  long trials = 0;
  long probes = 0;
  long discharged = 0;
  long undecided = 0;
  int deepest = 0;
};

/// Chain of inputs (one per step) and the outputs they produce.
struct Witness {
  std::string case_label;
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> outputs;
};

enum class VerdictKind { Verified, Falsified, Unknown };

std::string_view verdict_name(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Witness> witness;
  SearchStats stats;
};

/// Branch-and-bound over each case's start box with interleaved sampling and
/// gradient search for counterexamples. Verified means every sub-box was
/// discharged by bounds; Falsified carries a concretely re-checked witness.
Verdict verify(const nn::DenseNet& net, const PropertyQuery& query, const Budget& budget);

/// Re-runs the witness: start containment, the prefix argmaxes, transition
/// containment between steps and violation of the desired predicate at the end.
bool check_witness(const nn::DenseNet& net, const PropertyQuery& query, const Witness& w);

}  // namespace scenav::verify
