#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reconf/constraint_graph.hpp"
#include "reconf/rng.hpp"
#include "reconf/solver.hpp"

namespace reconf {

struct StageRow {
  std::string stage;
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::uint64_t max_alphabet = 0;
  std::optional<Value> maxmin;
  /// "exact" (oracle), "witness" (a verified sequence of value 1), "bound"
  /// (only an upper bound is known) or "skipped".
  std::string method = "skipped";
  std::optional<Value> upper_bound;
};

struct PipelineOptions {
  std::uint64_t budget = kDefaultStateBudget;
  std::uint64_t seed = kDefaultSeed;
  int min_n = 2;
  /// Satisfying path for n9 mode; found by the oracle when absent.
  std::optional<ReconfigSequence> psi_path;
  /// Stage artifacts are written here when set.
  std::optional<std::filesystem::path> out_dir;
};

struct PipelineReport {
  std::string mode;
  std::vector<StageRow> rows;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  const StageRow* row(const std::string& stage) const;
  /// stage,vertices,edges,max_alphabet,maxmin_numerator,maxmin_denominator,method,upper_bound
  std::string csv(bool header = true, const std::string& prefix_column = "") const;
};

/// source -> robustized (as explicit bit constraints) -> composed 4-ary ->
/// binary, with oracle values wherever the budget allows. Errors are
/// prefixed with the failing stage.
PipelineReport micro_pipeline(const ReconfInstance& instance, const PipelineOptions& options = {});

/// Robustizes at n = 9 and checks the spliced completeness sequence only.
PipelineReport n9_pipeline(const ReconfInstance& instance, const PipelineOptions& options = {});

/// The parameters of the full reduction with the constant-alphabet tester,
/// which no stage here reproduces.
std::string theoretical_constants_text();

}  // namespace reconf
