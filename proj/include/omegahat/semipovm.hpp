#pragma once

#include "omegahat/linalg_json.hpp"
#include "omegahat/memo.hpp"
#include "omegahat/semimeasure.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace omegahat::povm {

using linalg::BlockScalarOperator;
using linalg::StateVector;

struct Descriptor {
  std::string label;
  /// eval(n, s) <= eval(n+1, s) with no 2^-n slack (guarded and mixture streams).
  bool monotone = false;
  /// sum_{s<=n} eval(n, s) <= I at every stage.
  bool mass_bounded = false;
  /// The target is a computable POVM (e.g. the projective stream).
  bool computable_povm = false;
};

/// Stage-indexed square rational operators (n, s) -> f(n, s) on the
/// 2^-n schedule, with block bound g(n, s). Copies share one memo table.
class SemiPovmStream {
 public:
  using EvalFn = std::function<BlockScalarOperator(Stage, Index)>;
  using BoundFn = std::function<std::size_t(Stage, Index)>;

  /// Without `gbound`, g(n, s) is the block size of eval(n, s).
  SemiPovmStream(EvalFn eval, Descriptor descriptor, BoundFn gbound = nullptr);

  BlockScalarOperator eval(Stage n, Index s) const { return memo_({n, s}); }
  std::size_t gbound(Stage n, Index s) const;
  const Descriptor& descriptor() const { return descriptor_; }

 private:
  Memo<std::pair<Stage, Index>, BlockScalarOperator> memo_;
  BoundFn gbound_;
  Descriptor descriptor_;
};

struct Violation {
  std::string kind;  // positivity | schedule | block | mass | monotone
  Stage n = 0;
  Index s = 0;  // 0 for stage-wide (mass) violations
  std::string detail;
};

struct ValidationReport {
  Stage checked_up_to = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Positivity, schedule, block size for n, s <= N; the mass condition when the
/// descriptor declares it and slack-free monotonicity when declared.
ValidationReport validate_semipovm(const SemiPovmStream& stream, Stage N);

class ScheduleViolation : public Error {
 public:
  ScheduleViolation(Stage n, Index s, const std::string& what) : Error(what), n(n), s(s) {}
  Stage n;
  Index s;
};

class NormMismatch : public Error {
 public:
  using Error::Error;
};

/// A slack schedule h(n, s); `standard` marks h = 2^-n exactly.
struct Schedule {
  std::function<Rational(Stage, Index)> h;
  bool standard = false;

  static Schedule power_of_two();
};

/// Moves a stream from the slack schedule h onto 2^-n by interpolating
/// between stages, as in the relaxation of the schedule condition.
/// Throws ScheduleViolation when the input inequality fails on a pair the
/// construction uses. `max_search` bounds the search for the next stage.
SemiPovmStream renormalize_schedule(const SemiPovmStream& input, Schedule schedule, Stage max_search = 4096);

/// f(n, s) = r(n, s) I_n.
SemiPovmStream scalar_embed(const semimeasure::SemiMeasureStream& r);

struct SparseEntry {
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;
  RationalComplex value;
};

/// Upper-triangle entries (i <= j) of R(s); lower entries are implied.
using EntryFamily = std::function<std::vector<SparseEntry>(Index)>;

/// Lower-computable stream of a Hilbert-Schmidt family with exactly known
/// norms: truncate to the smallest g with squared-entry tail <= 2^-(2n+5)
/// and add 2^-(n+2) I_g. NormMismatch if hs_norm(s)^2 differs from the
/// squared entry sum.
SemiPovmStream from_hilbert_schmidt(EntryFamily entries, std::function<Rational(Index)> hs_norm,
                                    std::string label = "hilbert-schmidt");

/// P(s) = projector onto e_s (s as an integer code).
SemiPovmStream projective_stream();

struct MeasurementDistribution {
  Stage stage = 0;
  std::vector<Rational> p;  // p[s-1] for s = 1..window
  Rational residual;        // mass assigned to the completion outcome w
};

/// Certified per-outcome lower bounds at stage n for s <= window.
MeasurementDistribution measurement_distribution(const SemiPovmStream& stream, Stage n, const StateVector& x,
                                                 Index window);

/// Outcome s, or nullopt for w. Draw `index` of the stream keyed by `seed`.
std::optional<Index> sample_outcome(const MeasurementDistribution& dist, std::uint64_t seed,
                                    std::uint64_t index = 0);

/// Counts of outcomes 1..window followed by the w count, for draws
/// 0..count-1; bit-identical for any number of jobs.
std::vector<std::uint64_t> sample_counts(const MeasurementDistribution& dist, std::uint64_t seed,
                                         std::uint64_t count, unsigned jobs = 1);

linalg::json to_json(const MeasurementDistribution& d, const StateVector& x);

}  // namespace omegahat::povm
