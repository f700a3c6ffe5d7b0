#pragma once

#include "omegahat/semipovm.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace omegahat::universal {

using linalg::BlockScalarOperator;
using linalg::json;
using linalg::RationalHermitian;
using povm::SemiPovmStream;

enum class EmitStatus { Value, Undefined, Running };

struct Emission {
  EmitStatus status = EmitStatus::Running;
  RationalHermitian value;
  std::uint64_t steps = 0;
  std::string detail;  // why an output was rejected as undefined
};

/// A machine mapping (k, s) to a Hermitian matrix, simulated with a fuel
/// budget per call. Deterministic.
class Emitter {
 public:
  virtual ~Emitter() = default;
  virtual std::string describe() const = 0;
  virtual Emission run(Stage k, Index s, std::uint64_t fuel) const = 0;
  /// True when no input can ever halt; the dovetailer skips such machines.
  virtual bool never_halts() const { return false; }
  /// A stream known valid in closed form. The dovetailer uses it as the
  /// component directly instead of guarding the emitter.
  virtual const SemiPovmStream* certified() const { return nullptr; }
};

using EmitterPtr = std::shared_ptr<const Emitter>;

class NeverEmitter final : public Emitter {
 public:
  std::string describe() const override { return "never"; }
  Emission run(Stage, Index, std::uint64_t fuel) const override { return {EmitStatus::Running, {}, fuel, {}}; }
  bool never_halts() const override { return true; }
};

/// Emits stream(k + s - 1, s), so the anti-diagonal S_n of the guarded
/// procedure reads the stream at stage n.
class StreamEmitter final : public Emitter {
 public:
  StreamEmitter(SemiPovmStream stream, std::string name, bool certified = false)
      : stream_(std::move(stream)), name_(std::move(name)), certified_(certified) {}
  std::string describe() const override { return name_; }
  Emission run(Stage k, Index s, std::uint64_t fuel) const override;
  const SemiPovmStream* certified() const override { return certified_ ? &stream_ : nullptr; }

 private:
  SemiPovmStream stream_;
  std::string name_;
  bool certified_;
};

/// Register-VM emitter. Runs with r0 = k, r1 = s; the emitted integers are
/// [N, then the upper triangle row-major: zigzag(re_num), re_den for a
/// diagonal entry, zigzag(re_num), re_den, zigzag(im_num), im_den otherwise].
class VmEmitter final : public Emitter {
 public:
  static constexpr std::size_t kMaxDim = 8;
  explicit VmEmitter(Bits program) : program_(std::move(program)) {}
  std::string describe() const override { return "vm:" + display_bits(program_); }
  Emission run(Stage k, Index s, std::uint64_t fuel) const override;
  const Bits& program() const { return program_; }

 private:
  Bits program_;
};

/// Adapter for hand-written emitters (tests, experiments).
class FunctionEmitter final : public Emitter {
 public:
  using Fn = std::function<Emission(Stage, Index, std::uint64_t)>;
  FunctionEmitter(Fn fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {}
  std::string describe() const override { return name_; }
  Emission run(Stage k, Index s, std::uint64_t fuel) const override { return fn_(k, s, fuel); }

 private:
  Fn fn_;
  std::string name_;
};

/// Reads a VM output vector as a Hermitian matrix; nullopt if malformed.
std::optional<RationalHermitian> decode_matrix(const std::vector<std::uint64_t>& emitted, std::string* why = nullptr);
/// Inverse of decode_matrix (for building VM emitters).
std::vector<std::uint64_t> encode_matrix(const RationalHermitian& m);

/// Stage at which the complexity-plant emitter freezes its machine data.
inline constexpr Stage kComplexityPlantCap = 16;

/// l = 1: the planted floor (shift mix of the zero stream), certified.
/// l = 2: shift mix of the scalar embedding of 2^-H_V, frozen at stage 16.
/// l >= 3: the VM program with code l when it decodes to a READ-free
/// listing ending exactly at END; every other code never halts.
EmitterPtr decode_emitter(Index l);

using EmitterSource = std::function<EmitterPtr(Index)>;

/// f'(n, s) = 1/2 f(n+s, s) + 2^-(s+1) (1 - 2^-n) I_G with
/// G = max(n+s, g(j, s) for j <= n+s).
SemiPovmStream shift_mix(const SemiPovmStream& r);

/// The zero semi-POVM, g = 1.
SemiPovmStream zero_stream();

struct AcceptanceEvent {
  Stage stage = 0;  // dovetail stage at which the step was decided
  Index l = 0;
  Stage step = 0;   // the procedure's n (inputs S_n)
  bool accepted = false;
  std::string detail;  // failed condition on rejection
};

/// The guarded procedure for one emitter. h(s) only changes on accepted
/// steps, and each change is kept with the dovetail stage it happened at.
class GuardedProcedure {
 public:
  struct Attempt {
    bool halted = false;  // false: stall and retry with more fuel
    bool accepted = false;
    std::string detail;
    std::vector<RationalHermitian> values;  // f_l(n - s + 1, s) for s = 1..n
    std::uint64_t fuel_used = 0;
  };

  GuardedProcedure(Index l, EmitterPtr emitter) : l_(l), emitter_(std::move(emitter)) {}

  /// Simulates S_step with `fuel` per input and checks the three conditions.
  /// Pure: may run concurrently with other procedures' attempts.
  Attempt attempt(std::uint64_t fuel) const;
  /// Applies an attempt at dovetail stage `stage`, appending to `log`.
  void commit(const Attempt& a, Stage stage, std::vector<AcceptanceEvent>& log);

  /// T_{h(s)} as of the end of dovetail stage n.
  BlockScalarOperator value(Stage n, Index s) const;

  Index l() const { return l_; }
  Stage step() const { return step_; }
  std::uint64_t fuel_spent() const { return fuel_spent_; }
  std::uint64_t stalls() const { return stalls_; }
  const Emitter& emitter() const { return *emitter_; }

  json to_json() const;
  void load_json(const json& j);

 private:
  Index l_;
  EmitterPtr emitter_;
  Stage step_ = 1;
  std::uint64_t fuel_spent_ = 0;
  std::uint64_t stalls_ = 0;
  std::map<Index, std::vector<std::pair<Stage, RationalHermitian>>> history_;
};

class FormatVersionMismatch : public Error {
 public:
  using Error::Error;
};

struct DovetailConfig {
  std::uint64_t fuel_per_stage = 64;  // fuel per input at stage N is this * N
  unsigned jobs = 1;
};

/// Stage N runs one attempt for each procedure l <= N (the new one starts
/// here); attempts may run in parallel, commits go in ascending l.
class Dovetailer {
 public:
  static constexpr int kFormatVersion = 1;

  explicit Dovetailer(DovetailConfig config = {}, EmitterSource source = decode_emitter);

  void advance_to(Stage n);
  Stage stage() const { return stage_; }
  /// f(l, n, s); zero for l > n. Requires n <= stage(). Certified emitters
  /// contribute their stream unguarded.
  BlockScalarOperator component(Index l, Stage n, Index s) const;
  const std::vector<AcceptanceEvent>& log() const { return log_; }
  const std::vector<GuardedProcedure>& procedures() const { return procedures_; }
  const DovetailConfig& config() const { return config_; }
  void set_jobs(unsigned jobs) { config_.jobs = jobs == 0 ? 1 : jobs; }

  /// Replays the log against the recorded values: every accepted step
  /// satisfied conditions (ii) and (iii). Returns the failures found.
  std::vector<std::string> audit() const;

  json to_json() const;
  /// FormatVersionMismatch for any file this version did not write.
  static Dovetailer from_json(const json& j, EmitterSource source = decode_emitter);

 private:
  DovetailConfig config_;
  EmitterSource source_;
  Stage stage_ = 0;
  std::vector<GuardedProcedure> procedures_;  // procedures_[l-1]
  std::vector<AcceptanceEvent> log_;
};

/// Shares one dovetailer between its component and mixture views; the
/// dovetailer is advanced on demand.
class UniversalConstructor {
 public:
  explicit UniversalConstructor(DovetailConfig config = {}, EmitterSource source = decode_emitter);
  explicit UniversalConstructor(Dovetailer restored);

  /// f(l, n, s) as a stream in (n, s); monotone and mass-bounded.
  SemiPovmStream guarded_stream(Index l) const;
  /// f_M(n, s) = sum_{l <= n} 2^-l f(l, n, s).
  SemiPovmStream universal_stream() const;
  /// sum_{s <= m} f_M(n, s).
  BlockScalarOperator omega_hat_lower(Stage n, Index m) const;

  void advance_to(Stage n) const;
  Stage stage() const;
  json checkpoint() const;
  std::vector<AcceptanceEvent> log() const;
  std::vector<std::string> audit() const;

 private:
  struct Shared {
    std::mutex mutex;
    Dovetailer dovetailer;
    explicit Shared(Dovetailer d) : dovetailer(std::move(d)) {}
  };
  std::shared_ptr<Shared> shared_;
  SemiPovmStream mixture_;
};

/// Process-wide constructor with the default emitter enumeration.
const UniversalConstructor& default_constructor();
SemiPovmStream guarded_stream(Index l);
SemiPovmStream universal_stream();
BlockScalarOperator omega_hat_lower(Stage n, Index m);

/// c_s = 2^-(s+2): the planted floor converges to 2^-(s+1) I with weight 1/2.
Rational scalar_floor(Index s);

}  // namespace omegahat::universal
