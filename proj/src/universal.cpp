#include "omegahat/universal.hpp"

#include <algorithm>
#include <future>

namespace omegahat::universal {

using linalg::combine;
using linalg::loewner_leq;

Emission StreamEmitter::run(Stage k, Index s, std::uint64_t) const {
  const BlockScalarOperator v = stream_.eval(static_cast<Stage>(k + s - 1), s);
  if (!v.is_square()) return {EmitStatus::Undefined, {}, 1, "stream value has a nonzero tail"};
  return {EmitStatus::Value, v.block(), 1, {}};
}

namespace {

std::int64_t unzigzag(std::uint64_t v) {
  return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1U);
}

std::uint64_t zigzag(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Error("matrix entry too large to encode");
  const long v = z.get_si();
  return v >= 0 ? static_cast<std::uint64_t>(v) << 1 : (static_cast<std::uint64_t>(-(v + 1)) << 1) | 1U;
}

std::uint64_t natural(const mpz_class& z) {
  if (!z.fits_ulong_p()) throw Error("matrix entry too large to encode");
  return z.get_ui();
}

}  // namespace

std::optional<RationalHermitian> decode_matrix(const std::vector<std::uint64_t>& e, std::string* why) {
  auto fail = [why](const std::string& msg) -> std::optional<RationalHermitian> {
    if (why) *why = msg;
    return std::nullopt;
  };
  if (e.empty()) return fail("no output");
  const std::uint64_t dim = e[0];
  if (dim == 0 || dim > VmEmitter::kMaxDim) return fail("dimension " + std::to_string(dim) + " out of range");
  const std::size_t expected = 1 + 2 * dim + 4 * (dim * (dim - 1) / 2);
  if (e.size() != expected) {
    return fail("expected " + std::to_string(expected) + " integers, got " + std::to_string(e.size()));
  }
  RationalHermitian m(dim);
  std::size_t pos = 1;
  auto rational = [&](Rational& out) {
    const std::int64_t num = unzigzag(e[pos]);
    const std::uint64_t den = e[pos + 1];
    pos += 2;
    if (den == 0) return false;
    out = Rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<unsigned long>(den)));
    out.canonicalize();
    return true;
  };
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      RationalComplex z;
      if (!rational(z.re)) return fail("zero denominator");
      if (i != j && !rational(z.im)) return fail("zero denominator");
      m.set(i, j, z);
    }
  }
  return m;
}

std::vector<std::uint64_t> encode_matrix(const RationalHermitian& m) {
  std::vector<std::uint64_t> out{m.dim()};
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) {
      out.push_back(zigzag(m(i, j).re.get_num()));
      out.push_back(natural(m(i, j).re.get_den()));
      if (i != j) {
        out.push_back(zigzag(m(i, j).im.get_num()));
        out.push_back(natural(m(i, j).im.get_den()));
      }
    }
  }
  return out;
}

Emission VmEmitter::run(Stage k, Index s, std::uint64_t fuel) const {
  const machine::RunOutcome r = machine::run_program(program_, fuel, {k, s, 0, 0});
  if (r.kind == machine::RunKind::OutOfFuel) return {EmitStatus::Running, {}, r.steps, {}};
  if (!r.halted()) return {EmitStatus::Undefined, {}, r.steps, "rejected: " + machine::to_string(r.reason)};
  std::string why;
  auto m = decode_matrix(r.emitted, &why);
  if (!m) return {EmitStatus::Undefined, {}, r.steps, why};
  return {EmitStatus::Value, std::move(*m), r.steps, {}};
}

SemiPovmStream zero_stream() {
  return SemiPovmStream([](Stage, Index) { return BlockScalarOperator::zero(); }, povm::Descriptor{"zero", true, true},
                        [](Stage, Index) { return std::size_t{1}; });
}

SemiPovmStream shift_mix(const SemiPovmStream& r) {
  // G(k, s) = max(k, g(1, s), ..., g(k, s)).
  Memo<std::pair<Stage, Index>, std::size_t> memo([r](const std::pair<Stage, Index>& key) {
    auto [k, s] = key;
    std::size_t g = k;
    for (Stage j = 1; j <= k; ++j) g = std::max(g, r.gbound(j, s));
    return g;
  });
  auto bound = [memo](Stage n, Index s) { return memo({static_cast<Stage>(n + s), s}); };
  auto eval = [r, bound](Stage n, Index s) {
    const Stage k = static_cast<Stage>(n + s);
    const std::size_t g = bound(n, s);
    RationalHermitian block = r.eval(k, s).trimmed().block_padded(g);
    block *= Rational(1, 2);
    const Rational floor = pow2(-static_cast<long>(s) - 1) * (1 - pow2(-static_cast<long>(n)));
    RationalHermitian id = RationalHermitian::identity(g);
    id *= floor;
    block += id;
    return BlockScalarOperator::square(std::move(block));
  };
  const auto& d = r.descriptor();
  return SemiPovmStream(eval, povm::Descriptor{"shift_mix(" + d.label + ")", true, true, false}, bound);
}

namespace {

EmitterPtr planted_floor() {
  static const EmitterPtr e = std::make_shared<StreamEmitter>(shift_mix(zero_stream()), "planted-floor", true);
  return e;
}

EmitterPtr complexity_plant() {
  static const EmitterPtr e = [] {
    auto vm = std::make_shared<machine::VmMachine>();
    auto base = semimeasure::stream_from_complexity(vm);
    auto ready = std::make_shared<std::once_flag>();
    semimeasure::SemiMeasureStream capped(
        [vm, base, ready](Stage n, Index s) {
          // One enumeration at the cap serves every smaller stage.
          std::call_once(*ready, [&] { vm->summary(kComplexityPlantCap); });
          return base.eval(std::min(n, kComplexityPlantCap), s);
        },
        semimeasure::Provenance::Planted, "complexity-capped");
    return std::make_shared<StreamEmitter>(shift_mix(povm::scalar_embed(capped)), "complexity-plant");
  }();
  return e;
}

}  // namespace

EmitterPtr decode_emitter(Index l) {
  if (l == 0) throw Error("emitter indices start at 1");
  if (l == 1) return planted_floor();
  if (l == 2) return complexity_plant();
  Bits program = from_index(l);
  auto listing = machine::decode_listing(program);
  const bool valid = listing && std::none_of(listing->begin(), listing->end(), [](const machine::Instruction& i) {
                       return i.op == machine::Op::Read;
                     });
  if (!valid) return std::make_shared<NeverEmitter>();
  return std::make_shared<VmEmitter>(std::move(program));
}

GuardedProcedure::Attempt GuardedProcedure::attempt(std::uint64_t fuel) const {
  Attempt a;
  const Stage n = step_;
  std::vector<Emission> out;
  for (Index s = 1; s <= n; ++s) {
    Emission e = emitter_->run(static_cast<Stage>(n - s + 1), s, fuel);
    a.fuel_used += e.steps;
    if (e.status == EmitStatus::Running) return a;
    out.push_back(std::move(e));
  }
  a.halted = true;
  for (Index s = 1; s <= n; ++s) {
    const Emission& e = out[s - 1];
    if (e.status == EmitStatus::Undefined) {
      a.detail = "(i) undefined at (" + std::to_string(n - s + 1) + "," + std::to_string(s) + "): " + e.detail;
      return a;
    }
  }
  std::vector<std::pair<Rational, BlockScalarOperator>> terms;
  for (Index s = 1; s <= n; ++s) {
    const BlockScalarOperator next = BlockScalarOperator::square(out[s - 1].value);
    if (!loewner_leq(value(std::numeric_limits<Stage>::max(), s), next)) {
      a.detail = "(ii) T_h(s) <= T_f fails at s = " + std::to_string(s);
      return a;
    }
    terms.emplace_back(Rational(1), next);
  }
  if (!loewner_leq(combine(terms), BlockScalarOperator::identity())) {
    a.detail = "(iii) sum over S_" + std::to_string(n) + " exceeds I";
    return a;
  }
  a.accepted = true;
  for (auto& e : out) a.values.push_back(std::move(e.value));
  return a;
}

void GuardedProcedure::commit(const Attempt& a, Stage stage, std::vector<AcceptanceEvent>& log) {
  fuel_spent_ += a.fuel_used;
  if (!a.halted) {
    ++stalls_;
    return;
  }
  log.push_back({stage, l_, step_, a.accepted, a.detail});
  if (a.accepted) {
    for (Index s = 1; s <= a.values.size(); ++s) {
      auto& changes = history_[s];
      if (changes.empty() || !(changes.back().second == a.values[s - 1])) {
        changes.emplace_back(stage, a.values[s - 1]);
      }
    }
  }
  // A failed check still moves on to S_{n+1}; h stays as it was.
  ++step_;
}

BlockScalarOperator GuardedProcedure::value(Stage n, Index s) const {
  auto it = history_.find(s);
  if (it == history_.end()) return BlockScalarOperator::zero();
  const auto& changes = it->second;
  for (auto c = changes.rbegin(); c != changes.rend(); ++c) {
    if (c->first <= n) return BlockScalarOperator::square(c->second);
  }
  return BlockScalarOperator::zero();
}

json GuardedProcedure::to_json() const {
  json hist = json::array();
  for (const auto& [s, changes] : history_) {
    json cs = json::array();
    for (const auto& [stage, m] : changes) cs.push_back({{"stage", stage}, {"h", linalg::to_json(m)}});
    hist.push_back({{"s", s}, {"changes", cs}});
  }
  return {{"l", l_},         {"emitter", emitter_->describe()}, {"step", step_}, {"fuel_spent", fuel_spent_},
          {"stalls", stalls_}, {"accepted", hist}};
}

void GuardedProcedure::load_json(const json& j) {
  if (j.at("l").get<Index>() != l_ || j.at("emitter").get<std::string>() != emitter_->describe()) {
    throw FormatVersionMismatch("checkpoint emitter " + std::to_string(l_) + " does not match this enumeration");
  }
  step_ = j.at("step").get<Stage>();
  fuel_spent_ = j.at("fuel_spent").get<std::uint64_t>();
  stalls_ = j.at("stalls").get<std::uint64_t>();
  history_.clear();
  for (const auto& h : j.at("accepted")) {
    auto& changes = history_[h.at("s").get<Index>()];
    for (const auto& c : h.at("changes")) {
      changes.emplace_back(c.at("stage").get<Stage>(), linalg::hermitian_from_json(c.at("h")));
    }
  }
}

Dovetailer::Dovetailer(DovetailConfig config, EmitterSource source)
    : config_(config), source_(std::move(source)) {
  if (config_.jobs == 0) config_.jobs = 1;
}

void Dovetailer::advance_to(Stage n) {
  while (stage_ < n) {
    ++stage_;
    procedures_.emplace_back(stage_, source_(stage_));
    const std::uint64_t fuel = config_.fuel_per_stage * stage_;
    std::vector<GuardedProcedure::Attempt> attempts(procedures_.size());
    auto run = [this, fuel, &attempts](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Emitter& e = procedures_[i].emitter();
        if (!e.never_halts() && e.certified() == nullptr) attempts[i] = procedures_[i].attempt(fuel);
      }
    };
    if (config_.jobs > 1) {
      std::vector<std::future<void>> tasks;
      const std::size_t chunk = (procedures_.size() + config_.jobs - 1) / config_.jobs;
      for (std::size_t b = 0; b < procedures_.size(); b += chunk) {
        tasks.push_back(std::async(std::launch::async, run, b, std::min(procedures_.size(), b + chunk)));
      }
      for (auto& t : tasks) t.get();
    } else {
      run(0, procedures_.size());
    }
    for (std::size_t i = 0; i < procedures_.size(); ++i) {
      if (procedures_[i].emitter().certified() == nullptr) procedures_[i].commit(attempts[i], stage_, log_);
    }
  }
}

BlockScalarOperator Dovetailer::component(Index l, Stage n, Index s) const {
  if (n > stage_) throw Error("stage " + std::to_string(n) + " not reached yet");
  if (l == 0 || l > n) return BlockScalarOperator::zero();
  if (const auto* planted = procedures_[l - 1].emitter().certified()) return planted->eval(n, s);
  return procedures_[l - 1].value(n, s);
}

std::vector<std::string> Dovetailer::audit() const {
  std::vector<std::string> failures;
  for (const auto& e : log_) {
    if (!e.accepted) continue;
    const auto& p = procedures_[e.l - 1];
    std::vector<std::pair<Rational, BlockScalarOperator>> terms;
    for (Index s = 1; s <= e.step; ++s) {
      const BlockScalarOperator before = p.value(e.stage - 1, s);
      const BlockScalarOperator after = p.value(e.stage, s);
      if (!loewner_leq(before, after)) {
        failures.push_back("l=" + std::to_string(e.l) + " stage " + std::to_string(e.stage) + ": (ii) at s = " +
                           std::to_string(s));
      }
      terms.emplace_back(Rational(1), after);
    }
    if (!loewner_leq(combine(terms), BlockScalarOperator::identity())) {
      failures.push_back("l=" + std::to_string(e.l) + " stage " + std::to_string(e.stage) + ": (iii)");
    }
  }
  return failures;
}

json Dovetailer::to_json() const {
  json procs = json::array();
  for (const auto& p : procedures_) procs.push_back(p.to_json());
  json log = json::array();
  for (const auto& e : log_) {
    log.push_back({{"stage", e.stage}, {"l", e.l}, {"step", e.step}, {"accepted", e.accepted}, {"detail", e.detail}});
  }
  return {{"format", "omegahat.dovetail"},
          {"version", kFormatVersion},
          {"stage", stage_},
          {"fuel_per_stage", config_.fuel_per_stage},
          {"procedures", procs},
          {"log", log}};
}

Dovetailer Dovetailer::from_json(const json& j, EmitterSource source) {
  try {
    if (!j.is_object() || j.value("format", "") != "omegahat.dovetail") {
      throw FormatVersionMismatch("not a dovetailer checkpoint");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw FormatVersionMismatch("checkpoint version " + std::to_string(j.at("version").get<int>()) +
                                  ", expected " + std::to_string(kFormatVersion));
    }
    DovetailConfig config;
    config.fuel_per_stage = j.at("fuel_per_stage").get<std::uint64_t>();
    Dovetailer d(config, std::move(source));
    d.stage_ = j.at("stage").get<Stage>();
    const auto& procs = j.at("procedures");
    if (procs.size() != d.stage_) throw FormatVersionMismatch("procedure count does not match stage");
    for (Index l = 1; l <= d.stage_; ++l) {
      d.procedures_.emplace_back(l, d.source_(l));
      d.procedures_.back().load_json(procs.at(l - 1));
    }
    for (const auto& e : j.at("log")) {
      d.log_.push_back({e.at("stage").get<Stage>(), e.at("l").get<Index>(), e.at("step").get<Stage>(),
                        e.at("accepted").get<bool>(), e.at("detail").get<std::string>()});
    }
    return d;
  } catch (const json::exception& e) {
    throw FormatVersionMismatch(std::string("malformed checkpoint: ") + e.what());
  } catch (const FormatVersionMismatch&) {
    throw;
  } catch (const Error& e) {
    throw FormatVersionMismatch(std::string("malformed checkpoint: ") + e.what());
  }
}

namespace {

SemiPovmStream make_mixture(const std::shared_ptr<void>& keepalive,
                            std::function<std::vector<BlockScalarOperator>(Stage, Index)> components) {
  auto eval = [keepalive, components](Stage n, Index s) {
    std::vector<std::pair<Rational, BlockScalarOperator>> terms;
    auto parts = components(n, s);
    for (std::size_t l = 1; l <= parts.size(); ++l) {
      terms.emplace_back(pow2(-static_cast<long>(l)), std::move(parts[l - 1]));
    }
    return combine(terms);
  };
  return SemiPovmStream(eval, povm::Descriptor{"universal", true, true, false});
}

}  // namespace

UniversalConstructor::UniversalConstructor(DovetailConfig config, EmitterSource source)
    : UniversalConstructor(Dovetailer(config, std::move(source))) {}

UniversalConstructor::UniversalConstructor(Dovetailer restored)
    : shared_(std::make_shared<Shared>(std::move(restored))),
      mixture_(make_mixture(shared_, [shared = shared_](Stage n, Index s) {
        std::lock_guard lock(shared->mutex);
        shared->dovetailer.advance_to(n);
        std::vector<BlockScalarOperator> parts;
        for (Index l = 1; l <= n; ++l) parts.push_back(shared->dovetailer.component(l, n, s));
        return parts;
      })) {}

SemiPovmStream UniversalConstructor::guarded_stream(Index l) const {
  auto eval = [shared = shared_, l](Stage n, Index s) {
    std::lock_guard lock(shared->mutex);
    shared->dovetailer.advance_to(n);
    return shared->dovetailer.component(l, n, s);
  };
  return SemiPovmStream(eval, povm::Descriptor{"guarded(" + std::to_string(l) + ")", true, true, false});
}

SemiPovmStream UniversalConstructor::universal_stream() const { return mixture_; }

BlockScalarOperator UniversalConstructor::omega_hat_lower(Stage n, Index m) const {
  std::vector<std::pair<Rational, BlockScalarOperator>> terms;
  for (Index s = 1; s <= m; ++s) terms.emplace_back(Rational(1), mixture_.eval(n, s));
  return combine(terms);
}

void UniversalConstructor::advance_to(Stage n) const {
  std::lock_guard lock(shared_->mutex);
  shared_->dovetailer.advance_to(n);
}

Stage UniversalConstructor::stage() const {
  std::lock_guard lock(shared_->mutex);
  return shared_->dovetailer.stage();
}

json UniversalConstructor::checkpoint() const {
  std::lock_guard lock(shared_->mutex);
  return shared_->dovetailer.to_json();
}

std::vector<AcceptanceEvent> UniversalConstructor::log() const {
  std::lock_guard lock(shared_->mutex);
  return shared_->dovetailer.log();
}

std::vector<std::string> UniversalConstructor::audit() const {
  std::lock_guard lock(shared_->mutex);
  return shared_->dovetailer.audit();
}

const UniversalConstructor& default_constructor() {
  static const UniversalConstructor instance;
  return instance;
}

SemiPovmStream guarded_stream(Index l) { return default_constructor().guarded_stream(l); }
SemiPovmStream universal_stream() { return default_constructor().universal_stream(); }
BlockScalarOperator omega_hat_lower(Stage n, Index m) { return default_constructor().omega_hat_lower(n, m); }

Rational scalar_floor(Index s) { return pow2(-static_cast<long>(s) - 2); }

}  // namespace omegahat::universal
