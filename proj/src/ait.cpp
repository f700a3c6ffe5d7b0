#include "omegahat/ait.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <set>

namespace omegahat::ait {

using linalg::combine;
using linalg::loewner_leq;

Index pair_strings(Index s, Index t) {
  if (s == 0 || t == 0) throw Error("string codes start at 1");
  const unsigned __int128 a = s - 1;
  const unsigned __int128 b = t - 1;
  const unsigned __int128 w = a + b;
  const unsigned __int128 z = w * (w + 1) / 2 + b + 1;
  if (z > std::numeric_limits<Index>::max()) throw Error("pair code overflows 64 bits");
  return static_cast<Index>(z);
}

std::pair<Index, Index> unpair(Index u) {
  if (u == 0) throw Error("string codes start at 1");
  const unsigned __int128 z = u - 1;
  // Largest w with w(w+1)/2 <= z; the float guess is corrected exactly.
  auto w = static_cast<unsigned __int128>((std::sqrt(8.0L * static_cast<long double>(z) + 1) - 1) / 2);
  while (w * (w + 1) / 2 > z) --w;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  const unsigned __int128 b = z - w * (w + 1) / 2;
  const unsigned __int128 a = w - b;
  return {static_cast<Index>(a + 1), static_cast<Index>(b + 1)};
}

HhatBound hhat_upper(const universal::UniversalConstructor& uc, Index s, Stage n, const Rational& eps) {
  HhatBound b;
  b.s = s;
  b.stage = n;
  b.eps = eps;
  b.floor = universal::scalar_floor(s);
  b.slack = pow2(-static_cast<long>(n));
  if (b.slack >= b.floor) {
    throw linalg::NotPositiveDefinite("stage " + std::to_string(n) + " too early for s = " + std::to_string(s) +
                                      ": need 2^-n < " + format_rational(b.floor));
  }
  const BlockScalarOperator fm = uc.universal_stream().eval(n, s);
  b.lower = combine({{Rational(1, 2), fm}, {Rational((b.floor - b.slack) / 2), BlockScalarOperator::identity()}});
  b.upper = linalg::spectral_neg_log2(b.lower, eps);
  return b;
}

HhatBound hhat_upper(Index s, Stage n, const Rational& eps) {
  return hhat_upper(universal::default_constructor(), s, n, eps);
}

std::string to_string(Derived kind) {
  switch (kind) {
    case Derived::Joint: return "joint";
    case Derived::Conditional: return "conditional";
    case Derived::Mutual: return "mutual";
  }
  return "?";
}

Derived derived_from_string(const std::string& name) {
  if (name == "joint") return Derived::Joint;
  if (name == "conditional") return Derived::Conditional;
  if (name == "mutual") return Derived::Mutual;
  throw Error("unknown derived quantity '" + name + "'");
}

IntervalHermitian hhat_derived(const universal::UniversalConstructor& uc, Derived kind, Index s, Index t, Stage n,
                               const Rational& eps) {
  auto h = [&](Index u) { return hhat_upper(uc, u, n, eps).upper; };
  switch (kind) {
    case Derived::Joint: return h(pair_strings(s, t));
    case Derived::Conditional: return linalg::subtract(h(pair_strings(t, s)), h(t));
    case Derived::Mutual: return linalg::subtract(linalg::add(h(s), h(t)), h(pair_strings(s, t)));
  }
  throw Error("unknown derived quantity");
}

namespace {

PartialMap total(std::string name, std::function<Index(Index)> f) {
  return {std::move(name), [f = std::move(f)](Index t, std::uint64_t) -> std::optional<Index> { return f(t); }};
}

}  // namespace

PartialMap identity_map() {
  return total("identity", [](Index t) { return t; });
}

PartialMap swap_pairs() {
  return total("swap", [](Index u) {
    auto [s, t] = unpair(u);
    return pair_strings(t, s);
  });
}

PartialMap pair_first() {
  return total("first", [](Index u) { return unpair(u).first; });
}

PartialMap diagonal_collapse() {
  return {"diagonal", [](Index u, std::uint64_t) -> std::optional<Index> {
            auto [s, t] = unpair(u);
            if (s != t) return std::nullopt;
            return s;
          }};
}

PartialMap duplicate() {
  return total("duplicate", [](Index s) { return pair_strings(s, s); });
}

PartialMap pair_with_lambda() {
  return total("pair-lambda", [](Index s) { return pair_strings(s, 1); });
}

PartialMap empty_map() {
  return {"empty", [](Index, std::uint64_t) -> std::optional<Index> { return std::nullopt; }};
}

PartialMap vm_map(Bits program) {
  require_bits(program);
  std::string name = "vm:" + program;
  return {std::move(name), [program = std::move(program)](Index t, std::uint64_t fuel) -> std::optional<Index> {
            const auto r = machine::run_program(program, fuel, {t, 0, 0, 0});
            if (!r.halted() || r.emitted.empty() || r.emitted[0] == 0) return std::nullopt;
            return r.emitted[0];
          }};
}

PartialMap map_from_name(const std::string& name) {
  if (name == "identity") return identity_map();
  if (name == "swap") return swap_pairs();
  if (name == "first") return pair_first();
  if (name == "diagonal") return diagonal_collapse();
  if (name == "duplicate") return duplicate();
  if (name == "pair-lambda") return pair_with_lambda();
  if (name == "empty") return empty_map();
  if (name.rfind("vm:", 0) == 0) return vm_map(name.substr(3));
  throw Error("unknown map '" + name + "'");
}

std::size_t TransportReport::failures() const {
  std::size_t n = 0;
  for (const auto& w : witnesses) n += w.dominated ? 0 : 1;
  return n;
}

namespace {

/// Fuel-n enumeration of dom(psi) over inputs t <= n, in discovery order.
class DomainEnumeration {
 public:
  struct Found {
    Index t;
    Index image;
    Stage stage;
  };

  explicit DomainEnumeration(PartialMap psi) : psi_(std::move(psi)) {}

  /// Preimages of s discovered by stage n, in order.
  std::vector<Index> preimages(Stage n, Index s) {
    std::lock_guard lock(mutex_);
    extend(n);
    std::vector<Index> out;
    for (const auto& f : found_) {
      if (f.stage > n) break;
      if (f.image == s) out.push_back(f.t);
    }
    return out;
  }

  /// psi(t) if discovered by stage n.
  std::optional<Index> image(Stage n, Index t) {
    std::lock_guard lock(mutex_);
    extend(n);
    for (const auto& f : found_) {
      if (f.stage > n) break;
      if (f.t == t) return f.image;
    }
    return std::nullopt;
  }

 private:
  void extend(Stage n) {
    while (done_ < n) {
      ++done_;
      for (Index t = 1; t <= done_; ++t) {
        if (seen_.count(t)) continue;
        if (auto v = psi_.eval(t, done_)) {
          found_.push_back({t, *v, done_});
          seen_.insert(t);
        }
      }
    }
  }

  PartialMap psi_;
  std::mutex mutex_;
  Stage done_ = 0;
  std::vector<Found> found_;
  std::set<Index> seen_;
};

}  // namespace

Transport psi_transport(const PartialMap& psi, const SemiPovmStream& base, Stage stages, Index window) {
  auto domain = std::make_shared<DomainEnumeration>(psi);
  auto eval = [domain, base](Stage n, Index s) {
    std::vector<std::pair<Rational, BlockScalarOperator>> terms;
    const auto pre = domain->preimages(n, s);
    for (std::size_t k = 1; k <= pre.size(); ++k) {
      terms.emplace_back(Rational(1), base.eval(static_cast<Stage>(n + k), pre[k - 1]));
    }
    if (terms.empty()) return BlockScalarOperator::zero();
    return combine(terms);
  };
  const auto& bd = base.descriptor();
  const bool monotone = bd.monotone;
  SemiPovmStream out(eval,
                     povm::Descriptor{"transport(" + psi.name + ", " + bd.label + ")", monotone,
                                      monotone && bd.mass_bounded, false});
  Transport result{out, {psi.name, stages, window, {}}};
  for (Stage n = 1; n <= stages; ++n) {
    for (Index s = 1; s <= window; ++s) {
      auto image = domain->image(n, s);
      if (!image) continue;
      result.report.witnesses.push_back({n, s, *image, loewner_leq(base.eval(n, s), out.eval(n, *image))});
    }
  }
  return result;
}

Rational transport_constant(const universal::UniversalConstructor& uc, const PartialMap& psi,
                            const std::vector<Index>& strings, Stage n, const Rational& eps) {
  constexpr std::uint64_t kFuel = 1U << 20;
  Rational c;
  for (Index s : strings) {
    auto image = psi.eval(s, kFuel);
    if (!image) continue;
    const Stage stage = static_cast<Stage>(std::max<Index>({n, s + 3, *image + 3}));
    const IntervalHermitian from = hhat_upper(uc, s, stage, eps).upper;
    const IntervalHermitian to = hhat_upper(uc, *image, stage, eps).upper;
    const std::size_t dim = std::max(from.dim(), to.dim()) + 1;  // last index reads the tail
    for (std::size_t i = 0; i < dim; ++i) {
      const Rational gap = linalg::entry(to, i, i).re.hi - linalg::entry(from, i, i).re.lo;
      if (gap > c) c = gap;
    }
  }
  return ceil_dyadic(c, 4);
}

semimeasure::SemiMeasureStream state_pairing(const SemiPovmStream& base, const linalg::StateVector& x) {
  return semimeasure::SemiMeasureStream(
      [base, x](Stage n, Index s) {
        Rational q = linalg::quad_form(base.eval(n, s), x) - pow2(-static_cast<long>(n));
        return sgn(q) < 0 ? Rational(0) : q;
      },
      semimeasure::Provenance::Converted, "pairing(" + base.descriptor().label + ")");
}

json to_json(const HhatBound& b, const std::vector<std::pair<std::string, Rational>>& transport_constants) {
  json constants = json::object();
  for (const auto& [name, c] : transport_constants) constants[name] = format_rational(c);
  return {{"s", b.s},
          {"string", display_bits(from_index(b.s))},
          {"stage", b.stage},
          {"eps", format_rational(b.eps)},
          {"floor", format_rational(b.floor)},
          {"slack", format_rational(b.slack)},
          {"lower", linalg::to_json(b.lower)},
          {"operator", linalg::to_json(b.upper)},
          {"transport_constants", constants},
          {"certificate",
           "upper bound: M(s) >= L by the floor c_s I <= M(s) and f_M(n,s) - 2^-n I <= M(s); -log2 is operator "
           "monotone decreasing"}};
}

void write_csv(std::ostream& out, const std::vector<HhatBound>& bounds) {
  out << "s,bits,stage,i,lo,hi\n";
  for (const auto& b : bounds) {
    const std::string bits = from_index(b.s);
    auto row = [&](std::size_t i, const linalg::Interval& iv) {
      out << b.s << ',' << bits << ',' << b.stage << ',' << i << ',' << format_rational(iv.lo) << ','
          << format_rational(iv.hi) << '\n';
    };
    row(0, b.upper.tail());
    for (std::size_t i = 0; i < b.upper.dim(); ++i) row(i + 1, b.upper(i, i).re);
  }
}

}  // namespace omegahat::ait
