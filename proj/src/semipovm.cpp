#include "omegahat/semipovm.hpp"

#include "omegahat/bitstring.hpp"
#include "omegahat/philox.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <mutex>
#include <sstream>

namespace omegahat::povm {

using linalg::add;
using linalg::combine;
using linalg::is_psd;
using linalg::loewner_leq;
using linalg::RationalHermitian;
using linalg::scale;
using linalg::subtract;

SemiPovmStream::SemiPovmStream(EvalFn eval, Descriptor descriptor, BoundFn gbound)
    : memo_([f = std::move(eval)](const std::pair<Stage, Index>& k) { return f(k.first, k.second); }),
      gbound_(std::move(gbound)),
      descriptor_(std::move(descriptor)) {}

std::size_t SemiPovmStream::gbound(Stage n, Index s) const {
  if (gbound_) return gbound_(n, s);
  return eval(n, s).block_size();
}

namespace {

BlockScalarOperator scalar_identity(const Rational& c) { return {RationalHermitian::identity(1) *= c, c}; }

/// Short reason why a Hermitian operator is not PSD.
std::string psd_witness(const BlockScalarOperator& a) {
  std::ostringstream out;
  if (sgn(a.tail()) < 0) {
    out << "negative tail " << format_rational(a.tail());
    return out.str();
  }
  const RationalHermitian& b = a.block();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (sgn(b(i, i).re) < 0) {
      out << "<e_" << i + 1 << ", A e_" << i + 1 << "> = " << format_rational(b(i, i).re);
      return out.str();
    }
  }
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = i + 1; j < b.dim(); ++j) {
      Rational minor = b(i, i).re * b(j, j).re - b(i, j).norm2();
      if (sgn(minor) < 0) {
        out << "principal minor {" << i + 1 << "," << j + 1 << "} = " << format_rational(minor);
        return out.str();
      }
    }
  }
  out << "block of size " << b.dim() << " has a negative eigenvalue";
  return out.str();
}

}  // namespace

ValidationReport validate_semipovm(const SemiPovmStream& stream, Stage N) {
  ValidationReport report;
  report.checked_up_to = N;
  const Descriptor& d = stream.descriptor();
  for (Stage n = 1; n <= N; ++n) {
    std::vector<std::pair<Rational, BlockScalarOperator>> mass_terms;
    for (Index s = 1; s <= N; ++s) {
      const BlockScalarOperator f = stream.eval(n, s);
      if (!f.is_square()) {
        report.violations.push_back({"block", n, s, "nonzero tail " + format_rational(f.tail())});
      } else if (f.trimmed().block_size() > stream.gbound(n, s)) {
        report.violations.push_back({"block", n, s,
                                     "block size " + std::to_string(f.trimmed().block_size()) + " > g = " +
                                         std::to_string(stream.gbound(n, s))});
      }
      if (!is_psd(f)) report.violations.push_back({"positivity", n, s, psd_witness(f)});
      if (n < N) {
        const BlockScalarOperator next = stream.eval(n + 1, s);
        // f(n) - 2^-n I <= f(n+1) - 2^-(n+1) I
        BlockScalarOperator gap = add(subtract(next, f), scalar_identity(pow2(-static_cast<long>(n) - 1)));
        if (!is_psd(gap)) report.violations.push_back({"schedule", n, s, psd_witness(gap)});
        if (d.monotone) {
          BlockScalarOperator step = subtract(next, f);
          if (!is_psd(step)) report.violations.push_back({"monotone", n, s, psd_witness(step)});
        }
      }
      if (s <= n) mass_terms.emplace_back(Rational(1), f);
    }
    if (d.mass_bounded) {
      BlockScalarOperator slack = subtract(BlockScalarOperator::identity(), combine(mass_terms));
      if (!is_psd(slack)) report.violations.push_back({"mass", n, 0, "I - sum: " + psd_witness(slack)});
    }
  }
  return report;
}

Schedule Schedule::power_of_two() {
  return {[](Stage n, Index) { return pow2(-static_cast<long>(n)); }, true};
}

namespace {

/// Interpolation segment: output stages [first, last] mix input stages m, l.
struct Segment {
  Stage first = 0;
  Stage last = 0;
  Stage m = 0;
  Stage l = 0;
  Rational hm;  // hbar(m)
  Rational hl;  // hbar(l)
};

struct RenormState {
  std::mutex mutex;
  std::map<Index, std::vector<Segment>> segments;
};

}  // namespace

SemiPovmStream renormalize_schedule(const SemiPovmStream& input, Schedule schedule, Stage max_search) {
  if (schedule.standard) return input;
  auto state = std::make_shared<RenormState>();
  auto hbar = [h = schedule.h](Stage k, Index s) {
    Rational v = h(k, s) + pow2(-static_cast<long>(k));
    // Keep hbar(1) strictly above 1/2 when h(1, s) vanishes.
    if (sgn(h(1, s)) == 0) v += pow2(-static_cast<long>(k));
    return v;
  };
  // Segment covering output stage n for string s, extending the cached list.
  auto segment_for = [input, state, hbar, h = schedule.h, max_search](Stage n, Index s) {
    std::vector<Segment> segs;
    {
      std::lock_guard lock(state->mutex);
      segs = state->segments[s];
    }
    Stage m = segs.empty() ? 1 : segs.back().l;
    Stage next = segs.empty() ? 1 : segs.back().last + 1;
    while (segs.empty() || segs.back().last < n) {
      const Rational hm = hbar(m, s);
      const Rational target = pow2(-static_cast<long>(next));
      Stage l = m + 1;
      while (hbar(l, s) > target) {
        if (++l > max_search) {
          throw Error("schedule does not reach 2^-" + std::to_string(next) + " before stage " +
                      std::to_string(max_search) + " for s = " + std::to_string(s));
        }
      }
      const Rational hl = hbar(l, s);
      for (Stage j = m; j < l; ++j) {
        BlockScalarOperator lhs = subtract(input.eval(j, s), scalar_identity(h(j, s)));
        BlockScalarOperator rhs = subtract(input.eval(j + 1, s), scalar_identity(h(j + 1, s)));
        if (!loewner_leq(lhs, rhs)) {
          throw ScheduleViolation(j, s,
                                  "f(" + std::to_string(j) + ") - h I <= f(" + std::to_string(j + 1) +
                                      ") - h I fails for s = " + std::to_string(s));
        }
      }
      Stage last = next;
      while (pow2(-static_cast<long>(last) - 1) >= hl) ++last;
      segs.push_back({next, last, m, l, hm, hl});
      m = l;
      next = last + 1;
    }
    {
      std::lock_guard lock(state->mutex);
      auto& cached = state->segments[s];
      if (cached.size() < segs.size()) cached = segs;
    }
    for (const auto& seg : segs) {
      if (seg.first <= n && n <= seg.last) return seg;
    }
    throw Error("internal: no renormalization segment");
  };
  auto eval = [input, segment_for](Stage n, Index s) {
    const Segment seg = segment_for(n, s);
    Rational alpha = (seg.hm - pow2(-static_cast<long>(n))) / (seg.hm - seg.hl);
    return combine({{Rational(1 - alpha), input.eval(seg.m, s)}, {alpha, input.eval(seg.l, s)}}).trimmed();
  };
  Descriptor d = input.descriptor();
  d.label = "renormalized(" + d.label + ")";
  d.monotone = false;
  return SemiPovmStream(eval, d);
}

SemiPovmStream scalar_embed(const semimeasure::SemiMeasureStream& r) {
  auto eval = [r](Stage n, Index s) { return BlockScalarOperator::projector_scalar(n, r.eval(n, s)); };
  Descriptor d{"scalar(" + r.label() + ")", true, true, false};
  return SemiPovmStream(eval, d, [](Stage n, Index) { return static_cast<std::size_t>(n); });
}

namespace {

struct PreparedFamily {
  std::vector<SparseEntry> entries;
  Rational hs2;
  std::size_t support = 1;  // 1 + largest index with a nonzero entry
};

/// sum of |e_ij|^2 over i, j < g, both triangles.
Rational truncated_mass(const std::vector<SparseEntry>& entries, std::size_t g) {
  Rational sum;
  for (const auto& e : entries) {
    if (e.i < g && e.j < g) sum += e.i == e.j ? e.value.norm2() : Rational(2 * e.value.norm2());
  }
  return sum;
}

}  // namespace

SemiPovmStream from_hilbert_schmidt(EntryFamily entries, std::function<Rational(Index)> hs_norm, std::string label) {
  Memo<Index, std::shared_ptr<const PreparedFamily>> prepared(
      [entries = std::move(entries), hs_norm = std::move(hs_norm)](const Index& s) {
        auto p = std::make_shared<PreparedFamily>();
        for (auto e : entries(s)) {
          if (e.i > e.j) {
            std::swap(e.i, e.j);
            e.value = e.value.conj();
          }
          if (e.i == e.j && !e.value.is_real()) throw Error("diagonal entry must be real");
          if (e.value.is_zero()) continue;
          p->support = std::max(p->support, e.j + 1);
          p->entries.push_back(std::move(e));
        }
        const Rational norm = hs_norm(s);
        p->hs2 = norm * norm;
        const Rational total = truncated_mass(p->entries, p->support);
        if (total != p->hs2) {
          throw NormMismatch("Hilbert-Schmidt norm^2 " + format_rational(p->hs2) + " differs from entry sum " +
                             format_rational(total) + " for s = " + std::to_string(s));
        }
        return std::shared_ptr<const PreparedFamily>(p);
      });
  auto gbound = [prepared](Stage n, Index s) {
    const auto p = prepared(s);
    const Rational bound = pow2(-2 * static_cast<long>(n) - 5);
    for (std::size_t g = 1; g < p->support; ++g) {
      if (p->hs2 - truncated_mass(p->entries, g) <= bound) return g;
    }
    return p->support;
  };
  auto eval = [prepared, gbound](Stage n, Index s) {
    const auto p = prepared(s);
    const std::size_t g = gbound(n, s);
    RationalHermitian block = RationalHermitian::identity(g);
    block *= pow2(-static_cast<long>(n) - 2);
    for (const auto& e : p->entries) {
      if (e.j < g) block.set(e.i, e.j, block(e.i, e.j) + e.value);
    }
    return BlockScalarOperator::square(std::move(block));
  };
  return SemiPovmStream(eval, Descriptor{std::move(label), false, false, true}, gbound);
}

SemiPovmStream projective_stream() {
  return from_hilbert_schmidt([](Index s) { return std::vector<SparseEntry>{{s - 1, s - 1, Rational(1)}}; },
                              [](Index) { return Rational(1); }, "projective");
}

MeasurementDistribution measurement_distribution(const SemiPovmStream& stream, Stage n, const StateVector& x,
                                                 Index window) {
  MeasurementDistribution d;
  d.stage = n;
  Rational total;
  const Rational slack = pow2(-static_cast<long>(n));
  for (Index s = 1; s <= window; ++s) {
    Rational q = linalg::quad_form(stream.eval(n, s), x);
    // Without slack-free monotonicity only f(n, s) - 2^-n I lies below the limit.
    if (!stream.descriptor().monotone) q -= slack;
    if (sgn(q) < 0) q = 0;
    total += q;
    d.p.push_back(std::move(q));
  }
  if (total > 1) throw Error("outcome lower bounds sum to " + format_rational(total) + " > 1");
  d.residual = 1 - total;
  return d;
}

std::optional<Index> sample_outcome(const MeasurementDistribution& dist, std::uint64_t seed, std::uint64_t index) {
  std::vector<Rational> cuts;
  Rational acc;
  for (const auto& p : dist.p) {
    acc += p;
    cuts.push_back(acc);
  }
  // U is consumed one bit at a time until [lo, lo + 2^-k) has no cut inside.
  PhiloxBits bits(seed, index);
  Rational lo;
  constexpr unsigned kMaxBits = 1U << 16;
  for (unsigned k = 1; k <= kMaxBits; ++k) {
    if (bits.next()) lo += pow2(-static_cast<long>(k));
    const Rational hi = lo + pow2(-static_cast<long>(k));
    auto it = std::upper_bound(cuts.begin(), cuts.end(), lo);
    if (it == cuts.end()) return std::nullopt;
    if (*it >= hi) return static_cast<Index>(it - cuts.begin()) + 1;
  }
  throw Error("sampler did not resolve an outcome");
}

std::vector<std::uint64_t> sample_counts(const MeasurementDistribution& dist, std::uint64_t seed,
                                         std::uint64_t count, unsigned jobs) {
  const std::size_t width = dist.p.size() + 1;
  auto run = [&dist, seed, width](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> counts(width, 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      auto o = sample_outcome(dist, seed, i);
      ++counts[o ? *o - 1 : width - 1];
    }
    return counts;
  };
  jobs = std::max(1U, jobs);
  std::vector<std::future<std::vector<std::uint64_t>>> parts;
  const std::uint64_t chunk = (count + jobs - 1) / jobs;
  for (std::uint64_t begin = 0; begin < count; begin += chunk) {
    const auto policy = jobs > 1 ? std::launch::async : std::launch::deferred;
    parts.push_back(std::async(policy, run, begin, std::min(count, begin + chunk)));
  }
  std::vector<std::uint64_t> total(width, 0);
  for (auto& part : parts) {
    auto c = part.get();
    for (std::size_t i = 0; i < width; ++i) total[i] += c[i];
  }
  return total;
}

linalg::json to_json(const MeasurementDistribution& d, const StateVector& x) {
  linalg::json outcomes = linalg::json::array();
  for (std::size_t i = 0; i < d.p.size(); ++i) {
    const Index s = i + 1;
    outcomes.push_back({{"s", s}, {"string", display_bits(from_index(s))}, {"p_num", d.p[i].get_num().get_str()},
                        {"p_den", d.p[i].get_den().get_str()}});
  }
  return {{"stage", d.stage},
          {"state", linalg::to_json(x)},
          {"outcomes", outcomes},
          {"residual", format_rational(d.residual)}};
}

}  // namespace omegahat::povm
