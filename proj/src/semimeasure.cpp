#include "omegahat/semimeasure.hpp"

#include <ostream>

namespace omegahat::semimeasure {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::MachineDerived: return "machine-derived";
    case Provenance::Converted: return "converted";
    case Provenance::Mixture: return "mixture";
    case Provenance::Planted: return "planted";
    case Provenance::Custom: return "custom";
  }
  return "?";
}

SemiMeasureStream::SemiMeasureStream(Fn fn, Provenance provenance, std::string label)
    : memo_([f = std::move(fn)](const std::pair<Stage, Index>& key) { return f(key.first, key.second); }),
      provenance_(provenance),
      label_(std::move(label)) {}

SemiMeasureStream stream_from_pv(MachinePtr m) {
  std::string label = "pv:" + m->name();
  return SemiMeasureStream(
      [m](Stage n, Index s) { return machine::pv_lower(*m, n, from_index(s)); },
      Provenance::MachineDerived, std::move(label));
}

SemiMeasureStream stream_from_complexity(MachinePtr m) {
  std::string label = "complexity:" + m->name();
  return SemiMeasureStream(
      [m](Stage n, Index s) {
        auto h = machine::complexity_upper(*m, n, from_index(s));
        return h ? pow2(-static_cast<long>(*h)) : Rational(0);
      },
      Provenance::MachineDerived, std::move(label));
}

SemiMeasureStream constant_stream(std::function<Rational(Index)> v, std::string label) {
  return SemiMeasureStream([v = std::move(v)](Stage, Index s) { return v(s); }, Provenance::Custom,
                           std::move(label));
}

ValidationReport validate_semimeasure(const SemiMeasureStream& stream, Stage N) {
  if (N == 0) throw Error("validation needs N >= 1");
  ValidationReport report;
  report.checked_up_to = N;
  for (Stage n = 1; n <= N; ++n) {
    Rational mass;
    for (Index s = 1; s <= N; ++s) {
      Rational v = stream.eval(n, s);
      if (sgn(v) < 0) report.violations.push_back({"negative", n, 0, s, format_rational(v)});
      if (n < N) {
        Rational next = stream.eval(n + 1, s);
        if (next < v) {
          report.violations.push_back(
              {"monotonicity", n, n + 1, s, format_rational(v) + " > " + format_rational(next)});
        }
      }
      if (s <= n) mass += v;
    }
    if (mass > 1) report.violations.push_back({"mass", n, 0, 0, "sum = " + format_rational(mass)});
  }
  return report;
}

IncreasingSequence to_increasing_sequence(const SemiMeasureStream& stream) {
  return IncreasingSequence([stream](Stage n) {
    Rational a;
    for (Index s = 1; s <= n; ++s) a += stream.eval(n, s);
    return a;
  });
}

SemiMeasureStream from_increasing_sequence(const IncreasingSequence& b, const Rational& d, Stage check_upto) {
  if (sgn(d) <= 0) throw Error("the divisor d must be positive");
  auto r = [b, d](Index s) -> Rational {
    if (s <= 1) return Rational(0);
    return (b.eval(static_cast<Stage>(s)) - b.eval(static_cast<Stage>(s - 1))) / d;
  };
  Rational partial;
  for (Stage n = 1; n <= check_upto; ++n) {
    Rational term = r(n);
    if (sgn(term) < 0) throw Error("sequence is not increasing at n = " + std::to_string(n));
    partial += term;
    if (partial > 1) {
      throw MassExceeded("partial sum up to " + std::to_string(n) + " is " + format_rational(partial) +
                         "; the divisor is too small");
    }
  }
  return SemiMeasureStream([r](Stage, Index s) { return r(s); }, Provenance::Converted,
                           "from-sequence");
}

std::size_t DominationReport::unresolved() const {
  std::size_t count = 0;
  for (const auto& e : entries) count += e.found ? 0 : 1;
  return count;
}

DominationReport corroborate_domination(const SemiMeasureStream& m, const SemiMeasureStream& r, const Rational& c,
                                        Stage budget) {
  if (sgn(c) <= 0) throw Error("domination constant must be positive");
  DominationReport report;
  report.c = c;
  report.budget = budget;
  for (Stage n = 1; n <= budget; ++n) {
    for (Index s = 1; s <= budget; ++s) {
      DominationEntry e{n, s, false, 0};
      Rational target = c * r.eval(n, s);
      for (Stage np = n; np <= budget; ++np) {
        if (target <= m.eval(np, s)) {
          e.found = true;
          e.witness = np;
          break;
        }
      }
      report.entries.push_back(e);
    }
  }
  return report;
}

void write_csv(std::ostream& out, const SemiMeasureStream& stream, Stage stages, Index window) {
  out << "n,s,bits,num,den\n";
  for (Stage n = 1; n <= stages; ++n) {
    for (Index s = 1; s <= window; ++s) {
      Rational v = stream.eval(n, s);
      out << n << ',' << s << ',' << from_index(s) << ',' << v.get_num().get_str() << ','
          << v.get_den().get_str() << '\n';
    }
  }
}

}  // namespace omegahat::semimeasure
