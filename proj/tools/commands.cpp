#include "commands.hpp"

#include "omegahat/catalog.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace omegahat::cli {

namespace {

using linalg::StateVector;
using nlohmann::json;
using universal::UniversalConstructor;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string fmt(const Rational& q) { return format_rational(q); }

bool want_json(const ExperimentConfig& c, const char* fallback) {
  return (c.format.empty() ? std::string(fallback) : c.format) == "json";
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void selfcheck(const ExperimentConfig& c, const std::vector<std::string>& problems) {
  if (!c.selfcheck || problems.empty()) return;
  throw ViolationError("selfcheck failed", problems);
}

std::vector<Index> parse_codes(const std::string& list) {
  std::vector<Index> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument("bad");
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("strings must be positive integer codes separated by commas, got '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("strings list is empty");
  return out;
}

UniversalConstructor make_constructor(const ExperimentConfig& c) {
  if (c.resume.empty()) return UniversalConstructor(universal::DovetailConfig{c.fuel, c.jobs});
  const std::string path = checkpoint_path(c.resume);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read checkpoint '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("checkpoint '" + path + "' is not JSON: " + e.what());
  }
  auto d = universal::Dovetailer::from_json(j);
  d.set_jobs(c.jobs);
  return UniversalConstructor(std::move(d));
}

/// Named semi-POVM; the constructor-backed names use `uc` so a resumed
/// checkpoint is honoured.
povm::SemiPovmStream semipovm_for(const std::string& name, const UniversalConstructor& uc) {
  if (name == "universal") return uc.universal_stream();
  if (name.rfind("guarded:", 0) == 0) return uc.guarded_stream(std::stoull(name.substr(8)));
  if (name.rfind("transport:", 0) == 0) {
    return ait::psi_transport(ait::map_from_name(name.substr(10)), uc.universal_stream(), 0, 0).stream;
  }
  return catalog::semipovm_by_name(name);
}

std::string stream_or(const ExperimentConfig& c, const char* fallback) {
  return c.stream.empty() ? fallback : c.stream;
}

// machine enum: halting programs found at the final stage.
void machine_enum(const ExperimentConfig& c, std::ostream& out) {
  const auto m = catalog::machine_by_name(c.machine, c.jobs);
  const auto st = machine::enumerate_halting(*m, c.stages);
  if (want_json(c, "csv")) {
    json progs = json::array();
    for (const auto& d : st.discovered) progs.push_back({{"program", d.program}, {"output", d.output}, {"steps", d.steps}});
    write_json(out, {{"machine", m->name()}, {"stage", st.stage}, {"kraft_sum", fmt(st.kraft_sum)}, {"programs", progs}});
  } else {
    out << "program,length,output,steps\n";
    for (const auto& d : st.discovered) {
      out << d.program << ',' << d.program.size() << ',' << d.output << ',' << d.steps << '\n';
    }
  }
  std::vector<std::string> problems;
  std::vector<Bits> programs;
  Rational kraft;
  for (const auto& d : st.discovered) {
    programs.push_back(d.program);
    kraft += pow2(-static_cast<long>(d.program.size()));
  }
  if (!machine::is_prefix_free(programs)) problems.push_back("discovered programs are not prefix-free");
  if (kraft != st.kraft_sum) problems.push_back("Kraft sum does not match the listed programs");
  if (kraft > 1) problems.push_back("Kraft sum exceeds 1");
  selfcheck(c, problems);
}

// omega approx: n, omega_lower(n).
void omega_approx(const ExperimentConfig& c, std::ostream& out) {
  const auto m = catalog::machine_by_name(c.machine, c.jobs);
  std::vector<Rational> values;
  for (Stage n = 1; n <= c.stages; ++n) values.push_back(machine::omega_lower(*m, n));
  if (want_json(c, "csv")) {
    json rows = json::array();
    for (Stage n = 1; n <= c.stages; ++n) rows.push_back({{"n", n}, {"omega_lower", fmt(values[n - 1])}});
    write_json(out, {{"machine", m->name()}, {"rows", rows}});
  } else {
    out << "n,omega_lower\n";
    for (Stage n = 1; n <= c.stages; ++n) out << n << ',' << fmt(values[n - 1]) << '\n';
  }
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= 1) problems.push_back("omega_lower(" + std::to_string(i + 1) + ") >= 1");
    if (i > 0 && values[i] < values[i - 1]) problems.push_back("omega_lower decreases at n = " + std::to_string(i + 1));
  }
  selfcheck(c, problems);
}

// upovm build: advance the dovetailer, write the checkpoint and the log.
void upovm_build(const ExperimentConfig& c, std::ostream& out) {
  const auto uc = make_constructor(c);
  if (uc.stage() > c.stages) {
    throw UsageError("checkpoint is at stage " + std::to_string(uc.stage()) + ", beyond stages = " +
                     std::to_string(c.stages));
  }
  uc.advance_to(c.stages);
  if (!c.checkpoint.empty()) {
    const std::string path = checkpoint_path(c.checkpoint);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write checkpoint '" + path + "'");
    f << uc.checkpoint().dump(1) << '\n';
  }
  const auto log = uc.log();
  if (want_json(c, "csv")) {
    json events = json::array();
    for (const auto& e : log) {
      events.push_back({{"stage", e.stage}, {"l", e.l}, {"step", e.step}, {"accepted", e.accepted}, {"detail", e.detail}});
    }
    write_json(out, {{"stage", uc.stage()}, {"events", events}});
  } else {
    out << "stage,l,step,accepted,detail\n";
    for (const auto& e : log) {
      out << e.stage << ',' << e.l << ',' << e.step << ',' << (e.accepted ? 1 : 0) << ',' << csv_field(e.detail) << '\n';
    }
  }
  selfcheck(c, uc.audit());
}

// upovm omegahat: <omega_hat_lower(n, window) x, x> for n <= stages.
void upovm_omegahat(const ExperimentConfig& c, std::ostream& out) {
  const StateVector x = catalog::state_from_spec(c.state);
  const auto uc = make_constructor(c);
  std::vector<Rational> values;
  for (Stage n = 1; n <= c.stages; ++n) values.push_back(linalg::quad_form(uc.omega_hat_lower(n, c.window), x));
  if (want_json(c, "csv")) {
    json rows = json::array();
    for (Stage n = 1; n <= c.stages; ++n) rows.push_back({{"n", n}, {"m", c.window}, {"value", fmt(values[n - 1])}});
    write_json(out, {{"state", linalg::to_json(x)}, {"rows", rows}});
  } else {
    out << "n,m,value\n";
    for (Stage n = 1; n <= c.stages; ++n) out << n << ',' << c.window << ',' << fmt(values[n - 1]) << '\n';
  }
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1) problems.push_back("value exceeds 1 at n = " + std::to_string(i + 1));
    if (sgn(values[i]) < 0) problems.push_back("negative value at n = " + std::to_string(i + 1));
    if (i > 0 && values[i] < values[i - 1]) problems.push_back("value decreases at n = " + std::to_string(i + 1));
  }
  selfcheck(c, problems);
}

json violations_json(const povm::ValidationReport& r) {
  json v = json::array();
  for (const auto& e : r.violations) v.push_back({{"kind", e.kind}, {"n", e.n}, {"s", e.s}, {"detail", e.detail}});
  return v;
}

// upovm validate: the semi-POVM validator on a named stream.
void upovm_validate(const ExperimentConfig& c, std::ostream& out) {
  const std::string name = stream_or(c, "universal");
  const auto uc = make_constructor(c);
  const auto stream = semipovm_for(name, uc);
  const auto report = povm::validate_semipovm(stream, c.stages);
  if (want_json(c, "json")) {
    write_json(out, {{"stream", name},
                     {"label", stream.descriptor().label},
                     {"checked_up_to", report.checked_up_to},
                     {"ok", report.ok()},
                     {"violations", violations_json(report)}});
  } else {
    out << "kind,n,s,detail\n";
    for (const auto& e : report.violations) out << e.kind << ',' << e.n << ',' << e.s << ',' << csv_field(e.detail) << '\n';
  }
  if (!report.ok()) throw ViolationError("validator violation", violations_json(report));
}

// measure sample: exact outcome lower bounds and seeded draws.
void measure_sample(const ExperimentConfig& c, std::ostream& out) {
  const StateVector x = catalog::state_from_spec(c.state);
  const auto uc = make_constructor(c);
  const auto stream = semipovm_for(stream_or(c, "universal"), uc);
  const auto dist = povm::measurement_distribution(stream, c.stages, x, c.window);
  const auto counts = povm::sample_counts(dist, c.seed, c.count, c.jobs);
  if (want_json(c, "json")) {
    json j = povm::to_json(dist, x);
    json cs = json::array();
    for (Index s = 1; s <= c.window; ++s) cs.push_back({{"s", s}, {"count", counts[s - 1]}});
    j["seed"] = c.seed;
    j["draws"] = c.count;
    j["counts"] = cs;
    j["w_count"] = counts.back();
    write_json(out, j);
  } else {
    out << "s,bits,p,count\n";
    for (Index s = 1; s <= c.window; ++s) {
      out << s << ',' << from_index(s) << ',' << fmt(dist.p[s - 1]) << ',' << counts[s - 1] << '\n';
    }
    out << "w,," << fmt(dist.residual) << ',' << counts.back() << '\n';
  }
  std::vector<std::string> problems;
  std::uint64_t total = 0;
  for (auto k : counts) total += k;
  if (total != c.count) problems.push_back("counts do not add up to the number of draws");
  Rational mass = dist.residual;
  for (const auto& p : dist.p) {
    if (sgn(p) < 0) problems.push_back("negative outcome probability");
    mass += p;
  }
  if (mass != 1 || sgn(dist.residual) < 0) problems.push_back("distribution is not normalized");
  selfcheck(c, problems);
}

// hhat report: certified upper bounds on -log2 M(s).
void hhat_report(const ExperimentConfig& c, std::ostream& out) {
  const auto codes = parse_codes(c.strings);
  const auto uc = make_constructor(c);
  std::vector<ait::HhatBound> bounds;
  for (Index s : codes) bounds.push_back(ait::hhat_upper(uc, s, c.stages, c.eps));

  std::vector<std::pair<std::string, Rational>> constants;
  if (!c.psi.empty() && c.psi != "none") {
    std::stringstream in(c.psi);
    std::string name;
    while (std::getline(in, name, ',')) {
      constants.emplace_back(name, ait::transport_constant(uc, ait::map_from_name(name), codes, c.stages, c.eps));
    }
  }

  if (want_json(c, "json")) {
    json arr = json::array();
    for (const auto& b : bounds) arr.push_back(ait::to_json(b, constants));
    json j = {{"stage", c.stages}, {"eps", fmt(c.eps)}, {"bounds", arr}};
    if (!c.derived.empty()) {
      const auto colon = c.derived.find(':');
      if (colon == std::string::npos) throw UsageError("derived must look like joint:s,t");
      const auto kind = ait::derived_from_string(c.derived.substr(0, colon));
      const auto st = parse_codes(c.derived.substr(colon + 1));
      if (st.size() != 2) throw UsageError("derived needs exactly two string codes");
      j["derived"] = {{"kind", ait::to_string(kind)},
                      {"s", st[0]},
                      {"t", st[1]},
                      {"certified", kind == ait::Derived::Joint},
                      {"operator", linalg::to_json(ait::hhat_derived(uc, kind, st[0], st[1], c.stages, c.eps))}};
    }
    write_json(out, j);
  } else {
    if (!c.derived.empty()) throw UsageError("derived quantities are only reported in json format");
    ait::write_csv(out, bounds);
  }

  std::vector<std::string> problems;
  const StateVector x = catalog::state_from_spec(c.state);
  for (const auto& b : bounds) {
    const std::string tag = "s = " + std::to_string(b.s);
    if (sgn(b.upper.tail().lo) < 0) problems.push_back(tag + ": negative tail");
    for (std::size_t i = 0; i < b.upper.dim(); ++i) {
      if (sgn(b.upper(i, i).re.lo) < 0) problems.push_back(tag + ": negative diagonal entry");
    }
    const auto scalar = linalg::neg_log2_enclosure(linalg::quad_form(b.lower, x), 40);
    if (linalg::quad_form(b.upper, x).hi < scalar.lo - b.eps) problems.push_back(tag + ": Jensen check failed");
  }
  selfcheck(c, problems);
}

semimeasure::IncreasingSequence sequence_by_name(const std::string& name) {
  if (name == "geometric") {
    return semimeasure::IncreasingSequence([](Stage n) { return Rational(1 - pow2(-static_cast<long>(n))); });
  }
  std::ifstream in(name);
  if (!in) throw UsageError("unknown sequence '" + name + "' (not geometric or a readable CSV file)");
  std::vector<Rational> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "n,b") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("sequence rows are n,b");
    const auto n = std::stoull(line.substr(0, comma));
    if (n != values.size() + 1) throw UsageError("sequence rows must be numbered 1, 2, ...");
    values.push_back(parse_rational(line.substr(comma + 1)));
  }
  return semimeasure::IncreasingSequence([values](Stage n) {
    if (n == 0 || n > values.size()) throw UsageError("sequence file has no value for n = " + std::to_string(n));
    return values[n - 1];
  });
}

// convert seq2sm: r(s) = (b_s - b_{s-1}) / d.
void convert_seq2sm(const ExperimentConfig& c, std::ostream& out) {
  const auto b = sequence_by_name(c.sequence);
  const auto r = semimeasure::from_increasing_sequence(b, c.d, std::max<Stage>(c.stages, c.window));
  if (want_json(c, "csv")) {
    json rows = json::array();
    for (Index s = 1; s <= c.window; ++s) rows.push_back({{"s", s}, {"bits", from_index(s)}, {"r", fmt(r.eval(c.stages, s))}});
    write_json(out, {{"sequence", c.sequence}, {"d", fmt(c.d)}, {"stage", c.stages}, {"rows", rows}});
  } else {
    semimeasure::write_csv(out, r, c.stages, c.window);
  }
  std::vector<std::string> problems;
  for (const auto& v : semimeasure::validate_semimeasure(r, c.stages).violations) problems.push_back(v.kind + ": " + v.detail);
  Rational sum;
  for (Index s = 1; s <= c.window; ++s) {
    sum += r.eval(c.stages, s);
    if (sum != (b.eval(s) - b.eval(1)) / c.d) problems.push_back("partial sum identity fails at N = " + std::to_string(s));
  }
  selfcheck(c, problems);
}

// convert sm2seq: a_n = sum_{s <= n} r(n, s).
void convert_sm2seq(const ExperimentConfig& c, std::ostream& out) {
  const auto r = catalog::semimeasure_by_name(stream_or(c, "complexity"));
  const auto a = semimeasure::to_increasing_sequence(r);
  std::vector<Rational> values;
  for (Stage n = 1; n <= c.stages; ++n) values.push_back(a.eval(n));
  if (want_json(c, "csv")) {
    json rows = json::array();
    for (Stage n = 1; n <= c.stages; ++n) rows.push_back({{"n", n}, {"a", fmt(values[n - 1])}});
    write_json(out, {{"stream", r.label()}, {"rows", rows}});
  } else {
    out << "n,a\n";
    for (Stage n = 1; n <= c.stages; ++n) out << n << ',' << fmt(values[n - 1]) << '\n';
  }
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1) problems.push_back("a exceeds 1 at n = " + std::to_string(i + 1));
    if (i > 0 && values[i] < values[i - 1]) problems.push_back("a decreases at n = " + std::to_string(i + 1));
  }
  selfcheck(c, problems);
}

// psi transport: domination witnesses for the transported stream.
void psi_transport(const ExperimentConfig& c, std::ostream& out) {
  const auto uc = make_constructor(c);
  const auto t = ait::psi_transport(ait::map_from_name(c.psi), uc.universal_stream(), c.stages, c.window);
  json witnesses = json::array();
  for (const auto& w : t.report.witnesses) {
    witnesses.push_back({{"n", w.n}, {"s", w.s}, {"image", w.image}, {"dominated", w.dominated}});
  }
  if (want_json(c, "csv")) {
    write_json(out, {{"psi", t.report.psi},
                     {"stages", t.report.stages},
                     {"window", t.report.window},
                     {"witnesses", witnesses},
                     {"failures", t.report.failures()}});
  } else {
    out << "n,s,image,dominated\n";
    for (const auto& w : t.report.witnesses) out << w.n << ',' << w.s << ',' << w.image << ',' << (w.dominated ? 1 : 0) << '\n';
  }
  if (t.report.failures() > 0) {
    json failed = json::array();
    for (const auto& w : witnesses) {
      if (!w["dominated"].get<bool>()) failed.push_back(w);
    }
    throw ViolationError("transport domination failed", failed);
  }
  std::vector<std::string> problems;
  if (c.selfcheck) {
    for (const auto& v : povm::validate_semipovm(t.stream, std::min<Stage>(c.stages, 8)).violations) {
      problems.push_back(v.kind + ": " + v.detail);
    }
  }
  selfcheck(c, problems);
}

using Handler = std::function<void(const ExperimentConfig&, std::ostream&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"machine enum", machine_enum},     {"omega approx", omega_approx},     {"upovm build", upovm_build},
      {"upovm omegahat", upovm_omegahat}, {"upovm validate", upovm_validate}, {"measure sample", measure_sample},
      {"hhat report", hhat_report},       {"convert seq2sm", convert_seq2sm}, {"convert sm2seq", convert_sm2seq},
      {"psi transport", psi_transport},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : handlers()) v.push_back(name);
    return v;
  }();
  return names;
}

void run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out) {
  const auto it = handlers().find(name);
  if (it == handlers().end()) throw UsageError("unknown command '" + name + "'");
  config.check();
  it->second(config, out);
}

}  // namespace omegahat::cli
