#include "omegahat/machine.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

namespace omegahat::machine {

bool canonical_less(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool is_prefix_free(const std::vector<Bits>& programs) {
  std::vector<Bits> sorted = programs;
  std::sort(sorted.begin(), sorted.end());
  // In lexicographic order a prefix sorts immediately before some extension.
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const Bits& a = sorted[i];
    const Bits& b = sorted[i + 1];
    if (b.compare(0, a.size(), a) == 0) return false;
  }
  return true;
}

const StageSummary& PrefixMachine::summary(Stage stage) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->summaries.find(stage);
    if (it != cache_->summaries.end()) return *it->second;
  }
  auto built = std::make_shared<StageSummary>();
  EnumerationStage es = enumerate(stage);
  built->kraft_sum = es.kraft_sum;
  for (const auto& d : es.discovered) {
    built->mass_by_output[d.output] += pow2(-static_cast<long>(d.program.size()));
    auto [it, inserted] = built->min_length_by_output.emplace(d.output, d.program.size());
    if (!inserted) it->second = std::min(it->second, d.program.size());
  }
  std::lock_guard lock(cache_->mutex);
  auto [it, inserted] = cache_->summaries.emplace(stage, std::move(built));
  return *it->second;
}

namespace {

void explore(Bits& prefix, std::size_t depth, std::uint64_t fuel, std::vector<Discovery>& out) {
  RunOutcome r = run_program(prefix, fuel);
  if (r.halted()) {
    out.push_back({prefix, r.output(), r.steps});
    return;
  }
  if (r.kind != RunKind::Rejected || r.reason != RejectReason::ExhaustedTape) return;
  if (prefix.size() >= depth) return;
  for (char c : {'0', '1'}) {
    prefix.push_back(c);
    explore(prefix, depth, fuel, out);
    prefix.pop_back();
  }
}

EnumerationStage finish_stage(Stage stage, std::vector<Discovery> found) {
  std::sort(found.begin(), found.end(),
            [](const Discovery& a, const Discovery& b) { return canonical_less(a.program, b.program); });
  EnumerationStage es;
  es.stage = stage;
  for (const auto& d : found) es.kraft_sum += pow2(-static_cast<long>(d.program.size()));
  es.discovered = std::move(found);
  return es;
}

}  // namespace

EnumerationStage VmMachine::enumerate(Stage stage) const {
  if (stage == 0) throw Error("stages start at 1");
  std::lock_guard lock(catalog_mutex_);
  if (stage > catalog_depth_) {
    // Programs of length <= D halting within fuel D; smaller stages filter it.
    std::vector<Discovery> found;
    const std::size_t split = std::min<std::size_t>(stage, jobs_ > 1 ? 4 : 0);
    std::vector<Bits> roots;
    // Prefixes shorter than the split depth are handled inline.
    for (std::size_t len = 0; len < split; ++len) {
      for (Index k = Index{1} << len; k < (Index{1} << (len + 1)); ++k) {
        Bits p = from_index(k);
        RunOutcome r = run_program(p, stage);
        if (r.halted()) found.push_back({p, r.output(), r.steps});
      }
    }
    if (split == 0) {
      roots.push_back("");
    } else {
      for (Index k = Index{1} << split; k < (Index{1} << (split + 1)); ++k) roots.push_back(from_index(k));
    }
    std::vector<std::future<std::vector<Discovery>>> tasks;
    auto work = [stage](Bits root) {
      std::vector<Discovery> part;
      // Only descend from roots that are genuinely reachable: every proper
      // prefix must have asked for more tape.
      for (std::size_t len = 0; len < root.size(); ++len) {
        RunOutcome r = run_program(std::string_view(root).substr(0, len), stage);
        if (r.kind != RunKind::Rejected || r.reason != RejectReason::ExhaustedTape) return part;
      }
      explore(root, stage, stage, part);
      return part;
    };
    for (std::size_t i = 0; i < roots.size(); ++i) {
      auto policy = jobs_ > 1 ? std::launch::async : std::launch::deferred;
      tasks.push_back(std::async(policy, work, roots[i]));
      if (tasks.size() >= jobs_) {
        for (auto& t : tasks) {
          auto part = t.get();
          found.insert(found.end(), part.begin(), part.end());
        }
        tasks.clear();
      }
    }
    for (auto& t : tasks) {
      auto part = t.get();
      found.insert(found.end(), part.begin(), part.end());
    }
    catalog_ = std::move(found);
    catalog_depth_ = stage;
  }
  std::vector<Discovery> at_stage;
  for (const auto& d : catalog_) {
    if (d.program.size() <= stage && d.steps <= stage) at_stage.push_back(d);
  }
  return finish_stage(stage, std::move(at_stage));
}

TableMachine::TableMachine(std::vector<Entry> entries, std::string name)
    : entries_(std::move(entries)), name_(std::move(name)) {
  std::vector<Bits> programs;
  for (auto& e : entries_) {
    require_bits(e.program);
    require_bits(e.output);
    if (e.fuel == 0) e.fuel = std::max<std::uint64_t>(1, e.program.size());
    programs.push_back(e.program);
  }
  if (!is_prefix_free(programs)) throw Error("machine table is not prefix-free");
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return canonical_less(a.program, b.program); });
}

TableMachine TableMachine::parse(std::string_view text, std::string name) {
  std::vector<Entry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string program;
    std::string output;
    if (!(fields >> program)) continue;
    if (!(fields >> output)) throw Error("machine table line " + std::to_string(lineno) + ": missing output");
    Entry e;
    e.program = program == "-" ? "" : program;
    e.output = output == "-" ? "" : output;
    std::uint64_t fuel = 0;
    if (fields >> fuel) e.fuel = fuel;
    entries.push_back(std::move(e));
  }
  return TableMachine(std::move(entries), std::move(name));
}

TableMachine TableMachine::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open machine table " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

RunOutcome TableMachine::run(std::string_view program, std::uint64_t fuel) const {
  RunOutcome r;
  for (const auto& e : entries_) {
    if (e.program == program) {
      r.bits_consumed = program.size();
      if (fuel < e.fuel) {
        r.kind = RunKind::OutOfFuel;
        r.steps = fuel;
        return r;
      }
      r.kind = RunKind::Halted;
      r.steps = e.fuel;
      for (char c : e.output) r.emitted.push_back(c == '1' ? 1 : 0);
      return r;
    }
    if (e.program.size() > program.size() && e.program.compare(0, program.size(), program) == 0) {
      r.kind = RunKind::Rejected;
      r.reason = RejectReason::ExhaustedTape;
      r.bits_consumed = program.size();
      return r;
    }
  }
  r.kind = RunKind::Rejected;
  r.reason = RejectReason::UnconsumedBits;
  return r;
}

EnumerationStage TableMachine::enumerate(Stage stage) const {
  if (stage == 0) throw Error("stages start at 1");
  std::vector<Discovery> found;
  for (const auto& e : entries_) {
    if (e.program.size() <= stage && e.fuel <= stage) found.push_back({e.program, e.output, e.fuel});
  }
  return finish_stage(stage, std::move(found));
}

EnumerationStage enumerate_halting(const PrefixMachine& m, Stage stage) { return m.enumerate(stage); }

Rational omega_lower(const PrefixMachine& m, Stage stage) { return m.summary(stage).kraft_sum; }

std::optional<std::size_t> complexity_upper(const PrefixMachine& m, Stage stage, const Bits& s) {
  const auto& table = m.summary(stage).min_length_by_output;
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Rational pv_lower(const PrefixMachine& m, Stage stage, const Bits& s) {
  const auto& table = m.summary(stage).mass_by_output;
  auto it = table.find(s);
  return it == table.end() ? Rational(0) : it->second;
}

}  // namespace omegahat::machine
