#include "omegahat/vm.hpp"

#include <bit>
#include <limits>
#include <optional>

namespace omegahat::machine {

namespace {

class Tape {
 public:
  explicit Tape(std::string_view bits) : bits_(bits) {}

  std::optional<unsigned> next() {
    if (pos_ >= bits_.size()) return std::nullopt;
    return bits_[pos_++] == '1' ? 1U : 0U;
  }
  std::size_t consumed() const { return pos_; }
  std::size_t size() const { return bits_.size(); }

 private:
  std::string_view bits_;
  std::size_t pos_ = 0;
};

struct Exhausted {};
struct AddressTooLarge {};

unsigned take(Tape& tape) {
  auto b = tape.next();
  if (!b) throw Exhausted{};
  return *b;
}

std::uint8_t take_register(Tape& tape) {
  unsigned hi = take(tape);
  unsigned lo = take(tape);
  return static_cast<std::uint8_t>(hi * 2 + lo);
}

// Address a is stored as the Elias-gamma code of a + 1.
std::uint64_t take_address(Tape& tape) {
  unsigned zeros = 0;
  while (take(tape) == 0) {
    if (++zeros > 62) throw AddressTooLarge{};
  }
  std::uint64_t n = 1;
  for (unsigned i = 0; i < zeros; ++i) n = (n << 1) | take(tape);
  return n - 1;
}

Instruction decode(Tape& tape) {
  Instruction ins;
  unsigned b0 = take(tape);
  unsigned b1 = take(tape);
  if (b0 == 0 || b1 == 0) {
    switch (b0 * 4 + b1 * 2 + take(tape)) {
      case 0: ins.op = Op::End; return ins;
      case 1: ins.op = Op::Inc; break;
      case 2: ins.op = Op::Dec; break;
      case 3: ins.op = Op::Jz; break;
      case 4: ins.op = Op::Read; break;
      default: ins.op = Op::Emit; break;  // 101
    }
    ins.r = take_register(tape);
    if (ins.op == Op::Jz) ins.addr = take_address(tape);
    return ins;
  }
  // Prefix 11: count further ones up to four.
  if (take(tape) == 0) {
    ins.op = Op::Add;
    ins.r = take_register(tape);
    ins.q = take_register(tape);
  } else if (take(tape) == 0) {
    ins.op = Op::Mov;
    ins.r = take_register(tape);
    ins.q = take_register(tape);
  } else if (take(tape) == 0) {
    ins.op = Op::Jmp;
    ins.addr = take_address(tape);
  } else {
    ins.op = take(tape) == 0 ? Op::Half : Op::Odd;
    ins.r = take_register(tape);
  }
  return ins;
}

}  // namespace

Bits RunOutcome::output() const {
  Bits out;
  out.reserve(emitted.size());
  for (auto v : emitted) out.push_back((v & 1U) ? '1' : '0');
  return out;
}

RunOutcome run_program(std::string_view program, std::uint64_t fuel, const Registers& init) {
  RunOutcome out;
  Tape tape(program);
  std::vector<Instruction> listing;

  auto finish = [&](RunKind kind, RejectReason reason) {
    out.kind = kind;
    out.reason = reason;
    out.bits_consumed = tape.consumed();
    return out;
  };

  try {
    // Load phase.
    while (true) {
      if (out.steps >= fuel) return finish(RunKind::OutOfFuel, RejectReason::None);
      ++out.steps;
      listing.push_back(decode(tape));
      if (listing.back().op == Op::End) break;
    }

    Registers reg = init;
    std::uint64_t pc = 0;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    while (true) {
      if (out.steps >= fuel) return finish(RunKind::OutOfFuel, RejectReason::None);
      ++out.steps;
      const Instruction& ins = listing[pc];
      std::uint64_t next = pc + 1;
      switch (ins.op) {
        case Op::End:
          if (tape.consumed() != tape.size()) return finish(RunKind::Rejected, RejectReason::UnconsumedBits);
          return finish(RunKind::Halted, RejectReason::None);
        case Op::Inc:
          if (reg[ins.r] == kMax) return finish(RunKind::Rejected, RejectReason::Overflow);
          ++reg[ins.r];
          break;
        case Op::Dec:
          if (reg[ins.r] > 0) --reg[ins.r];
          break;
        case Op::Jz:
          if (reg[ins.r] == 0) next = ins.addr;
          break;
        case Op::Read:
          reg[ins.r] = take(tape);
          break;
        case Op::Emit:
          out.emitted.push_back(reg[ins.r]);
          break;
        case Op::Add:
          if (reg[ins.r] > kMax - reg[ins.q]) return finish(RunKind::Rejected, RejectReason::Overflow);
          reg[ins.r] += reg[ins.q];
          break;
        case Op::Mov:
          reg[ins.r] = reg[ins.q];
          break;
        case Op::Jmp:
          next = ins.addr;
          break;
        case Op::Half:
          reg[ins.r] >>= 1;
          break;
        case Op::Odd:
          reg[ins.r] &= 1U;
          break;
      }
      if (next >= listing.size()) return finish(RunKind::Rejected, RejectReason::BadJump);
      pc = next;
    }
  } catch (const Exhausted&) {
    return finish(RunKind::Rejected, RejectReason::ExhaustedTape);
  } catch (const AddressTooLarge&) {
    return finish(RunKind::Rejected, RejectReason::BadJump);
  }
}

std::optional<std::vector<Instruction>> decode_listing(std::string_view program) {
  Tape tape(program);
  std::vector<Instruction> listing;
  try {
    do {
      listing.push_back(decode(tape));
    } while (listing.back().op != Op::End);
  } catch (const Exhausted&) {
    return std::nullopt;
  } catch (const AddressTooLarge&) {
    return std::nullopt;
  }
  if (tape.consumed() != tape.size()) return std::nullopt;
  return listing;
}

Bits elias_gamma(std::uint64_t n) {
  if (n == 0) throw Error("Elias-gamma code needs n >= 1");
  const int width = std::bit_width(n);
  Bits out(static_cast<std::size_t>(width - 1), '0');
  for (int i = width - 1; i >= 0; --i) out.push_back(((n >> i) & 1U) ? '1' : '0');
  return out;
}

Bits assemble(const std::vector<Instruction>& listing) {
  auto reg = [](std::uint8_t r) {
    if (r > 3) throw Error("register index out of range");
    return Bits{(r & 2) ? '1' : '0', (r & 1) ? '1' : '0'};
  };
  Bits out;
  for (const auto& ins : listing) {
    switch (ins.op) {
      case Op::End: out += "000"; break;
      case Op::Inc: out += "001" + reg(ins.r); break;
      case Op::Dec: out += "010" + reg(ins.r); break;
      case Op::Jz: out += "011" + reg(ins.r) + elias_gamma(ins.addr + 1); break;
      case Op::Read: out += "100" + reg(ins.r); break;
      case Op::Emit: out += "101" + reg(ins.r); break;
      case Op::Add: out += "110" + reg(ins.r) + reg(ins.q); break;
      case Op::Mov: out += "1110" + reg(ins.r) + reg(ins.q); break;
      case Op::Jmp: out += "11110" + elias_gamma(ins.addr + 1); break;
      case Op::Half: out += "111110" + reg(ins.r); break;
      case Op::Odd: out += "111111" + reg(ins.r); break;
    }
  }
  return out;
}

std::string to_string(RunKind kind) {
  switch (kind) {
    case RunKind::Halted: return "halted";
    case RunKind::OutOfFuel: return "out_of_fuel";
    case RunKind::Rejected: return "rejected";
  }
  return "?";
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::None: return "none";
    case RejectReason::ExhaustedTape: return "exhausted_tape";
    case RejectReason::UnconsumedBits: return "unconsumed_bits";
    case RejectReason::BadJump: return "bad_jump";
    case RejectReason::Overflow: return "overflow";
  }
  return "?";
}

}  // namespace omegahat::machine
