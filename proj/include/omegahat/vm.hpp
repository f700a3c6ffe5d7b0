#pragma once

#include "omegahat/bitstring.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace omegahat::machine {

/// Self-delimiting register machine.
///
/// A program is read from the tape one instruction at a time until END; the
/// listing is then executed from instruction 0, and READ consumes further
/// tape bits. Registers r0..r3 hold unsigned 64-bit values. Encoding
/// (r, q: 2-bit register numbers, a: Elias-gamma code of address + 1):
///
///   000        END   halt when executed
///   001 r      INC   r += 1
///   010 r      DEC   r -= 1, saturating at 0
///   011 r a    JZ    if r == 0 jump to a
///   100 r      READ  r = next tape bit
///   101 r      EMIT  append r to the output
///   110 r q    ADD   r += q
///   1110 r q   MOV   r = q
///   11110 a    JMP   jump to a
///   111110 r   HALF  r = r / 2
///   111111 r   ODD   r = r mod 2
///
/// Every decoded instruction and every executed instruction costs one unit
/// of fuel. A run halts only if it has consumed the whole tape.
enum class Op : std::uint8_t { End, Inc, Dec, Jz, Read, Emit, Add, Mov, Jmp, Half, Odd };

struct Instruction {
  Op op = Op::End;
  std::uint8_t r = 0;
  std::uint8_t q = 0;
  std::uint64_t addr = 0;
};

enum class RunKind : std::uint8_t { Halted, OutOfFuel, Rejected };

enum class RejectReason : std::uint8_t {
  None,
  ExhaustedTape,   // needed a bit beyond the end of the program
  UnconsumedBits,  // halted before reading the whole program
  BadJump,         // jump target outside the listing
  Overflow,        // register arithmetic left the 64-bit range
};

struct RunOutcome {
  RunKind kind = RunKind::OutOfFuel;
  RejectReason reason = RejectReason::None;
  std::vector<std::uint64_t> emitted;  // raw EMIT values
  std::size_t bits_consumed = 0;
  std::uint64_t steps = 0;

  bool halted() const { return kind == RunKind::Halted; }
  /// The output string: low bit of each emitted value.
  Bits output() const;
};

using Registers = std::array<std::uint64_t, 4>;

/// Runs `program` with at most `fuel` steps. Registers start at `init`.
RunOutcome run_program(std::string_view program, std::uint64_t fuel, const Registers& init = {});

/// The listing encoded by `program` if it decodes to instructions ending in
/// END with no bits left over; nullopt otherwise.
std::optional<std::vector<Instruction>> decode_listing(std::string_view program);

/// Assembles an instruction listing into program bits (the tape prefix).
Bits assemble(const std::vector<Instruction>& listing);

/// Elias-gamma code of n >= 1.
Bits elias_gamma(std::uint64_t n);

std::string to_string(RunKind kind);
std::string to_string(RejectReason reason);

}  // namespace omegahat::machine
