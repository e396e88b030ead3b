/*
 * Copyright 2026 The qcsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file program.hpp
 * @brief Board instruction set and its line-oriented text form.
 *
 *   # comment
 *   board 2:
 *     pulse len=20ns freq=5.5GHz amp=0.5V
 *     measure q0 len=1us dest=c0
 *     hold 600ns
 *     ifbit c0 == 1 goto taken
 *     goto done
 *   label taken:
 *     ...
 *   label done:
 *     end
 *
 * Every section gets an implicit trailing `end`.
 */

#pragma once

#include "qcsim/core/board.hpp"
#include "qcsim/core/error.hpp"
#include "qcsim/core/time.hpp"

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qcsim::control {

class SyntaxError : public Error {
 public:
  SyntaxError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Pulse {
  SimTime length;
  Rational frequency_hz;  // metadata
  Rational amplitude_v;   // metadata
};

/// Starts a readout pulse on the qubit; the result lands in classical bit
/// `dest` once demodulated. Does not block the sequencer.
struct Measure {
  unsigned qubit = 0;
  SimTime pulse_length;
  unsigned dest = 0;
};

struct Hold {
  SimTime duration;
};

struct BranchIfBit {
  unsigned bit = 0;
  std::uint8_t expected = 1;
  std::size_t target = 0;  // instruction index taken on match; otherwise fall through
  std::string label;
};

struct Jump {
  std::size_t target = 0;
  std::string label;
};

struct End {};

using Instruction = std::variant<Pulse, Measure, Hold, BranchIfBit, Jump, End>;

struct BoardBinary {
  BoardId board = -1;
  std::vector<Instruction> instructions;
  std::map<std::string, std::size_t> labels;
};

/// One binary per `board N:` section. Throws SyntaxError (with the line
/// number) and NonRepresentableDuration.
std::vector<BoardBinary> parse_program(std::string_view text);

std::string to_string(const Instruction& ins);

}  // namespace qcsim::control
