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

#include "qcsim/control/program.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>

namespace qcsim::control {
namespace {

struct PendingRef {
  std::size_t binary;
  std::size_t instruction;
  std::string label;
  int line;
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

unsigned parse_index(std::string_view tok, char prefix, int line, const char* what) {
  unsigned v = 0;
  if (tok.size() < 2 || tok[0] != prefix) throw SyntaxError(line, fmt::format("expected {} like {}0, got '{}'", what, prefix, tok));
  const auto* end = tok.data() + tok.size();
  const auto [p, ec] = std::from_chars(tok.data() + 1, end, v);
  if (ec != std::errc{} || p != end) throw SyntaxError(line, fmt::format("bad {} '{}'", what, tok));
  return v;
}

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

SimTime duration_arg(std::string_view text, int line) {
  try {
    return parse_time(text);
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(line, e.what());
  }
}

// key=value arguments; every key must be known and appear once.
std::map<std::string, std::string> keyed_args(const std::vector<std::string>& toks, std::size_t from,
                                              const std::set<std::string>& allowed, int line) {
  std::map<std::string, std::string> out;
  for (std::size_t i = from; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == toks[i].size()) {
      throw SyntaxError(line, fmt::format("expected key=value, got '{}'", toks[i]));
    }
    std::string key = toks[i].substr(0, eq);
    if (!allowed.count(key)) throw SyntaxError(line, fmt::format("unknown argument '{}'", key));
    if (!out.emplace(key, toks[i].substr(eq + 1)).second) {
      throw SyntaxError(line, fmt::format("argument '{}' given twice", key));
    }
  }
  return out;
}

Rational volts(std::string_view s, int line) {
  if (s.empty() || (s.back() != 'V' && s.back() != 'v')) throw SyntaxError(line, fmt::format("amplitude '{}' needs a V suffix", s));
  try {
    return parse_decimal(s.substr(0, s.size() - 1));
  } catch (const std::invalid_argument&) {
    throw SyntaxError(line, fmt::format("bad amplitude '{}'", s));
  }
}

}  // namespace

std::vector<BoardBinary> parse_program(std::string_view text) {
  std::vector<BoardBinary> out;
  std::vector<PendingRef> refs;
  std::set<BoardId> seen_boards;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto toks = split_ws(line);
    const std::string& op = toks[0];

    if (op == "board") {
      if (toks.size() != 2 || toks[1].back() != ':') throw SyntaxError(line_no, "expected 'board <id>:'");
      const std::string id_text = toks[1].substr(0, toks[1].size() - 1);
      int id = 0;
      const auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
      if (ec != std::errc{} || p != id_text.data() + id_text.size() || id < 0) {
        throw SyntaxError(line_no, fmt::format("bad board id '{}'", id_text));
      }
      if (!seen_boards.insert(id).second) throw SyntaxError(line_no, fmt::format("board {} defined twice", id));
      out.push_back(BoardBinary{id, {}, {}});
      continue;
    }
    if (out.empty()) throw SyntaxError(line_no, "instruction outside a 'board N:' section");
    BoardBinary& bin = out.back();

    if (op == "label") {
      if (toks.size() != 2 || toks[1].back() != ':') throw SyntaxError(line_no, "expected 'label <name>:'");
      const std::string name = toks[1].substr(0, toks[1].size() - 1);
      if (!valid_label(name)) throw SyntaxError(line_no, fmt::format("bad label name '{}'", name));
      if (!bin.labels.emplace(name, bin.instructions.size()).second) {
        throw SyntaxError(line_no, fmt::format("label '{}' defined twice", name));
      }
    } else if (op == "pulse") {
      auto args = keyed_args(toks, 1, {"len", "freq", "amp"}, line_no);
      if (!args.count("len")) throw SyntaxError(line_no, "pulse needs len=<duration>");
      Pulse p;
      p.length = duration_arg(args["len"], line_no);
      if (args.count("freq")) {
        try {
          p.frequency_hz = parse_frequency(args["freq"]).hz;
        } catch (const std::invalid_argument& e) {
          throw SyntaxError(line_no, e.what());
        }
      }
      if (args.count("amp")) p.amplitude_v = volts(args["amp"], line_no);
      bin.instructions.emplace_back(p);
    } else if (op == "measure") {
      if (toks.size() < 2) throw SyntaxError(line_no, "expected 'measure q<idx> len=<dur> dest=c<idx>'");
      Measure m;
      m.qubit = parse_index(toks[1], 'q', line_no, "qubit");
      auto args = keyed_args(toks, 2, {"len", "dest"}, line_no);
      if (!args.count("len") || !args.count("dest")) throw SyntaxError(line_no, "measure needs len= and dest=");
      m.pulse_length = duration_arg(args["len"], line_no);
      m.dest = parse_index(args["dest"], 'c', line_no, "classical bit");
      bin.instructions.emplace_back(m);
    } else if (op == "hold") {
      if (toks.size() != 2) throw SyntaxError(line_no, "expected 'hold <duration>'");
      bin.instructions.emplace_back(Hold{duration_arg(toks[1], line_no)});
    } else if (op == "ifbit") {
      if (toks.size() != 6 || toks[2] != "==" || toks[4] != "goto" || (toks[3] != "0" && toks[3] != "1")) {
        throw SyntaxError(line_no, "expected 'ifbit c<idx> == <0|1> goto <label>'");
      }
      BranchIfBit b;
      b.bit = parse_index(toks[1], 'c', line_no, "classical bit");
      b.expected = toks[3] == "1" ? 1 : 0;
      b.label = toks[5];
      refs.push_back({out.size() - 1, bin.instructions.size(), b.label, line_no});
      bin.instructions.emplace_back(b);
    } else if (op == "goto") {
      if (toks.size() != 2) throw SyntaxError(line_no, "expected 'goto <label>'");
      refs.push_back({out.size() - 1, bin.instructions.size(), toks[1], line_no});
      bin.instructions.emplace_back(Jump{0, toks[1]});
    } else if (op == "end") {
      if (toks.size() != 1) throw SyntaxError(line_no, "'end' takes no arguments");
      bin.instructions.emplace_back(End{});
    } else {
      throw SyntaxError(line_no, fmt::format("unknown instruction '{}'", op));
    }
  }

  for (BoardBinary& bin : out) bin.instructions.emplace_back(End{});

  for (const PendingRef& r : refs) {
    BoardBinary& bin = out[r.binary];
    const auto it = bin.labels.find(r.label);
    if (it == bin.labels.end()) {
      throw SyntaxError(r.line, fmt::format("unknown label '{}' on board {}", r.label, bin.board));
    }
    std::visit(
        [&](auto& ins) {
          using T = std::decay_t<decltype(ins)>;
          if constexpr (std::is_same_v<T, BranchIfBit> || std::is_same_v<T, Jump>) ins.target = it->second;
        },
        bin.instructions[r.instruction]);
  }
  return out;
}

std::string to_string(const Instruction& ins) {
  return std::visit(
      [](const auto& i) -> std::string {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Pulse>) {
          return fmt::format("pulse len={}ns freq={}GHz amp={}V", format_ns(i.length),
                             to_decimal(i.frequency_hz / 1'000'000'000), to_decimal(i.amplitude_v));
        } else if constexpr (std::is_same_v<T, Measure>) {
          return fmt::format("measure q{} len={}ns dest=c{}", i.qubit, format_ns(i.pulse_length), i.dest);
        } else if constexpr (std::is_same_v<T, Hold>) {
          return fmt::format("hold {}ns", format_ns(i.duration));
        } else if constexpr (std::is_same_v<T, BranchIfBit>) {
          return fmt::format("ifbit c{} == {} goto {}", i.bit, i.expected, i.label);
        } else if constexpr (std::is_same_v<T, Jump>) {
          return fmt::format("goto {}", i.label);
        } else {
          return "end";
        }
      },
      ins);
}

}  // namespace qcsim::control
