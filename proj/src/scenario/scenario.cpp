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

#include "qcsim/scenario/scenario.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>
#include <sstream>

namespace qcsim::scenario {
namespace {

namespace fs = std::filesystem;

// A JSON object being read, with its dotted path for diagnostics. Every key
// must be consumed; leftovers are reported as unknown.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_->contains(key); }

  const Json* get(const std::string& key) {
    used_.insert(key);
    const auto it = j_->find(key);
    return it == j_->end() ? nullptr : &*it;
  }
  const Json& require(const std::string& key) {
    const Json* v = get(key);
    if (!v) throw ValidationError(at(key), "required field missing");
    return *v;
  }

  void finish() const {
    for (const auto& [k, v] : j_->items()) {
      if (!used_.count(k)) throw ValidationError(at(k), "unknown field");
    }
  }

 private:
  const Json* j_;
  std::string path_;
  std::set<std::string> used_;
};

std::int64_t as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_count(const Json& v, const std::string& path) {
  const std::int64_t n = as_int(v, path);
  if (n < 0) throw ValidationError(path, "must be >= 0");
  return static_cast<std::uint64_t>(n);
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError(path, "expected a string");
  return v.get<std::string>();
}

SimTime as_duration(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return SimTime{as_count(v, path)};
  const std::string s = as_string(v, path);
  try {
    return parse_time(s);
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
}

Frequency as_frequency(const Json& v, const std::string& path) {
  const std::string s = as_string(v, path);
  try {
    const Frequency f = parse_frequency(s);
    if (f.hz <= 0) throw std::invalid_argument("frequency must be positive");
    return f;
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
}

Rational as_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational{v.get<std::int64_t>()};
  if (v.is_string()) {
    try {
      return parse_decimal(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ValidationError(path, e.what());
    }
  }
  if (v.is_number_float()) {
    // Floats go through their shortest decimal form so 0.5 stays exactly 1/2.
    std::ostringstream os;
    os << v.get<double>();
    try {
      return parse_decimal(os.str());
    } catch (const std::exception&) {
      throw ValidationError(path, "number not representable as a decimal; quote it as a string");
    }
  }
  throw ValidationError(path, "expected a number");
}

const Json& as_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected an array");
  return v;
}

ptp::SyncLink read_sync_link(const Json& j, const std::string& path) {
  Node n(j, path);
  ptp::SyncLink l;
  l.forward_delay = as_duration(n.require("forward"), n.at("forward"));
  l.reverse_delay = as_duration(n.require("reverse"), n.at("reverse"));
  n.finish();
  return l;
}

void read_boards(Node& root, control::TestbedConfig& cfg, std::set<BoardId>& ids) {
  const Json& arr = as_array(root.require("boards"), "boards");
  if (arr.empty()) throw ValidationError("boards", "at least one board required");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = fmt::format("boards[{}]", i);
    Node n(arr[i], path);
    control::BoardSpec b;
    b.id = static_cast<BoardId>(as_int(n.require("id"), n.at("id")));
    if (b.id < 0) throw ValidationError(n.at("id"), "board ids must be >= 0");
    if (!ids.insert(b.id).second) throw ValidationError(n.at("id"), fmt::format("duplicate board id {}", b.id));
    if (const Json* v = n.get("clock")) b.clock = as_frequency(*v, n.at("clock"));
    if (const Json* v = n.get("phase")) b.phase = as_duration(*v, n.at("phase"));
    if (const Json* v = n.get("drift_ppm")) b.drift_ppm = as_rational(*v, n.at("drift_ppm"));
    if (const Json* v = n.get("counter_offset")) b.counter_offset = as_int(*v, n.at("counter_offset"));
    try {
      (void)b.clock.period();
      ClockDomain(b.clock, b.phase, b.drift_ppm, b.counter_offset);
    } catch (const std::exception& e) {
      throw ValidationError(path, e.what());
    }
    n.finish();
    cfg.boards.push_back(b);
  }
}

BoardId board_ref(const Json& v, const std::string& path, const std::set<BoardId>& ids) {
  const auto id = static_cast<BoardId>(as_int(v, path));
  if (!ids.count(id)) throw ValidationError(path, fmt::format("board {} is not defined in boards", id));
  return id;
}

void read_ring(Node& root, control::TestbedConfig& cfg, const std::set<BoardId>& ids) {
  const Json* rj = root.get("ring");
  if (!rj) return;
  Node n(*rj, "ring");
  const Json& order = as_array(n.require("order"), "ring.order");
  std::set<BoardId> seen;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string p = fmt::format("ring.order[{}]", i);
    const BoardId id = board_ref(order[i], p, ids);
    if (!seen.insert(id).second) throw ValidationError(p, fmt::format("board {} appears twice in the ring", id));
    cfg.ring.order.push_back(id);
  }
  if (cfg.ring.order.size() < 2) throw ValidationError("ring.order", "a ring needs at least 2 boards");
  const Json* uniform = n.get("link");
  const Json* links = n.get("links");
  if (uniform && links) throw ValidationError("ring", "give either link or links, not both");
  if (uniform) {
    const ptp::SyncLink l = read_sync_link(*uniform, "ring.link");
    cfg.ring.links.assign(cfg.ring.order.size(), l);
  } else if (links) {
    as_array(*links, "ring.links");
    if (links->size() != cfg.ring.order.size()) {
      throw ValidationError("ring.links", fmt::format("expected {} links (one per ring hop, including the closing one)",
                                                      cfg.ring.order.size()));
    }
    for (std::size_t i = 0; i < links->size(); ++i) {
      cfg.ring.links.emplace_back(read_sync_link((*links)[i], fmt::format("ring.links[{}]", i)));
    }
  } else {
    throw ValidationError("ring.link", "required field missing (or ring.links)");
  }
  if (const Json* v = n.get("turnaround_cycles")) {
    cfg.ptp.turnaround_cycles = as_count(*v, "ring.turnaround_cycles");
  }
  n.finish();
}

void read_star(Node& root, control::TestbedConfig& cfg, const std::set<BoardId>& ids) {
  const Json* sj = root.get("star");
  if (!sj) return;
  Node n(*sj, "star");
  fsm::StarTopology star;
  star.root = board_ref(n.require("root"), "star.root", ids);
  const Json& leaves = as_array(n.require("leaves"), "star.leaves");
  if (leaves.size() > kMaxLanesPerBoard) {
    throw ValidationError("star.leaves", fmt::format("{} leaves exceed the root's {} lanes", leaves.size(),
                                                     kMaxLanesPerBoard));
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const std::string p = fmt::format("star.leaves[{}]", i);
    const BoardId id = board_ref(leaves[i], p, ids);
    if (id == star.root) throw ValidationError(p, "the root cannot be its own leaf");
    if (star.is_leaf(id)) throw ValidationError(p, fmt::format("duplicate leaf {}", id));
    star.leaves.push_back(id);
  }
  n.finish();
  cfg.star = star;
}

void read_lane(Node& root, control::TestbedConfig& cfg) {
  if (const Json* lj = root.get("lane")) {
    Node n(*lj, "lane");
    link::LaneConfig& l = cfg.lane;
    if (const Json* v = n.get("line_rate")) {
      const Frequency f = as_frequency(*v, "lane.line_rate");  // "10.3125GHz" read as bits/s
      l.line_rate_bps = f.hz;
    }
    if (const Json* v = n.get("reference_clock")) l.reference_clock = as_frequency(*v, "lane.reference_clock");
    if (const Json* v = n.get("init_clock")) l.init_clock = as_frequency(*v, "lane.init_clock");
    if (const Json* v = n.get("fiber_delay")) l.fiber_delay = as_duration(*v, "lane.fiber_delay");
    if (const Json* v = n.get("tx_cdc_depth")) l.tx_cdc_depth = as_count(*v, "lane.tx_cdc_depth");
    if (const Json* v = n.get("rx_cdc_depth")) l.rx_cdc_depth = as_count(*v, "lane.rx_cdc_depth");
    if (const Json* v = n.get("tx_cdc_latency_cycles")) {
      l.tx_cdc_latency_cycles = static_cast<std::uint32_t>(as_count(*v, "lane.tx_cdc_latency_cycles"));
    }
    if (const Json* v = n.get("rx_cdc_latency_cycles")) {
      l.rx_cdc_latency_cycles = static_cast<std::uint32_t>(as_count(*v, "lane.rx_cdc_latency_cycles"));
    }
    n.finish();
    try {
      l.validate();
    } catch (const std::exception& e) {
      throw ValidationError("lane", e.what());
    }
  }
  if (const Json* sj = root.get("schedule")) {
    Node n(*sj, "schedule");
    link::LaneSchedule& s = cfg.schedule;
    if (const Json* v = n.get("pause_period")) s.pause_period = as_count(*v, "schedule.pause_period");
    if (const Json* v = n.get("comp_period")) s.comp_period = as_count(*v, "schedule.comp_period");
    if (const Json* v = n.get("comp_length")) s.comp_length = as_count(*v, "schedule.comp_length");
    n.finish();
    try {
      s.validate();
    } catch (const std::exception& e) {
      throw ValidationError("schedule", e.what());
    }
  }
}

void read_fsm_and_emulator(Node& root, control::TestbedConfig& cfg) {
  if (const Json* fj = root.get("fsm")) {
    Node n(*fj, "fsm");
    if (const Json* v = n.get("broadcast_gap")) cfg.broadcast_gap = as_duration(*v, "fsm.broadcast_gap");
    if (const Json* v = n.get("readout_qubits")) {
      cfg.readout_qubits = static_cast<unsigned>(as_count(*v, "fsm.readout_qubits"));
      if (cfg.readout_qubits == 0) throw ValidationError("fsm.readout_qubits", "must be >= 1");
    }
    n.finish();
  }
  if (const Json* ej = root.get("emulator")) {
    Node n(*ej, "emulator");
    if (const Json* v = n.get("demodulation_delay")) {
      cfg.demodulation_delay = as_duration(*v, "emulator.demodulation_delay");
    }
    if (const Json* sj = n.get("scripts")) {
      Node scripts(*sj, "emulator.scripts");
      for (const auto& [key, values] : sj->items()) {
        const std::string p = scripts.at(key);
        unsigned q = 0;
        try {
          std::size_t used = 0;
          const unsigned long parsed = std::stoul(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
          q = static_cast<unsigned>(parsed);
        } catch (const std::exception&) {
          throw ValidationError(p, "script keys are qubit indices");
        }
        scripts.get(key);
        std::vector<std::uint8_t> seq;
        const Json& arr = as_array(values, p);
        for (std::size_t i = 0; i < arr.size(); ++i) {
          const std::int64_t s = as_int(arr[i], fmt::format("{}[{}]", p, i));
          if (s < 0 || s > 3) throw ValidationError(fmt::format("{}[{}]", p, i), "results are 2-bit values 0..3");
          seq.push_back(static_cast<std::uint8_t>(s));
        }
        cfg.scripts.emplace(q, std::move(seq));
      }
      scripts.finish();
    }
    n.finish();
  }
}

void read_faults(Node& root, control::TestbedConfig& cfg) {
  const Json* fj = root.get("faults");
  if (!fj) return;
  Node n(*fj, "faults");
  if (const Json* v = n.get("bit_flip_probability")) {
    if (!v->is_number()) throw ValidationError("faults.bit_flip_probability", "expected a number");
    cfg.bit_flip_probability = v->get<double>();
    if (!(cfg.bit_flip_probability >= 0.0 && cfg.bit_flip_probability <= 1.0)) {
      throw ValidationError("faults.bit_flip_probability", "must be within [0, 1]");
    }
  }
  n.finish();
}

void read_job(Node& root, Scenario& s) {
  const Json* jj = root.get("job");
  if (!jj) return;
  Node n(*jj, "job");
  if (const Json* v = n.get("shots")) {
    s.job.shots = static_cast<unsigned>(as_count(*v, "job.shots"));
    if (s.job.shots == 0) throw ValidationError("job.shots", "must be >= 1");
  }
  if (const Json* v = n.get("start_lead")) s.job.start_lead = as_duration(*v, "job.start_lead");
  if (const Json* v = n.get("shot_period")) s.job.shot_period = as_duration(*v, "job.shot_period");
  n.finish();
}

void read_program(Node& root, Scenario& s, const fs::path& base_dir, const std::set<BoardId>& ids) {
  const Json* pj = root.get("program");
  if (!pj) return;
  fs::path p = as_string(*pj, "program");
  if (p.is_relative()) p = base_dir / p;
  std::ifstream in(p);
  if (!in) throw ValidationError("program", fmt::format("cannot open '{}'", p.string()));
  std::stringstream text;
  text << in.rdbuf();
  try {
    s.binaries = control::parse_program(text.str());
  } catch (const Error& e) {
    throw ParseError(fmt::format("{}: {}", p.string(), e.what()));
  }
  s.program_path = p;
  for (const control::BoardBinary& b : s.binaries) {
    if (!ids.count(b.board)) {
      throw ValidationError("program", fmt::format("'{}' targets board {}, which is not defined in boards",
                                                   p.filename().string(), b.board));
    }
    for (const control::Instruction& ins : b.instructions) {
      if (const auto* m = std::get_if<control::Measure>(&ins)) {
        if (s.testbed.star && s.testbed.star->root == b.board && m->qubit >= s.testbed.readout_qubits) {
          throw ValidationError("fsm.readout_qubits",
                                fmt::format("program measures q{} but the readout FSM has {} qubits", m->qubit,
                                            s.testbed.readout_qubits));
        }
      }
    }
  }
}

}  // namespace

Scenario parse_scenario(const Json& doc, const fs::path& base_dir) {
  Node root(doc, "");
  const std::int64_t version = as_int(root.require("schema_version"), "schema_version");
  if (version != kSchemaVersion) {
    throw ValidationError("schema_version", fmt::format("unsupported version {} (expected {})", version, kSchemaVersion));
  }
  Scenario s;
  if (const Json* v = root.get("name")) s.name = as_string(*v, "name");
  if (const Json* v = root.get("seed")) s.seed = as_count(*v, "seed");

  std::set<BoardId> ids;
  read_boards(root, s.testbed, ids);
  read_ring(root, s.testbed, ids);
  if (const Json* rj = root.get("resync")) {
    Node n(*rj, "resync");
    s.testbed.resync_period = as_duration(n.require("period"), "resync.period");
    if (s.testbed.resync_period->ticks == 0) throw ValidationError("resync.period", "must be > 0");
    n.finish();
  }
  read_star(root, s.testbed, ids);
  read_lane(root, s.testbed);
  read_fsm_and_emulator(root, s.testbed);
  read_faults(root, s.testbed);
  read_job(root, s);
  read_program(root, s, base_dir, ids);
  if (const Json* v = root.get("t_stop")) s.t_stop = as_duration(*v, "t_stop");
  root.finish();

  if (s.has_program() && s.testbed.ring.order.empty()) {
    throw ValidationError("ring", "a scenario with a program needs a sync ring");
  }
  if (s.testbed.resync_period && s.testbed.ring.order.empty()) {
    throw ValidationError("resync", "periodic resync needs a sync ring");
  }
  s.job.t_stop = s.t_stop;
  set_seed(s, s.seed);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open scenario '{}'", path.string()));
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
  Scenario s = parse_scenario(doc, path.parent_path());
  s.source = path;
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

void set_seed(Scenario& s, std::uint64_t seed) {
  s.seed = seed;
  s.testbed.seed = seed;
}

}  // namespace qcsim::scenario
