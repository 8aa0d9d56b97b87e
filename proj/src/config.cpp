// Copyright 2026 The quenchsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quench/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "quench/format.hpp"

namespace quench {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double want_double(const std::string& v, int line) {
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long long want_int(const std::string& v, int line) {
  try {
    return parse_long(v);
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t want_u64(const std::string& v, int line) {
  const long long x = want_int(v, line);
  if (x < 0) fail(line, "expected a non-negative integer");
  return static_cast<std::uint64_t>(x);
}

bool want_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true or false, got '" + v + "'");
}

struct Entry {
  int line;
  std::string key;
  std::string value;
};

}  // namespace

NoiseModel NoiseConfig::build_model() const {
  NoiseModel model;
  if (two_qubit_depolarizing > 0.0) {
    NoiseChannel ch;
    ch.kind = NoiseChannel::Kind::kTwoQubitDepolarizing;
    ch.placement = NoiseChannel::Placement::kActivePair;
    ch.p = two_qubit_depolarizing;
    model.push_back(ch);
  }
  if (spectator_depolarizing > 0.0) {
    NoiseChannel ch;
    ch.kind = NoiseChannel::Kind::kLocalDepolarizing;
    ch.placement = NoiseChannel::Placement::kSpectators;
    ch.p = spectator_depolarizing;
    model.push_back(ch);
  }
  if (global_f < 1.0) {
    NoiseChannel ch;
    ch.kind = NoiseChannel::Kind::kGlobalDepolarizing;
    ch.placement = NoiseChannel::Placement::kGlobal;
    ch.f = global_f;
    model.push_back(ch);
  }
  if (coherent_zz_angle != 0.0) {
    NoiseChannel ch;
    ch.kind = NoiseChannel::Kind::kCoherentOverRotation;
    ch.placement = NoiseChannel::Placement::kActivePair;
    ch.angle = coherent_zz_angle;
    ch.axis0 = 'Z';
    ch.axis1 = 'Z';
    model.push_back(ch);
  }
  return model;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  const auto d = [](double v) { return format_double(v); };

  out << "[system]\n";
  out << "n_qubits = " << protocol.sys.n_qubits << "\n";
  out << "frequencies =";
  for (double w : protocol.sys.frequencies) out << " " << d(w);
  out << "\n";
  out << "coupling_scale = " << d(protocol.sys.coupling_scale) << "\n";

  out << "\n[protocol]\n";
  out << "initial_state = " << protocol.initial_state << "\n";
  out << "realizations = " << protocol.realizations << "\n";
  out << "t_min = " << d(protocol.grid.t_min) << "\n";
  out << "t_max = " << d(protocol.grid.t_max) << "\n";
  out << "dt = " << d(protocol.grid.dt) << "\n";
  out << "window_start = " << d(protocol.window_start) << "\n";
  out << "window_end = " << d(protocol.window_end) << "\n";
  out << "seed = " << protocol.seed << "\n";
  out << "bootstrap_resamples = " << protocol.bootstrap_resamples << "\n";
  out << "threads = " << protocol.threads << "\n";

  out << "\n[recompile]\n";
  out << "layers = " << recompile.layers << "\n";
  out << "time = " << d(recompile.time) << "\n";
  out << "realizations = " << recompile.realizations << "\n";
  out << "hops = " << recompile.options.hops << "\n";
  out << "max_iterations = " << recompile.options.max_iterations << "\n";
  out << "gradient_tolerance = " << d(recompile.options.gradient_tolerance)
      << "\n";
  out << "cost_tolerance = " << d(recompile.options.cost_tolerance) << "\n";
  out << "hop_scale = " << d(recompile.options.hop_scale) << "\n";
  out << "metropolis_temperature = "
      << d(recompile.options.metropolis_temperature) << "\n";

  out << "\n[noise]\n";
  out << "preset = " << noise.preset << "\n";
  out << "two_qubit_depolarizing = " << d(noise.two_qubit_depolarizing)
      << "\n";
  out << "spectator_depolarizing = " << d(noise.spectator_depolarizing)
      << "\n";
  out << "global_f = " << d(noise.global_f) << "\n";
  out << "coherent_zz_angle = " << d(noise.coherent_zz_angle) << "\n";
  out << "readout_eps0 = " << d(noise.readout.eps0) << "\n";
  out << "readout_eps1 = " << d(noise.readout.eps1) << "\n";
  out << "shots = " << noise.readout.shots << "\n";
  out << "ibu_iterations = " << noise.readout.ibu_iterations << "\n";
  out << "rc_samples = " << noise.rc.samples << "\n";
  out << "noise_factors =";
  for (int l : noise.noise_factors) out << " " << l;
  out << "\n";

  out << "\n[output]\n";
  out << "directory = " << output.directory << "\n";
  out << "per_realization = " << (output.per_realization ? "true" : "false")
      << "\n";
  out << "formats =";
  if (output.write_csv) out << " csv";
  if (output.write_json) out << " json";
  out << "\n";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  return fnv1a64(canonical_text());
}

void ExperimentConfig::validate() const {
  try {
    protocol.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("protocol: ") + e.what());
  }
  if (recompile.layers < 1) throw ConfigError("recompile: layers must be >= 1");
  if (recompile.time <= 0.0) throw ConfigError("recompile: time must be > 0");
  if (recompile.realizations < 1) {
    throw ConfigError("recompile: realizations must be >= 1");
  }
  const RecompileOptions& o = recompile.options;
  if (o.hops < 1) throw ConfigError("recompile: hops must be >= 1");
  if (o.max_iterations < 1) {
    throw ConfigError("recompile: max_iterations must be >= 1");
  }
  if (o.gradient_tolerance <= 0.0 || o.cost_tolerance <= 0.0) {
    throw ConfigError("recompile: tolerances must be > 0");
  }
  if (o.hop_scale < 0.0) throw ConfigError("recompile: hop_scale must be >= 0");
  if (o.metropolis_temperature <= 0.0) {
    throw ConfigError("recompile: metropolis_temperature must be > 0");
  }
  if (noise.preset != "default" && noise.preset != "none") {
    throw ConfigError("noise: unknown preset '" + noise.preset + "'");
  }
  try {
    for (const NoiseChannel& ch : noise.build_model()) ch.validate();
    noise.readout.validate();
    noise.rc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }
  if (noise.noise_factors.empty()) {
    throw ConfigError("noise: noise_factors must not be empty");
  }
  std::set<int> seen;
  for (int l : noise.noise_factors) {
    if (l < 1 || l % 2 == 0) {
      throw ConfigError("noise: noise factors must be odd and >= 1");
    }
    if (!seen.insert(l).second) {
      throw ConfigError("noise: duplicate noise factor");
    }
  }
  if (output.directory.empty()) {
    throw ConfigError("output: directory must not be empty");
  }
  if (!output.write_csv && !output.write_json) {
    throw ConfigError("output: at least one format required");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  static const std::set<std::string> kSections = {
      "system", "protocol", "recompile", "noise", "output"};

  // First pass: split into (section, key, value) entries.
  std::vector<std::pair<std::string, Entry>> entries;
  std::set<std::string> seen_keys;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash_pos = raw.find('#');
    if (hash_pos != std::string::npos) raw = raw.substr(0, hash_pos);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    if (section.empty()) fail(line_no, "key outside any [section]");
    Entry e;
    e.line = line_no;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    if (e.key.empty()) fail(line_no, "empty key");
    if (!seen_keys.insert(section + "." + e.key).second) {
      fail(line_no, "duplicate key '" + e.key + "' in [" + section + "]");
    }
    entries.emplace_back(section, e);
  }

  ExperimentConfig cfg;

  // The noise preset resets the strength baseline, so apply it before any
  // explicit strength keys regardless of where it sits in the file.
  for (const auto& [sec, e] : entries) {
    if (sec != "noise" || e.key != "preset") continue;
    if (e.value == "default") {
      cfg.noise = NoiseConfig{};
    } else if (e.value == "none") {
      cfg.noise.preset = "none";
      cfg.noise.two_qubit_depolarizing = 0.0;
      cfg.noise.spectator_depolarizing = 0.0;
      cfg.noise.global_f = 1.0;
      cfg.noise.coherent_zz_angle = 0.0;
    } else {
      fail(e.line, "unknown preset '" + e.value + "' (default, none)");
    }
  }

  for (const auto& [sec, e] : entries) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    const int ln = e.line;
    if (sec == "system") {
      if (k == "n_qubits") {
        cfg.protocol.sys.n_qubits = static_cast<int>(want_int(v, ln));
      } else if (k == "frequencies") {
        cfg.protocol.sys.frequencies.clear();
        for (const std::string& tok : split_ws(v)) {
          cfg.protocol.sys.frequencies.push_back(want_double(tok, ln));
        }
      } else if (k == "coupling_scale") {
        cfg.protocol.sys.coupling_scale = want_double(v, ln);
      } else {
        fail(ln, "unknown key '" + k + "' in [system]");
      }
    } else if (sec == "protocol") {
      if (k == "initial_state") {
        cfg.protocol.initial_state = v;
      } else if (k == "realizations") {
        cfg.protocol.realizations = static_cast<int>(want_int(v, ln));
      } else if (k == "t_min") {
        cfg.protocol.grid.t_min = want_double(v, ln);
      } else if (k == "t_max") {
        cfg.protocol.grid.t_max = want_double(v, ln);
      } else if (k == "dt") {
        cfg.protocol.grid.dt = want_double(v, ln);
      } else if (k == "window_start") {
        cfg.protocol.window_start = want_double(v, ln);
      } else if (k == "window_end") {
        cfg.protocol.window_end = want_double(v, ln);
      } else if (k == "seed") {
        cfg.protocol.seed = want_u64(v, ln);
      } else if (k == "bootstrap_resamples") {
        cfg.protocol.bootstrap_resamples = static_cast<int>(want_int(v, ln));
      } else if (k == "threads") {
        cfg.protocol.threads = static_cast<int>(want_int(v, ln));
      } else {
        fail(ln, "unknown key '" + k + "' in [protocol]");
      }
    } else if (sec == "recompile") {
      if (k == "layers") {
        cfg.recompile.layers = static_cast<int>(want_int(v, ln));
      } else if (k == "time") {
        cfg.recompile.time = want_double(v, ln);
      } else if (k == "realizations") {
        cfg.recompile.realizations = static_cast<int>(want_int(v, ln));
      } else if (k == "hops") {
        cfg.recompile.options.hops = static_cast<int>(want_int(v, ln));
      } else if (k == "max_iterations") {
        cfg.recompile.options.max_iterations =
            static_cast<int>(want_int(v, ln));
      } else if (k == "gradient_tolerance") {
        cfg.recompile.options.gradient_tolerance = want_double(v, ln);
      } else if (k == "cost_tolerance") {
        cfg.recompile.options.cost_tolerance = want_double(v, ln);
      } else if (k == "hop_scale") {
        cfg.recompile.options.hop_scale = want_double(v, ln);
      } else if (k == "metropolis_temperature") {
        cfg.recompile.options.metropolis_temperature = want_double(v, ln);
      } else {
        fail(ln, "unknown key '" + k + "' in [recompile]");
      }
    } else if (sec == "noise") {
      if (k == "preset") {
        // handled in the first pass
      } else if (k == "two_qubit_depolarizing") {
        cfg.noise.two_qubit_depolarizing = want_double(v, ln);
      } else if (k == "spectator_depolarizing") {
        cfg.noise.spectator_depolarizing = want_double(v, ln);
      } else if (k == "global_f") {
        cfg.noise.global_f = want_double(v, ln);
      } else if (k == "coherent_zz_angle") {
        cfg.noise.coherent_zz_angle = want_double(v, ln);
      } else if (k == "readout_eps0") {
        cfg.noise.readout.eps0 = want_double(v, ln);
      } else if (k == "readout_eps1") {
        cfg.noise.readout.eps1 = want_double(v, ln);
      } else if (k == "shots") {
        cfg.noise.readout.shots = want_int(v, ln);
      } else if (k == "ibu_iterations") {
        cfg.noise.readout.ibu_iterations = static_cast<int>(want_int(v, ln));
      } else if (k == "rc_samples") {
        cfg.noise.rc.samples = static_cast<int>(want_int(v, ln));
      } else if (k == "noise_factors") {
        cfg.noise.noise_factors.clear();
        for (const std::string& tok : split_ws(v)) {
          cfg.noise.noise_factors.push_back(
              static_cast<int>(want_int(tok, ln)));
        }
      } else {
        fail(ln, "unknown key '" + k + "' in [noise]");
      }
    } else if (sec == "output") {
      if (k == "directory") {
        cfg.output.directory = v;
      } else if (k == "per_realization") {
        cfg.output.per_realization = want_bool(v, ln);
      } else if (k == "formats") {
        cfg.output.write_csv = false;
        cfg.output.write_json = false;
        for (const std::string& tok : split_ws(v)) {
          if (tok == "csv") {
            cfg.output.write_csv = true;
          } else if (tok == "json") {
            cfg.output.write_json = true;
          } else {
            fail(ln, "unknown format '" + tok + "' (csv, json)");
          }
        }
      } else {
        fail(ln, "unknown key '" + k + "' in [output]");
      }
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o) {
  if (o.seed) cfg.protocol.seed = *o.seed;
  if (o.out_dir) cfg.output.directory = *o.out_dir;
  if (o.realizations) {
    cfg.protocol.realizations = *o.realizations;
    cfg.recompile.realizations = *o.realizations;
  }
  if (o.threads) cfg.protocol.threads = *o.threads;
  cfg.validate();
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out = "0x";
  for (int shift = 60; shift >= 0; shift -= 4) {
    out.push_back(digits[(h >> shift) & 0xF]);
  }
  return out;
}

}  // namespace quench
