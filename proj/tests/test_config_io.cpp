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

#include <regex>
#include <string>

#include <doctest.h>

#include "quench/config.hpp"
#include "quench/io.hpp"
#include "test_support.hpp"

using namespace quench;
using testsupport::TempDir;

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hash_hex(0) == "0x0000000000000000");
  CHECK(hash_hex(0xabcdef0123456789ULL) == "0xabcdef0123456789");
}

TEST_CASE("canonical_text round trips through the parser") {
  ExperimentConfig cfg;
  cfg.protocol.seed = 4242;
  cfg.protocol.realizations = 17;
  cfg.recompile.layers = 6;
  cfg.noise.readout.shots = 555;
  cfg.output.directory = "scratch";

  const std::string text = cfg.canonical_text();
  const ExperimentConfig back = parse_config_text(text);
  CHECK(back.canonical_text() == text);
  CHECK(back.hash() == cfg.hash());
  CHECK(back.protocol.seed == 4242);
  CHECK(back.protocol.realizations == 17);
  CHECK(back.recompile.layers == 6);
  CHECK(back.noise.readout.shots == 555);
  CHECK(back.output.directory == "scratch");

  // The hash tracks content, not formatting accidents.
  ExperimentConfig other = cfg;
  other.protocol.seed = 4243;
  CHECK(other.hash() != cfg.hash());
}

TEST_CASE("parser reports offending line numbers") {
  const std::string dup =
      "[protocol]\n"
      "seed = 1\n"
      "seed = 2\n";
  CHECK_THROWS_WITH_AS(parse_config_text(dup),
                       doctest::Contains("config line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(dup),
                       doctest::Contains("duplicate key"), ConfigError);

  CHECK_THROWS_WITH_AS(parse_config_text("[nonsense]\n"),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[protocol]\nwhatever = 1\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("seed = 1\n"),
                       doctest::Contains("outside any"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[protocol]\nseed = banana\n"),
                       doctest::Contains("config line 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[protocol\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[protocol]\nnot a pair\n"),
                  ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text =
      "# experiment sketch\n"
      "\n"
      "[protocol]\n"
      "seed = 9   # inline comment\n";
  const ExperimentConfig cfg = parse_config_text(text);
  CHECK(cfg.protocol.seed == 9);
}

TEST_CASE("validate rejects inconsistent blocks with block names") {
  ExperimentConfig cfg;
  cfg.recompile.layers = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("recompile"),
                       ConfigError);

  cfg = ExperimentConfig{};
  cfg.noise.noise_factors = {1, 2};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("odd"),
                       ConfigError);

  cfg = ExperimentConfig{};
  cfg.noise.noise_factors = {3, 3};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("duplicate"),
                       ConfigError);

  cfg = ExperimentConfig{};
  cfg.noise.noise_factors.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = ExperimentConfig{};
  cfg.output.write_csv = false;
  cfg.output.write_json = false;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("format"),
                       ConfigError);

  cfg = ExperimentConfig{};
  cfg.protocol.realizations = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("protocol"),
                       ConfigError);
}

TEST_CASE("noise presets set the strength baseline") {
  const ExperimentConfig def = parse_config_text("[noise]\npreset = default\n");
  CHECK(def.noise.build_model().size() == 3);

  const ExperimentConfig none = parse_config_text("[noise]\npreset = none\n");
  CHECK(none.noise.build_model().empty());

  // Explicit keys override the preset regardless of order in the file.
  const ExperimentConfig mixed = parse_config_text(
      "[noise]\n"
      "two_qubit_depolarizing = 0.05\n"
      "preset = none\n");
  const NoiseModel model = mixed.noise.build_model();
  REQUIRE(model.size() == 1);
  CHECK(model[0].kind == NoiseChannel::Kind::kTwoQubitDepolarizing);
  CHECK(model[0].p == 0.05);

  CHECK_THROWS_AS(parse_config_text("[noise]\npreset = loud\n"), ConfigError);
}

TEST_CASE("CLI overrides reach every documented knob") {
  ExperimentConfig cfg;
  CliOverrides o;
  o.seed = 123456;
  o.out_dir = "elsewhere";
  o.realizations = 9;
  o.threads = 4;
  apply_overrides(cfg, o);
  CHECK(cfg.protocol.seed == 123456);
  CHECK(cfg.output.directory == "elsewhere");
  CHECK(cfg.protocol.realizations == 9);
  CHECK(cfg.recompile.realizations == 9);
  CHECK(cfg.protocol.threads == 4);

  ExperimentConfig untouched;
  apply_overrides(untouched, CliOverrides{});
  CHECK(untouched.hash() == ExperimentConfig{}.hash());
}

TEST_CASE("load_config_file reads files and names missing ones") {
  TempDir dir("config");
  const std::string path = dir.file("run.cfg");
  write_text_file(path, "[protocol]\nseed = 77\n");
  const ExperimentConfig cfg = load_config_file(path);
  CHECK(cfg.protocol.seed == 77);

  CHECK_THROWS_WITH_AS(load_config_file(dir.file("absent.cfg")),
                       doctest::Contains("absent.cfg"), ConfigError);
}

TEST_CASE("tables round trip through CSV with their config hash") {
  TempDir dir("io");
  Table t;
  t.columns = {"time", "value", "label"};
  t.add_row({csv_cell(0.25), csv_cell(-1.5e-7), "first"});
  t.add_row({csv_cell(12345.0), csv_cell(3.0), "second"});
  CHECK_THROWS_AS(t.add_row({"only-one"}), std::logic_error);
  CHECK(t.column_index("value") == 1);
  CHECK(t.column_index("missing") == -1);

  const std::string path = dir.file("table.csv");
  const std::uint64_t tag = 0x1234abcd5678ef90ULL;
  write_table_csv(path, tag, t);

  std::uint64_t read_tag = 0;
  const Table back = read_table_csv(path, &read_tag);
  CHECK(read_tag == tag);
  REQUIRE(back.columns == t.columns);
  REQUIRE(back.rows.size() == 2);
  CHECK(table_double(back, 0, "time") == 0.25);
  CHECK(table_double(back, 0, "value") == -1.5e-7);
  CHECK(table_double(back, 1, "time") == 12345.0);
  CHECK(back.rows[1][2] == "second");

  // The hash comment is the first line of the file.
  const std::string raw = read_text_file(path);
  CHECK(raw.rfind("# config_hash=0x1234abcd5678ef90\n", 0) == 0);

  CHECK_THROWS_WITH_AS(read_table_csv(dir.file("no.csv"), nullptr),
                       doctest::Contains("no.csv"), std::runtime_error);
  write_text_file(dir.file("ragged.csv"), "a,b\n1\n");
  CHECK_THROWS_AS(read_table_csv(dir.file("ragged.csv"), nullptr),
                  std::runtime_error);
}

TEST_CASE("text files round trip bytes") {
  TempDir dir("text");
  const std::string path = dir.file("blob.txt");
  const std::string content = "line1\nline2 with trailing space \n\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  CHECK(file_exists(path));
  CHECK(!file_exists(dir.file("nothing")));
}

TEST_CASE("utc_timestamp uses the ISO-8601 Z form") {
  const std::regex iso("\\d{4}-\\d{2}-\\d{2}T\\d{2}:\\d{2}:\\d{2}Z");
  CHECK(std::regex_match(utc_timestamp(), iso));
}
