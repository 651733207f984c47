// Copyright 2026 The sotlab Authors
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

#ifndef SOTLAB_CLI_CONFIG_HPP_
#define SOTLAB_CLI_CONFIG_HPP_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace sotlab::cli {

using Json = nlohmann::json;

/// Binds subcommand flags to fields and merges an optional JSON config
/// section: keys must name a bound option, and explicit flags win.
class OptionTable {
 public:
  explicit OptionTable(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& key, T& field, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + key, field, help)->capture_default_str();
    entries_.push_back({key, opt, [&field](const Json& v) { field = v.get<T>(); },
                        [&field]() { return Json(field); }});
    return opt;
  }

  CLI::Option* add_flag(const std::string& key, bool& field, const std::string& help);

  /// Applies `section` to every option not given on the command line.
  void merge(const Json& section, const std::string& section_name);

  /// Every bound key with its resolved value.
  Json resolved() const;

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const Json&)> assign;
    std::function<Json()> read;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

Json load_json_file(const std::filesystem::path& path);

/// Section `name` of the config file at `path`; empty object when `path` is
/// empty. Unknown top-level sections are rejected.
Json load_config_section(const std::string& path, const std::string& name);

/// Relative paths are taken under $SOTLAB_OUTPUT_ROOT when it is set.
std::filesystem::path output_path(const std::string& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& value);

/// Netpbm files (.pgm, .ppm) in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Records wall-clock details in `run_info.json`, outside the primary outputs.
void write_run_sidecar(const std::filesystem::path& dir, const std::string& command);

}  // namespace sotlab::cli

#endif  // SOTLAB_CLI_CONFIG_HPP_
