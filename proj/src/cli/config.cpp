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

#include "cli/config.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "sotlab/error.hpp"

namespace sotlab::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kSections{"example1", "analyze", "synth", "train", "restore", "eval"};

}  // namespace

CLI::Option* OptionTable::add_flag(const std::string& key, bool& field, const std::string& help) {
  CLI::Option* opt = app_->add_flag("--" + key, field, help);
  entries_.push_back({key, opt, [&field](const Json& v) { field = v.get<bool>(); },
                      [&field]() { return Json(field); }});
  return opt;
}

void OptionTable::merge(const Json& section, const std::string& section_name) {
  if (section.is_null()) return;
  if (!section.is_object())
    throw ValidationError("config section '" + section_name + "' must be an object");
  for (const auto& [key, value] : section.items()) {
    const auto it = std::find_if(entries_.begin(), entries_.end(),
                                 [&](const Entry& e) { return e.key == key; });
    if (it == entries_.end())
      throw ValidationError("unknown key '" + key + "' in config section '" + section_name + "'");
    if (it->option->count() > 0) continue;
    try {
      it->assign(value);
    } catch (const Json::exception&) {
      throw ValidationError("config key '" + section_name + "." + key + "' has the wrong type");
    }
  }
}

Json OptionTable::resolved() const {
  Json out = Json::object();
  for (const Entry& e : entries_) out[e.key] = e.read();
  return out;
}

Json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
}

Json load_config_section(const std::string& path, const std::string& name) {
  if (path.empty()) return Json::object();
  const Json doc = load_json_file(path);
  if (!doc.is_object()) throw ValidationError(path + ": config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kSections.contains(key))
      throw ValidationError(path + ": unknown config section '" + key + "'");
  }
  return doc.contains(name) ? doc.at(name) : Json::object();
}

fs::path output_path(const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("SOTLAB_OUTPUT_ROOT"); root != nullptr && *root != '\0')
    return fs::path(root) / p;
  return p;
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const Json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

void write_run_sidecar(const fs::path& dir, const std::string& command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_json_file(dir / "run_info.json", Json{{"command", command}, {"finished_utc", stamp}});
}

}  // namespace sotlab::cli
