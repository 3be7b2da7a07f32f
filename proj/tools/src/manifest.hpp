// Copyright 2026 The formation-avoid Authors
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

#ifndef FORMATION_AVOID_TOOLS_MANIFEST_HPP
#define FORMATION_AVOID_TOOLS_MANIFEST_HPP

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace formation_avoid::cli {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Files produced by one command, held in memory until commit() so that a
/// failing command leaves nothing behind.
class OutputSet
{
public:
  void add(const std::string& relative_path, std::string content);
  bool empty() const { return files_.empty(); }
  const std::map<std::string, std::string>& files() const { return files_; }

  /// Inventory entries {path, sha256, bytes} in path order.
  nlohmann::json inventory() const;

  /// Writes every file under `dir` (created if needed) through a temporary
  /// name and a rename.
  void commit(const std::filesystem::path& dir) const;

private:
  std::map<std::string, std::string> files_;
};

inline constexpr std::string_view kManifestName = "manifest.json";

/// Run manifest: everything except "timestamps" is a pure function of the
/// inputs, options and backend.
class RunManifest
{
public:
  RunManifest(std::string command, const std::filesystem::path& scenario_path,
    std::string_view scenario_text);

  nlohmann::json& options() { return options_; }
  void set_backend(const std::string& name) { backend_ = name; }
  void set_extra(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  /// Adds manifest.json to `outputs` listing every file already in it.
  void finish(OutputSet& outputs) const;

private:
  std::string command_;
  std::string scenario_path_;
  std::string scenario_sha256_;
  nlohmann::json options_ = nlohmann::json::object();
  std::string backend_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point started_steady_;
};

} // namespace formation_avoid::cli

#endif // FORMATION_AVOID_TOOLS_MANIFEST_HPP
