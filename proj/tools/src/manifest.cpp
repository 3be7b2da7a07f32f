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

#include "manifest.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace formation_avoid::cli {
namespace {

std::string utc_timestamp(std::chrono::system_clock::time_point t)
{
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

} // namespace

std::string sha256_hex(std::string_view data)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void OutputSet::add(const std::string& relative_path, std::string content)
{
  files_[relative_path] = std::move(content);
}

nlohmann::json OutputSet::inventory() const
{
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [path, content] : files_)
    list.push_back({{"path", path}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  return list;
}

void OutputSet::commit(const std::filesystem::path& dir) const
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [rel, content] : files_)
  {
    const std::filesystem::path target = dir / rel;
    std::filesystem::create_directories(target.parent_path(), ec);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size())))
        throw IoError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec)
      throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

RunManifest::RunManifest(std::string command, const std::filesystem::path& scenario_path,
  std::string_view scenario_text)
  : command_(std::move(command)), scenario_path_(scenario_path.generic_string()),
    scenario_sha256_(sha256_hex(scenario_text)), started_(std::chrono::system_clock::now()),
    started_steady_(std::chrono::steady_clock::now())
{
}

void RunManifest::finish(OutputSet& outputs) const
{
  const auto finished = std::chrono::system_clock::now();
  const double wall = std::chrono::duration<double>(
    std::chrono::steady_clock::now() - started_steady_).count();
  nlohmann::json doc = {
    {"tool", "formation-avoid"},
    {"version", FORMATION_AVOID_VERSION},
    {"command", command_},
    {"scenario", {{"path", scenario_path_}, {"sha256", scenario_sha256_}}},
    {"options", options_},
    {"backend", backend_.empty() ? nlohmann::json(nullptr) : nlohmann::json(backend_)},
    {"outputs", outputs.inventory()},
    {"timestamps", {{"started_utc", utc_timestamp(started_)},
      {"finished_utc", utc_timestamp(finished)}, {"wall_time_s", wall}}},
  };
  for (const auto& [key, value] : extra_.items())
    doc[key] = value;
  outputs.add(std::string(kManifestName), doc.dump(2) + "\n");
}

} // namespace formation_avoid::cli
