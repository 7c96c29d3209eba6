// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

#include <sqlite3.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace senseforge::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return SENSEFORGE_TEST_SOURCE_DIR; }
fs::path data_path(std::string_view name) { return source_dir() / "data" / name; }
fs::path golden_path(std::string_view name) { return source_dir() / "golden" / name; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("senseforge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void build_database_from_text(std::string_view sql, const fs::path& db_file) {
  fs::create_directories(db_file.parent_path());
  fs::remove(db_file);
  sqlite3* db = nullptr;
  if (sqlite3_open(db_file.c_str(), &db) != SQLITE_OK) {
    sqlite3_close(db);
    throw std::runtime_error("cannot create " + db_file.string());
  }
  char* err = nullptr;
  const std::string script(sql);
  if (sqlite3_exec(db, script.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string message = err ? err : "unknown error";
    sqlite3_free(err);
    sqlite3_close(db);
    throw std::runtime_error("fixture script failed: " + message);
  }
  sqlite3_close(db);
}

void build_database(const fs::path& script, const fs::path& db_file) {
  build_database_from_text(read_file(script), db_file);
}

void build_fixture_root(const fs::path& root) {
  for (const char* id : {"school", "campus"}) {
    build_database(data_path(std::string(id) + ".sql"), database_path(root, id));
  }
}

std::string file_digest(const fs::path& path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : read_file(path)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<nlohmann::json> read_json_lines(const fs::path& path) {
  std::vector<nlohmann::json> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

std::vector<ExecPair> exec_pairs() {
  std::vector<ExecPair> out;
  for (const auto& j : read_json_lines(data_path("exec_pairs.jsonl"))) {
    out.push_back({j.at("id").get<std::int64_t>(), j.at("db_id"), j.at("question"), j.at("gold"),
                   j.at("pred")});
  }
  return out;
}

PreferenceFixture preference_fixture(std::uint64_t seed) {
  std::vector<ExecPair> golds;
  for (auto& p : exec_pairs()) {
    if (p.id != 15) golds.push_back(std::move(p));  // 15 is the broken gold
  }
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  PreferenceFixture out;
  for (std::int64_t id = 0; id < 50; ++id) {
    const ExecPair& g = golds[static_cast<std::size_t>(id) % golds.size()];
    out.examples.push_back({id, g.db_id, g.question, g.gold, std::nullopt});
    const std::size_t k = pick(5);
    for (std::size_t c = 0; c < k; ++c) {
      std::string sql;
      if (pick(2) == 0) {
        switch (pick(3)) {
          case 0: sql = g.gold + ";"; break;
          case 1: sql = "  " + g.gold; break;
          default: sql = g.gold + "\n"; break;
        }
      } else {
        switch (pick(5)) {
          case 0: sql = "SELECT 999"; break;
          case 1: sql = "SELEC " + g.gold.substr(7); break;
          case 2: sql = "SELECT * FROM no_such_table"; break;
          case 3: sql = "DELETE FROM " + std::string(g.db_id == "school" ? "list" : "memberships"); break;
          default: sql = g.gold + " LIMIT 0"; break;
        }
      }
      out.candidates.push_back({id, sql, "weak-" + std::to_string(c % 2)});
    }
  }
  return out;
}

}  // namespace senseforge::testing
