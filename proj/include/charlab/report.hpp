#pragma once

#include "charlab/graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace charlab {

inline constexpr const char* kVersion = "0.3.0";

// Writes to a sibling temp file and renames it over `path`; creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Undirected DOT; labels, when given, name the vertices.
std::string graph_to_dot(const BitGraph& g, const std::string& name, const std::vector<std::string>& labels = {});

// Common report header: tool version, command, seed and the echoed configuration.
nlohmann::json report_envelope(const std::string& command, std::uint64_t seed, const nlohmann::json& config);

}  // namespace charlab
