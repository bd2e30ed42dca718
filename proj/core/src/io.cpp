#include "husimi/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "husimi/errors.hpp"

namespace husimi {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void emit_field(const HusimiField& field, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "q,p,value\n";
  const auto& g = field.grid;
  for (int i = 0; i < g.nq; ++i) {
    const std::string qs = format_double(g.q_at(i));
    for (int j = 0; j < g.np; ++j) {
      out << qs << ',' << format_double(g.p_at(j)) << ',' << format_double(field.values(i, j))
          << '\n';
    }
  }
  if (!out.good()) throw IoError("write failed: " + path.string());
}

void emit_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_for_write(path);
  for (size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << (c + 1 < columns.size() ? "," : "");
  }
  out << '\n';
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
    }
    out << '\n';
  }
  if (!out.good()) throw IoError("write failed: " + path.string());
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["version"] = manifest.version;
  doc["success"] = manifest.success;
  if (!manifest.failure.empty()) doc["failure"] = manifest.failure;
  try {
    doc["config"] = nlohmann::json::parse(manifest.config_echo);
  } catch (...) {
    doc["config"] = manifest.config_echo;
  }
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : manifest.stages) stages.push_back({{"name", s.name}, {"seconds", s.seconds}});
  doc["stages"] = stages;
  doc["diagnostics"] = manifest.diagnostics;
  doc["notes"] = manifest.notes;
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
  if (!out.good()) throw IoError("write failed: " + path.string());
}

}  // namespace husimi
