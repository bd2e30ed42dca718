#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "husimi/phase_space.hpp"

namespace husimi {

// Full-precision decimal rendering; identical input bits give identical text.
std::string format_double(double x);

// Header line then "q,p,value" rows in row-major grid order (q outer, p
// inner), newline-terminated. Byte-identical across re-runs of the same
// config. Throws IoError on write failure.
void emit_field(const HusimiField& field, const std::filesystem::path& path);

// Delimiter-separated table with a header; NaN cells render as "nan".
void emit_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows);

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

// Run metadata written next to every experiment's outputs, also on failure.
struct RunManifest {
  std::string config_echo;
  std::string version;
  bool success = false;
  std::string failure;
  std::vector<StageTiming> stages;
  std::map<std::string, std::string> diagnostics;
  std::vector<std::string> notes;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace husimi
