// Result serialization: JSON run summaries (deterministic byte-for-byte
// for a given configuration and seed), per-path CSV emission, and the
// golden key=value regression format with exact hex-encoded doubles.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dirichlet {

// Output directory resolution: explicit value > DIRICHLET_LAB_OUT > ".".
std::string resolve_out_dir(const std::string& explicit_dir);

// Writes JSON with sorted keys, 2-space indent, trailing newline; the
// bytes depend only on the document.  Creates parent directories.
void write_json_file(const std::string& path, const nlohmann::json& doc);

// CSV with a header row; numeric cells are written with enough digits to
// round-trip exactly.
void write_csv_file(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

std::string format_double(double x); // shortest exact round-trip decimal

// Golden regression files: one "key = 0x<16 hex digits> # <decimal>" line
// per value; the hex field is the exact bit pattern and is what tests
// compare against.
std::string double_to_hex_bits(double x);
double hex_bits_to_double(const std::string& hex);
void save_golden(const std::string& path,
                 const std::vector<std::pair<std::string, double>>& kv);
std::map<std::string, double> load_golden(const std::string& path);

} // namespace dirichlet
