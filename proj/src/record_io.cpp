#include "dirichlet/record_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirichlet/errors.hpp"

namespace dirichlet {

namespace fs = std::filesystem;

std::string resolve_out_dir(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* env = std::getenv("DIRICHLET_LAB_OUT"); env && *env) return env;
    return ".";
}

namespace {

void ensure_parent(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
}

std::ofstream open_out(const std::string& path) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary); // "\n" endings on every platform
    if (!out) throw Error(ErrorKind::config, "cannot open output file: " + path);
    return out;
}

} // namespace

void write_json_file(const std::string& path, const nlohmann::json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
    if (!out) throw Error(ErrorKind::config, "write failed: " + path);
}

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv_file(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw Error(ErrorKind::argument, "CSV row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    if (!out) throw Error(ErrorKind::config, "write failed: " + path);
}

std::string double_to_hex_bits(double x) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof x);
    std::memcpy(&bits, &x, sizeof bits);
    char buf[19] = "0x";
    for (int i = 0; i < 16; ++i)
        buf[2 + i] = "0123456789abcdef"[(bits >> (60 - 4 * i)) & 0xf];
    buf[18] = '\0';
    return buf;
}

double hex_bits_to_double(const std::string& hex) {
    std::string h = hex;
    if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
    if (h.size() != 16)
        throw Error(ErrorKind::config, "golden value needs 16 hex digits: " + hex);
    std::uint64_t bits = 0;
    for (char c : h) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw Error(ErrorKind::config, "bad hex digit in golden value: " + hex);
        bits = (bits << 4) | std::uint64_t(v);
    }
    double x;
    std::memcpy(&x, &bits, sizeof x);
    return x;
}

void save_golden(const std::string& path,
                 const std::vector<std::pair<std::string, double>>& kv) {
    auto out = open_out(path);
    for (const auto& [key, value] : kv)
        out << key << " = " << double_to_hex_bits(value) << " # "
            << format_double(value) << "\n";
    if (!out) throw Error(ErrorKind::config, "write failed: " + path);
}

std::map<std::string, double> load_golden(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open golden file: " + path);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string key, eq, hex;
        if (!(ls >> key)) continue; // blank line
        if (!(ls >> eq >> hex) || eq != "=")
            throw Error(ErrorKind::config, "bad golden line: " + line);
        kv[key] = hex_bits_to_double(hex);
    }
    return kv;
}

} // namespace dirichlet
