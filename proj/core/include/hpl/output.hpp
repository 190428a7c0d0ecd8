#pragma once

#include <string>
#include <vector>

namespace hpl {

inline constexpr const char* kCodeVersion = "hpl 0.1.0";

/// Deterministic CSV: fixed column order, %.17g floats, '\n' line ends.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    void close();

  private:
    struct Impl;
    Impl* impl_;
};

std::string format_double(double v);

/// FNV-1a hash of a text blob, hex-encoded; used to fingerprint configs.
std::string fnv1a_hex(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace hpl
