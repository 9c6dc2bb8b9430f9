#pragma once

// CSV output: full-precision numbers, a `# ` comment header echoing the
// config, and one atomic write per file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spinqfi/config.hpp"

namespace spinqfi {

class CsvWriter {
 public:
  CsvWriter(std::string_view echo, std::string_view columns) {
    std::istringstream in{std::string(echo)};
    std::string line;
    while (std::getline(in, line)) os_ << (line.empty() ? "#" : "# " + line) << "\n";
    os_ << columns << "\n";
  }

  CsvWriter& cell(double v) { return raw(format_number(v)); }
  CsvWriter& cell(int v) { return raw(std::to_string(v)); }
  CsvWriter& cell(bool v) { return raw(v ? "1" : "0"); }
  CsvWriter& cell(std::string_view s) { return raw(s); }
  CsvWriter& cell(const char* s) { return raw(s); }

  void end_row() {
    os_ << "\n";
    first_ = true;
  }

  [[nodiscard]] std::string str() const { return os_.str(); }

 private:
  CsvWriter& raw(std::string_view s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }

  std::ostringstream os_;
  bool first_ = true;
};

/// Writes to a sibling temp file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

}  // namespace spinqfi
