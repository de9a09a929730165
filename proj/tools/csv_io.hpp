#pragma once

// Deterministic CSV/manifest output: 17 significant digits, '.' decimal
// separator, LF line endings, UTF-8.  Re-running with the same parameters
// reproduces files byte for byte.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }

  void header(const std::string& line) { out_ << line << "\n"; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void close() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failure on CSV output");
    out_.close();
  }

 private:
  std::ofstream out_;
};

/// Flat key=value manifest emitted alongside every CSV; `rerun` replays it.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    order_.push_back(key);
    values_[key] = value;
  }
  void set(const std::string& key, double v) { set(key, format_value(v)); }
  void set(const std::string& key, std::uint64_t v) { set(key, std::to_string(v)); }
  void set(const std::string& key, int v) { set(key, std::to_string(v)); }
  void set(const std::string& key, bool v) { set(key, std::string(v ? "1" : "0")); }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest file: " + path);
    for (const auto& key : order_) out << key << "=" << values_.at(key) << "\n";
    out.flush();
    if (!out) throw std::runtime_error("write failure on manifest");
  }

  static std::map<std::string, std::string> read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("malformed manifest line: " + line);
      out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
};

}  // namespace cli
