#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "wbrm/errors.hpp"

namespace wbrm {

/// Shortest round-trippable decimal form of a double.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// CSV with a fixed header row, UTF-8, LF line endings.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw Error("cannot open output file: " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

}  // namespace wbrm
