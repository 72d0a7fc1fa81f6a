#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oes/common.hpp"

namespace oes {

// All files are written LF-terminated with the shared number formatting
// (integers exact, doubles %.12g) so repeated runs are byte-identical.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(Error::Kind::Io, "cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        fail(Error::Kind::Io, "write failed: " + path.string());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Error::Kind::Io, "cannot open for reading: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Minimal CSV assembly: caller supplies cell strings, rows come out LF-ended.
class CsvBuilder {
  public:
    explicit CsvBuilder(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

  private:
    std::ostringstream out_;
};

}  // namespace oes
