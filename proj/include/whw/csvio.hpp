#pragma once

#include <string>
#include <vector>

namespace whw {

// shortest decimal representation that round-trips exactly
std::string format_double(double v);

struct CsvWriter {
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& text() const { return buffer_; }
    void save(const std::string& path) const;

private:
    std::string buffer_;
    std::size_t columns_;
};

} // namespace whw
