#pragma once

// Minimal comma-separated table reading and writing used by the case
// loader and the output writers. No quoting: fields never contain commas.

#include <filesystem>
#include <string>
#include <vector>

namespace lecdc::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header, or -1.
    int column(const std::string& name) const;
};

/// Throws std::runtime_error when the file cannot be opened or a row has a
/// different field count than the header.
Table read(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

/// Parses a finite or "inf"/"-inf" number; throws std::invalid_argument.
double parse_number(const std::string& text);

class Writer {
public:
    explicit Writer(std::vector<std::string> header);

    Writer& row(const std::vector<double>& values);
    Writer& row(const std::vector<std::string>& fields);

    std::string str() const { return out_; }
    void save(const std::filesystem::path& path) const;

private:
    std::size_t width_;
    std::string out_;
};

}  // namespace lecdc::csv
