#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdg::cli {

inline std::string num(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Comma-separated output with a versioned schema comment on the first line.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::string schema, std::vector<std::string> columns, bool timestamp)
        : path_(path), out_(path, std::ios::trunc)
    {
        if (!out_) {
            throw std::invalid_argument("cannot write to '" + path + "'");
        }
        out_ << "# schema: " << schema << '\n';
        if (timestamp) out_ << "# generated: " << utc_now() << '\n';
        width_ = columns.size();
        write(columns);
    }

    void row(const std::vector<std::string>& cells)
    {
        if (cells.size() != width_) {
            throw std::logic_error("row width does not match header");
        }
        write(cells);
        ++rows_;
    }

    std::size_t rows() const noexcept { return rows_; }
    const std::string& path() const noexcept { return path_; }

    void close()
    {
        out_.close();
        if (!out_) throw std::runtime_error("failed writing '" + path_ + "'");
    }

private:
    void write(const std::vector<std::string>& cells)
    {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out_ << ',';
            out_ << escape(cells[k]);
        }
        out_ << '\n';
    }

    static std::string escape(const std::string& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + '"';
    }

    std::string path_;
    std::ofstream out_;
    std::size_t width_ = 0;
    std::size_t rows_ = 0;
};

} // namespace fairdg::cli
