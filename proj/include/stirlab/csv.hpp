#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stirlab {

/// Minimal CSV emitter; every file starts with a header row naming the
/// columns (units belong in the column names).
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    template <typename... Ts>
    void row(const Ts&... vals) {
        std::vector<std::string> cells;
        (cells.push_back(format(vals)), ...);
        write_row(cells);
    }

    template <typename T>
    static std::string format(const T& v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        return ss.str();
    }

private:
    std::ofstream out_;
};

}  // namespace stirlab
