#pragma once

// Minimal CSV input/output used by the command-line tools and the state
// import/export paths.  Output is deterministic: fixed scientific format
// with 17 significant digits, '\n' line endings, no locale dependence.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpm {

// One parsed CSV file: a header row plus data cells as strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw std::runtime_error("csv: missing column '" + name + "'");
    }

    double number(std::size_t row, std::size_t col) const {
        const std::string& cell = rows.at(row).at(col);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("csv: non-numeric cell '" + cell + "'");
        }
        if (used != cell.size()) {
            throw std::runtime_error("csv: non-numeric cell '" + cell + "'");
        }
        return value;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("csv: cannot open '" + path + "'");
    }
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv_line(line);
        if (first) {
            table.header = std::move(cells);
            first = false;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw std::runtime_error("csv: ragged row in '" + path + "'");
        }
        table.rows.push_back(std::move(cells));
    }
    if (first) {
        throw std::runtime_error("csv: empty file '" + path + "'");
    }
    return table;
}

// Full round-trip precision for doubles.
inline std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", value);
    return std::string(buf);
}

// Streaming CSV writer; cells are either preformatted strings or doubles.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) {
            throw std::runtime_error("csv: cannot write '" + path + "'");
        }
    }

    void header(const std::vector<std::string>& names) { write_cells(names); }

    void row(const std::vector<std::string>& cells) { write_cells(cells); }

    void row_numbers(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) {
            cells.push_back(format_number(v));
        }
        write_cells(cells);
    }

private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out_ << ',';
            }
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

} // namespace qpm
