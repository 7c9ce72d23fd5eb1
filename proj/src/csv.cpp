#include "cnslab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cnslab/errors.hpp"

namespace cnslab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void CsvWriter::comment(const std::string& line) {
    out_ << "# " << line << "\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        out_ << (i ? "," : "") << names[i];
    }
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_double(values[i]);
    }
    out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << values[i];
    }
    out_ << "\n";
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::config_error, "cannot open CSV file " + path);
    }
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = trim(line.substr(1, eq - 1));
                table.meta[key] = trim(line.substr(eq + 1));
            }
            continue;
        }
        if (!have_header) {
            for (auto& c : split(line, ',')) table.columns.push_back(trim(c));
            have_header = true;
            continue;
        }
        auto cells = split(line, ',');
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto& c : cells) {
            std::string v = trim(c);
            row.push_back(v.empty() ? std::nan("") : std::strtod(v.c_str(), nullptr));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace cnslab
