#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace cnslab {

// shortest round-trip decimal form; identical doubles print identically
std::string format_double(double x);

// Minimal CSV writer: '#' comment lines for metadata, one header row, then
// data rows.  All doubles go through format_double so repeated runs of the
// same computation produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& line);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& values);

  private:
    std::ostream& out_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> meta;  // parsed "# key = value" comments

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace cnslab
