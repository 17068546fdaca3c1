#pragma once

// CSV output with shortest round-trip number formatting and `#` provenance
// comments, plus the standard rate-report column set.

#include <ostream>
#include <string>
#include <vector>

#include "catrep/rate.hpp"

namespace catrep::csv {

// Shortest representation that round-trips through double.
std::string format_number(double v);

struct Table {
  std::vector<std::string> comments;  // emitted as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(std::ostream &out, const Table &table);
void write_table_file(const std::string &path, const Table &table);

// Column names and row values covering every RateReport field.
std::vector<std::string> report_columns();
std::vector<double> report_row(const rate::RateReport &report);

} // namespace catrep::csv
