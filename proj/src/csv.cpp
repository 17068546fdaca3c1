#include "catrep/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace catrep::csv {

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_table(std::ostream &out, const Table &table) {
  for (const auto &c : table.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ",";
    out << table.columns[i];
  }
  out << "\n";
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_number(row[i]);
    }
    out << "\n";
  }
}

void write_table_file(const std::string &path, const Table &table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  write_table(out, table);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<std::string> report_columns() {
  return {"alpha",     "m",          "n_links",      "eta_half",  "f0",
          "p_dsm",     "p_tdsm",     "p_usd",        "k_m",       "p_tz",
          "log10_p_tz", "p_tot",     "log10_p_tot",  "memory_error", "e_x",
          "e_z",       "r_inf_raw",  "r_inf",        "t_r",       "r_qkd",
          "log10_r_qkd", "r_nqkd",   "per_channel_use"};
}

std::vector<double> report_row(const rate::RateReport &r) {
  return {r.alpha,
          static_cast<double>(r.m_multiplex),
          r.n_links,
          r.eta_half,
          r.f0,
          r.p_dsm,
          r.p_tdsm,
          r.p_usd,
          r.k_m,
          r.p_tz,
          r.log10_p_tz,
          r.p_tot,
          r.log10_p_tot,
          r.memory_error,
          r.e_x,
          r.e_z,
          r.r_inf_raw,
          r.r_inf,
          r.t_r,
          r.r_qkd,
          r.log10_r_qkd,
          r.r_nqkd,
          r.per_channel_use};
}

} // namespace catrep::csv
