#include "cosim/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cosim {

namespace {

void header_block(std::ostream& os, const char* prefix, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) os << ',' << prefix << i;
}

void values(std::ostream& os, const std::vector<double>& v) {
  for (double x : v) os << ',' << format_double(x);
}

std::size_t count_prefix(const std::vector<std::string>& header, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& h : header) {
    if (h.size() > prefix.size() && h.compare(0, prefix.size(), prefix) == 0 &&
        h.find_first_not_of("0123456789", prefix.size()) == std::string::npos) {
      ++n;
    }
  }
  return n;
}

std::vector<double> take(const std::vector<double>& row, std::size_t& pos, std::size_t n) {
  if (pos + n > row.size()) throw std::runtime_error("csv: short row");
  std::vector<double> out(row.begin() + static_cast<std::ptrdiff_t>(pos),
                          row.begin() + static_cast<std::ptrdiff_t>(pos + n));
  pos += n;
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_exchange_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << 't';
  header_block(os, "x", rec.n_states);
  header_block(os, "y", rec.n_channels);
  header_block(os, "u_used", rec.n_channels);
  header_block(os, "dE", rec.n_channels);
  os << ",E,E_ref\n";
  for (const auto& r : rec.exchange) {
    os << format_double(r.t);
    values(os, r.x);
    values(os, r.y);
    values(os, r.u_used);
    values(os, r.dE);
    os << ',' << format_double(r.E) << ',' << format_double(r.E_ref) << '\n';
  }
}

void write_dense_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << 't';
  header_block(os, "x", rec.n_states);
  header_block(os, "u_real", rec.n_channels);
  header_block(os, "corr", rec.n_channels);
  os << '\n';
  for (const auto& r : rec.dense) {
    os << format_double(r.t);
    values(os, r.x);
    values(os, r.u_real);
    values(os, r.corr);
    os << '\n';
  }
}

std::filesystem::path dense_path_for(const std::filesystem::path& exchange_path) {
  std::filesystem::path p = exchange_path;
  p.replace_extension(".dense.csv");
  return p;
}

void write_record(const std::filesystem::path& exchange_path, const TrajectoryRecord& rec) {
  std::ofstream ex(exchange_path, std::ios::binary);
  if (!ex) throw std::runtime_error("cannot open " + exchange_path.string() + " for writing");
  write_exchange_csv(ex, rec);
  const auto dense = dense_path_for(exchange_path);
  std::ofstream de(dense, std::ios::binary);
  if (!de) throw std::runtime_error("cannot open " + dense.string() + " for writing");
  write_dense_csv(de, rec);
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: missing header");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      row.push_back(std::strtod(p, &end));
      if (end == p) throw std::runtime_error("csv: malformed number in '" + line + "'");
      p = end;
      if (*p == ',') ++p;
    }
    if (row.size() != table.header.size()) throw std::runtime_error("csv: row width does not match header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

TrajectoryRecord read_record(const std::filesystem::path& exchange_path) {
  std::ifstream ex(exchange_path);
  if (!ex) throw std::runtime_error("cannot open " + exchange_path.string());
  const CsvTable et = read_csv(ex);
  std::ifstream de(dense_path_for(exchange_path));
  if (!de) throw std::runtime_error("cannot open " + dense_path_for(exchange_path).string());
  const CsvTable dt = read_csv(de);

  TrajectoryRecord rec;
  rec.n_states = count_prefix(et.header, "x");
  rec.n_channels = count_prefix(et.header, "y");
  const std::size_t n = rec.n_states;
  const std::size_t m = rec.n_channels;
  for (const auto& row : et.rows) {
    std::size_t pos = 1;
    ExchangeRow r;
    r.t = row[0];
    r.x = take(row, pos, n);
    r.y = take(row, pos, m);
    r.u_used = take(row, pos, m);
    r.dE = take(row, pos, m);
    r.E = take(row, pos, 1)[0];
    r.E_ref = take(row, pos, 1)[0];
    rec.exchange.push_back(std::move(r));
  }
  for (const auto& row : dt.rows) {
    std::size_t pos = 1;
    DenseRow r;
    r.t = row[0];
    r.x = take(row, pos, n);
    r.u_real = take(row, pos, m);
    r.corr = take(row, pos, m);
    rec.dense.push_back(std::move(r));
  }
  return rec;
}

}  // namespace cosim
