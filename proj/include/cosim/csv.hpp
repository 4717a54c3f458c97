// Trajectory CSV files.
//
// Exchange table:  t, x0..x{n-1}, y0.., u_used0.., dE0.., E, E_ref
// Dense table:     t, x0..x{n-1}, u_real0.., corr0..
// The dense table lives next to the exchange table with the extension
// replaced by ".dense.csv". Values use 17 significant digits so they parse
// back bit-exactly; lines end in '\n'.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cosim/master.hpp"

namespace cosim {

std::string format_double(double v);

void write_exchange_csv(std::ostream& os, const TrajectoryRecord& rec);
void write_dense_csv(std::ostream& os, const TrajectoryRecord& rec);

std::filesystem::path dense_path_for(const std::filesystem::path& exchange_path);

// Writes both tables. Throws std::runtime_error if a file cannot be opened.
void write_record(const std::filesystem::path& exchange_path, const TrajectoryRecord& rec);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& is);

// Rebuilds the exchange and dense tables of a record (balance diagnostics are
// not serialized).
TrajectoryRecord read_record(const std::filesystem::path& exchange_path);

}  // namespace cosim
