// CSV formats shared by the CLI, the experiments and the Python module.
//
//   signal        n,value          (pair: n,y,u)
//   provenance    <csv>.provenance, one line: "<text>; sample_period=<T>"
//   matrix        row-major, one matrix row per line, no header
//   spectrum      index,sigma      (1-based index)
//   rank sweep    n,rank,gap,condition
//   AIC report    p,rss,aic
//   covdet        m,det
//
// Reals are written with 36 significant digits so binary128 values
// round-trip exactly. Lines starting with '#' are comments on input.
#pragma once

#include "hokalman/estimators.hpp"
#include "hokalman/rank.hpp"
#include "hokalman/signal.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace hokalman::io {

void write_signal_csv(std::ostream& out, const Signal& signal);
void write_signal_pair_csv(std::ostream& out, const Signal& y, const Signal& u);

std::filesystem::path provenance_path(const std::filesystem::path& csv);
void write_provenance(const std::filesystem::path& csv, const Signal& signal);

struct SignalFile {
  Signal y;
  std::optional<Signal> u;
};

/// Parses `n,value` or `n,y,u`; throws std::invalid_argument on bad input.
SignalFile read_signal_csv(std::istream& in);

/// Reads the CSV and, when present, its provenance sidecar.
SignalFile read_signal_file(const std::filesystem::path& path);

void write_matrix_csv(std::ostream& out, const Matrix& matrix);
void write_spectrum_csv(std::ostream& out, const SingularSpectrum& spectrum);
void write_sweep_csv(std::ostream& out, const RankSweep& sweep);
void write_aic_csv(std::ostream& out, const AicReport& report);
void write_covdet_csv(std::ostream& out, const CovDetReport& report);

}  // namespace hokalman::io
