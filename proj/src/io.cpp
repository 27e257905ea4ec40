#include "hokalman/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hokalman::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void write_signal_csv(std::ostream& out, const Signal& signal) {
  out << "n,value\n";
  for (std::size_t n = 0; n < signal.size(); ++n) out << n << ',' << format_real(signal.samples[n]) << '\n';
}

void write_signal_pair_csv(std::ostream& out, const Signal& y, const Signal& u) {
  if (y.size() != u.size()) throw std::invalid_argument("signal pair lengths differ");
  out << "n,y,u\n";
  for (std::size_t n = 0; n < y.size(); ++n)
    out << n << ',' << format_real(y.samples[n]) << ',' << format_real(u.samples[n]) << '\n';
}

std::filesystem::path provenance_path(const std::filesystem::path& csv) {
  auto p = csv;
  p += ".provenance";
  return p;
}

void write_provenance(const std::filesystem::path& csv, const Signal& signal) {
  std::ofstream out(provenance_path(csv));
  if (!out) throw std::runtime_error("cannot write " + provenance_path(csv).string());
  out << signal.provenance << "; sample_period=" << format_real(signal.sample_period) << '\n';
}

SignalFile read_signal_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    header = split(t);
    break;
  }
  for (auto& h : header) h = trim(h);
  const bool single = header == std::vector<std::string>{"n", "value"};
  const bool pair = header == std::vector<std::string>{"n", "y", "u"};
  if (!single && !pair) throw std::invalid_argument("expected CSV header 'n,value' or 'n,y,u'");

  SignalFile file;
  Signal u;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(t);
    if (fields.size() != header.size())
      throw std::invalid_argument("row " + std::to_string(expected) + " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(header.size()));
    if (trim(fields[0]) != std::to_string(expected))
      throw std::invalid_argument("sample index out of sequence at row " + std::to_string(expected));
    file.y.samples.push_back(parse_real(fields[1]));
    if (pair) u.samples.push_back(parse_real(fields[2]));
    ++expected;
  }
  if (file.y.samples.empty()) throw std::invalid_argument("signal CSV has no samples");
  file.y.provenance = "csv";
  if (pair) {
    u.provenance = "csv input column";
    file.u = std::move(u);
  }
  validate(file.y);
  return file;
}

SignalFile read_signal_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  SignalFile file = read_signal_csv(in);
  std::ifstream side(provenance_path(path));
  std::string line;
  if (side && std::getline(side, line)) {
    const std::string key = "; sample_period=";
    const auto pos = line.rfind(key);
    if (pos != std::string::npos) {
      file.y.sample_period = parse_real(line.substr(pos + key.size()));
      file.y.provenance = line.substr(0, pos);
    } else {
      file.y.provenance = trim(line);
    }
    if (file.u) file.u->sample_period = file.y.sample_period;
    validate(file.y);
  }
  return file;
}

void write_matrix_csv(std::ostream& out, const Matrix& matrix) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) out << (j ? "," : "") << format_real(matrix(i, j));
    out << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const SingularSpectrum& spectrum) {
  out << "index,sigma\n";
  for (std::size_t i = 0; i < spectrum.values.size(); ++i)
    out << i + 1 << ',' << format_real(spectrum.values[i]) << '\n';
}

void write_sweep_csv(std::ostream& out, const RankSweep& sweep) {
  out << "n,rank,gap,condition\n";
  for (const auto& p : sweep.points)
    out << p.n << ',' << p.rank << ',' << format_real(p.decision_gap) << ',' << format_real(p.condition) << '\n';
}

void write_aic_csv(std::ostream& out, const AicReport& report) {
  out << "p,rss,aic\n";
  for (const auto& e : report.per_order) out << e.p << ',' << format_real(e.rss) << ',' << format_real(e.aic) << '\n';
}

void write_covdet_csv(std::ostream& out, const CovDetReport& report) {
  out << "m,det\n";
  for (const auto& e : report.per_order) out << e.m << ',' << format_real(e.determinant) << '\n';
}

}  // namespace hokalman::io
