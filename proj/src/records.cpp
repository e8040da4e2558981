#include "cutfem/studies.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace cutfem {

namespace {

constexpr const char* kHeader =
    "study,p,level,h,delta,delta_n,dofs,err_energy,err_h1,err_l2,rate_energy,rate_h1,rate_l2,wall_time";

std::optional<double> observed_rate(double e0, double e1, double h0, double h1) {
  if (!(e0 > 0.0) || !(e1 > 0.0) || !std::isfinite(e0) || !std::isfinite(e1)) return std::nullopt;
  return std::log(e0 / e1) / std::log(h0 / h1);
}

double error_of(const ConvergenceRecord& r, ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Energy: return r.err_energy;
    case ErrorKind::H1: return r.err_h1;
    case ErrorKind::L2: return r.err_l2;
    case ErrorKind::Delta: return r.delta;
    case ErrorKind::DeltaN: return r.delta_n;
  }
  return 0.0;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error("read_records_csv: bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error("read_records_csv: bad integer '" + s + "'");
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::scientific);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return {buffer, ptr};
}

void compute_rates(std::vector<ConvergenceRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    ConvergenceRecord& r = records[i];
    r.rate_energy.reset();
    r.rate_h1.reset();
    r.rate_l2.reset();
    if (i == 0) continue;
    const ConvergenceRecord& prev = records[i - 1];
    if (!(prev.h > r.h)) throw ContractError("compute_rates: h must strictly decrease");
    r.rate_energy = observed_rate(prev.err_energy, r.err_energy, prev.h, r.h);
    r.rate_h1 = observed_rate(prev.err_h1, r.err_h1, prev.h, r.h);
    r.rate_l2 = observed_rate(prev.err_l2, r.err_l2, prev.h, r.h);
  }
}

double least_squares_rate(const std::vector<ConvergenceRecord>& records, ErrorKind kind, int count) {
  const int n = std::min<int>(count, static_cast<int>(records.size()));
  if (n < 2) throw ContractError("least_squares_rate: need at least 2 records");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = records.size() - static_cast<std::size_t>(n); i < records.size(); ++i) {
    const double e = error_of(records[i], kind);
    if (!(e > 0.0)) return std::nan("");
    const double x = std::log(records[i].h);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_records_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
  out << kHeader << '\n';
  for (const ConvergenceRecord& r : records) {
    out << r.study << ',' << r.p << ',' << r.level << ',' << format_double(r.h) << ',' << format_double(r.delta) << ','
        << format_double(r.delta_n) << ',' << r.dofs << ',' << format_double(r.err_energy) << ','
        << format_double(r.err_h1) << ',' << format_double(r.err_l2) << ',' << optional_field(r.rate_energy) << ','
        << optional_field(r.rate_h1) << ',' << optional_field(r.rate_l2) << ',' << format_double(r.wall_time) << '\n';
  }
}

void write_records_csv(const std::vector<ConvergenceRecord>& records, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_records_csv(records, file);
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ConvergenceRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("read_records_csv: missing header");
  std::vector<ConvergenceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 14) throw std::runtime_error("read_records_csv: expected 14 columns");
    ConvergenceRecord r;
    r.study = fields[0];
    r.p = parse_int(fields[1]);
    r.level = parse_int(fields[2]);
    r.h = parse_double(fields[3]);
    r.delta = parse_double(fields[4]);
    r.delta_n = parse_double(fields[5]);
    r.dofs = parse_int(fields[6]);
    r.err_energy = parse_double(fields[7]);
    r.err_h1 = parse_double(fields[8]);
    r.err_l2 = parse_double(fields[9]);
    r.rate_energy = parse_optional(fields[10]);
    r.rate_h1 = parse_optional(fields[11]);
    r.rate_l2 = parse_optional(fields[12]);
    r.wall_time = parse_double(fields[13]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace cutfem
