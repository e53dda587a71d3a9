#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlmh/error.hpp"
#include "nlmh/io.hpp"

namespace nlmh {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << format_real(r.t) << ',' << format_real(r.mass) << ',' << format_real(r.kinetic) << ','
     << format_real(r.interfacial) << ',' << format_real(r.bulk) << ',' << format_real(r.total)
     << ',' << format_real(r.grad_mu_sq) << ',' << format_real(r.grad_v_sq) << ','
     << format_real(r.max_abs_c) << '\n';
}

void write_errors_row(std::ostream& os, const ErrorRecord& e) {
  os << format_real(e.t) << ',' << format_real(e.v_sigma) << ',' << format_real(e.c_dual) << ','
     << format_real(e.v_l2) << ',' << format_real(e.c_l2) << ',' << format_real(e.e_eps_diff)
     << '\n';
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& rows) {
  auto os = open_out(path);
  os << kDiagnosticsHeader << '\n';
  for (const auto& r : rows) write_diagnostics_row(os, r);
}

void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorRecord>& rows) {
  auto os = open_out(path);
  os << kErrorsHeader << '\n';
  for (const auto& e : rows) write_errors_row(os, e);
}

void write_sweep_csv(const std::filesystem::path& dir, const std::vector<double>& eps_list,
                     const SweepReport& report) {
  auto rates = open_out(dir / "rates.csv");
  rates << "norm,eps,error\n";
  for (std::size_t j = 0; j < kNormCount; ++j)
    for (std::size_t i = 0; i < eps_list.size(); ++i)
      rates << kNormNames[j] << ',' << format_real(eps_list[i]) << ','
            << format_real(report.aggregates[i][j]) << '\n';
  auto fit = open_out(dir / "fit.csv");
  fit << "norm,slope,intercept,r2\n";
  for (std::size_t j = 0; j < kNormCount; ++j)
    fit << kNormNames[j] << ',' << format_real(report.fits[j].slope) << ','
        << format_real(report.fits[j].intercept) << ',' << format_real(report.fits[j].r_squared)
        << '\n';
}

}  // namespace nlmh
