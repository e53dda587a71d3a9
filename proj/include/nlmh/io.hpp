#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlmh/diagnostics.hpp"
#include "nlmh/dynamics.hpp"
#include "nlmh/experiments.hpp"

namespace nlmh {

// ---------------------------------------------------------------- snapshot
//
// Layout (all little-endian):
//   0  char[4]  magic "NLCH"
//   4  u32      version (1)
//   8  u32      N
//  12  u32      field count (3: c, v1, v2)
//  16  f64      time
//  24  u64      reserved, zero
//  32  f64[field count][N*N] row-major values

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

std::vector<std::uint8_t> encode_snapshot(const SimState& s);
/// Throws CorruptSnapshot, UnsupportedVersion, or GridMismatch when
/// expected_n is given and differs.
SimState decode_snapshot(const std::vector<std::uint8_t>& bytes,
                         std::optional<int> expected_n = std::nullopt);

void write_snapshot(const SimState& s, const std::filesystem::path& path);
SimState read_snapshot(const std::filesystem::path& path,
                       std::optional<int> expected_n = std::nullopt);

// ---------------------------------------------------------------- config

/// Full run configuration as read from a config file.
struct RunConfig {
  SimConfig sim;
  InitialDataSpec init;
};

/// Parses JSON text. Blank text yields the defaults. Unknown sections or
/// keys raise ParseError; invariant violations raise ValidationError (or
/// the kernel range errors).
RunConfig parse_config_text(const std::string& text);
/// Reads a config file. A run manifest is accepted as well, in which case
/// its resolved_config block is used.
RunConfig parse_config(const std::filesystem::path& path);

/// Every key with its resolved value, in the config file's own layout.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

// ---------------------------------------------------------------- csv

inline constexpr const char* kDiagnosticsHeader =
    "t,mass,kinetic,interfacial,bulk,total,grad_mu_sq,grad_v_sq,max_abs_c";
inline constexpr const char* kErrorsHeader = "t,v_sigma,c_dual,v_l2,c_l2,e_eps_diff";

/// Decimal with 17 significant digits (round-trips binary64).
std::string format_real(double x);

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);
void write_errors_row(std::ostream& os, const ErrorRecord& e);

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& rows);
void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorRecord>& rows);

/// rates.csv (norm,eps,error) and fit.csv (norm,slope,intercept,r2).
void write_sweep_csv(const std::filesystem::path& dir, const std::vector<double>& eps_list,
                     const SweepReport& report);

}  // namespace nlmh
