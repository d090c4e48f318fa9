#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "blochdf/bloch.hpp"
#include "blochdf/dfcore.hpp"
#include "blochdf/metrics.hpp"

namespace blochdf::io {

/// Columns: seg,arclen,k1..kd,E1..EN
void write_band_csv(const std::filesystem::path& path, const BandTable& table);

/// Columns: n,kidx,m,lidx,err_l2,err_coulomb
void write_error_csv(const std::filesystem::path& path, const ErrorReport& report);
nlohmann::json error_summary(const ErrorReport& report, double tol);

/// Columns: x1,x2,V with coordinates in the centered cell [-1/2,1/2). In 3D
/// this is the x3 = 0 cross-section through the well.
void write_potential_csv(const std::filesystem::path& path, const PotentialSpec& spec,
                         int dim, int n_per_dim);

/// Binary container, little endian:
///   char[8]  "BLOCHDF1"
///   u64      n_grid, n_col, n_bands, n_k, sketch_r, seed, diag_len
///   f64      tol
///   u64[n_col]           selected grid indices
///   f64[2 n_col n_grid]  P row-major, (re, im) pairs
///   f64[diag_len]        diag_R
/// Wall-clock timings are not stored, so reruns are byte identical.
void save_fitting_result(const std::filesystem::path& path, const FittingResult& result);
FittingResult load_fitting_result(const std::filesystem::path& path);
nlohmann::json fitting_summary(const FittingResult& result);

std::string sha256_file(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace blochdf::io
