#include "blochdf/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "blochdf/errors.hpp"
#include "blochdf/potential.hpp"

namespace blochdf::io {

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated fitting result file");
  return v;
}

constexpr char kMagic[8] = {'B', 'L', 'O', 'C', 'H', 'D', 'F', '1'};

}  // namespace

void write_band_csv(const std::filesystem::path& path, const BandTable& table) {
  auto out = open_out(path);
  out << "seg,arclen";
  for (int d = 1; d <= table.dim; ++d) out << ",k" << d;
  for (Index n = 1; n <= table.energies.cols(); ++n) out << ",E" << n;
  out << '\n';
  for (std::size_t i = 0; i < table.segment.size(); ++i) {
    out << table.segment[i] << ',' << format_double(table.arclength[i]);
    for (Index d = 0; d < table.k[i].size(); ++d) out << ',' << format_double(table.k[i](d));
    for (Index n = 0; n < table.energies.cols(); ++n)
      out << ',' << format_double(table.energies(static_cast<Index>(i), n));
    out << '\n';
  }
}

void write_error_csv(const std::filesystem::path& path, const ErrorReport& report) {
  auto out = open_out(path);
  out << "n,kidx,m,lidx,err_l2,err_coulomb\n";
  for (const ErrorSample& s : report.samples) {
    out << s.pair.n << ',' << s.pair.k << ',' << s.pair.m << ',' << s.pair.l << ','
        << format_double(s.err_l2_rel) << ',' << format_double(s.err_coulomb_rel) << '\n';
  }
}

nlohmann::json error_summary(const ErrorReport& report, double tol) {
  return {{"l2_max", report.l2_max},
          {"l2_mean", report.l2_mean},
          {"coulomb_max", report.coulomb_max},
          {"coulomb_mean", report.coulomb_mean},
          {"hermitian_asymmetry_max", report.hermitian_asymmetry_max},
          {"sample_count", report.sample_count},
          {"redraws", report.redraws},
          {"seed", report.seed},
          {"tol", tol}};
}

void write_potential_csv(const std::filesystem::path& path, const PotentialSpec& spec,
                         int dim, int n_per_dim) {
  const RealGrid grid(dim, n_per_dim);
  const SampledPotential v = sample_potential(spec, grid, RVector::Constant(dim, 0.5));
  auto out = open_out(path);
  out << "x1,x2,V\n";
  for (Index j = 0; j < grid.size(); ++j) {
    const auto p = grid.points().row(j);
    if (dim == 3 && grid.multi_index(j)[2] != n_per_dim / 2) continue;
    out << format_double(p(0) - 0.5) << ',' << format_double(p(1) - 0.5) << ','
        << format_double(v.values(j)) << '\n';
  }
}

void save_fitting_result(const std::filesystem::path& path, const FittingResult& r) {
  auto out = open_out(path, true);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.n_grid));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.n_col));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.n_bands));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.n_k));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.sketch_r));
  put<std::uint64_t>(out, r.seed);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.diag_R.size()));
  put<double>(out, r.tol);
  for (Index x : r.selected) put<std::uint64_t>(out, static_cast<std::uint64_t>(x));
  for (Index i = 0; i < r.P.rows(); ++i)
    for (Index x = 0; x < r.P.cols(); ++x) {
      put<double>(out, r.P(i, x).real());
      put<double>(out, r.P(i, x).imag());
    }
  for (Index i = 0; i < r.diag_R.size(); ++i) put<double>(out, r.diag_R(i));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FittingResult load_fitting_result(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("'" + path.string() + "' is not a fitting result file");
  FittingResult r;
  r.n_grid = static_cast<Index>(get<std::uint64_t>(in));
  r.n_col = static_cast<Index>(get<std::uint64_t>(in));
  r.n_bands = static_cast<int>(get<std::uint64_t>(in));
  r.n_k = static_cast<Index>(get<std::uint64_t>(in));
  r.sketch_r = static_cast<Index>(get<std::uint64_t>(in));
  r.seed = get<std::uint64_t>(in);
  const auto diag_len = static_cast<Index>(get<std::uint64_t>(in));
  r.tol = get<double>(in);
  for (Index i = 0; i < r.n_col; ++i)
    r.selected.push_back(static_cast<Index>(get<std::uint64_t>(in)));
  r.P.resize(r.n_col, r.n_grid);
  for (Index i = 0; i < r.n_col; ++i)
    for (Index x = 0; x < r.n_grid; ++x) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      r.P(i, x) = Complex(re, im);
    }
  r.diag_R.resize(diag_len);
  for (Index i = 0; i < diag_len; ++i) r.diag_R(i) = get<double>(in);
  return r;
}

nlohmann::json fitting_summary(const FittingResult& r) {
  std::vector<Index> selected(r.selected.begin(), r.selected.end());
  std::vector<double> diag(r.diag_R.data(), r.diag_R.data() + r.diag_R.size());
  return {{"n_grid", r.n_grid}, {"n_col", r.n_col},   {"n_bands", r.n_bands},
          {"n_k", r.n_k},       {"sketch_r", r.sketch_r}, {"tol", r.tol},
          {"seed", r.seed},     {"selected", selected}, {"diag_R", diag}};
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 initialisation failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 0xF];
  }
  return s;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace blochdf::io
