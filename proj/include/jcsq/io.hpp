#pragma once

// Text and binary formats.
//
// Binary blobs are little-endian.
//   state snapshot : uint64 tls_dim, uint64 anc_dim, then tls_dim*anc_dim
//                    complex amplitudes as interleaved (re, im) float64, in
//                    joint layout amp[tls * anc_dim + k]
//   raster         : uint64 rows, uint64 cols, float64 row_lo, row_step,
//                    col_lo, col_step, then rows*cols float64 values row-major

#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcsq/evolve.hpp"
#include "jcsq/phase_space.hpp"
#include "jcsq/spectra.hpp"

namespace jcsq::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

/// Shortest round-trip representation; "nan", "inf", "-inf" otherwise.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("fmt: conversion failed");
  return std::string(buf, end);
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- state CSV ------------------------------------------------------------

/// Columns: tls, ancilla, re, im. One row per joint amplitude.
inline std::string state_csv(const JointState& s, const LadderRep& rep) {
  std::string out = "tls,ancilla,re,im\n";
  for (Index a = 0; a < 2; ++a)
    for (Index k = 0; k < s.anc_dim(); ++k) {
      const cplx c = s.amplitudes()(a * s.anc_dim() + k);
      out += (a == 0 ? "g," : "e,") + rep.label(k) + "," + fmt(c.real()) + "," + fmt(c.imag()) + "\n";
    }
  return out;
}

/// Columns: label, re, im. One row per component of a single-subsystem vector.
inline std::string vector_csv(const CVec& v, const std::vector<std::string>& labels) {
  if (static_cast<Index>(labels.size()) != v.size()) throw std::invalid_argument("vector_csv: label count mismatch");
  std::string out = "label,re,im\n";
  for (Index k = 0; k < v.size(); ++k) out += labels[k] + "," + fmt(v(k).real()) + "," + fmt(v(k).imag()) + "\n";
  return out;
}

/// Reads the last two columns of a state or vector CSV as complex amplitudes.
inline CVec read_amplitudes_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<cplx> vals;
  bool header = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() < 3) throw std::invalid_argument("amplitude CSV: expected at least 3 columns");
    vals.emplace_back(parse_double(trim(cols[cols.size() - 2])), parse_double(trim(cols.back())));
  }
  CVec v(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Index>(i)) = vals[i];
  return v;
}

// ---- binary ---------------------------------------------------------------

namespace detail {
inline void put_u64(std::string& out, std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}
inline void put_f64(std::string& out, double v) {
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}
inline std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw std::invalid_argument("binary blob truncated");
  std::uint64_t v;
  std::memcpy(&v, in.data() + pos, 8);
  pos += 8;
  return v;
}
inline double get_f64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw std::invalid_argument("binary blob truncated");
  double v;
  std::memcpy(&v, in.data() + pos, 8);
  pos += 8;
  return v;
}
}  // namespace detail

inline std::string snapshot_blob(const JointState& s) {
  std::string out;
  out.reserve(16 + 16 * static_cast<std::size_t>(s.size()));
  detail::put_u64(out, 2);
  detail::put_u64(out, static_cast<std::uint64_t>(s.anc_dim()));
  for (Index i = 0; i < s.size(); ++i) {
    detail::put_f64(out, s.amplitudes()(i).real());
    detail::put_f64(out, s.amplitudes()(i).imag());
  }
  return out;
}

inline JointState read_snapshot_blob(const std::string& bytes) {
  std::size_t pos = 0;
  const auto tls = detail::get_u64(bytes, pos);
  const auto anc = detail::get_u64(bytes, pos);
  if (tls != 2 || anc == 0) throw std::invalid_argument("snapshot blob: bad dimension header");
  if (bytes.size() != 16 + 16 * tls * anc) throw std::invalid_argument("snapshot blob: size does not match header");
  CVec v(static_cast<Index>(tls * anc));
  for (Index i = 0; i < v.size(); ++i) {
    const double re = detail::get_f64(bytes, pos);
    const double im = detail::get_f64(bytes, pos);
    v(i) = cplx(re, im);
  }
  return JointState(std::move(v));
}

inline std::string raster_blob(const PhaseSpaceMap& m) {
  std::string out;
  out.reserve(48 + 8 * static_cast<std::size_t>(m.values.size()));
  detail::put_u64(out, static_cast<std::uint64_t>(m.rows.points));
  detail::put_u64(out, static_cast<std::uint64_t>(m.cols.points));
  detail::put_f64(out, m.rows.lo);
  detail::put_f64(out, m.rows.step);
  detail::put_f64(out, m.cols.lo);
  detail::put_f64(out, m.cols.step);
  for (Index r = 0; r < m.rows.points; ++r)
    for (Index c = 0; c < m.cols.points; ++c) detail::put_f64(out, m.values(r, c));
  return out;
}

struct Raster {
  Axis rows, cols;
  RMat values;
};

inline Raster read_raster_blob(const std::string& bytes) {
  std::size_t pos = 0;
  Raster r;
  const auto nr = detail::get_u64(bytes, pos);
  const auto nc = detail::get_u64(bytes, pos);
  if (bytes.size() != 48 + 8 * nr * nc) throw std::invalid_argument("raster blob: size does not match header");
  r.rows.points = static_cast<Index>(nr);
  r.cols.points = static_cast<Index>(nc);
  r.rows.lo = detail::get_f64(bytes, pos);
  r.rows.step = detail::get_f64(bytes, pos);
  r.cols.lo = detail::get_f64(bytes, pos);
  r.cols.step = detail::get_f64(bytes, pos);
  r.values.resize(r.rows.points, r.cols.points);
  for (Index i = 0; i < r.rows.points; ++i)
    for (Index j = 0; j < r.cols.points; ++j) r.values(i, j) = detail::get_f64(bytes, pos);
  return r;
}

/// Long format: one row per grid point, coordinate columns named after the axes.
inline std::string raster_csv(const PhaseSpaceMap& m) {
  std::string out = "# " + m.kind + ": " + m.convention + "\n";
  out += m.cols.name + "," + m.rows.name + ",value\n";
  for (Index r = 0; r < m.rows.points; ++r)
    for (Index c = 0; c < m.cols.points; ++c)
      out += fmt(m.cols.at(c)) + "," + fmt(m.rows.at(r)) + "," + fmt(m.values(r, c)) + "\n";
  return out;
}

// ---- tables ---------------------------------------------------------------

/// Columns u, branch_index, E_scaled; branch 0 is the lowest non-negative level.
inline std::string sweep_csv(const SpectrumSweep& s) {
  std::string out = "u,branch_index,E_scaled\n";
  for (const auto& pt : s.points)
    for (std::size_t b = 0; b < pt.lowest.size(); ++b)
      out += fmt(pt.u) + "," + std::to_string(b) + "," + fmt(pt.lowest[b]) + "\n";
  return out;
}

inline std::string sweep_diagnostics_csv(const SpectrumSweep& s) {
  std::string out = "u,g1,g2,scale,scaled,spectral_radius,zero_mode_gap,pairing_residual\n";
  for (const auto& pt : s.points)
    out += fmt(pt.u) + "," + fmt(pt.g1) + "," + fmt(pt.g2) + "," + fmt(pt.scale) + "," + (pt.scaled ? "1" : "0") + "," +
           fmt(pt.spectral_radius) + "," + fmt(pt.zero_mode_gap) + "," + fmt(pt.pairing_residual) + "\n";
  return out;
}

inline std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t,u,fidelity,rho_gg,rho_ee,re_rho_ge,im_rho_ge,entropy,leakage,norm_drift,rx_parity\n";
  for (const auto& s : t.samples)
    out += fmt(s.t) + "," + fmt(s.u) + "," + fmt(s.fidelity) + "," + fmt(s.rho_gg) + "," + fmt(s.rho_ee) + "," +
           fmt(s.re_rho_ge) + "," + fmt(s.im_rho_ge) + "," + fmt(s.entropy) + "," + fmt(s.leakage) + "," +
           fmt(s.norm_drift) + "," + fmt(s.rx_parity) + "\n";
  return out;
}

/// Dense complex matrix text: one row per line, entries "(re,im)", "(re)" or
/// "re" separated by whitespace. Lines starting with '#' are ignored.
inline CMat read_matrix_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<cplx>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<cplx> row;
    cplx c;
    while (ls >> c) row.push_back(c);
    if (!ls.eof()) throw std::invalid_argument("matrix text: unreadable entry in line '" + line + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix text: no rows");
  const std::size_t n = rows.size();
  CMat m(static_cast<Index>(n), static_cast<Index>(rows[0].size()));
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != rows[0].size()) throw std::invalid_argument("matrix text: ragged rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return m;
}

}  // namespace jcsq::io
