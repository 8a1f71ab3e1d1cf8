/*
 * Copyright 2026 the hyflexa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <Eigen/SparseCore>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hyflexa/errors.hpp"
#include "hyflexa/feasible.hpp"

namespace hyflexa::io {

using SpMat = Eigen::SparseMatrix<double>;

/// Shortest exact decimal form: doubles written this way read back
/// bit-identically, which the reproducibility contracts rely on.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Matrix Market coordinate format (1-indexed, real general)
// ---------------------------------------------------------------------------

inline void write_matrix_market(const std::string& path, const SpMat& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (int j = 0; j < a.outerSize(); ++j) {
    for (SpMat::InnerIterator it(a, j); it; ++it) {
      out << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << format_double(it.value())
          << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline SpMat read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty matrix market file: " + path);
  {
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
        field != "real" || symmetry != "general") {
      throw std::runtime_error("unsupported matrix market header in " + path +
                               " (need 'matrix coordinate real general')");
    }
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  long long m = 0, n = 0, nnz = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> m >> n >> nnz)) throw std::runtime_error("bad size line in " + path);
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nnz));
  for (long long t = 0; t < nnz; ++t) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw std::runtime_error("truncated matrix market file: " + path);
    if (i < 1 || i > m || j < 1 || j > n)
      throw std::runtime_error("matrix market index out of range in " + path);
    trip.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
  }
  SpMat a(static_cast<int>(m), static_cast<int>(n));
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

// ---------------------------------------------------------------------------
// Whitespace-delimited dense text
// ---------------------------------------------------------------------------

/// Rows are lines; every row must have the same number of entries.
inline Eigen::MatrixXd read_dense_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged dense matrix in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty dense matrix file: " + path);
  Eigen::MatrixXd out(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      out(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return out;
}

/// One value per line.
inline void write_vector(const std::string& path, const Vec& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Vec read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  Vec out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
  return out;
}

// ---------------------------------------------------------------------------
// Flat key=value metadata sidecar
// ---------------------------------------------------------------------------

inline void write_metadata(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::map<std::string, std::string> read_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad metadata line in " + path);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace hyflexa::io
