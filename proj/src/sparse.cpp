#include "dgfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "dgfem/errors.hpp"

namespace dgfem {

void Triplets::append(const Triplets& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  cols.insert(cols.end(), other.cols.begin(), other.cols.end());
  values.insert(values.end(), other.values.begin(), other.values.end());
}

double CsrMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : values) {
    sum += v * v;
  }
  return std::sqrt(sum);
}

CsrMatrix to_csr(const Triplets& triplets) {
  const std::size_t m = triplets.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (triplets.rows[i] < 0 || triplets.rows[i] >= triplets.n ||
        triplets.cols[i] < 0 || triplets.cols[i] >= triplets.n) {
      throw Error(ErrorCode::InvalidIndex, "triplet entry outside matrix dimension",
                  static_cast<long>(i));
    }
  }

  // Stable sort keeps duplicates in emission order, so their summation order
  // (and hence the floating-point result) never depends on how the triplets
  // were produced or partitioned.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (triplets.rows[a] != triplets.rows[b]) {
      return triplets.rows[a] < triplets.rows[b];
    }
    return triplets.cols[a] < triplets.cols[b];
  });

  CsrMatrix csr;
  csr.n = triplets.n;
  csr.row_offsets.assign(static_cast<std::size_t>(csr.n) + 1, 0);
  csr.col_indices.reserve(m);
  csr.values.reserve(m);
  int prev_row = -1, prev_col = -1;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = order[k];
    const int r = triplets.rows[i];
    const int c = triplets.cols[i];
    if (r == prev_row && c == prev_col) {
      csr.values.back() += triplets.values[i];
    } else {
      csr.col_indices.push_back(c);
      csr.values.push_back(triplets.values[i]);
      ++csr.row_offsets[static_cast<std::size_t>(r) + 1];
      prev_row = r;
      prev_col = c;
    }
  }
  for (int r = 0; r < csr.n; ++r) {
    csr.row_offsets[static_cast<std::size_t>(r) + 1] += csr.row_offsets[r];
  }
  return csr;
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.n != b.n) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum needs equal dimensions");
  }
  CsrMatrix out;
  out.n = a.n;
  out.row_offsets.assign(static_cast<std::size_t>(a.n) + 1, 0);
  out.col_indices.reserve(a.nnz() + b.nnz());
  out.values.reserve(a.nnz() + b.nnz());
  for (int r = 0; r < a.n; ++r) {
    int ia = a.row_offsets[r], ib = b.row_offsets[r];
    const int ea = a.row_offsets[r + 1], eb = b.row_offsets[r + 1];
    while (ia < ea || ib < eb) {
      int col;
      double value;
      if (ib >= eb || (ia < ea && a.col_indices[ia] < b.col_indices[ib])) {
        col = a.col_indices[ia];
        value = a.values[ia];
        ++ia;
      } else if (ia >= ea || b.col_indices[ib] < a.col_indices[ia]) {
        col = b.col_indices[ib];
        value = b.values[ib];
        ++ib;
      } else {
        col = a.col_indices[ia];
        value = a.values[ia] + b.values[ib];
        ++ia;
        ++ib;
      }
      out.col_indices.push_back(col);
      out.values.push_back(value);
    }
    out.row_offsets[static_cast<std::size_t>(r) + 1] = static_cast<int>(out.col_indices.size());
  }
  return out;
}

std::vector<double> matvec(const CsrMatrix& a, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != a.n) {
    throw Error(ErrorCode::DimensionMismatch, "matvec operand size mismatch");
  }
  std::vector<double> y(a.n, 0.0);
  for (int r = 0; r < a.n; ++r) {
    double sum = 0.0;
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      sum += a.values[k] * x[a.col_indices[k]];
    }
    y[r] = sum;
  }
  return y;
}

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix out;
  out.n = a.n;
  out.row_offsets.assign(static_cast<std::size_t>(a.n) + 1, 0);
  out.col_indices.resize(a.nnz());
  out.values.resize(a.nnz());
  for (int c : a.col_indices) {
    ++out.row_offsets[static_cast<std::size_t>(c) + 1];
  }
  for (int r = 0; r < a.n; ++r) {
    out.row_offsets[static_cast<std::size_t>(r) + 1] += out.row_offsets[r];
  }
  std::vector<int> cursor(out.row_offsets.begin(), out.row_offsets.end() - 1);
  for (int r = 0; r < a.n; ++r) {
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const int pos = cursor[a.col_indices[k]]++;
      out.col_indices[pos] = r;
      out.values[pos] = a.values[k];
    }
  }
  return out;
}

std::vector<double> direct_solve(const CsrMatrix& a, const std::vector<double>& rhs,
                                 SolveInfo* info) {
  if (static_cast<int>(rhs.size()) != a.n) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side size mismatch");
  }

  Eigen::SparseMatrix<double> mat(a.n, a.n);
  {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(a.nnz());
    for (int r = 0; r < a.n; ++r) {
      for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
        entries.emplace_back(r, a.col_indices[k], a.values[k]);
      }
    }
    mat.setFromTriplets(entries.begin(), entries.end());
  }
  mat.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(mat);
  lu.factorize(mat);
  if (lu.info() != Eigen::Success) {
    // Eigen reports the failing pivot position in lastErrorMessage(); recover
    // the column index when present, otherwise report -1.
    long pivot = -1;
    const std::string msg = lu.lastErrorMessage();
    const std::size_t pos = msg.find_first_of("0123456789");
    if (pos != std::string::npos) {
      pivot = std::strtol(msg.c_str() + pos, nullptr, 10);
    }
    throw Error(ErrorCode::SingularMatrix, "sparse LU factorization failed: " + msg, pivot);
  }

  Eigen::VectorXd b(a.n);
  for (int i = 0; i < a.n; ++i) {
    b[i] = rhs[i];
  }
  const Eigen::VectorXd x = lu.solve(b);

  std::vector<double> result(a.n);
  for (int i = 0; i < a.n; ++i) {
    result[i] = x[i];
  }

  const std::vector<double> ax = matvec(a, result);
  double defect2 = 0.0, defect_inf = 0.0;
  for (int i = 0; i < a.n; ++i) {
    const double d = ax[i] - rhs[i];
    defect2 += d * d;
    defect_inf = std::max(defect_inf, std::abs(d));
  }
  defect2 = std::sqrt(defect2);
  const double bound = 1e-10 * (a.frobenius_norm() * norm2(result) + norm2(rhs));
  if (info) {
    info->defect_norm2 = defect2;
    info->defect_norm_inf = defect_inf;
    info->bound = bound;
  }
  if (defect2 > bound) {
    throw Error(ErrorCode::SolveAccuracy, "direct solve defect exceeds accuracy bound");
  }
  return result;
}

double norm2(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) {
    sum += x * x;
  }
  return std::sqrt(sum);
}

double norm_inf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n << " " << a.n << " " << a.nnz() << "\n";
  char line[96];
  for (int r = 0; r < a.n; ++r) {
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      std::snprintf(line, sizeof(line), "%d %d %.17g\n", r + 1, a.col_indices[k] + 1,
                    a.values[k]);
      out << line;
    }
  }
  if (!out) {
    throw Error(ErrorCode::IoFailure, "failed writing MatrixMarket stream");
  }
}

void write_matrix_market_file(const CsrMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open matrix file for writing: " + path);
  }
  write_matrix_market(a, out);
}

} // namespace dgfem
