#ifndef DGFEM_SPARSE_HPP
#define DGFEM_SPARSE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dgfem {

/// Coordinate-format accumulator. Duplicate (row, col) entries are allowed
/// and summed on conversion, in emission order.
struct Triplets {
  int n = 0;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> values;

  explicit Triplets(int dimension = 0) : n(dimension) {}

  void add(int r, int c, double v) {
    rows.push_back(r);
    cols.push_back(c);
    values.push_back(v);
  }
  void reserve(std::size_t count) {
    rows.reserve(count);
    cols.reserve(count);
    values.reserve(count);
  }
  void append(const Triplets& other);
  std::size_t size() const { return values.size(); }
};

/// Compressed sparse row storage, square. Column indices are sorted within
/// each row and hold no duplicates.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_offsets; // size n+1
  std::vector<int> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  double frobenius_norm() const;
};

/// Sorts by (row, col) and sums duplicates; equal keys are combined in
/// emission order, which keeps results bitwise reproducible. Throws
/// InvalidIndex for out-of-range entries.
CsrMatrix to_csr(const Triplets& triplets);

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);
std::vector<double> matvec(const CsrMatrix& a, const std::vector<double>& x);
CsrMatrix transpose(const CsrMatrix& a);

struct SolveInfo {
  double defect_norm2 = 0.0;   // ||A x - b||_2
  double defect_norm_inf = 0.0;
  double bound = 0.0;          // accepted defect bound for this solve
};

/// Sparse LU with partial pivoting. The returned x satisfies
/// ||A x - b||_2 <= 1e-10 * (||A||_F ||x||_2 + ||b||_2); the defect is always
/// computed and reported through `info` when given, and a SolveAccuracy error
/// is raised if the bound fails. Singular matrices raise SingularMatrix with
/// the pivot index in Error::detail().
std::vector<double> direct_solve(const CsrMatrix& a, const std::vector<double>& rhs,
                                 SolveInfo* info = nullptr);

// Small dense-vector helpers shared across the solver modules.
double norm2(const std::vector<double>& v);
double norm_inf(const std::vector<double>& v);

/// MatrixMarket coordinate output (1-based, general real).
void write_matrix_market(const CsrMatrix& a, std::ostream& out);
void write_matrix_market_file(const CsrMatrix& a, const std::string& path);

} // namespace dgfem

#endif
