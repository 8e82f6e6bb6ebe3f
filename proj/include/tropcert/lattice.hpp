#pragma once

// Exact integer and rational lattice linear algebra.
//
// Everything here is a pure function of its arguments. Integers are GMP
// mpz values, rationals are canonical GMP mpq values; no floating point.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tropcert/error.hpp"

namespace tropcert {

using Int = mpz_class;
using Rat = mpq_class;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Row-major dense matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) {
        throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
      }
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }
  std::vector<T> col(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

// ---------------------------------------------------------------------------
// Scalars and vectors

// Parses "p/q", "p", or "-p/q" into a canonical rational. Throws ParseError.
Rat parse_rational(const std::string& text);
std::string to_string(const Rat& q);

RatVec to_rat(const IntVec& v);
RatVec sub(const RatVec& a, const RatVec& b);
RatVec add(const RatVec& a, const RatVec& b);
RatVec scale(const Rat& k, const RatVec& v);
bool is_zero(const RatVec& v);
bool is_zero(const IntVec& v);
Int dot(const IntVec& a, const IntVec& b);

struct PrimitiveDecomposition {
  IntVec direction;  // primitive integer vector
  Rat scale;         // strictly positive
};

// v = scale * direction with direction primitive. Throws ZeroVector.
PrimitiveDecomposition primitive_vector(const RatVec& v);

// Largest l > 0 with q - p = l * (lattice vector). Throws ZeroVector if p == q.
Rat lattice_length(const RatVec& p, const RatVec& q);

// Returns lambda with a = lambda * b if a and b are parallel (b != 0), else nullopt.
std::optional<Rat> parallel_factor(const RatVec& a, const RatVec& b);

// ---------------------------------------------------------------------------
// Integer lattices

// Invariant factors d1 | d2 | ... , zero padded to min(rows, cols).
std::vector<Int> smith_invariants(const IntMatrix& a);

// Whether the given vectors (d of them in Z^n) extend to a Z-basis of Z^n.
// Throws DimensionMismatch if d > n or a vector has the wrong length.
bool extends_to_unimodular_basis(const std::vector<IntVec>& vectors, std::size_t n);

// Full Z-basis of Z^n whose first members are the inputs. Throws NotSaturated.
std::vector<IntVec> hermite_completion(const std::vector<IntVec>& vectors, std::size_t n);

// Unimodular column reduction A * U = [H | 0] with H lower triangular and
// positive pivots. Pivots are chosen by smallest absolute value, ties broken
// by lowest column index.
struct ColumnReduction {
  IntMatrix reduced;    // A * U
  IntMatrix transform;  // U
  IntMatrix inverse;    // U^{-1}
  std::size_t rank = 0;
};
ColumnReduction column_reduce(const IntMatrix& a);

// Canonical (row-style, reduced) Hermite normal form of the row lattice;
// zero rows dropped.
IntMatrix hermite_normal_form(const IntMatrix& a);

// Basis of { m in Z^n : <m, u> = 0 } in Hermite normal form, one vector per row.
std::vector<IntVec> orthogonal_lattice_basis(const IntVec& u);

// Integer coordinates x with sum_k x_k basis[k] = target, if they exist.
std::optional<IntVec> integer_coordinates(const std::vector<IntVec>& basis, const IntVec& target);

Int determinant(const IntMatrix& a);
Rat determinant(const RatMatrix& a);

// ---------------------------------------------------------------------------
// Rational rank

struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;  // rows of a nonsingular rank x rank minor
  std::vector<std::size_t> pivot_cols;
};

// Fraction-free (Bareiss) elimination. The parallel kernel distributes row
// updates over OpenMP threads; the serial reference performs the identical
// sequence of operations, so both return bit-identical profiles.
RankProfile rank_profile(const RatMatrix& a);
RankProfile rank_profile_serial(const RatMatrix& a);

std::size_t rank_rational(const RatMatrix& a);

// Basis of the right null space { x : A x = 0 } over Q.
std::vector<RatVec> null_space(const RatMatrix& a);

// Some solution x of A x = b over Q, if consistent.
std::optional<RatVec> solve_rational(const RatMatrix& a, const RatVec& b);

RatMatrix to_rat(const IntMatrix& a);

}  // namespace tropcert
