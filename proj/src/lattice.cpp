#include "tropcert/lattice.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <utility>

namespace tropcert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSaturated: return "NotSaturated";
    case ErrorCode::MalformedCurve: return "MalformedCurve";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotSpanningTree: return "NotSpanningTree";
    case ErrorCode::GraphMismatch: return "GraphMismatch";
    case ErrorCode::FrameNotBasis: return "FrameNotBasis";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotSmoothVertex: return "NotSmoothVertex";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::ColoringViolation: return "ColoringViolation";
    case ErrorCode::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorCode::TorusFactorConflict: return "TorusFactorConflict";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; });
}

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

// col_dst -= q * col_src
void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) -= q * m(r, src);
}

// row_dst -= q * row_src
void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(dst, c) -= q * m(src, c);
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Gauss-Jordan over Q. Returns pivot columns; `m` is left in reduced row
// echelon form.
std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rat inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rat f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

// ---------------------------------------------------------------------------

Rat parse_rational(const std::string& text) {
  std::string_view s(text);
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorCode::ParseError, "not a rational number: '" + text + "'");
  }
  Int d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  Int n(std::string(num), 10);
  if (!s.empty() && s.front() == '-') n = -n;
  Rat q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(10); }

RatVec to_rat(const IntVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

RatVec sub(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RatVec add(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVec scale(const Rat& k, const RatVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = k * v[i];
  return out;
}

bool is_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Int dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

PrimitiveDecomposition primitive_vector(const RatVec& v) {
  if (is_zero(v)) throw Error(ErrorCode::ZeroVector, "primitive_vector of the zero vector");
  Int den = 1;
  for (const Rat& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  IntVec scaled(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    scaled[i] = v[i].get_num() * (den / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled[i].get_mpz_t());
  }
  for (Int& x : scaled) x /= g;
  Rat s(g, den);
  s.canonicalize();
  return {std::move(scaled), s};
}

Rat lattice_length(const RatVec& p, const RatVec& q) {
  const RatVec d = sub(q, p);
  if (is_zero(d)) throw Error(ErrorCode::ZeroVector, "lattice_length of coincident points");
  return primitive_vector(d).scale;
}

std::optional<Rat> parallel_factor(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  std::size_t k = 0;
  while (k < b.size() && b[k] == 0) ++k;
  if (k == b.size()) return std::nullopt;
  const Rat lambda = a[k] / b[k];
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != lambda * b[i]) return std::nullopt;
  return lambda;
}

// ---------------------------------------------------------------------------

std::vector<Int> smith_invariants(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t k = std::min(m, n);
  std::vector<Int> diag;
  for (std::size_t t = 0; t < k; ++t) {
    // smallest nonzero entry of the trailing block becomes the pivot
    auto place_min = [&]() -> bool {
      bool found = false;
      std::size_t bi = t, bj = t;
      Int best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (a(i, j) == 0) continue;
          Int v = abs_int(a(i, j));
          if (!found || v < best) {
            found = true;
            best = v;
            bi = i;
            bj = j;
          }
        }
      if (!found) return false;
      swap_rows(a, t, bi);
      swap_cols(a, t, bj);
      return true;
    };
    if (!place_min()) break;
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        row_axpy(a, i, t, floor_div(a(i, t), a(t, t)));
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        col_axpy(a, j, t, floor_div(a(t, j), a(t, t)));
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // a remainder smaller than the pivot survived in row/column t
        std::size_t bi = t, bj = t;
        Int best = abs_int(a(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (a(i, t) != 0 && abs_int(a(i, t)) < best) {
            best = abs_int(a(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(t, j) != 0 && abs_int(a(t, j)) < best) {
            best = abs_int(a(t, j));
            bi = t;
            bj = j;
          }
        swap_rows(a, t, bi);
        swap_cols(a, t, bj);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            for (std::size_t c = 0; c < n; ++c) a(t, c) += a(i, c);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    diag.push_back(abs_int(a(t, t)));
  }
  diag.resize(k, Int(0));
  return diag;
}

bool extends_to_unimodular_basis(const std::vector<IntVec>& vectors, std::size_t n) {
  if (vectors.size() > n) {
    throw Error(ErrorCode::DimensionMismatch, "more vectors than the ambient rank");
  }
  for (const IntVec& v : vectors)
    if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "vector of wrong length");
  if (vectors.empty()) return true;
  const auto inv = smith_invariants(IntMatrix::from_rows(vectors, n));
  return std::all_of(inv.begin(), inv.end(), [](const Int& d) { return d == 1; });
}

ColumnReduction column_reduce(const IntMatrix& a) {
  const std::size_t n = a.cols();
  ColumnReduction out{a, IntMatrix::identity(n), IntMatrix::identity(n), 0};
  IntMatrix& h = out.reduced;
  IntMatrix& u = out.transform;
  IntMatrix& ui = out.inverse;

  auto do_swap = [&](std::size_t i, std::size_t j) {
    swap_cols(h, i, j);
    swap_cols(u, i, j);
    swap_rows(ui, i, j);
  };
  // col_j -= q col_i ; inverse: row_i += q row_j
  auto do_axpy = [&](std::size_t j, std::size_t i, const Int& q) {
    if (q == 0) return;
    col_axpy(h, j, i, q);
    col_axpy(u, j, i, q);
    row_axpy(ui, i, j, -q);
  };
  auto do_negate = [&](std::size_t i) {
    for (std::size_t r = 0; r < h.rows(); ++r) h(r, i) = -h(r, i);
    for (std::size_t r = 0; r < n; ++r) u(r, i) = -u(r, i);
    for (std::size_t c = 0; c < n; ++c) ui(i, c) = -ui(i, c);
  };

  std::size_t p = 0;
  for (std::size_t r = 0; r < h.rows() && p < n; ++r) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t j = p; j < n; ++j) {
        if (h(r, j) == 0) continue;
        if (best == n || abs_int(h(r, j)) < abs_int(h(r, best))) best = j;
      }
      if (best == n) break;
      do_swap(p, best);
      bool others = false;
      for (std::size_t j = p + 1; j < n; ++j) {
        if (h(r, j) == 0) continue;
        do_axpy(j, p, floor_div(h(r, j), h(r, p)));
        if (h(r, j) != 0) others = true;
      }
      if (!others) break;
    }
    if (h(r, p) == 0) continue;
    if (h(r, p) < 0) do_negate(p);
    for (std::size_t j = 0; j < p; ++j) do_axpy(j, p, floor_div(h(r, j), h(r, p)));
    ++p;
  }
  out.rank = p;
  return out;
}

std::vector<IntVec> hermite_completion(const std::vector<IntVec>& vectors, std::size_t n) {
  if (!extends_to_unimodular_basis(vectors, n)) {
    throw Error(ErrorCode::NotSaturated, "vectors do not span a saturated sublattice");
  }
  std::vector<IntVec> basis = vectors;
  if (vectors.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      IntVec e(n, Int(0));
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  const ColumnReduction red = column_reduce(IntMatrix::from_rows(vectors, n));
  for (std::size_t i = red.rank; i < n; ++i) basis.push_back(red.inverse.row(i));
  return basis;
}

IntMatrix hermite_normal_form(const IntMatrix& a) {
  const ColumnReduction red = column_reduce(a.transposed());
  IntMatrix out(red.rank, a.cols());
  for (std::size_t i = 0; i < red.rank; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = red.reduced(j, i);
  return out;
}

std::vector<IntVec> orthogonal_lattice_basis(const IntVec& u) {
  const std::size_t n = u.size();
  IntMatrix row(1, n);
  for (std::size_t j = 0; j < n; ++j) row(0, j) = u[j];
  const ColumnReduction red = column_reduce(row);
  if (red.rank == n) return {};
  IntMatrix kernel(n - red.rank, n);
  for (std::size_t k = red.rank; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) kernel(k - red.rank, j) = red.transform(j, k);
  const IntMatrix hnf = hermite_normal_form(kernel);
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < hnf.rows(); ++i) out.push_back(hnf.row(i));
  return out;
}

std::optional<IntVec> integer_coordinates(const std::vector<IntVec>& basis, const IntVec& target) {
  const std::size_t n = target.size();
  RatMatrix a(n, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].size() != n) throw Error(ErrorCode::DimensionMismatch, "basis vector length");
    for (std::size_t j = 0; j < n; ++j) a(j, k) = Rat(basis[k][j]);
  }
  const auto x = solve_rational(a, to_rat(target));
  if (!x) return std::nullopt;
  IntVec out(x->size());
  for (std::size_t k = 0; k < x->size(); ++k) {
    if ((*x)[k].get_den() != 1) return std::nullopt;
    out[k] = (*x)[k].get_num();
  }
  return out;
}

Int determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  IntMatrix a = input;
  const std::size_t n = a.rows();
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      swap_rows(a, p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return n == 0 ? Int(1) : Int(sign * a(n - 1, n - 1));
}

Rat determinant(const RatMatrix& input) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  RatMatrix a = input;
  const std::size_t n = a.rows();
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------

namespace {

// Clears denominators row by row; row scaling preserves rank and the set of
// nonsingular minors.
IntMatrix integral_rows(const RatMatrix& a) {
  IntMatrix m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Int den = 1;
    for (std::size_t c = 0; c < a.cols(); ++c)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c).get_num() * (den / a(r, c).get_den());
  }
  return m;
}

template <bool Parallel>
RankProfile bareiss_profile(const RatMatrix& input) {
  IntMatrix m = integral_rows(input);
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> perm(rows);
  for (std::size_t i = 0; i < rows; ++i) perm[i] = i;

  RankProfile out;
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c) == 0) ++p;
    if (p == rows) continue;
    swap_rows(m, p, r);
    std::swap(perm[p], perm[r]);

    const auto update_row = [&](std::size_t i) {
      Int t;
      for (std::size_t j = c + 1; j < cols; ++j) {
        t = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    };
    const std::ptrdiff_t first = static_cast<std::ptrdiff_t>(r + 1);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(rows);
    if constexpr (Parallel) {
      const bool wide = (rows - r) * (cols - c) >= 256;
#pragma omp parallel for schedule(static) if (wide)
      for (std::ptrdiff_t i = first; i < last; ++i) update_row(static_cast<std::size_t>(i));
    } else {
      for (std::ptrdiff_t i = first; i < last; ++i) update_row(static_cast<std::size_t>(i));
    }
    prev = m(r, c);
    out.pivot_cols.push_back(c);
    out.pivot_rows.push_back(perm[r]);
    ++r;
  }
  out.rank = r;
  std::sort(out.pivot_rows.begin(), out.pivot_rows.end());
  return out;
}

}  // namespace

RankProfile rank_profile(const RatMatrix& a) { return bareiss_profile<true>(a); }
RankProfile rank_profile_serial(const RatMatrix& a) { return bareiss_profile<false>(a); }
std::size_t rank_rational(const RatMatrix& a) { return rank_profile(a).rank; }

std::vector<RatVec> null_space(const RatMatrix& a) {
  RatMatrix m = a;
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVec x(a.cols(), Rat(0));
    x[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -m(i, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<RatVec> solve_rational(const RatMatrix& a, const RatVec& b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  RatVec x(a.cols(), Rat(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, a.cols());
  return x;
}

RatMatrix to_rat(const IntMatrix& a) {
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = Rat(a(i, j));
  return out;
}

}  // namespace tropcert
