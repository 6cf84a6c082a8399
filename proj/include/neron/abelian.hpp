#pragma once

// Exact linear algebra over the integers: Smith normal form, kernels,
// cokernels, homology of two-term complexes and finitely generated abelian
// groups with explicit coordinates.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "neron/error.hpp"

namespace neron {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Integer>;

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Floor modulus: result in [0, |m|).
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

inline std::string to_string(const Integer& x) { return x.str(); }

/// Dense integer matrix, row-major, exact entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<Integer>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidInput("IntMatrix: ragged initializer");
      entries_.insert(entries_.end(), r.begin(), r.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds from nested rows; `cols` disambiguates the shape when there are no rows.
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InvalidInput("IntMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows = 0) {
    if (!columns.empty()) rows = columns.front().size();
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw InvalidInput("IntMatrix: ragged columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  static IntMatrix diagonal(const IntVector& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<Integer>& entries() const noexcept { return entries_; }

  IntVector row(std::size_t i) const {
    return IntVector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntVector column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  IntMatrix columns(std::size_t first, std::size_t last) const {
    IntMatrix m(rows_, last - first);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = first; j < last; ++j) m(i, j - first) = (*this)(i, j);
    return m;
  }

  IntMatrix row_range(std::size_t first, std::size_t last) const {
    IntMatrix m(last - first, cols_);
    for (std::size_t i = first; i < last; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i - first, j) = (*this)(i, j);
    return m;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Integer& x) { return x == 0; });
  }

  bool is_square() const noexcept { return rows_ == cols_; }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("IntMatrix: shape mismatch in product");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend IntVector operator*(const IntMatrix& a, const IntVector& x) {
    if (a.cols_ != x.size()) throw InvalidInput("IntMatrix: shape mismatch in product");
    IntVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) y[i] += a(i, k) * x[k];
    return y;
  }

  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("IntMatrix: shape mismatch in sum");
    for (std::size_t k = 0; k < a.entries_.size(); ++k) a.entries_[k] += b.entries_[k];
    return a;
  }

  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("IntMatrix: shape mismatch in difference");
    for (std::size_t k = 0; k < a.entries_.size(); ++k) a.entries_[k] -= b.entries_[k];
    return a;
  }

  friend IntMatrix operator*(const Integer& s, IntMatrix a) {
    for (auto& x : a.entries_) x *= s;
    return a;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

/// [A | B]
inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("hstack: row count mismatch");
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

/// [A ; B]
inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidInput("vstack: column count mismatch");
  IntMatrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntMatrix m) {
  if (!m.is_square()) throw InvalidInput("determinant: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// U·M·V = D with U, V unimodular and D diagonal (divisibility chain,
/// nonnegative). The inverses of U and V are tracked alongside.
struct SNFDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix U_inv;
  IntMatrix V_inv;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

class SmithReducer {
 public:
  explicit SmithReducer(const IntMatrix& m)
      : d_(m),
        u_(IntMatrix::identity(m.rows())),
        u_inv_(IntMatrix::identity(m.rows())),
        v_(IntMatrix::identity(m.cols())),
        v_inv_(IntMatrix::identity(m.cols())) {}

  SNFDecomposition run() {
    const std::size_t m = d_.rows(), n = d_.cols();
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      if (!reduce_at(t)) break;
      if (d_(t, t) < 0) negate_row(t);
    }
    return SNFDecomposition{std::move(u_), std::move(d_), std::move(v_), std::move(u_inv_), std::move(v_inv_), t};
  }

 private:
  // Pivot: minimal nonzero |entry| in the trailing block, lowest (row, col) on ties.
  std::optional<std::pair<std::size_t, std::size_t>> find_pivot(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t i = t; i < d_.rows(); ++i)
      for (std::size_t j = t; j < d_.cols(); ++j) {
        if (d_(i, j) == 0) continue;
        Integer a = abs(d_(i, j));
        if (!best || a < best_abs) {
          best = {i, j};
          best_abs = std::move(a);
        }
      }
    return best;
  }

  bool reduce_at(std::size_t t) {
    for (;;) {
      auto pivot = find_pivot(t);
      if (!pivot) return false;
      if (pivot->first != t) swap_rows(t, pivot->first);
      if (pivot->second != t) swap_cols(t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < d_.rows(); ++i) {
        if (d_(i, t) == 0) continue;
        Integer q = d_(i, t) / d_(t, t);
        add_row(i, t, -q);
        if (d_(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d_.cols(); ++j) {
        if (d_(t, j) == 0) continue;
        Integer q = d_(t, j) / d_(t, t);
        add_col(j, t, -q);
        if (d_(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      bool divisible = true;
      for (std::size_t i = t + 1; i < d_.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < d_.cols(); ++j)
          if (d_(i, j) % d_(t, t) != 0) {
            add_row(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) return true;
    }
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < d_.cols(); ++j) std::swap(d_(a, j), d_(b, j));
    for (std::size_t j = 0; j < u_.cols(); ++j) std::swap(u_(a, j), u_(b, j));
    for (std::size_t i = 0; i < u_inv_.rows(); ++i) std::swap(u_inv_(i, a), u_inv_(i, b));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < d_.rows(); ++i) std::swap(d_(i, a), d_(i, b));
    for (std::size_t i = 0; i < v_.rows(); ++i) std::swap(v_(i, a), v_(i, b));
    for (std::size_t j = 0; j < v_inv_.cols(); ++j) std::swap(v_inv_(a, j), v_inv_(b, j));
  }

  // row_target += q * row_src
  void add_row(std::size_t target, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < d_.cols(); ++j) d_(target, j) += q * d_(src, j);
    for (std::size_t j = 0; j < u_.cols(); ++j) u_(target, j) += q * u_(src, j);
    for (std::size_t i = 0; i < u_inv_.rows(); ++i) u_inv_(i, src) -= q * u_inv_(i, target);
  }

  // col_target += q * col_src
  void add_col(std::size_t target, std::size_t src, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < d_.rows(); ++i) d_(i, target) += q * d_(i, src);
    for (std::size_t i = 0; i < v_.rows(); ++i) v_(i, target) += q * v_(i, src);
    for (std::size_t j = 0; j < v_inv_.cols(); ++j) v_inv_(src, j) -= q * v_inv_(target, j);
  }

  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < d_.cols(); ++j) d_(r, j) = -d_(r, j);
    for (std::size_t j = 0; j < u_.cols(); ++j) u_(r, j) = -u_(r, j);
    for (std::size_t i = 0; i < u_inv_.rows(); ++i) u_inv_(i, r) = -u_inv_(i, r);
  }

  IntMatrix d_, u_, u_inv_, v_, v_inv_;
};

}  // namespace detail

inline SNFDecomposition smith_normal_form(const IntMatrix& m) { return detail::SmithReducer(m).run(); }

inline std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

/// ℤ/d₁ ⊕ … ⊕ ℤ/d_k ⊕ ℤ^r with d_i ≥ 2 and d_i | d_{i+1}.
class FGAbGroup {
 public:
  FGAbGroup() = default;
  FGAbGroup(IntVector invariant_factors, std::size_t free_rank)
      : invariant_factors_(std::move(invariant_factors)), free_rank_(free_rank) {
    for (std::size_t i = 0; i < invariant_factors_.size(); ++i) {
      if (invariant_factors_[i] < 2) throw InvalidInput("FGAbGroup: invariant factors must be >= 2");
      if (i > 0 && invariant_factors_[i] % invariant_factors_[i - 1] != 0)
        throw InvalidInput("FGAbGroup: invariant factors must form a divisibility chain");
    }
  }

  static FGAbGroup free(std::size_t r) { return FGAbGroup({}, r); }

  /// Normalises an arbitrary direct sum of cyclic groups (order 0 means ℤ).
  static FGAbGroup from_cyclic_orders(const IntVector& orders);

  const IntVector& invariant_factors() const noexcept { return invariant_factors_; }
  std::size_t free_rank() const noexcept { return free_rank_; }
  /// Number of cyclic summands in the invariant-factor decomposition.
  std::size_t size() const noexcept { return invariant_factors_.size() + free_rank_; }

  bool is_trivial() const noexcept { return size() == 0; }
  bool is_finite() const noexcept { return free_rank_ == 0; }
  bool is_free() const noexcept { return invariant_factors_.empty(); }

  Integer torsion_order() const {
    Integer o = 1;
    for (const auto& d : invariant_factors_) o *= d;
    return o;
  }

  /// Reduces torsion coordinates into [0, d_i).
  IntVector normalize(IntVector coords) const {
    if (coords.size() != size()) throw InvalidInput("FGAbGroup: coordinate vector has wrong length");
    for (std::size_t i = 0; i < invariant_factors_.size(); ++i) coords[i] = mod(coords[i], invariant_factors_[i]);
    return coords;
  }

  bool is_zero(const IntVector& coords) const {
    auto c = normalize(coords);
    return std::all_of(c.begin(), c.end(), [](const Integer& x) { return x == 0; });
  }

  /// "Z/2 x Z/6 x Z^2"; "Z" for rank one; "0" for the trivial group.
  std::string to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& d : invariant_factors_) {
      os << (first ? "" : " x ") << "Z/" << d;
      first = false;
    }
    if (free_rank_ > 0) {
      os << (first ? "" : " x ") << "Z";
      if (free_rank_ > 1) os << '^' << free_rank_;
    }
    return os.str();
  }

  friend bool operator==(const FGAbGroup& a, const FGAbGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.invariant_factors_ == b.invariant_factors_;
  }
  friend bool operator!=(const FGAbGroup& a, const FGAbGroup& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const FGAbGroup& g) { return os << g.to_string(); }

 private:
  IntVector invariant_factors_;
  std::size_t free_rank_ = 0;
};

/// A finitely generated abelian group together with explicit coordinates:
/// `coordinate_map` sends an ambient vector to its coordinates in the
/// invariant-factor decomposition (torsion summands first, then free ones),
/// `section` sends decomposition coordinates back to ambient representatives.
struct Decomposition {
  FGAbGroup group;
  IntMatrix coordinate_map;
  IntMatrix section;

  IntVector coordinates(const IntVector& ambient) const { return group.normalize(coordinate_map * ambient); }

  /// Coordinates of each column of `ambient`, as the columns of the result.
  IntMatrix coordinates(const IntMatrix& ambient) const {
    IntMatrix c = coordinate_map * ambient;
    for (std::size_t j = 0; j < c.cols(); ++j) {
      auto col = group.normalize(c.column(j));
      for (std::size_t i = 0; i < c.rows(); ++i) c(i, j) = col[i];
    }
    return c;
  }
};

/// ℤ^generators / (column span of relations).
inline Decomposition decompose_presentation(std::size_t generators, const IntMatrix& relations) {
  if (relations.rows() != generators) throw InvalidInput("presentation: relation matrix has wrong row count");
  const auto snf = smith_normal_form(relations);
  IntVector torsion;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < snf.rank; ++i) {
    if (snf.D(i, i) == 1) continue;
    torsion.push_back(snf.D(i, i));
    kept.push_back(i);
  }
  for (std::size_t i = snf.rank; i < generators; ++i) kept.push_back(i);

  IntMatrix to(kept.size(), generators), from(generators, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k)
    for (std::size_t j = 0; j < generators; ++j) {
      to(k, j) = snf.U(kept[k], j);
      from(j, k) = snf.U_inv(j, kept[k]);
    }
  return Decomposition{FGAbGroup(std::move(torsion), generators - snf.rank), std::move(to), std::move(from)};
}

inline FGAbGroup FGAbGroup::from_cyclic_orders(const IntVector& orders) {
  return decompose_presentation(orders.size(), IntMatrix::diagonal(orders)).group;
}

/// ℤ^rows / image(M), with coordinates.
inline Decomposition cokernel_decomposition(const IntMatrix& m) { return decompose_presentation(m.rows(), m); }

inline FGAbGroup cokernel(const IntMatrix& m) { return cokernel_decomposition(m).group; }

/// Columns form a ℤ-basis of {x : Mx = 0}.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  const auto snf = smith_normal_form(m);
  return snf.V.columns(snf.rank, m.cols());
}

/// Left inverse L (L·K = I) of a basis K of a saturated sublattice.
inline IntMatrix left_inverse(const IntMatrix& basis) {
  const auto snf = smith_normal_form(basis);
  if (snf.rank != basis.cols()) throw InvalidInput("left_inverse: columns are linearly dependent");
  for (std::size_t i = 0; i < snf.rank; ++i)
    if (snf.D(i, i) != 1) throw InvalidInput("left_inverse: columns do not span a saturated sublattice");
  return snf.V * snf.U.row_range(0, basis.cols());
}

/// Coordinates of `v` in the saturated basis `basis`, or nothing if `v` is
/// not in its span.
inline std::optional<IntVector> coordinates_in_basis(const IntMatrix& basis, const IntVector& v) {
  IntVector x = left_inverse(basis) * v;
  if (basis * x != v) return std::nullopt;
  return x;
}

/// True iff v lies in the column lattice of `lattice`.
inline bool in_lattice(const IntMatrix& lattice, const IntVector& v) {
  const auto dec = decompose_presentation(lattice.rows(), lattice);
  return dec.group.is_zero(dec.coordinate_map * v);
}

/// Matrix of the restriction of `ambient` to saturated sublattices: the
/// columns of `source_basis` must be carried into the span of `target_basis`.
inline IntMatrix restrict_map(const IntMatrix& ambient, const IntMatrix& source_basis, const IntMatrix& target_basis) {
  const IntMatrix image = ambient * source_basis;
  if (target_basis.cols() == 0) {
    if (!image.is_zero()) throw InvalidInput("restrict_map: image leaves the target sublattice");
    return IntMatrix(0, source_basis.cols());
  }
  IntMatrix coords = left_inverse(target_basis) * image;
  if (target_basis * coords != image) throw InvalidInput("restrict_map: image leaves the target sublattice");
  return coords;
}

/// Homology ker(B)/im(A) of ℤ^k --A--> ℤ^n --B--> ℤ^m, with coordinates on ℤ^n.
inline Decomposition homology(const IntMatrix& a, const IntMatrix& b) {
  if (b.cols() != a.rows()) throw InvalidInput("homology: A and B are not composable");
  if (!(b * a).is_zero()) throw InvalidInput("homology: B·A != 0 (inconsistent complex)");
  const std::size_t n = a.rows();
  IntMatrix kernel = kernel_basis(b);
  if (kernel.cols() == 0) return Decomposition{FGAbGroup{}, IntMatrix(0, n), IntMatrix(n, 0)};
  IntMatrix inv = left_inverse(kernel);
  IntMatrix boundaries = inv * a;
  auto dec = decompose_presentation(kernel.cols(), boundaries);
  return Decomposition{dec.group, dec.coordinate_map * inv, kernel * dec.section};
}

/// Quotient of a decomposed group by the subgroup generated by the columns
/// of `generators` (given in the group's decomposition coordinates).
inline Decomposition quotient(const FGAbGroup& g, const IntMatrix& generators) {
  if (generators.rows() != g.size()) throw InvalidInput("quotient: generator coordinates have wrong length");
  IntMatrix rel(g.size(), g.invariant_factors().size());
  for (std::size_t i = 0; i < g.invariant_factors().size(); ++i) rel(i, i) = g.invariant_factors()[i];
  return decompose_presentation(g.size(), hstack(rel, generators));
}

/// Exact inverse over ℚ; throws on singular input.
inline std::vector<std::vector<Rational>> rational_inverse(const IntMatrix& m) {
  if (!m.is_square()) throw InvalidInput("inverse: matrix is not square");
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m(i, j));
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw InvalidInput("inverse: matrix is singular");
    std::swap(a[p], a[c]);
    const Rational piv = a[c][c];
    for (auto& x : a[c]) x /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

/// Given a finite-index embedding H → G of free groups of equal rank
/// (columns of `incl` are the images of a basis of H) and an endomorphism of
/// H, returns the unique endomorphism of G restricting to it. Throws if the
/// ranks differ, the index is infinite, or the extension is not integral.
inline IntMatrix extend_through_finite_index(const IntMatrix& incl, const IntMatrix& endo_on_sub) {
  if (!incl.is_square() || !endo_on_sub.is_square() || incl.rows() != endo_on_sub.rows())
    throw InvalidInput("extend_through_finite_index: rank mismatch");
  if (determinant(incl) == 0) throw InvalidInput("extend_through_finite_index: embedding has infinite index");
  const std::size_t n = incl.rows();
  const IntMatrix target = incl * endo_on_sub;
  const auto inv = rational_inverse(incl);
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += Rational(target(i, k)) * inv[k][j];
      if (boost::multiprecision::denominator(s) != 1)
        throw InvalidInput("extend_through_finite_index: extension is not integral");
      out(i, j) = boost::multiprecision::numerator(s);
    }
  return out;
}

/// A homomorphism coker(source_relations) → coker(target_relations) induced
/// by a matrix on the ambient free modules.
class PresentedGroupMap {
 public:
  PresentedGroupMap(IntMatrix source_relations, IntMatrix target_relations, IntMatrix ambient)
      : source_relations_(std::move(source_relations)),
        target_relations_(std::move(target_relations)),
        ambient_(std::move(ambient)) {
    if (ambient_.cols() != source_relations_.rows() || ambient_.rows() != target_relations_.rows())
      throw InvalidInput("PresentedGroupMap: ambient matrix has wrong shape");
    const IntMatrix images = ambient_ * source_relations_;
    for (std::size_t j = 0; j < images.cols(); ++j)
      if (!in_lattice(target_relations_, images.column(j)))
        throw InvalidInput("PresentedGroupMap: relations are not carried into the target relation lattice");
  }

  const IntMatrix& source_relations() const noexcept { return source_relations_; }
  const IntMatrix& target_relations() const noexcept { return target_relations_; }
  const IntMatrix& ambient() const noexcept { return ambient_; }

  Decomposition source() const { return cokernel_decomposition(source_relations_); }
  Decomposition target() const { return cokernel_decomposition(target_relations_); }

  /// Matrix of the map in the invariant-factor coordinates of source and target.
  IntMatrix induced() const {
    const auto s = source(), t = target();
    return t.coordinates(ambient_ * s.section);
  }

  /// next ∘ this
  PresentedGroupMap then(const PresentedGroupMap& next) const {
    if (next.source_relations_ != target_relations_)
      throw InvalidInput("PresentedGroupMap: composition of incompatible maps");
    return PresentedGroupMap(source_relations_, next.target_relations_, next.ambient_ * ambient_);
  }

 private:
  IntMatrix source_relations_;
  IntMatrix target_relations_;
  IntMatrix ambient_;
};

}  // namespace neron
