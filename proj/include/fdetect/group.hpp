#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fdetect {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultOrderCap = 4096;

/// Finite abelian group Z/n_1 x ... x Z/n_r.
///
/// Elements and characters share one mixed-radix indexing with the first
/// factor most significant: tuple (a_1, ..., a_r) has index
/// ((a_1 * n_2 + a_2) * n_3 + a_3) ... . Character index b denotes
/// g -> exp(2 pi i sum_t a_t b_t / n_t) under the duality G^ = G.
class Group {
public:
  /// Validates factors (non-empty, each >= 2, product <= cap).
  explicit Group(std::vector<int> factors, std::size_t order_cap = kDefaultOrderCap);

  const std::vector<int>& factors() const noexcept { return factors_; }
  std::size_t order() const noexcept { return order_; }

  std::vector<int> to_tuple(std::size_t index) const;
  std::size_t to_index(const std::vector<int>& tuple) const;

  std::size_t add(std::size_t g, std::size_t h) const;
  std::size_t negate(std::size_t g) const;

  /// "4x9" style spec.
  std::string spec() const;

  bool operator==(const Group&) const = default;

private:
  std::vector<int> factors_;
  std::size_t order_;
};

Group make_group(const std::vector<int>& factors, std::size_t order_cap = kDefaultOrderCap);

/// Parses "n1xn2x..." (also accepts '*' or ',' as separators).
Group parse_group(std::string_view spec, std::size_t order_cap = kDefaultOrderCap);

/// Direct product; factors are concatenated.
Group tensor_group(const Group& g1, const Group& g2, std::size_t order_cap = kDefaultOrderCap);

/// Value of character `chi` at element `g`. The phase is reduced to an
/// integer numerator over lcm(n_t) before one cos/sin evaluation, and
/// quarter turns are returned exactly.
Complex character_value(const Group& group, std::size_t chi, std::size_t g);

/// Square unitary matrix with all entries of modulus n^{-1/2}; row r is the
/// basis vector, column c its coordinate on the point mass at c.
class FlatBasis {
public:
  enum class Source { FourierOfGroup, LoadedFile };

  static constexpr double kUnitarityTol = 1e-10;
  static constexpr double kFlatnessTol = 1e-8;

  /// Checks both invariants; throws ValidationError naming the worst entry.
  FlatBasis(Matrix matrix, Source source, std::optional<Group> group = std::nullopt);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  Source source() const noexcept { return source_; }
  /// Set when the basis is the Fourier basis of a group.
  const std::optional<Group>& group() const noexcept { return group_; }

  Complex entry(std::size_t row, std::size_t col) const {
    return matrix_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  /// Deviations measured by the constructor.
  double unitarity() const noexcept { return unitarity_; }
  double flatness() const noexcept { return flatness_; }

private:
  Matrix matrix_;
  Source source_;
  std::optional<Group> group_;
  double unitarity_ = 0.0;
  double flatness_ = 0.0;
};

const char* to_string(FlatBasis::Source source);

/// max |(M M^*)_{ij} - delta_ij|.
double unitarity_deviation(const Matrix& m);

struct FlatnessReport {
  double deviation = 0.0; ///< max | |M_ij| - n^{-1/2} |
  std::size_t row = 0;
  std::size_t col = 0;
};
FlatnessReport flatness_deviation(const Matrix& m);

FlatBasis fourier_basis(const Group& group);

/// Text format: first non-blank line holds n, then n rows of n entries.
/// An entry is "re", "imj", "re+imj", "re-imj" or "re,im"; '#' starts a
/// comment that runs to end of line.
FlatBasis parse_flat_basis(std::string_view text);
FlatBasis load_flat_basis(const std::filesystem::path& path);

/// Writes `m` in the flat-basis text format ("re+imj" with 17 digits).
std::string format_flat_basis(const Matrix& m);

/// Kronecker product a (x) b with row/col index i * b.rows() + j.
Matrix kronecker(const Matrix& a, const Matrix& b);

/// True when `a` and `b` have the same rows up to a permutation (to `tol`).
bool equal_up_to_row_order(const Matrix& a, const Matrix& b, double tol);

} // namespace fdetect
