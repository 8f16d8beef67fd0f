#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace assoc {

using Count = std::int64_t;

/// An r x c grid of nonnegative integer counts with cached margins.
///
/// Counts are stored row-major. The table is immutable once built; every
/// constructor validates nonnegativity and that the total fits in a Count.
class ContingencyTable {
 public:
  /// Throws InputError on a shape mismatch, a zero dimension, a negative
  /// count, or overflow of the total.
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts);

  /// Builds from a list of rows; rows must be nonempty and of equal length.
  static ContingencyTable from_rows(const std::vector<std::vector<Count>>& grid);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t cells() const noexcept { return counts_.size(); }
  Count total() const noexcept { return total_; }

  Count at(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }

  std::span<const Count> counts() const noexcept { return counts_; }
  std::span<const Count> row_sums() const noexcept { return row_sums_; }
  std::span<const Count> col_sums() const noexcept { return col_sums_; }

  std::vector<std::vector<Count>> to_rows() const;
  ContingencyTable transposed() const;

  friend bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.counts_ == b.counts_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> counts_;
  std::vector<Count> row_sums_;
  std::vector<Count> col_sums_;
  Count total_ = 0;
};

struct Margins {
  std::vector<Count> row_sums;
  std::vector<Count> col_sums;
  Count total = 0;
};

Margins margins(const ContingencyTable& t);

/// An r x c grid of nonnegative reals summing to one, with row and column
/// margins.
class ProbabilityTable {
 public:
  /// Margins are summed from `probs`. Throws InputError if an entry is
  /// negative or not finite, or if the entries do not sum to 1 within 1e-9.
  ProbabilityTable(std::size_t rows, std::size_t cols, std::vector<double> probs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return probs_[i * cols_ + j]; }

  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> row_margins() const noexcept { return row_margins_; }
  std::span<const double> col_margins() const noexcept { return col_margins_; }

 private:
  friend ProbabilityTable to_probability(const ContingencyTable& t);
  ProbabilityTable(std::size_t rows, std::size_t cols, std::vector<double> probs,
                   std::vector<double> row_margins, std::vector<double> col_margins);

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> probs_;
  std::vector<double> row_margins_;
  std::vector<double> col_margins_;
};

inline constexpr double kProbabilitySumTolerance = 1e-9;

/// p_ij = x_ij / n, with margins divided the same way. Throws InputError
/// ("empty table") when n = 0.
ProbabilityTable to_probability(const ContingencyTable& t);

/// Reads a comma-separated table. A first line whose first field is not an
/// integer is a header and is skipped. Blank lines are ignored. Errors name
/// the offending line.
ContingencyTable parse_table(std::string_view text);

/// One line per row, comma-separated, trailing newline.
std::string to_csv(const ContingencyTable& t);

}  // namespace assoc
