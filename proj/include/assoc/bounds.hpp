#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "assoc/statistics.hpp"
#include "assoc/table.hpp"

namespace assoc {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Budget from the ASSOC_BUDGET environment variable, or kDefaultBudget when
/// unset. Throws UsageError if the variable is set but not a positive integer.
std::uint64_t default_budget();

/// C(n + parts - 1, parts - 1): the number of weak compositions of n into
/// `parts` ordered nonnegative parts. Saturates at UINT64_MAX.
std::uint64_t composition_count(std::uint64_t n, std::uint64_t parts) noexcept;

/// Visits every weak composition of n into `parts` parts in lexicographically
/// decreasing order, starting at (n, 0, ..., 0) and ending at (0, ..., 0, n).
/// Returns the number visited. No budget check.
template <class Visitor>
std::uint64_t for_each_composition(std::size_t parts, Count n, Visitor&& visit) {
  std::vector<Count> a(parts, 0);
  if (parts == 0) return 0;
  a[0] = n;
  std::uint64_t visited = 0;
  while (true) {
    visit(std::span<const Count>(a));
    ++visited;
    // Rightmost positive part strictly before the last one.
    std::size_t i = parts - 1;
    while (i > 0 && a[i - 1] == 0) --i;
    if (i == 0) break;
    --i;
    --a[i];
    if (i + 1 == parts - 1) {
      ++a[parts - 1];
    } else {
      a[i + 1] = a[parts - 1] + 1;
      a[parts - 1] = 0;
    }
  }
  return visited;
}

/// Visits every r x c table with total n, in lexicographically decreasing
/// row-major order. Throws BudgetExceeded (before visiting anything) when the
/// table count exceeds `budget`.
std::uint64_t enumerate_tables(std::size_t rows, std::size_t cols, Count n,
                               const std::function<void(const ContingencyTable&)>& visitor,
                               std::uint64_t budget = kDefaultBudget);

struct MaxCertificate {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Count n = 0;
  ModelKind model = ModelKind::Uniform;
  double max_chi_square = 0.0;
  ContingencyTable argmax_table{1, 1, {0}};
  std::uint64_t tables_examined = 0;
  /// n(rc - 1) for FixedUniform, n(min(r,c) - 1) for IndependenceMargins.
  double theoretical_claim = 0.0;
};

struct CertifyOptions {
  std::uint64_t budget = kDefaultBudget;
  /// 0 = hardware concurrency, 1 = sequential.
  unsigned threads = 1;
};

/// Exhaustive maximum of chi^2 over all r x c tables with total n.
///
/// Under FixedUniform the search compares the exact integer sum
/// sum (rc x - n)^2. Under IndependenceMargins it compares doubles: the
/// attained maximum M is found first, then the argmax is the first table in
/// enumeration order whose chi^2 is within 1e-9 relative of M. Either way the
/// argmax among ties is the lexicographically greatest table, and the result
/// does not depend on `threads`.
///
/// Throws UsageError for FixedGiven, n < 1 or rc < 2; BudgetExceeded.
MaxCertificate certify_max(std::size_t rows, std::size_t cols, Count n, const ExpectationModel& m,
                           const CertifyOptions& options = {});

inline constexpr double kTieTolerance = 1e-9;

/// All n counts in cell (1,1).
ContingencyTable extremal_table(std::size_t rows, std::size_t cols, Count n);

struct PhiScan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Count grid = 0;
  double max_phi_square = 0.0;
  /// Grid counts of the maximizing table; probabilities are counts / grid.
  ContingencyTable argmax_counts{1, 1, {0}};
  std::uint64_t grids_examined = 0;
  /// The two candidate ceilings, min(r,c) - 1 and rc - 1. Reported, not judged.
  double ceiling_min_dim = 0.0;
  double ceiling_cells = 0.0;
};

/// Maximum of the mean square contingency over every probability table
/// whose entries are multiples of 1/grid.
PhiScan sup_phi_square_scan(std::size_t rows, std::size_t cols, Count grid,
                            std::uint64_t budget = kDefaultBudget);

}  // namespace assoc
