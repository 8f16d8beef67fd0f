#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "assoc/table.hpp"

namespace assoc {

/// e_ij = x_i. * x_.j / n
struct IndependenceMargins {};

/// e_ij = n / (r c)
struct FixedUniform {};

/// Caller-supplied expected counts, row-major. Entries must be positive and
/// sum to the table total within 1e-6 n.
struct FixedGiven {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> expected;
};

/// The rule producing expected counts. There is deliberately no default.
using ExpectationModel = std::variant<IndependenceMargins, FixedUniform, FixedGiven>;

enum class ModelKind { Independence, Uniform, Given };

ModelKind kind_of(const ExpectationModel& m) noexcept;

/// "independence", "uniform" or "given".
std::string_view model_name(ModelKind kind) noexcept;

/// Inverse of model_name for the two parameter-free models. Throws UsageError.
ExpectationModel parse_model(std::string_view name);

struct StatResult {
  double chi_square = 0.0;
  double phi_square = 0.0;
  double v = 0.0;
  double modified_v = 0.0;
  ModelKind model = ModelKind::Independence;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Count n = 0;
};

/// Expected counts, row-major. Cells in a zero row or column get e_ij = 0
/// under IndependenceMargins.
std::vector<double> expected_counts(const ContingencyTable& t, const ExpectationModel& m);

/// Pearson's statistic sum (x - e)^2 / e. Cells with e = 0 contribute 0.
double chi_square(const ContingencyTable& t, const ExpectationModel& m);

/// phi^2 = sum (p_ij - p_i. p_.j)^2 / (p_i. p_.j), skipping cells with a
/// zero margin.
double mean_square_contingency(const ProbabilityTable& p);

/// sqrt(chi^2 / (n min(r-1, c-1))). Throws DegenerateError when r or c is 1.
double cramers_v(const ContingencyTable& t, const ExpectationModel& m);

/// sqrt(chi^2 / (n (rc - 1))). Throws DegenerateError when rc = 1.
double modified_v(const ContingencyTable& t, const ExpectationModel& m);

/// All four statistics from a single chi^2 evaluation.
StatResult compute_all(const ContingencyTable& t, const ExpectationModel& m);

double v_from_chi_square(double chi_square, Count n, std::size_t rows, std::size_t cols);
double modified_v_from_chi_square(double chi_square, Count n, std::size_t rows, std::size_t cols);

/// Largest V and modified V attainable on an r x c table under a model:
/// sqrt((rc-1)/min(r-1,c-1)) and 1 for FixedUniform, 1 and
/// sqrt(min(r-1,c-1)/(rc-1)) for IndependenceMargins. Zero for FixedGiven,
/// which has no closed form.
double max_v(ModelKind kind, std::size_t rows, std::size_t cols);
double max_modified_v(ModelKind kind, std::size_t rows, std::size_t cols);

namespace detail {

// Hot-loop kernels over a raw row-major composition; used by the
// exhaustive verifier to avoid building a table per visit.

double independence_chi_square(std::span<const Count> counts, std::span<const Count> row_sums,
                               std::span<const Count> col_sums, Count n);

// sum over cells of (rc x - n)^2; chi^2 under FixedUniform is this divided
// by rc n. Only valid when uniform_exact_ok(cells, n).
unsigned __int128 uniform_deviation_sum(std::span<const Count> counts, Count n);
bool uniform_exact_ok(std::size_t cells, Count n) noexcept;

double uniform_chi_square(std::span<const Count> counts, Count n);

}  // namespace detail

}  // namespace assoc
