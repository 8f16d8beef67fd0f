#include "assoc/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "assoc/detail/compensated_sum.hpp"
#include "assoc/error.hpp"

namespace assoc {

namespace {

void require_nonempty(const ContingencyTable& t) {
  if (t.total() == 0) throw InputError("empty table");
}

void validate_given(const FixedGiven& g, const ContingencyTable& t) {
  if (g.rows != t.rows() || g.cols != t.cols() || g.expected.size() != t.cells()) {
    throw InputError("expected-count grid is " + std::to_string(g.rows) + "x" + std::to_string(g.cols) +
                     " but the table is " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
  }
  detail::CompensatedSum sum;
  for (double e : g.expected) {
    if (!std::isfinite(e) || e <= 0.0) throw InputError("expected counts must be positive and finite");
    sum.add(e);
  }
  const auto n = static_cast<double>(t.total());
  if (std::abs(sum.value() - n) > 1e-6 * n) {
    throw InputError("expected counts sum to " + std::to_string(sum.value()) + ", table total is " +
                     std::to_string(t.total()));
  }
}

std::size_t min_dim_minus_one(std::size_t rows, std::size_t cols) { return std::min(rows, cols) - 1; }

}  // namespace

ModelKind kind_of(const ExpectationModel& m) noexcept {
  switch (m.index()) {
    case 0: return ModelKind::Independence;
    case 1: return ModelKind::Uniform;
    default: return ModelKind::Given;
  }
}

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Independence: return "independence";
    case ModelKind::Uniform: return "uniform";
    case ModelKind::Given: return "given";
  }
  return "unknown";
}

ExpectationModel parse_model(std::string_view name) {
  if (name == "independence") return IndependenceMargins{};
  if (name == "uniform") return FixedUniform{};
  throw UsageError("unknown expectation model '" + std::string(name) + "' (expected independence or uniform)");
}

namespace detail {

double independence_chi_square(std::span<const Count> counts, std::span<const Count> row_sums,
                               std::span<const Count> col_sums, Count n) {
  const std::size_t cols = col_sums.size();
  const auto nd = static_cast<double>(n);
  CompensatedSum sum;
  for (std::size_t i = 0; i < row_sums.size(); ++i) {
    const Count ri = row_sums[i];
    if (ri == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      const Count cj = col_sums[j];
      if (cj == 0) continue;
      // n (x - e) = n x - r_i c_j, an exact integer.
      const __int128 d = static_cast<__int128>(n) * counts[i * cols + j] - static_cast<__int128>(ri) * cj;
      if (d == 0) continue;
      const auto dd = static_cast<double>(d);
      sum.add(dd * dd / (nd * static_cast<double>(ri) * static_cast<double>(cj)));
    }
  }
  return sum.value();
}

bool uniform_exact_ok(std::size_t cells, Count n) noexcept {
  if (n < 0) return false;
  unsigned __int128 bound = static_cast<unsigned __int128>(cells) * static_cast<unsigned __int128>(n);
  return bound <= (static_cast<unsigned __int128>(1) << 62);
}

unsigned __int128 uniform_deviation_sum(std::span<const Count> counts, Count n) {
  const auto rc = static_cast<__int128>(counts.size());
  unsigned __int128 s = 0;
  for (Count x : counts) {
    const __int128 d = rc * x - n;
    s += static_cast<unsigned __int128>(d * d);
  }
  return s;
}

double uniform_chi_square(std::span<const Count> counts, Count n) {
  const std::size_t cells = counts.size();
  if (uniform_exact_ok(cells, n)) {
    const auto s = uniform_deviation_sum(counts, n);
    return static_cast<double>(s) / (static_cast<double>(cells) * static_cast<double>(n));
  }
  const double e = static_cast<double>(n) / static_cast<double>(cells);
  CompensatedSum sum;
  for (Count x : counts) {
    const double d = static_cast<double>(x) - e;
    sum.add(d * d / e);
  }
  return sum.value();
}

}  // namespace detail

std::vector<double> expected_counts(const ContingencyTable& t, const ExpectationModel& m) {
  require_nonempty(t);
  const auto n = static_cast<double>(t.total());
  std::vector<double> e(t.cells());
  switch (kind_of(m)) {
    case ModelKind::Independence:
      for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
          e[i * t.cols() + j] =
              static_cast<double>(t.row_sums()[i]) * static_cast<double>(t.col_sums()[j]) / n;
      break;
    case ModelKind::Uniform:
      std::fill(e.begin(), e.end(), n / static_cast<double>(t.cells()));
      break;
    case ModelKind::Given: {
      const auto& g = std::get<FixedGiven>(m);
      validate_given(g, t);
      e = g.expected;
      break;
    }
  }
  return e;
}

double chi_square(const ContingencyTable& t, const ExpectationModel& m) {
  require_nonempty(t);
  switch (kind_of(m)) {
    case ModelKind::Independence:
      return detail::independence_chi_square(t.counts(), t.row_sums(), t.col_sums(), t.total());
    case ModelKind::Uniform:
      return detail::uniform_chi_square(t.counts(), t.total());
    case ModelKind::Given: {
      const auto& g = std::get<FixedGiven>(m);
      validate_given(g, t);
      detail::CompensatedSum sum;
      for (std::size_t k = 0; k < t.cells(); ++k) {
        const double d = static_cast<double>(t.counts()[k]) - g.expected[k];
        sum.add(d * d / g.expected[k]);
      }
      return sum.value();
    }
  }
  return 0.0;
}

double mean_square_contingency(const ProbabilityTable& p) {
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    const double pi = p.row_margins()[i];
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double pj = p.col_margins()[j];
      const double e = pi * pj;
      if (e <= 0.0) continue;
      const double d = std::fma(-pi, pj, p.at(i, j));
      sum.add(d * d / e);
    }
  }
  return sum.value();
}

double v_from_chi_square(double chi_square, Count n, std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) {
    throw DegenerateError("degenerate dimension: V undefined on a " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " table");
  }
  if (n <= 0) throw InputError("empty table");
  return std::sqrt(chi_square / (static_cast<double>(n) * static_cast<double>(min_dim_minus_one(rows, cols))));
}

double modified_v_from_chi_square(double chi_square, Count n, std::size_t rows, std::size_t cols) {
  if (rows * cols < 2) throw DegenerateError("degenerate dimension: modified V undefined on a 1x1 table");
  if (n <= 0) throw InputError("empty table");
  return std::sqrt(chi_square / (static_cast<double>(n) * static_cast<double>(rows * cols - 1)));
}

double cramers_v(const ContingencyTable& t, const ExpectationModel& m) {
  require_nonempty(t);
  return v_from_chi_square(chi_square(t, m), t.total(), t.rows(), t.cols());
}

double modified_v(const ContingencyTable& t, const ExpectationModel& m) {
  require_nonempty(t);
  return modified_v_from_chi_square(chi_square(t, m), t.total(), t.rows(), t.cols());
}

StatResult compute_all(const ContingencyTable& t, const ExpectationModel& m) {
  StatResult r;
  r.chi_square = chi_square(t, m);
  r.phi_square = r.chi_square / static_cast<double>(t.total());
  r.v = v_from_chi_square(r.chi_square, t.total(), t.rows(), t.cols());
  r.modified_v = modified_v_from_chi_square(r.chi_square, t.total(), t.rows(), t.cols());
  r.model = kind_of(m);
  r.rows = t.rows();
  r.cols = t.cols();
  r.n = t.total();
  return r;
}

double max_v(ModelKind kind, std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) return 0.0;
  const auto q = static_cast<double>(min_dim_minus_one(rows, cols));
  switch (kind) {
    case ModelKind::Independence: return 1.0;
    case ModelKind::Uniform: return std::sqrt(static_cast<double>(rows * cols - 1) / q);
    case ModelKind::Given: return 0.0;
  }
  return 0.0;
}

double max_modified_v(ModelKind kind, std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) return 0.0;
  const auto q = static_cast<double>(min_dim_minus_one(rows, cols));
  switch (kind) {
    case ModelKind::Independence: return std::sqrt(q / static_cast<double>(rows * cols - 1));
    case ModelKind::Uniform: return 1.0;
    case ModelKind::Given: return 0.0;
  }
  return 0.0;
}

}  // namespace assoc
