#include "assoc/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "assoc/error.hpp"

namespace assoc {

namespace {

void check_budget(std::uint64_t required, std::uint64_t budget) {
  if (required > budget) throw BudgetExceeded(required, budget);
}

unsigned resolve_threads(unsigned requested, std::size_t chunks) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, chunks));
}

// Runs job(v) for every first-cell value v in [0, n], possibly concurrently.
// Jobs write only to their own slot, so the result is order-independent.
template <class Job>
void for_each_first_value(Count n, unsigned threads, Job&& job) {
  const auto chunks = static_cast<std::size_t>(n) + 1;
  const unsigned workers = resolve_threads(threads, chunks);
  if (workers <= 1) {
    for (Count v = n; v >= 0; --v) job(v);
    return;
  }
  std::atomic<Count> next{n};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Count v = next.fetch_sub(1); v >= 0; v = next.fetch_sub(1)) job(v);
    });
  }
}

// Visits every composition of n into `cells` parts whose first part is v,
// in lexicographically decreasing order.
template <class Visitor>
void for_each_with_first(std::size_t cells, Count n, Count v, Visitor&& visit) {
  std::vector<Count> full(cells, 0);
  full[0] = v;
  if (cells == 1) {
    if (v == n) visit(std::span<const Count>(full));
    return;
  }
  for_each_composition(cells - 1, n - v, [&](std::span<const Count> rest) {
    std::copy(rest.begin(), rest.end(), full.begin() + 1);
    visit(std::span<const Count>(full));
  });
}

struct Margins2 {
  std::vector<Count> rows, cols;
};

double independence_score(std::span<const Count> counts, std::size_t r, std::size_t c, Count n, Margins2& m) {
  std::fill(m.rows.begin(), m.rows.end(), 0);
  std::fill(m.cols.begin(), m.cols.end(), 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      m.rows[i] += counts[i * c + j];
      m.cols[j] += counts[i * c + j];
    }
  return detail::independence_chi_square(counts, m.rows, m.cols, n);
}

struct ExactBest {
  unsigned __int128 score = 0;
  std::vector<Count> table;
  bool found = false;
};

std::vector<Count> certify_uniform_exact(std::size_t cells, Count n, unsigned threads) {
  std::vector<ExactBest> per_value(static_cast<std::size_t>(n) + 1);
  for_each_first_value(n, threads, [&](Count v) {
    ExactBest& best = per_value[static_cast<std::size_t>(v)];
    for_each_with_first(cells, n, v, [&](std::span<const Count> t) {
      const auto s = detail::uniform_deviation_sum(t, n);
      if (!best.found || s > best.score) {
        best.score = s;
        best.table.assign(t.begin(), t.end());
        best.found = true;
      }
    });
  });
  const ExactBest* winner = nullptr;
  for (Count v = n; v >= 0; --v) {
    const ExactBest& b = per_value[static_cast<std::size_t>(v)];
    if (b.found && (!winner || b.score > winner->score)) winner = &b;
  }
  return winner->table;
}

template <class Score>
std::vector<Count> certify_by_double(std::size_t cells, Count n, unsigned threads, Score&& make_scorer) {
  const auto chunks = static_cast<std::size_t>(n) + 1;

  std::vector<double> chunk_max(chunks, -1.0);
  for_each_first_value(n, threads, [&](Count v) {
    auto score = make_scorer();
    double best = -1.0;
    for_each_with_first(cells, n, v, [&](std::span<const Count> t) { best = std::max(best, score(t)); });
    chunk_max[static_cast<std::size_t>(v)] = best;
  });
  const double overall = *std::max_element(chunk_max.begin(), chunk_max.end());
  const double threshold = overall - kTieTolerance * overall;

  std::vector<std::optional<std::vector<Count>>> first_hit(chunks);
  for_each_first_value(n, threads, [&](Count v) {
    auto score = make_scorer();
    auto& slot = first_hit[static_cast<std::size_t>(v)];
    if (chunk_max[static_cast<std::size_t>(v)] < threshold) return;
    for_each_with_first(cells, n, v, [&](std::span<const Count> t) {
      if (!slot && score(t) >= threshold) slot.emplace(t.begin(), t.end());
    });
  });
  for (Count v = n; v >= 0; --v) {
    auto& slot = first_hit[static_cast<std::size_t>(v)];
    if (slot) return std::move(*slot);
  }
  throw Error("internal: no table attained the enumerated maximum");
}

}  // namespace

std::uint64_t default_budget() {
  const char* env = std::getenv("ASSOC_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultBudget;
  const std::string_view text(env);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw UsageError("ASSOC_BUDGET must be a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t composition_count(std::uint64_t n, std::uint64_t parts) noexcept {
  if (parts == 0) return n == 0 ? 1 : 0;
  const std::uint64_t top = n + parts - 1;
  const std::uint64_t k = std::min(n, parts - 1);
  unsigned __int128 result = 1;
  constexpr auto kMax = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (top - k + i) / i;
    if (result > kMax) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t enumerate_tables(std::size_t rows, std::size_t cols, Count n,
                               const std::function<void(const ContingencyTable&)>& visitor,
                               std::uint64_t budget) {
  if (rows < 1 || cols < 1) throw UsageError("rows and cols must be at least 1");
  if (n < 0) throw UsageError("total must be nonnegative");
  const std::size_t cells = rows * cols;
  check_budget(composition_count(static_cast<std::uint64_t>(n), cells), budget);
  return for_each_composition(cells, n, [&](std::span<const Count> a) {
    visitor(ContingencyTable(rows, cols, std::vector<Count>(a.begin(), a.end())));
  });
}

MaxCertificate certify_max(std::size_t rows, std::size_t cols, Count n, const ExpectationModel& m,
                           const CertifyOptions& options) {
  const ModelKind kind = kind_of(m);
  if (kind == ModelKind::Given) throw UsageError("certify_max supports the independence and uniform models only");
  if (rows < 1 || cols < 1 || rows * cols < 2) throw UsageError("certify_max needs at least two cells");
  if (n < 1) throw UsageError("certify_max needs n >= 1");

  const std::size_t cells = rows * cols;
  const std::uint64_t examined = composition_count(static_cast<std::uint64_t>(n), cells);
  check_budget(examined, options.budget);

  std::vector<Count> best;
  if (kind == ModelKind::Uniform && detail::uniform_exact_ok(cells, n)) {
    best = certify_uniform_exact(cells, n, options.threads);
  } else if (kind == ModelKind::Uniform) {
    best = certify_by_double(cells, n, options.threads, [&] {
      return [n](std::span<const Count> t) { return detail::uniform_chi_square(t, n); };
    });
  } else {
    best = certify_by_double(cells, n, options.threads, [&] {
      return [rows, cols, n, margins = Margins2{std::vector<Count>(rows), std::vector<Count>(cols)}](
                 std::span<const Count> t) mutable { return independence_score(t, rows, cols, n, margins); };
    });
  }

  MaxCertificate cert;
  cert.rows = rows;
  cert.cols = cols;
  cert.n = n;
  cert.model = kind;
  cert.argmax_table = ContingencyTable(rows, cols, std::move(best));
  cert.max_chi_square = chi_square(cert.argmax_table, m);
  cert.tables_examined = examined;
  const auto nd = static_cast<double>(n);
  cert.theoretical_claim = kind == ModelKind::Uniform
                               ? nd * static_cast<double>(cells - 1)
                               : nd * static_cast<double>(std::min(rows, cols) - 1);
  return cert;
}

ContingencyTable extremal_table(std::size_t rows, std::size_t cols, Count n) {
  std::vector<Count> counts(rows * cols, 0);
  if (!counts.empty()) counts[0] = n;
  return ContingencyTable(rows, cols, std::move(counts));
}

PhiScan sup_phi_square_scan(std::size_t rows, std::size_t cols, Count grid, std::uint64_t budget) {
  if (rows < 2 || cols < 2) throw UsageError("scan needs rows >= 2 and cols >= 2");
  if (grid < 2) throw UsageError("grid resolution must be at least 2");
  const std::size_t cells = rows * cols;
  check_budget(composition_count(static_cast<std::uint64_t>(grid), cells), budget);

  PhiScan scan;
  scan.rows = rows;
  scan.cols = cols;
  scan.grid = grid;
  scan.ceiling_min_dim = static_cast<double>(std::min(rows, cols) - 1);
  scan.ceiling_cells = static_cast<double>(cells - 1);
  double best = -1.0;
  std::vector<Count> best_counts;
  scan.grids_examined = for_each_composition(cells, grid, [&](std::span<const Count> a) {
    const ContingencyTable t(rows, cols, std::vector<Count>(a.begin(), a.end()));
    const double phi = mean_square_contingency(to_probability(t));
    if (phi > best) {
      best = phi;
      best_counts.assign(a.begin(), a.end());
    }
  });
  scan.max_phi_square = best;
  scan.argmax_counts = ContingencyTable(rows, cols, std::move(best_counts));
  return scan;
}

}  // namespace assoc
