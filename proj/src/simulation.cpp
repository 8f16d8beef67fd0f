#include "assoc/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "assoc/bounds.hpp"
#include "assoc/detail/compensated_sum.hpp"
#include "assoc/error.hpp"

namespace assoc {

const std::string_view kReproducibilityNote =
    "Only the Max. row of the reference six-number summaries (2x2 and 3x3 tables, n=200, 1000 draws) is "
    "reproducible: it equals the analytical maximum of chi-square under the uniform expectation model and is "
    "hit here only by the include-extremal generator. The reference Min., 1st Qu., Median, Mean and 3rd Qu. "
    "values depend on a table generator that is not specified precisely enough to reproduce; none of the "
    "shipped generators (multinomial, composition, include-extremal) is expected to match them.";

namespace {

ContingencyTable multinomial_uniform(std::size_t rows, std::size_t cols, Count n, Xoshiro256& rng) {
  const std::size_t cells = rows * cols;
  const auto scale = static_cast<double>(cells);
  std::vector<Count> counts(cells, 0);
  for (Count k = 0; k < n; ++k) {
    // Inverse CDF of the equiprobable categorical distribution.
    auto cell = static_cast<std::size_t>(rng.uniform01() * scale);
    counts[std::min(cell, cells - 1)] += 1;
  }
  return ContingencyTable(rows, cols, std::move(counts));
}

ContingencyTable uniform_composition(std::size_t rows, std::size_t cols, Count n, Xoshiro256& rng) {
  const std::size_t cells = rows * cols;
  const std::size_t slots = static_cast<std::size_t>(n) + cells - 1;
  const std::size_t bars = cells - 1;
  // Floyd's sampling of a uniformly random bars-subset of the slots.
  std::vector<bool> is_bar(slots, false);
  for (std::size_t j = slots - bars; j < slots; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (is_bar[t]) {
      is_bar[j] = true;
    } else {
      is_bar[t] = true;
    }
  }
  std::vector<Count> counts(cells, 0);
  std::size_t part = 0;
  for (std::size_t s = 0; s < slots; ++s) {
    if (is_bar[s]) {
      ++part;
    } else {
      ++counts[part];
    }
  }
  return ContingencyTable(rows, cols, std::move(counts));
}

void validate(const SimulationConfig& cfg) {
  if (cfg.rows < 1 || cfg.cols < 1) throw UsageError("rows and cols must be at least 1");
  if (cfg.rows < 2 || cfg.cols < 2) throw UsageError("simulation needs rows >= 2 and cols >= 2 (V is undefined otherwise)");
  if (cfg.n < 1) throw UsageError("n must be at least 1");
  if (cfg.reps < 1) throw UsageError("reps must be at least 1");
  if (cfg.bins < 1) throw UsageError("bins must be at least 1");
  if (std::holds_alternative<FixedGiven>(cfg.model)) {
    // Draws run on worker threads; reject a bad grid before they start.
    try {
      expected_counts(extremal_table(cfg.rows, cfg.cols, cfg.n), cfg.model);
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
  }
}

double histogram_upper(double theoretical, std::span<const double> values) {
  if (theoretical > 0.0) return theoretical;
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  return hi > 0.0 ? hi : 1.0;
}

}  // namespace

std::string generator_name(const Generator& g) {
  if (g.include_extremal) {
    return g.inner == GeneratorKind::MultinomialUniform ? "include-extremal" : "include-extremal(composition)";
  }
  return g.inner == GeneratorKind::MultinomialUniform ? "multinomial" : "composition";
}

Generator parse_generator(std::string_view name) {
  if (name == "multinomial") return {GeneratorKind::MultinomialUniform, false};
  if (name == "composition") return {GeneratorKind::UniformComposition, false};
  if (name == "include-extremal") return {GeneratorKind::MultinomialUniform, true};
  throw UsageError("unknown generator '" + std::string(name) + "'");
}

ContingencyTable generate_table(std::size_t rows, std::size_t cols, Count n, GeneratorKind kind, Xoshiro256& rng) {
  if (rows < 1 || cols < 1) throw UsageError("rows and cols must be at least 1");
  if (n < 0) throw UsageError("n must be nonnegative");
  switch (kind) {
    case GeneratorKind::MultinomialUniform: return multinomial_uniform(rows, cols, n, rng);
    case GeneratorKind::UniformComposition: return uniform_composition(rows, cols, n, rng);
  }
  throw UsageError("unknown generator");
}

ContingencyTable generate_draw(std::size_t rows, std::size_t cols, Count n, const Generator& gen,
                               std::uint64_t seed, std::uint64_t index, std::uint64_t reps) {
  if (gen.include_extremal && index + 1 == reps) return extremal_table(rows, cols, n);
  auto rng = draw_stream(seed, index);
  return generate_table(rows, cols, n, gen.inner, rng);
}

StatSummary six_number_summary(std::span<const double> values) {
  if (values.empty()) throw UsageError("six-number summary of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  const auto quantile = [&](double p) {
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
  };

  detail::CompensatedSum sum;
  for (double v : sorted) sum.add(v);

  StatSummary s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  // The exact mean lies in [min, max]; clamp away the division's rounding.
  s.mean = std::clamp(sum.value() / static_cast<double>(sorted.size()), s.min, s.max);
  return s;
}

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins < 1) throw UsageError("histogram needs at least one bin");
  if (!(lo < hi)) throw UsageError("histogram range must satisfy lo < hi");

  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.bins.resize(bins);
  const double width = hi - lo;
  const auto edge = [&](std::size_t k) {
    return k == bins ? hi : lo + width * static_cast<double>(k) / static_cast<double>(bins);
  };
  for (std::size_t k = 0; k < bins; ++k) {
    h.bins[k].start = edge(k);
    h.bins[k].end = edge(k + 1);
  }

  for (double x : values) {
    if (std::isnan(x) || x > hi) {
      ++h.overflow;
      continue;
    }
    if (x < lo) {
      ++h.underflow;
      continue;
    }
    auto k = static_cast<std::size_t>(std::min((x - lo) / width * static_cast<double>(bins),
                                               static_cast<double>(bins - 1)));
    // Snap to the stored edges so the half-open rule holds exactly.
    while (k > 0 && x < h.bins[k].start) --k;
    while (k + 1 < bins && x >= h.bins[k + 1].start) ++k;
    ++h.bins[k].count;
  }
  return h;
}

SimulationReport run_simulation(const SimulationConfig& cfg) {
  validate(cfg);

  SimulationReport report;
  report.config = cfg;
  report.note = std::string(kReproducibilityNote);
  const auto reps = static_cast<std::size_t>(cfg.reps);
  report.v_samples.resize(reps);
  report.modified_v_samples.resize(reps);

  const auto draw = [&](std::size_t i) {
    const auto t = generate_draw(cfg.rows, cfg.cols, cfg.n, cfg.generator, cfg.seed, i, cfg.reps);
    const double chi = chi_square(t, cfg.model);
    report.v_samples[i] = v_from_chi_square(chi, t.total(), t.rows(), t.cols());
    report.modified_v_samples[i] = modified_v_from_chi_square(chi, t.total(), t.rows(), t.cols());
  };

  unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    for (std::size_t i = 0; i < reps; ++i) draw(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < reps; i = next.fetch_add(1)) draw(i);
      });
    }
  }

  report.v = six_number_summary(report.v_samples);
  report.modified_v = six_number_summary(report.modified_v_samples);

  const ModelKind kind = kind_of(cfg.model);
  report.v_histogram =
      histogram(report.v_samples, cfg.bins, 0.0, histogram_upper(max_v(kind, cfg.rows, cfg.cols), report.v_samples));
  report.modified_v_histogram =
      histogram(report.modified_v_samples, cfg.bins, 0.0,
                histogram_upper(max_modified_v(kind, cfg.rows, cfg.cols), report.modified_v_samples));
  return report;
}

}  // namespace assoc
