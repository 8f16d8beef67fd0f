#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "assoc/rng.hpp"
#include "assoc/statistics.hpp"
#include "assoc/table.hpp"

namespace assoc {

enum class GeneratorKind {
  /// n independent draws over rc equiprobable cells.
  MultinomialUniform,
  /// A uniformly random weak composition of n into rc parts.
  UniformComposition,
};

/// A table generator. With `include_extremal` the last draw of a run is
/// replaced by extremal_table(r, c, n).
struct Generator {
  GeneratorKind inner = GeneratorKind::MultinomialUniform;
  bool include_extremal = false;
};

/// "multinomial", "composition" or "include-extremal" (the latter wraps
/// multinomial).
std::string generator_name(const Generator& g);
Generator parse_generator(std::string_view name);

ContingencyTable generate_table(std::size_t rows, std::size_t cols, Count n, GeneratorKind kind, Xoshiro256& rng);

/// Draw `index` of `reps` under `gen`, from the stream draw_stream(seed, index).
ContingencyTable generate_draw(std::size_t rows, std::size_t cols, Count n, const Generator& gen,
                               std::uint64_t seed, std::uint64_t index, std::uint64_t reps);

struct StatSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles interpolate linearly between order statistics at 1-based
/// position 1 + (k/4)(len - 1). Throws UsageError on an empty sample.
StatSummary six_number_summary(std::span<const double> values);

struct HistogramBin {
  double start = 0.0;
  double end = 0.0;
  std::uint64_t count = 0;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<HistogramBin> bins;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
};

/// Bins are [start, end) except the last, which is closed. Throws UsageError
/// when bins < 1 or lo >= hi.
Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

struct SimulationConfig {
  std::size_t rows = 2;
  std::size_t cols = 2;
  Count n = 200;
  std::uint64_t reps = 1000;
  std::uint64_t seed = 0;
  Generator generator;
  ExpectationModel model = FixedUniform{};
  std::size_t bins = 20;
  /// 0 = hardware concurrency. Does not affect results.
  unsigned threads = 1;
};

struct SimulationReport {
  SimulationConfig config;
  StatSummary v;
  StatSummary modified_v;
  std::vector<double> v_samples;
  std::vector<double> modified_v_samples;
  Histogram v_histogram;
  Histogram modified_v_histogram;
  std::string note;
};

/// Explains why only the maximum row of the published summary can be
/// reproduced; carried in every report.
extern const std::string_view kReproducibilityNote;

/// Throws UsageError on an invalid config.
SimulationReport run_simulation(const SimulationConfig& cfg);

}  // namespace assoc
