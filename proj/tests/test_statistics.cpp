#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "assoc/error.hpp"
#include "assoc/statistics.hpp"
#include "oracles.hpp"

using namespace assoc;

namespace {

ContingencyTable table(std::initializer_list<std::vector<Count>> rows) { return ContingencyTable::from_rows(rows); }

ContingencyTable one_hot(std::size_t r, std::size_t c, Count n) {
  std::vector<Count> counts(r * c, 0);
  counts[0] = n;
  return ContingencyTable(r, c, counts);
}

const ExpectationModel kIndependence = IndependenceMargins{};
const ExpectationModel kUniform = FixedUniform{};

}  // namespace

TEST_CASE("expected_counts") {
  for (double e : expected_counts(table({{10, 0}, {0, 10}}), kIndependence)) CHECK(e == 5.0);
  for (double e : expected_counts(table({{200, 0}, {0, 0}}), kUniform)) CHECK(e == 50.0);

  const auto e = expected_counts(table({{2, 0, 0}, {0, 2, 0}}), kIndependence);
  CHECK(e[2] == 0.0);
  CHECK(e[5] == 0.0);
  CHECK(std::accumulate(e.begin(), e.end(), 0.0) == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(expected_counts(table({{0, 0}, {0, 0}}), kUniform), InputError);
}

TEST_CASE("chi_square examples agree with the brute-force definition") {
  const auto extremal = table({{200, 0}, {0, 0}});
  CHECK(chi_square(extremal, kUniform) == 600.0);
  CHECK(oracle::chi_square_uniform({{200, 0}, {0, 0}}) == doctest::Approx(600.0).epsilon(1e-15));

  CHECK(chi_square(table({{50, 50}, {50, 50}}), kUniform) == 0.0);

  CHECK(chi_square(table({{10, 0}, {0, 10}}), kIndependence) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(oracle::chi_square_independence({{10, 0}, {0, 10}}) == doctest::Approx(20.0).epsilon(1e-15));
}

TEST_CASE("chi_square matches the oracle on random tables") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = oracle::random_table(gen, dim(gen), dim(gen), trial % 3 == 0 ? 3 : 60);
    const auto t = ContingencyTable::from_rows(g);
    CHECK(oracle::rel_close(chi_square(t, kIndependence), oracle::chi_square_independence(g), 1e-12));
    CHECK(oracle::rel_close(chi_square(t, kUniform), oracle::chi_square_uniform(g), 1e-12));
  }
}

TEST_CASE("FixedGiven expectation") {
  const auto t = table({{6, 2}, {1, 1}});
  const ExpectationModel given = FixedGiven{2, 2, {4.0, 3.0, 2.0, 1.0}};
  // (2^2/4) + (1/3) + (1/2) + 0
  CHECK(chi_square(t, given) == doctest::Approx(1.0 + 1.0 / 3.0 + 0.5).epsilon(1e-15));
  CHECK(expected_counts(t, given) == std::vector<double>{4.0, 3.0, 2.0, 1.0});

  CHECK_THROWS_AS(chi_square(t, FixedGiven{1, 4, {4.0, 3.0, 2.0, 1.0}}), InputError);
  CHECK_THROWS_AS(chi_square(t, FixedGiven{2, 2, {5.0, 3.0, 2.0, 0.0}}), InputError);
  CHECK_THROWS_AS(chi_square(t, FixedGiven{2, 2, {5.0, 3.0, 2.0, -0.5}}), InputError);
  CHECK_THROWS_AS(chi_square(t, FixedGiven{2, 2, {4.0, 3.0, 2.0, 2.0}}), InputError);
  CHECK(kind_of(given) == ModelKind::Given);
}

TEST_CASE("mean_square_contingency") {
  CHECK(mean_square_contingency(ProbabilityTable(2, 2, {0.5, 0, 0, 0.5})) == 1.0);
  CHECK(mean_square_contingency(ProbabilityTable(2, 2, {0.25, 0.25, 0.25, 0.25})) == 0.0);
  CHECK(oracle::phi_square({{0.5, 0}, {0, 0.5}}) == doctest::Approx(1.0).epsilon(1e-15));
  // Zero margins contribute nothing.
  CHECK(mean_square_contingency(ProbabilityTable(2, 2, {1, 0, 0, 0})) == 0.0);
}

TEST_CASE("cramers_v and modified_v") {
  CHECK(cramers_v(table({{200, 0}, {0, 0}}), kUniform) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(cramers_v(one_hot(3, 3, 200), kUniform) == 2.0);
  CHECK(cramers_v(table({{10, 0}, {0, 10}}), kIndependence) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(modified_v(table({{200, 0}, {0, 0}}), kUniform) == 1.0);
  CHECK(modified_v(one_hot(3, 3, 200), kUniform) == 1.0);
  CHECK(modified_v(table({{50, 50}, {50, 50}}), kUniform) == 0.0);

  CHECK_THROWS_AS(cramers_v(table({{1, 2, 3}}), kUniform), DegenerateError);
  CHECK_THROWS_AS(cramers_v(table({{1}, {2}}), kIndependence), DegenerateError);
  CHECK_NOTHROW(modified_v(table({{1, 2, 3}}), kUniform));
  CHECK_THROWS_AS(modified_v(table({{4}}), kUniform), DegenerateError);
  CHECK_THROWS_AS(cramers_v(table({{0, 0}, {0, 0}}), kUniform), InputError);
}

TEST_CASE("compute_all") {
  auto r = compute_all(table({{10, 0}, {0, 10}}), kIndependence);
  CHECK(r.chi_square == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(r.phi_square == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.v == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.modified_v == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.model == ModelKind::Independence);

  r = compute_all(table({{50, 50}, {50, 50}}), kUniform);
  CHECK(r.chi_square == 0.0);
  CHECK(r.v == 0.0);
  CHECK(r.modified_v == 0.0);

  r = compute_all(table({{200, 0}, {0, 0}}), kUniform);
  CHECK(r.chi_square == 600.0);
  CHECK(r.phi_square == 3.0);
  CHECK(r.v == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.modified_v == 1.0);
  CHECK(r.rows == 2);
  CHECK(r.n == 200);

  CHECK_THROWS_AS(compute_all(table({{3, 4}}), kUniform), DegenerateError);
}

TEST_CASE("model names") {
  CHECK(model_name(kind_of(parse_model("independence"))) == "independence");
  CHECK(model_name(kind_of(parse_model("uniform"))) == "uniform");
  CHECK_THROWS_AS(parse_model("both"), UsageError);
}

TEST_CASE("property: identities, invariances and ranges on random tables") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> dim(2, 5);
  std::uniform_int_distribution<Count> scale(2, 7);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = dim(gen), c = dim(gen);
    auto g = oracle::random_table(gen, r, c, trial % 4 == 0 ? 2 : 40);
    const auto t = ContingencyTable::from_rows(g);
    const double q = static_cast<double>(std::min(r, c) - 1);
    const double cells = static_cast<double>(r * c - 1);

    for (const auto& m : {kIndependence, kUniform}) {
      const auto base = compute_all(t, m);
      CHECK(oracle::rel_close(base.phi_square, base.chi_square / static_cast<double>(t.total()), 1e-12));
      CHECK(oracle::rel_close(base.modified_v, base.v * std::sqrt(q / cells), 1e-12));

      auto same = [&](const ContingencyTable& other) {
        const auto o = compute_all(other, m);
        CHECK(oracle::rel_close(o.chi_square, base.chi_square, 1e-12));
        CHECK(oracle::rel_close(o.v, base.v, 1e-12));
        CHECK(oracle::rel_close(o.modified_v, base.modified_v, 1e-12));
      };

      auto rows = g;
      std::shuffle(rows.begin(), rows.end(), gen);
      same(ContingencyTable::from_rows(rows));

      std::vector<std::size_t> perm(c);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), gen);
      auto cols = g;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) cols[i][j] = g[i][perm[j]];
      same(ContingencyTable::from_rows(cols));

      same(t.transposed());

      const Count k = scale(gen);
      auto scaled = g;
      for (auto& row : scaled)
        for (auto& x : row) x *= k;
      const auto s = compute_all(ContingencyTable::from_rows(scaled), m);
      CHECK(oracle::rel_close(s.v, base.v, 1e-12));
      CHECK(oracle::rel_close(s.modified_v, base.modified_v, 1e-12));
      CHECK(oracle::rel_close(s.chi_square, static_cast<double>(k) * base.chi_square, 1e-12));

      CHECK(base.modified_v >= 0.0);
    }

    const auto ind = compute_all(t, kIndependence);
    CHECK(ind.v <= 1.0 + 1e-12);
    const auto uni = compute_all(t, kUniform);
    CHECK(uni.modified_v <= 1.0 + 1e-12);
    CHECK(uni.v <= max_v(ModelKind::Uniform, r, c) * (1.0 + 1e-12));

    const double phi = mean_square_contingency(to_probability(t));
    const double chi_n = ind.chi_square / static_cast<double>(t.total());
    if (chi_n == 0.0) {
      // Exactly independent table: the probability route keeps only the
      // rounding residue of x/n against (r/n)(c/n).
      CHECK(phi < 1e-28);
    } else {
      CHECK(oracle::rel_close(phi, chi_n, 1e-12));
    }
  }
}
