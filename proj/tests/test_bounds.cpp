#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "assoc/bounds.hpp"
#include "assoc/error.hpp"
#include "oracles.hpp"

using namespace assoc;

namespace {

const ExpectationModel kIndependence = IndependenceMargins{};
const ExpectationModel kUniform = FixedUniform{};

std::vector<Count> flatten(const oracle::Grid& g) {
  std::vector<Count> out;
  for (const auto& row : g) out.insert(out.end(), row.begin(), row.end());
  return out;
}

// Brute-force maximum over oracle::all_tables; ties go to the
// lexicographically greatest table.
std::pair<double, oracle::Grid> brute_max(std::size_t r, std::size_t c, Count n, bool uniform) {
  double best = -1.0;
  oracle::Grid arg;
  for (const auto& g : oracle::all_tables(r, c, n)) {
    const double chi = uniform ? oracle::chi_square_uniform(g) : oracle::chi_square_independence(g);
    const bool tie = best >= 0.0 && std::abs(chi - best) <= 1e-9 * best;
    if ((chi > best && !tie) || (tie && flatten(g) > flatten(arg))) {
      if (!tie) best = chi;
      arg = g;
    }
  }
  return {best, arg};
}

}  // namespace

TEST_CASE("composition_count matches Pascal's triangle") {
  for (unsigned parts = 1; parts <= 9; ++parts)
    for (unsigned n = 0; n <= 12; ++n) CHECK(composition_count(n, parts) == oracle::binomial(n + parts - 1, parts - 1));
  CHECK(composition_count(4, 4) == 35);
  CHECK(composition_count(200, 9) == oracle::binomial(208, 8));
  CHECK(composition_count(1'000'000, 1000) == UINT64_MAX);
}

TEST_CASE("enumerate_tables visits each table once in decreasing lexicographic order") {
  std::vector<std::vector<Count>> seen;
  const auto visited =
      enumerate_tables(2, 2, 4, [&](const ContingencyTable& t) { seen.emplace_back(t.counts().begin(), t.counts().end()); });
  CHECK(visited == 35);
  CHECK(seen.size() == 35);
  CHECK(seen.front() == std::vector<Count>{4, 0, 0, 0});
  CHECK(seen.back() == std::vector<Count>{0, 0, 0, 4});
  CHECK(std::adjacent_find(seen.begin(), seen.end(), [](const auto& a, const auto& b) { return !(b < a); }) ==
        seen.end());

  auto expected = oracle::all_tables(2, 2, 4);
  std::vector<std::vector<Count>> oracle_flat;
  for (const auto& g : expected) oracle_flat.push_back(flatten(g));
  std::sort(oracle_flat.begin(), oracle_flat.end());
  std::sort(seen.begin(), seen.end());
  CHECK(seen == oracle_flat);
}

TEST_CASE("enumerate_tables edge cases") {
  std::vector<ContingencyTable> seen;
  CHECK(enumerate_tables(1, 1, 7, [&](const ContingencyTable& t) { seen.push_back(t); }) == 1);
  CHECK(seen.front().at(0, 0) == 7);

  seen.clear();
  CHECK(enumerate_tables(2, 2, 0, [&](const ContingencyTable& t) { seen.push_back(t); }) == 1);
  CHECK(seen.front().total() == 0);

  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t c = 1; c <= 3; ++c)
      for (Count n = 0; n <= 5; ++n)
        CHECK(enumerate_tables(r, c, n, [](const ContingencyTable&) {}) ==
              oracle::binomial(static_cast<unsigned>(n + r * c - 1), static_cast<unsigned>(r * c - 1)));
}

TEST_CASE("budget guard refuses with the exact count") {
  try {
    enumerate_tables(2, 2, 4, [](const ContingencyTable&) { FAIL("visited under refusal"); }, 34);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.required() == 35);
    CHECK(e.budget() == 34);
  }
  CHECK_THROWS_AS(certify_max(3, 3, 200, kUniform), BudgetExceeded);
  try {
    certify_max(3, 3, 200, kUniform);
  } catch (const BudgetExceeded& e) {
    CHECK(e.required() == oracle::binomial(208, 8));
  }
  CHECK_THROWS_AS(sup_phi_square_scan(3, 3, 40, 1000), BudgetExceeded);
}

TEST_CASE("ASSOC_BUDGET overrides the default budget") {
  ::unsetenv("ASSOC_BUDGET");
  CHECK(default_budget() == kDefaultBudget);
  ::setenv("ASSOC_BUDGET", "12345", 1);
  CHECK(default_budget() == 12345);
  ::setenv("ASSOC_BUDGET", "lots", 1);
  CHECK_THROWS_AS(default_budget(), UsageError);
  ::unsetenv("ASSOC_BUDGET");
}

TEST_CASE("certify_max examples") {
  auto cert = certify_max(2, 2, 4, kUniform);
  CHECK(cert.max_chi_square == 12.0);
  CHECK(cert.argmax_table.to_rows() == std::vector<std::vector<Count>>{{4, 0}, {0, 0}});
  CHECK(cert.tables_examined == 35);
  CHECK(cert.theoretical_claim == 12.0);

  cert = certify_max(2, 2, 4, kIndependence);
  CHECK(cert.max_chi_square == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(cert.theoretical_claim == 4.0);
  CHECK(chi_square(ContingencyTable::from_rows({{2, 0}, {0, 2}}), kIndependence) ==
        doctest::Approx(cert.max_chi_square).epsilon(1e-12));

  cert = certify_max(3, 3, 2, kUniform);
  CHECK(cert.max_chi_square == 16.0);
  CHECK(cert.tables_examined == 45);
  CHECK(cert.argmax_table.to_rows() == std::vector<std::vector<Count>>{{2, 0, 0}, {0, 0, 0}, {0, 0, 0}});
}

TEST_CASE("certify_max agrees with brute force") {
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t c = 1; c <= 3; ++c) {
      if (r * c < 2) continue;
      for (Count n = 1; n <= 5; ++n)
        for (bool uniform : {true, false}) {
          const auto [best, arg] = brute_max(r, c, n, uniform);
          const auto cert = certify_max(r, c, n, uniform ? kUniform : kIndependence);
          CHECK(oracle::rel_close(cert.max_chi_square, best, 1e-9));
          CHECK(cert.argmax_table.to_rows() == arg);
          CHECK(chi_square(cert.argmax_table, uniform ? kUniform : kIndependence) == cert.max_chi_square);
          CHECK(cert.argmax_table.total() == n);
        }
    }
}

TEST_CASE("parallel and sequential certificates are identical") {
  for (auto [r, c, n] : {std::tuple{2, 2, 9}, {2, 3, 8}, {3, 3, 6}, {3, 2, 7}, {4, 2, 5}})
    for (const auto& m : {kUniform, kIndependence}) {
      const auto seq = certify_max(r, c, n, m, {kDefaultBudget, 1});
      for (unsigned threads : {2u, 3u, 8u, 0u}) {
        const auto par = certify_max(r, c, n, m, {kDefaultBudget, threads});
        CHECK(par.max_chi_square == seq.max_chi_square);
        CHECK(par.argmax_table == seq.argmax_table);
        CHECK(par.tables_examined == seq.tables_examined);
      }
    }
}

TEST_CASE("certify_max rejects unsupported requests") {
  CHECK_THROWS_AS(certify_max(2, 2, 4, FixedGiven{2, 2, {1, 1, 1, 1}}), UsageError);
  CHECK_THROWS_AS(certify_max(1, 1, 4, kUniform), UsageError);
  CHECK_THROWS_AS(certify_max(2, 2, 0, kUniform), UsageError);
}

TEST_CASE("extremal_table") {
  auto t = extremal_table(2, 2, 200);
  CHECK(t.to_rows() == std::vector<std::vector<Count>>{{200, 0}, {0, 0}});
  CHECK(chi_square(t, kUniform) == 600.0);

  t = extremal_table(3, 3, 200);
  CHECK(chi_square(t, kUniform) == 1600.0);
  CHECK(cramers_v(t, kUniform) == 2.0);
  CHECK(modified_v(t, kUniform) == 1.0);

  t = extremal_table(1, 1, 5);
  CHECK(t.at(0, 0) == 5);
  CHECK(chi_square(t, kUniform) == 0.0);
}

TEST_CASE("sup_phi_square_scan") {
  auto scan = sup_phi_square_scan(2, 2, 4);
  double brute = 0.0;
  for (const auto& g : oracle::all_tables(2, 2, 4)) {
    std::vector<std::vector<double>> p(2, std::vector<double>(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) p[i][j] = static_cast<double>(g[i][j]) / 4.0;
    brute = std::max(brute, oracle::phi_square(p));
  }
  CHECK(scan.grids_examined == 35);
  CHECK(scan.max_phi_square == doctest::Approx(brute).epsilon(1e-12));
  CHECK(scan.ceiling_min_dim == 1.0);
  CHECK(scan.ceiling_cells == 3.0);

  scan = sup_phi_square_scan(2, 2, 2);
  CHECK(scan.max_phi_square >= 1.0);
  CHECK(scan.max_phi_square == doctest::Approx(1.0).epsilon(1e-12));

  scan = sup_phi_square_scan(2, 3, 3);
  CHECK(scan.max_phi_square <= 5.0);

  CHECK_THROWS_AS(sup_phi_square_scan(1, 3, 3), UsageError);
  CHECK_THROWS_AS(sup_phi_square_scan(2, 3, 1), UsageError);
}

TEST_CASE("property: scan stays below rc - 1 and is nondecreasing for 2x2 and 2x3") {
  for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
    double previous = 0.0;
    for (Count g = 2; g <= (r * c > 6 ? 6 : 12); ++g) {
      const auto scan = sup_phi_square_scan(r, c, g);
      CHECK(scan.max_phi_square <= scan.ceiling_cells);
      if (r * c <= 6) CHECK(scan.max_phi_square >= previous - 1e-12);
      previous = scan.max_phi_square;
    }
  }
}
