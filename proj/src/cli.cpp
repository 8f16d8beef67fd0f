#include "assoc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "assoc/bounds.hpp"
#include "assoc/error.hpp"
#include "assoc/serialize.hpp"
#include "assoc/simulation.hpp"
#include "assoc/statistics.hpp"
#include "assoc/svg.hpp"

namespace assoc::cli {

namespace {

constexpr int kSvgWidth = 640;
constexpr int kSvgHeight = 400;

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_all(in);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot read " + path);
  return read_all(file);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path);
  file << content;
  file.flush();
  if (!file) throw InputError("cannot write " + path);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string dims(std::size_t rows, std::size_t cols) { return std::to_string(rows) + "x" + std::to_string(cols); }

std::uint64_t resolve_budget(const std::optional<std::uint64_t>& flag) { return flag ? *flag : default_budget(); }

void print_grid(std::ostream& out, const ContingencyTable& t, const std::string& indent) {
  for (const auto& row : t.to_rows()) {
    out << indent;
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
}

// compute ------------------------------------------------------------------

struct ComputeArgs {
  std::string input;
  std::string model;
  std::string format = "text";
};

void run_compute(const ComputeArgs& a, std::istream& in, std::ostream& out) {
  const auto table = parse_table(read_input(a.input, in));

  std::vector<StatResult> results;
  if (a.model == "both") {
    results.push_back(compute_all(table, IndependenceMargins{}));
    results.push_back(compute_all(table, FixedUniform{}));
  } else {
    results.push_back(compute_all(table, parse_model(a.model)));
  }

  if (a.format == "json") {
    nlohmann::json j;
    if (results.size() == 1) {
      j = to_json(results.front());
    } else {
      for (const auto& r : results) j[std::string(model_name(r.model))] = to_json(r);
    }
    out << j.dump(2) << '\n';
    return;
  }

  constexpr std::size_t kLabel = 14;
  constexpr std::size_t kColumn = 16;
  out << pad("table", kLabel) << dims(table.rows(), table.cols()) << ", n=" << table.total() << '\n';
  const auto cells = [&](auto&& text_of) {
    for (std::size_t k = 0; k < results.size(); ++k) {
      const std::string text = text_of(results[k]);
      out << (k + 1 < results.size() ? pad(text, kColumn) : text);
    }
    out << '\n';
  };
  out << pad("model", kLabel);
  cells([](const StatResult& r) { return std::string(model_name(r.model)); });
  const auto line = [&](const char* label, double StatResult::*field) {
    out << pad(label, kLabel);
    cells([field](const StatResult& r) { return format_fixed4(r.*field); });
  };
  line("chi_square", &StatResult::chi_square);
  line("phi_square", &StatResult::phi_square);
  line("V", &StatResult::v);
  line("modified V", &StatResult::modified_v);
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Count n = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::string model;
  std::string out_path;
  std::string samples_path;
  std::string hist_csv_path;
  std::string hist_svg_path;
  std::size_t bins = 20;
};

void run_simulate(const SimulateArgs& a, std::ostream& out) {
  SimulationConfig cfg;
  cfg.rows = a.rows;
  cfg.cols = a.cols;
  cfg.n = a.n;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.generator = parse_generator(a.generator);
  cfg.model = parse_model(a.model);
  cfg.bins = a.bins;
  cfg.threads = 0;
  const auto report = run_simulation(cfg);

  if (!a.out_path.empty()) write_file(a.out_path, to_json(report).dump(2) + "\n");
  if (!a.samples_path.empty()) write_file(a.samples_path, samples_csv(report));
  if (!a.hist_csv_path.empty()) write_file(a.hist_csv_path, histogram_csv(report.v_histogram));
  if (!a.hist_svg_path.empty()) {
    const std::string title = "Cramer's V, " + dims(a.rows, a.cols) + " table, n=" + std::to_string(a.n) + ", " +
                              a.model + " model, " + std::to_string(a.reps) + " draws";
    write_file(a.hist_svg_path, render_histogram_svg(report.v_histogram.bins, kSvgWidth, kSvgHeight, title));
  }

  out << "simulate " << dims(a.rows, a.cols) << "  n=" << a.n << "  reps=" << a.reps << "  seed=" << a.seed
      << "  generator=" << generator_name(cfg.generator) << "  model=" << a.model << '\n';
  constexpr std::size_t kLabel = 10;
  constexpr std::size_t kColumn = 12;
  out << pad("", kLabel) << pad("V", kColumn) << "modified V\n";
  const auto row = [&](const char* label, double StatSummary::*field) {
    out << pad(label, kLabel) << pad(format_fixed4(report.v.*field), kColumn)
        << format_fixed4(report.modified_v.*field) << '\n';
  };
  row("Min.", &StatSummary::min);
  row("1st Qu.", &StatSummary::q1);
  row("Median", &StatSummary::median);
  row("Mean", &StatSummary::mean);
  row("3rd Qu.", &StatSummary::q3);
  row("Max.", &StatSummary::max);
  out << "note: " << report.note << '\n';
}

// maximize -----------------------------------------------------------------

struct MaximizeArgs {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Count n = 0;
  std::string model;
  std::optional<std::uint64_t> budget;
  std::string format = "text";
};

std::string verdict(double value, double claim, const std::string& claim_name) {
  const double tol = kTieTolerance * std::max(1.0, std::abs(claim));
  if (std::abs(value - claim) <= tol) return "matches " + claim_name;
  return (value < claim ? "below " : "exceeds ") + claim_name;
}

void run_maximize(const MaximizeArgs& a, std::ostream& out) {
  CertifyOptions options;
  options.budget = resolve_budget(a.budget);
  options.threads = 0;
  const auto model = parse_model(a.model);
  const auto cert = certify_max(a.rows, a.cols, a.n, model, options);

  if (a.format == "json") {
    out << to_json(cert).dump(2) << '\n';
    return;
  }
  const std::string claim_name = cert.model == ModelKind::Uniform ? "n(rc-1)" : "n(min(r,c)-1)";
  constexpr std::size_t kLabel = 22;
  out << "maximize " << dims(a.rows, a.cols) << "  n=" << a.n << "  model=" << a.model << '\n';
  out << pad("tables examined", kLabel) << cert.tables_examined << '\n';
  out << pad("max chi_square", kLabel) << format_fixed4(cert.max_chi_square) << '\n';
  out << pad("max V", kLabel)
      << (a.rows >= 2 && a.cols >= 2 ? format_fixed4(v_from_chi_square(cert.max_chi_square, a.n, a.rows, a.cols))
                                     : std::string("undefined"))
      << '\n';
  out << pad("max modified V", kLabel)
      << format_fixed4(modified_v_from_chi_square(cert.max_chi_square, a.n, a.rows, a.cols)) << '\n';
  out << "argmax\n";
  print_grid(out, cert.argmax_table, "  ");
  out << pad("claim " + claim_name, kLabel) << format_fixed4(cert.theoretical_claim) << '\n';
  out << pad("verdict", kLabel) << verdict(cert.max_chi_square, cert.theoretical_claim, claim_name) << '\n';
}

// scan-phi -----------------------------------------------------------------

struct ScanArgs {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Count grid = 0;
  std::optional<std::uint64_t> budget;
  std::string format = "text";
};

void run_scan(const ScanArgs& a, std::ostream& out) {
  const auto scan = sup_phi_square_scan(a.rows, a.cols, a.grid, resolve_budget(a.budget));
  if (a.format == "json") {
    out << to_json(scan).dump(2) << '\n';
    return;
  }
  constexpr std::size_t kLabel = 22;
  out << "scan-phi " << dims(a.rows, a.cols) << "  grid=" << a.grid << '\n';
  out << pad("grids examined", kLabel) << scan.grids_examined << '\n';
  out << pad("max phi_square", kLabel) << format_fixed4(scan.max_phi_square) << '\n';
  out << "argmax (counts / " << a.grid << ")\n";
  print_grid(out, scan.argmax_counts, "  ");
  out << pad("ceiling min(r,c)-1", kLabel) << format_fixed4(scan.ceiling_min_dim) << '\n';
  out << pad("ceiling rc-1", kLabel) << format_fixed4(scan.ceiling_cells) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contingency-table association statistics: chi-square, phi-square, Cramer's V and modified V",
               "assoc"};
  app.require_subcommand(1);

  const auto positive = CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max());
  const auto at_least_one = CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max());
  const auto positive_count = CLI::Range(Count{1}, std::numeric_limits<Count>::max());

  ComputeArgs compute;
  auto* compute_cmd = app.add_subcommand("compute", "Statistics of one table read from CSV");
  compute_cmd->add_option("--input", compute.input, "CSV file (default: stdin)");
  compute_cmd->add_option("--model", compute.model, "Expectation model")
      ->required()
      ->check(CLI::IsMember({"independence", "uniform", "both"}));
  compute_cmd->add_option("--format", compute.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo summary of V and modified V");
  sim_cmd->add_option("--rows", sim.rows)->required()->check(at_least_one);
  sim_cmd->add_option("--cols", sim.cols)->required()->check(at_least_one);
  sim_cmd->add_option("--n", sim.n)->required()->check(positive_count);
  sim_cmd->add_option("--reps", sim.reps)->required()->check(positive);
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--generator", sim.generator)
      ->required()
      ->check(CLI::IsMember({"multinomial", "composition", "include-extremal"}));
  sim_cmd->add_option("--model", sim.model)->required()->check(CLI::IsMember({"independence", "uniform"}));
  sim_cmd->add_option("--out", sim.out_path, "Report JSON path");
  sim_cmd->add_option("--samples", sim.samples_path, "Per-draw CSV path");
  sim_cmd->add_option("--hist-csv", sim.hist_csv_path, "Histogram CSV path (V)");
  sim_cmd->add_option("--hist-svg", sim.hist_svg_path, "Histogram SVG path (V)");
  sim_cmd->add_option("--bins", sim.bins, "Histogram bins")->check(at_least_one);

  MaximizeArgs max;
  auto* max_cmd = app.add_subcommand("maximize", "Exhaustive maximum of chi-square over all tables with total n");
  max_cmd->add_option("--rows", max.rows)->required()->check(at_least_one);
  max_cmd->add_option("--cols", max.cols)->required()->check(at_least_one);
  max_cmd->add_option("--n", max.n)->required()->check(positive_count);
  max_cmd->add_option("--model", max.model)->required()->check(CLI::IsMember({"independence", "uniform"}));
  max_cmd->add_option("--budget", max.budget, "Maximum number of tables to enumerate")->check(positive);
  max_cmd->add_option("--format", max.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan-phi", "Maximum phi-square over a probability grid with step 1/G");
  scan_cmd->add_option("--rows", scan.rows)->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  scan_cmd->add_option("--cols", scan.cols)->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  scan_cmd->add_option("--grid", scan.grid)->required()->check(CLI::Range(Count{2}, std::numeric_limits<Count>::max()));
  scan_cmd->add_option("--budget", scan.budget, "Maximum number of grids to enumerate")->check(positive);
  scan_cmd->add_option("--format", scan.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::vector<const char*> argv{"assoc"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "assoc: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*compute_cmd) run_compute(compute, in, out);
    if (*sim_cmd) run_simulate(sim, out);
    if (*max_cmd) run_maximize(max, out);
    if (*scan_cmd) run_scan(scan, out);
  } catch (const BudgetExceeded& e) {
    err << "assoc: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const UsageError& e) {
    err << "assoc: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "assoc: " << e.what() << '\n';
    return kInputError;
  }
  return kSuccess;
}

}  // namespace assoc::cli
