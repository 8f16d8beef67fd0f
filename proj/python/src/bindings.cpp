#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "assoc/bounds.hpp"
#include "assoc/error.hpp"
#include "assoc/serialize.hpp"
#include "assoc/simulation.hpp"
#include "assoc/statistics.hpp"
#include "assoc/table.hpp"

namespace py = pybind11;
using namespace assoc;

namespace {

using Grid = std::vector<std::vector<double>>;

template <class T>
std::vector<std::vector<T>> reshape(std::span<const T> flat, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<T>> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i].assign(flat.begin() + i * cols, flat.begin() + (i + 1) * cols);
  return out;
}

// A model is "independence", "uniform", or a nested list of expected counts.
ExpectationModel to_model(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return parse_model(obj.cast<std::string>());
  const auto grid = obj.cast<Grid>();
  FixedGiven given;
  given.rows = grid.size();
  given.cols = grid.empty() ? 0 : grid.front().size();
  for (const auto& row : grid) {
    if (row.size() != given.cols) throw InputError("expected-count grid has ragged rows");
    given.expected.insert(given.expected.end(), row.begin(), row.end());
  }
  return given;
}

std::string dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of assocstat";

  auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", error.ptr());
  py::register_exception<UsageError>(m, "UsageError", error.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());

  py::class_<ContingencyTable>(m, "ContingencyTable")
      .def(py::init(&ContingencyTable::from_rows), py::arg("counts"))
      .def_property_readonly("rows", &ContingencyTable::rows)
      .def_property_readonly("cols", &ContingencyTable::cols)
      .def_property_readonly("total", &ContingencyTable::total)
      .def_property_readonly("counts", &ContingencyTable::to_rows)
      .def_property_readonly("row_sums",
                             [](const ContingencyTable& t) { return std::vector<Count>(t.row_sums().begin(), t.row_sums().end()); })
      .def_property_readonly("col_sums",
                             [](const ContingencyTable& t) { return std::vector<Count>(t.col_sums().begin(), t.col_sums().end()); })
      .def("transposed", &ContingencyTable::transposed)
      .def("to_csv", [](const ContingencyTable& t) { return to_csv(t); })
      .def("to_json", [](const ContingencyTable& t) { return dump(to_json(t)); })
      .def(py::self == py::self)
      .def("__repr__", [](const ContingencyTable& t) { return "ContingencyTable(" + dump(to_json(t).at("counts")) + ")"; });

  py::class_<ProbabilityTable>(m, "ProbabilityTable")
      .def(py::init([](const Grid& grid) {
             if (grid.empty() || grid.front().empty()) throw InputError("probability table must be nonempty");
             std::vector<double> flat;
             for (const auto& row : grid) {
               if (row.size() != grid.front().size()) throw InputError("probability grid has ragged rows");
               flat.insert(flat.end(), row.begin(), row.end());
             }
             return ProbabilityTable(grid.size(), grid.front().size(), std::move(flat));
           }),
           py::arg("probs"))
      .def_property_readonly("probs", [](const ProbabilityTable& p) { return reshape(p.probs(), p.rows(), p.cols()); })
      .def_property_readonly("row_margins",
                             [](const ProbabilityTable& p) { return std::vector<double>(p.row_margins().begin(), p.row_margins().end()); })
      .def_property_readonly("col_margins",
                             [](const ProbabilityTable& p) { return std::vector<double>(p.col_margins().begin(), p.col_margins().end()); });

  py::class_<StatResult>(m, "StatResult")
      .def_readonly("chi_square", &StatResult::chi_square)
      .def_readonly("phi_square", &StatResult::phi_square)
      .def_readonly("v", &StatResult::v)
      .def_readonly("modified_v", &StatResult::modified_v)
      .def_readonly("rows", &StatResult::rows)
      .def_readonly("cols", &StatResult::cols)
      .def_readonly("n", &StatResult::n)
      .def_property_readonly("model", [](const StatResult& r) { return std::string(model_name(r.model)); })
      .def("to_json", [](const StatResult& r) { return dump(to_json(r)); });

  py::class_<MaxCertificate>(m, "MaxCertificate")
      .def_readonly("rows", &MaxCertificate::rows)
      .def_readonly("cols", &MaxCertificate::cols)
      .def_readonly("n", &MaxCertificate::n)
      .def_readonly("max_chi_square", &MaxCertificate::max_chi_square)
      .def_readonly("argmax_table", &MaxCertificate::argmax_table)
      .def_readonly("tables_examined", &MaxCertificate::tables_examined)
      .def_readonly("theoretical_claim", &MaxCertificate::theoretical_claim)
      .def_property_readonly("model", [](const MaxCertificate& c) { return std::string(model_name(c.model)); })
      .def("to_json", [](const MaxCertificate& c) { return dump(to_json(c)); });

  py::class_<PhiScan>(m, "PhiScan")
      .def_readonly("rows", &PhiScan::rows)
      .def_readonly("cols", &PhiScan::cols)
      .def_readonly("grid", &PhiScan::grid)
      .def_readonly("max_phi_square", &PhiScan::max_phi_square)
      .def_readonly("argmax_counts", &PhiScan::argmax_counts)
      .def_readonly("grids_examined", &PhiScan::grids_examined)
      .def_readonly("ceiling_min_dim", &PhiScan::ceiling_min_dim)
      .def_readonly("ceiling_cells", &PhiScan::ceiling_cells)
      .def("to_json", [](const PhiScan& s) { return dump(to_json(s)); });

  py::class_<StatSummary>(m, "StatSummary")
      .def_readonly("min", &StatSummary::min)
      .def_readonly("q1", &StatSummary::q1)
      .def_readonly("median", &StatSummary::median)
      .def_readonly("mean", &StatSummary::mean)
      .def_readonly("q3", &StatSummary::q3)
      .def_readonly("max", &StatSummary::max);

  py::class_<Histogram>(m, "Histogram")
      .def_readonly("lo", &Histogram::lo)
      .def_readonly("hi", &Histogram::hi)
      .def_readonly("underflow", &Histogram::underflow)
      .def_readonly("overflow", &Histogram::overflow)
      .def_property_readonly("bins", [](const Histogram& h) {
        std::vector<std::tuple<double, double, std::uint64_t>> out;
        for (const auto& b : h.bins) out.emplace_back(b.start, b.end, b.count);
        return out;
      });

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("v", &SimulationReport::v)
      .def_readonly("modified_v", &SimulationReport::modified_v)
      .def_readonly("v_samples", &SimulationReport::v_samples)
      .def_readonly("modified_v_samples", &SimulationReport::modified_v_samples)
      .def_readonly("v_histogram", &SimulationReport::v_histogram)
      .def_readonly("modified_v_histogram", &SimulationReport::modified_v_histogram)
      .def_readonly("note", &SimulationReport::note)
      .def("to_json", [](const SimulationReport& r, bool samples) { return dump(to_json(r, samples)); },
           py::arg("include_samples") = false)
      .def("samples_csv", [](const SimulationReport& r) { return samples_csv(r); });

  m.def("parse_table", [](const std::string& text) { return parse_table(text); }, py::arg("text"));
  m.def("to_probability", &to_probability, py::arg("table"));

  m.def("expected_counts",
        [](const ContingencyTable& t, const py::object& model) {
          const auto e = expected_counts(t, to_model(model));
          return reshape(std::span<const double>(e), t.rows(), t.cols());
        },
        py::arg("table"), py::arg("model"));
  m.def("chi_square", [](const ContingencyTable& t, const py::object& model) { return chi_square(t, to_model(model)); },
        py::arg("table"), py::arg("model"));
  m.def("mean_square_contingency", &mean_square_contingency, py::arg("probs"));
  m.def("cramers_v", [](const ContingencyTable& t, const py::object& model) { return cramers_v(t, to_model(model)); },
        py::arg("table"), py::arg("model"));
  m.def("modified_v", [](const ContingencyTable& t, const py::object& model) { return modified_v(t, to_model(model)); },
        py::arg("table"), py::arg("model"));
  m.def("compute_all", [](const ContingencyTable& t, const py::object& model) { return compute_all(t, to_model(model)); },
        py::arg("table"), py::arg("model"));

  m.def("composition_count", &composition_count, py::arg("n"), py::arg("parts"));
  m.def("enumerate_tables",
        [](std::size_t rows, std::size_t cols, Count n, const std::function<void(const ContingencyTable&)>& visitor,
           std::optional<std::uint64_t> budget) {
          return enumerate_tables(rows, cols, n, visitor ? visitor : [](const ContingencyTable&) {},
                                  budget ? *budget : default_budget());
        },
        py::arg("rows"), py::arg("cols"), py::arg("n"), py::arg("visitor") = nullptr, py::arg("budget") = py::none());
  m.def("certify_max",
        [](std::size_t rows, std::size_t cols, Count n, const py::object& model, std::optional<std::uint64_t> budget,
           unsigned threads) {
          const auto m = to_model(model);
          CertifyOptions options{budget ? *budget : default_budget(), threads};
          py::gil_scoped_release release;
          return certify_max(rows, cols, n, m, options);
        },
        py::arg("rows"), py::arg("cols"), py::arg("n"), py::arg("model"), py::arg("budget") = py::none(),
        py::arg("threads") = 1);
  m.def("extremal_table", &extremal_table, py::arg("rows"), py::arg("cols"), py::arg("n"));
  m.def("sup_phi_square_scan",
        [](std::size_t rows, std::size_t cols, Count grid, std::optional<std::uint64_t> budget) {
          return sup_phi_square_scan(rows, cols, grid, budget ? *budget : default_budget());
        },
        py::arg("rows"), py::arg("cols"), py::arg("grid"), py::arg("budget") = py::none());

  m.def("generate_table",
        [](std::size_t rows, std::size_t cols, Count n, const std::string& generator, std::uint64_t seed,
           std::uint64_t index, std::uint64_t reps) {
          return generate_draw(rows, cols, n, parse_generator(generator), seed, index, reps);
        },
        py::arg("rows"), py::arg("cols"), py::arg("n"), py::arg("generator"), py::arg("seed"), py::arg("index") = 0,
        py::arg("reps") = 1);
  m.def("six_number_summary", [](const std::vector<double>& v) { return six_number_summary(v); }, py::arg("values"));
  m.def("histogram",
        [](const std::vector<double>& v, std::size_t bins, double lo, double hi) { return histogram(v, bins, lo, hi); },
        py::arg("values"), py::arg("bins"), py::arg("lo"), py::arg("hi"));
  m.def("run_simulation",
        [](std::size_t rows, std::size_t cols, Count n, std::uint64_t reps, std::uint64_t seed,
           const std::string& generator, const py::object& model, std::size_t bins, unsigned threads) {
          SimulationConfig cfg;
          cfg.rows = rows;
          cfg.cols = cols;
          cfg.n = n;
          cfg.reps = reps;
          cfg.seed = seed;
          cfg.generator = parse_generator(generator);
          cfg.model = to_model(model);
          cfg.bins = bins;
          cfg.threads = threads;
          py::gil_scoped_release release;
          return run_simulation(cfg);
        },
        py::arg("rows"), py::arg("cols"), py::arg("n"), py::arg("reps"), py::arg("seed"), py::arg("generator"),
        py::arg("model"), py::arg("bins") = 20, py::arg("threads") = 1);
}
