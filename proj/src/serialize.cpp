#include "assoc/serialize.hpp"

#include <array>
#include <charconv>

#include "assoc/error.hpp"

namespace assoc {

using nlohmann::json;

namespace {

json grid_json(const ContingencyTable& t) { return t.to_rows(); }

}  // namespace

json to_json(const ContingencyTable& t) { return json{{"counts", grid_json(t)}, {"n", t.total()}}; }

ContingencyTable table_from_json(const json& j) {
  try {
    auto grid = j.at("counts").get<std::vector<std::vector<Count>>>();
    auto t = ContingencyTable::from_rows(grid);
    if (j.contains("n") && j.at("n").get<Count>() != t.total()) {
      throw InputError("\"n\" does not match the sum of \"counts\"");
    }
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed table JSON: ") + e.what());
  }
}

json to_json(const StatResult& r) {
  return json{{"chi_square", r.chi_square},
              {"phi_square", r.phi_square},
              {"v", r.v},
              {"modified_v", r.modified_v},
              {"model", model_name(r.model)},
              {"rows", r.rows},
              {"cols", r.cols},
              {"n", r.n}};
}

json to_json(const MaxCertificate& c) {
  return json{{"rows", c.rows},
              {"cols", c.cols},
              {"n", c.n},
              {"model", model_name(c.model)},
              {"max_chi_square", c.max_chi_square},
              {"argmax", grid_json(c.argmax_table)},
              {"tables_examined", c.tables_examined},
              {"theoretical_claim", c.theoretical_claim}};
}

json to_json(const PhiScan& s) {
  json probs = json::array();
  const auto g = static_cast<double>(s.grid);
  for (const auto& row : s.argmax_counts.to_rows()) {
    json out = json::array();
    for (Count x : row) out.push_back(static_cast<double>(x) / g);
    probs.push_back(std::move(out));
  }
  return json{{"rows", s.rows},
              {"cols", s.cols},
              {"grid", s.grid},
              {"max_phi_square", s.max_phi_square},
              {"argmax", std::move(probs)},
              {"grids_examined", s.grids_examined},
              {"ceiling_min_dim", s.ceiling_min_dim},
              {"ceiling_cells", s.ceiling_cells}};
}

json to_json(const StatSummary& s) {
  return json{{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"mean", s.mean}, {"q3", s.q3}, {"max", s.max}};
}

json to_json(const Histogram& h) {
  json bins = json::array();
  for (const auto& b : h.bins) bins.push_back(json{{"bin_start", b.start}, {"bin_end", b.end}, {"count", b.count}});
  return json{{"lo", h.lo}, {"hi", h.hi}, {"bins", std::move(bins)}, {"underflow", h.underflow}, {"overflow", h.overflow}};
}

json to_json(const SimulationReport& r, bool include_samples) {
  const auto& c = r.config;
  json out{
      {"config",
       {{"rows", c.rows},
        {"cols", c.cols},
        {"n", c.n},
        {"reps", c.reps},
        {"seed", c.seed},
        {"generator", generator_name(c.generator)},
        {"model", model_name(kind_of(c.model))},
        {"bins", c.bins}}},
      {"summary", {{"v", to_json(r.v)}, {"modified_v", to_json(r.modified_v)}}},
      {"histogram", {{"v", to_json(r.v_histogram)}, {"modified_v", to_json(r.modified_v_histogram)}}},
      {"note", r.note},
  };
  if (include_samples) out["samples"] = json{{"v", r.v_samples}, {"modified_v", r.modified_v_samples}};
  return out;
}

std::string format_exact(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_fixed4(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, 4);
  return std::string(buf.data(), ptr);
}

std::string samples_csv(const SimulationReport& r) {
  std::string out = "draw,v,modified_v\n";
  for (std::size_t i = 0; i < r.v_samples.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_exact(r.v_samples[i]);
    out += ',';
    out += format_exact(r.modified_v_samples[i]);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_start,bin_end,count\n";
  for (const auto& b : h.bins) {
    out += format_exact(b.start);
    out += ',';
    out += format_exact(b.end);
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

}  // namespace assoc
