#include "assoc/table.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "assoc/error.hpp"

namespace assoc {

namespace {

Count checked_add(Count a, Count b) {
  Count out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw InputError("table total overflows a 64-bit count");
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view field, Count& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && !field.empty();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts)
    : rows_(rows), cols_(cols), counts_(std::move(counts)), row_sums_(rows, 0), col_sums_(cols, 0) {
  if (rows_ < 1 || cols_ < 1) throw InputError("table must have at least one row and one column");
  if (counts_.size() != rows_ * cols_) {
    throw InputError("expected " + std::to_string(rows_ * cols_) + " counts for a " +
                     std::to_string(rows_) + "x" + std::to_string(cols_) + " table, got " +
                     std::to_string(counts_.size()));
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const Count x = counts_[i * cols_ + j];
      if (x < 0) {
        throw InputError("negative count " + std::to_string(x) + " at cell (" + std::to_string(i + 1) +
                         "," + std::to_string(j + 1) + ")");
      }
      row_sums_[i] = checked_add(row_sums_[i], x);
      col_sums_[j] = checked_add(col_sums_[j], x);
      total_ = checked_add(total_, x);
    }
  }
}

ContingencyTable ContingencyTable::from_rows(const std::vector<std::vector<Count>>& grid) {
  if (grid.empty() || grid.front().empty()) throw InputError("table must have at least one row and one column");
  const std::size_t cols = grid.front().size();
  std::vector<Count> flat;
  flat.reserve(grid.size() * cols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].size() != cols) {
      throw InputError("ragged rows: row " + std::to_string(i + 1) + " has " + std::to_string(grid[i].size()) +
                       " cells, expected " + std::to_string(cols));
    }
    flat.insert(flat.end(), grid[i].begin(), grid[i].end());
  }
  return ContingencyTable(grid.size(), cols, std::move(flat));
}

std::vector<std::vector<Count>> ContingencyTable::to_rows() const {
  std::vector<std::vector<Count>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i].assign(counts_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  counts_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  return out;
}

ContingencyTable ContingencyTable::transposed() const {
  std::vector<Count> flat(counts_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) flat[j * rows_ + i] = counts_[i * cols_ + j];
  return ContingencyTable(cols_, rows_, std::move(flat));
}

Margins margins(const ContingencyTable& t) {
  return Margins{{t.row_sums().begin(), t.row_sums().end()},
                 {t.col_sums().begin(), t.col_sums().end()},
                 t.total()};
}

ProbabilityTable::ProbabilityTable(std::size_t rows, std::size_t cols, std::vector<double> probs)
    : rows_(rows), cols_(cols), probs_(std::move(probs)), row_margins_(rows, 0.0), col_margins_(cols, 0.0) {
  if (rows_ < 1 || cols_ < 1) throw InputError("table must have at least one row and one column");
  if (probs_.size() != rows_ * cols_) throw InputError("probability grid does not match its dimensions");
  double sum = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const double p = probs_[i * cols_ + j];
      if (!std::isfinite(p) || p < 0.0) throw InputError("probabilities must be finite and nonnegative");
      row_margins_[i] += p;
      col_margins_[j] += p;
      sum += p;
    }
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw InputError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

ProbabilityTable::ProbabilityTable(std::size_t rows, std::size_t cols, std::vector<double> probs,
                                   std::vector<double> row_margins, std::vector<double> col_margins)
    : rows_(rows),
      cols_(cols),
      probs_(std::move(probs)),
      row_margins_(std::move(row_margins)),
      col_margins_(std::move(col_margins)) {}

ProbabilityTable to_probability(const ContingencyTable& t) {
  if (t.total() == 0) throw InputError("empty table");
  const auto n = static_cast<double>(t.total());
  std::vector<double> probs(t.cells()), rows(t.rows()), cols(t.cols());
  for (std::size_t k = 0; k < t.cells(); ++k) probs[k] = static_cast<double>(t.counts()[k]) / n;
  for (std::size_t i = 0; i < t.rows(); ++i) rows[i] = static_cast<double>(t.row_sums()[i]) / n;
  for (std::size_t j = 0; j < t.cols(); ++j) cols[j] = static_cast<double>(t.col_sums()[j]) / n;
  return ProbabilityTable(t.rows(), t.cols(), std::move(probs), std::move(rows), std::move(cols));
}

ContingencyTable parse_table(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Count> flat;
  std::size_t cols = 0;
  std::size_t rows = 0;
  bool first_content_line = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (first_content_line) {
      first_content_line = false;
      Count probe = 0;
      if (!parse_int(fields.front(), probe)) continue;  // header
    }

    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw InputError(where + "ragged row with " + std::to_string(fields.size()) + " cells, expected " +
                       std::to_string(cols));
    }
    for (const auto field : fields) {
      Count value = 0;
      if (field.empty()) throw InputError(where + "empty cell");
      if (!parse_int(field, value)) throw InputError(where + "non-integer cell '" + std::string(field) + "'");
      if (value < 0) throw InputError(where + "negative cell " + std::string(field));
      flat.push_back(value);
    }
    ++rows;
  }

  if (rows == 0) throw InputError("empty input: no table rows");
  return ContingencyTable(rows, cols, std::move(flat));
}

std::string to_csv(const ContingencyTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (j) out += ',';
      out += std::to_string(t.at(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace assoc
