#include "neoburst/ibi_features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "neoburst/csv.hpp"
#include "neoburst/error.hpp"

namespace neoburst {

double ibi_percentage(const IntervalList& intervals) {
  if (!(intervals.epoch_length_s() > 0.0)) {
    throw Error("epoch length must be positive");
  }
  double total = 0.0;
  for (const Interval& iv : intervals.intervals()) total += iv.duration_s;
  return 100.0 * total / intervals.epoch_length_s();
}

double max_ibi(const IntervalList& intervals, MaxIbiMode mode) {
  if (intervals.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      intervals.intervals().begin(), intervals.intervals().end(),
      [](const Interval& a, const Interval& b) { return a.duration_s < b.duration_s; });
  if (mode == MaxIbiMode::kPlainMax) return hi->duration_s;
  return hi->duration_s - lo->duration_s;
}

double log_feature(double x_s) {
  if (!(x_s > 0.0)) {
    throw Error("log feature needs a positive duration, got " + std::to_string(x_s));
  }
  return std::log(x_s);
}

IbiFeatureVector compute_ibi_features(std::string subject_id,
                                      const IntervalList& intervals,
                                      std::optional<HieGrade> true_grade,
                                      MaxIbiMode mode) {
  return {std::move(subject_id), ibi_percentage(intervals), max_ibi(intervals, mode),
          true_grade};
}

std::string write_features_csv(std::span<const IbiFeatureVector> rows) {
  std::string out = "subject_id,ibi_percent,max_ibi_s,true_grade\n";
  for (const IbiFeatureVector& r : rows) {
    if (r.subject_id.find(',') != std::string::npos) {
      throw Error("subject id '" + r.subject_id + "' contains a comma");
    }
    out += r.subject_id;
    out += ',';
    out += format_shortest(r.ibi_percent);
    out += ',';
    out += format_shortest(r.max_ibi_s);
    out += ',';
    if (r.true_grade) out += std::to_string(r.true_grade->value());
    out += '\n';
  }
  return out;
}

std::vector<IbiFeatureVector> read_features_csv(std::string_view text) {
  std::vector<IbiFeatureVector> rows;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (!header) {
      if (cells.size() != 4 || cells[0] != "subject_id" || cells[1] != "ibi_percent" ||
          cells[2] != "max_ibi_s" || cells[3] != "true_grade") {
        throw Error("row 1: header must be 'subject_id,ibi_percent,max_ibi_s,true_grade'");
      }
      header = true;
      continue;
    }
    const std::string where = "row " + std::to_string(line_no);
    if (cells.size() != 4) throw Error(where + ": expected 4 fields");
    auto number = [&](std::string_view s, const char* name) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
          !std::isfinite(v)) {
        throw Error(where + ": " + name + " '" + std::string(s) + "' is not a number");
      }
      return v;
    };
    IbiFeatureVector r;
    r.subject_id = std::string(cells[0]);
    r.ibi_percent = number(cells[1], "ibi_percent");
    r.max_ibi_s = number(cells[2], "max_ibi_s");
    if (r.ibi_percent < 0.0 || r.ibi_percent > 100.0) {
      throw Error(where + ": ibi_percent outside [0, 100]");
    }
    if (r.max_ibi_s < 0.0) throw Error(where + ": max_ibi_s is negative");
    if (!cells[3].empty()) {
      const double g = number(cells[3], "true_grade");
      if (g != std::floor(g) || g < 1 || g > HieGrade::kCount) {
        throw Error(where + ": unknown grade '" + std::string(cells[3]) + "'");
      }
      r.true_grade = HieGrade(static_cast<int>(g));
    }
    rows.push_back(std::move(r));
  }
  if (!header) throw Error("features file is empty");
  return rows;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace neoburst
