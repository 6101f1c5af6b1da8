#include "neoburst/csv.hpp"

#include <charconv>
#include <cmath>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

constexpr double kTimeTolerance = 1e-6;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::vector<std::size_t> line_numbers;  // file line of each data row
};

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t col) {
  while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
  while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(v)) {
    throw Error("row " + std::to_string(line_no) + ", column " +
                std::to_string(col + 1) + ": '" + std::string(cell) +
                "' is not a finite number");
  }
  return v;
}

Table parse_table(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = strip_cr(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (!have_header) {
      for (auto c : cells) t.header.emplace_back(c);
      t.columns.resize(t.header.size());
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error("row " + std::to_string(line_no) + " has " +
                  std::to_string(cells.size()) + " fields, header has " +
                  std::to_string(t.header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      t.columns[c].push_back(parse_cell(cells[c], line_no, c));
    }
    t.line_numbers.push_back(line_no);
  }
  if (!have_header) throw Error("CSV is empty: no header row");
  if (t.header.empty() || t.header.front() != "time_s") {
    throw Error("row 1: first header field must be 'time_s'");
  }
  if (t.line_numbers.empty()) throw Error("no samples");
  return t;
}

// Infers the sample rate and checks every timestamp against the grid.
double uniform_rate(const Table& t) {
  const auto& time = t.columns.front();
  if (time.size() < 2) {
    throw Error("need at least two samples to infer the sample rate");
  }
  const double dt = time[1] - time[0];
  if (!(dt > 0.0)) {
    throw Error("row " + std::to_string(t.line_numbers[1]) +
                ": timestamps must strictly increase");
  }
  double rate = 1.0 / dt;
  if (std::abs(rate - std::round(rate)) <= 1e-6 * rate) rate = std::round(rate);
  for (std::size_t i = 1; i < time.size(); ++i) {
    const double expected = time[0] + static_cast<double>(i) / rate;
    if (std::abs(time[i] - expected) > kTimeTolerance) {
      throw Error("row " + std::to_string(t.line_numbers[i]) +
                  ": non-uniform sample rate (t=" + format_shortest(time[i]) +
                  ", expected " + format_shortest(expected) + ")");
    }
  }
  return rate;
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::string format_shortest(double value) {
  std::string s;
  append_number(s, value);
  return s;
}

EegRecording read_csv(std::string_view text) {
  Table t = parse_table(text);
  if (t.header.size() < 2) throw Error("row 1: CSV has no signal columns");
  const double rate = uniform_rate(t);
  std::vector<Channel> channels;
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    channels.push_back({t.header[c], std::move(t.columns[c])});
  }
  const double start = t.columns.front().front();
  return EegRecording(rate, std::move(channels), start < 0.0 ? 0.0 : start);
}

std::string write_csv(const EegRecording& rec) {
  std::string out = "time_s";
  for (const auto& ch : rec.channels()) {
    out += ',';
    out += ch.label;
  }
  out += '\n';
  const double rate = rec.sample_rate_hz();
  for (std::size_t i = 0; i < rec.sample_count(); ++i) {
    append_number(out, rec.start_offset_s() + static_cast<double>(i) / rate);
    for (const auto& ch : rec.channels()) {
      out += ',';
      append_number(out, ch.samples[i]);
    }
    out += '\n';
  }
  return out;
}

BinaryMask read_mask_csv(std::string_view text) {
  Table t = parse_table(text);
  if (t.header.size() != 2 || t.header[1] != "mask") {
    throw Error("row 1: mask CSV header must be 'time_s,mask'");
  }
  const double rate = uniform_rate(t);
  std::vector<std::uint8_t> labels;
  labels.reserve(t.columns[1].size());
  for (std::size_t i = 0; i < t.columns[1].size(); ++i) {
    const double v = t.columns[1][i];
    if (v != 0.0 && v != 1.0) {
      throw Error("row " + std::to_string(t.line_numbers[i]) +
                  ": mask value must be 0 or 1");
    }
    labels.push_back(static_cast<std::uint8_t>(v));
  }
  return BinaryMask(rate, std::move(labels));
}

std::string write_mask_csv(const BinaryMask& mask) {
  std::string out = "time_s,mask\n";
  for (std::size_t i = 0; i < mask.size(); ++i) {
    append_number(out, static_cast<double>(i) / mask.rate_hz());
    out += mask.labels()[i] ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace neoburst
