#include "io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "neoburst/csv.hpp"
#include "neoburst/edf.hpp"
#include "neoburst/error.hpp"
#include "neoburst/keyvalue.hpp"

#ifndef NEOBURST_VERSION
#define NEOBURST_VERSION "unknown"
#endif

namespace neoburst::tools {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  write_text(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

EegRecording load_recording(const fs::path& path) {
  try {
    if (path.extension() == ".edf" || path.extension() == ".EDF") {
      return read_edf(read_bytes(path));
    }
    return read_csv(read_text(path));
  } catch (const VersionMismatchError&) {
    throw;
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.find(path.string()) != std::string::npos) throw;
    throw Error(path.string() + ": " + what);
  }
}

EegRecording bipolar_view(const EegRecording& rec) {
  const MontageSpec montage = default_montage();
  bool bipolar = true;
  for (const auto& [a, c] : montage.pairs) bipolar = bipolar && rec.has_channel(a + "-" + c);
  if (!bipolar) return derive_montage(rec, montage);
  std::vector<Channel> channels;
  for (const auto& [a, c] : montage.pairs) channels.push_back(rec.channel(a + "-" + c));
  return EegRecording(rec.sample_rate_hz(), std::move(channels), rec.start_offset_s());
}

std::size_t Table::column(std::string_view name, const fs::path& source) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(source.string() + ": missing column '" + std::string(name) + "'");
}

Table read_table(const fs::path& path) {
  const std::string text = read_text(path);
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    for (std::string_view c : split_csv_line(line)) cells.emplace_back(c);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error(path.string() + ": row " + std::to_string(row) + ": expected " +
                  std::to_string(t.header.size()) + " fields, got " +
                  std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw Error(path.string() + ": empty file");
  return t;
}

std::optional<HieGrade> parse_grade(std::string_view text, const std::string& where) {
  if (text.empty()) return std::nullopt;
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '4') return HieGrade(text[0] - '0');
  throw Error(where + ": unknown grade '" + std::string(text) + "'");
}

void RunManifest::write(const fs::path& path) const {
  KeyValueDoc doc;
  doc.set("format", "neoburst-run/1");
  doc.set("command", command);
  doc.set("tool_version", NEOBURST_VERSION);
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  doc.set("timestamp", stamp);
  if (seed) doc.set("seed", std::to_string(*seed));
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const std::string& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  doc.set("inputs", join(inputs));
  doc.set("outputs", join(outputs));
  for (const auto& [k, v] : config) doc.set("config." + k, v);
  write_text(path, doc.to_string());
}

}  // namespace neoburst::tools
