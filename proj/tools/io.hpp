#ifndef NEOBURST_TOOLS_IO_HPP_
#define NEOBURST_TOOLS_IO_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neoburst/hie_grade.hpp"
#include "neoburst/signal.hpp"

namespace neoburst::tools {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path);
std::vector<std::uint8_t> read_bytes(const fs::path& path);
void write_text(const fs::path& path, std::string_view text);
void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes);

// CSV or EDF by extension; errors are prefixed with the path.
EegRecording load_recording(const fs::path& path);

// Bipolar channels on the default montage. Referential recordings are
// derived; recordings that already carry the bipolar labels pass through.
EegRecording bipolar_view(const EegRecording& rec);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name, const fs::path& source) const;
};

// Plain comma-separated table with a header row; ragged rows are rejected.
Table read_table(const fs::path& path);

std::optional<HieGrade> parse_grade(std::string_view text, const std::string& where);

// `<command>.run` key-value manifest written next to a command's outputs.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<unsigned long long> seed;

  void write(const fs::path& path) const;
};

}  // namespace neoburst::tools

#endif  // NEOBURST_TOOLS_IO_HPP_
