#ifndef NEOBURST_CSV_HPP_
#define NEOBURST_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "neoburst/signal.hpp"

namespace neoburst {

// Recording CSV: header `time_s,<label1>,<label2>,...`, one row per sample,
// uniformly increasing time. The rate is inferred from the first two rows
// and every row must sit within 1e-6 s of the implied grid.
EegRecording read_csv(std::string_view text);

// Values use the shortest representation that round-trips exactly.
std::string write_csv(const EegRecording& rec);

// Mask CSV: header `time_s,mask`, values 0 (burst) or 1 (inter-burst).
BinaryMask read_mask_csv(std::string_view text);
std::string write_mask_csv(const BinaryMask& mask);

// Splits one CSV line on commas. No quoting: none of our formats need it.
std::vector<std::string_view> split_csv_line(std::string_view line);

std::string format_shortest(double value);

}  // namespace neoburst

#endif  // NEOBURST_CSV_HPP_
