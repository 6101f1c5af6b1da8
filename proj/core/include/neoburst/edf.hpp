#ifndef NEOBURST_EDF_HPP_
#define NEOBURST_EDF_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neoburst/signal.hpp"

namespace neoburst {

struct EdfSignalHeader {
  std::string label;
  std::string transducer;
  std::string physical_dimension;
  double physical_min = 0.0;
  double physical_max = 0.0;
  int digital_min = -32768;
  int digital_max = 32767;
  std::string prefiltering;
  int samples_per_record = 0;
};

struct EdfHeader {
  std::string version;
  std::string patient_id;
  std::string recording_id;
  std::string start_date;
  std::string start_time;
  int header_bytes = 0;
  long record_count = 0;
  double record_duration_s = 0.0;
  std::vector<EdfSignalHeader> signals;
};

// Parses the fixed-width ASCII header. Errors name the field and its byte
// offset.
EdfHeader read_edf_header(std::span<const std::uint8_t> bytes);

// Decodes an EDF file whose signals all share one sample rate. Digital
// values are mapped affinely onto [physical_min, physical_max].
EegRecording read_edf(std::span<const std::uint8_t> bytes);

struct EdfWriteOptions {
  double record_duration_s = 1.0;
  std::string patient_id = "X X X X";
  std::string recording_id = "Startdate X X X X";
  std::string physical_dimension = "uV";
};

// Writes a 16-bit EDF. Physical ranges are taken from each channel's
// extremes; the sample count must fill whole data records.
std::vector<std::uint8_t> write_edf(const EegRecording& rec,
                                    const EdfWriteOptions& options = {});

}  // namespace neoburst

#endif  // NEOBURST_EDF_HPP_
