#include "neoburst/edf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

constexpr std::size_t kMainHeaderBytes = 256;
constexpr std::size_t kSignalHeaderBytes = 256;

class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return offset_; }

  std::string text(std::size_t width, const char* field) {
    if (offset_ + width > bytes_.size()) {
      throw Error("EDF truncated at byte " + std::to_string(bytes_.size()) +
                  " while reading '" + field + "' at offset " +
                  std::to_string(offset_));
    }
    std::string_view raw(reinterpret_cast<const char*>(bytes_.data()) + offset_,
                         width);
    last_offset_ = offset_;
    offset_ += width;
    const auto first = raw.find_first_not_of(' ');
    if (first == std::string_view::npos) return {};
    const auto last = raw.find_last_not_of(std::string_view(" \0", 2));
    return std::string(raw.substr(first, last - first + 1));
  }

  double real(std::size_t width, const char* field) {
    const std::string s = text(width, field);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error("EDF field '" + std::string(field) + "' at byte " +
                  std::to_string(last_offset_) + " is not numeric: '" + s +
                  "'");
    }
    return v;
  }

  long integer(std::size_t width, const char* field) {
    const std::string s = text(width, field);
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error("EDF field '" + std::string(field) + "' at byte " +
                  std::to_string(last_offset_) + " is not an integer: '" + s +
                  "'");
    }
    return v;
  }

  std::size_t last_offset() const { return last_offset_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
  std::size_t last_offset_ = 0;
};

void put_field(std::vector<std::uint8_t>& out, const std::string& value,
               std::size_t width, const char* field) {
  if (value.size() > width) {
    throw Error(std::string("EDF field '") + field + "' value '" + value +
                "' exceeds " + std::to_string(width) + " characters");
  }
  out.insert(out.end(), value.begin(), value.end());
  out.insert(out.end(), width - value.size(), ' ');
}

// Shortest decimal of at most 8 characters, rounded away from the data so
// the written range still encloses every sample.
std::string format_bound(double value, bool round_down) {
  char buf[64];
  for (int decimals = 7; decimals >= 0; --decimals) {
    const double scale = std::pow(10.0, decimals);
    const double rounded = round_down ? std::floor(value * scale) / scale
                                      : std::ceil(value * scale) / scale;
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, rounded);
    std::string s(buf);
    if (s.size() <= 8) return s;
  }
  throw Error("physical value " + std::to_string(value) +
              " does not fit an 8-character EDF field");
}

}  // namespace

EdfHeader read_edf_header(std::span<const std::uint8_t> bytes) {
  HeaderCursor cur(bytes);
  EdfHeader h;
  h.version = cur.text(8, "version");
  h.patient_id = cur.text(80, "patient id");
  h.recording_id = cur.text(80, "recording id");
  h.start_date = cur.text(8, "start date");
  h.start_time = cur.text(8, "start time");
  h.header_bytes = static_cast<int>(cur.integer(8, "header bytes"));
  cur.text(44, "reserved");
  h.record_count = cur.integer(8, "number of data records");
  h.record_duration_s = cur.real(8, "duration of a data record");
  const long ns = cur.integer(4, "number of signals");
  if (ns <= 0 || ns > 4096) {
    throw Error("EDF field 'number of signals' at byte 252 is out of range: " +
                std::to_string(ns));
  }
  if (!(h.record_duration_s > 0.0)) {
    throw Error("EDF field 'duration of a data record' at byte 244 must be "
                "positive");
  }
  const auto expected_header =
      static_cast<long>(kMainHeaderBytes + kSignalHeaderBytes * ns);
  if (h.header_bytes != expected_header) {
    throw Error("EDF field 'header bytes' at byte 184 is " +
                std::to_string(h.header_bytes) + ", expected " +
                std::to_string(expected_header) + " for " +
                std::to_string(ns) + " signals");
  }

  // Per-signal fields are stored column-wise: all labels, then all
  // transducers, and so on.
  h.signals.resize(static_cast<std::size_t>(ns));
  for (auto& s : h.signals) s.label = cur.text(16, "label");
  for (auto& s : h.signals) s.transducer = cur.text(80, "transducer type");
  for (auto& s : h.signals) s.physical_dimension = cur.text(8, "physical dimension");
  for (auto& s : h.signals) s.physical_min = cur.real(8, "physical minimum");
  for (auto& s : h.signals) s.physical_max = cur.real(8, "physical maximum");
  for (auto& s : h.signals) s.digital_min = static_cast<int>(cur.integer(8, "digital minimum"));
  for (auto& s : h.signals) s.digital_max = static_cast<int>(cur.integer(8, "digital maximum"));
  for (auto& s : h.signals) s.prefiltering = cur.text(80, "prefiltering");
  for (auto& s : h.signals) {
    s.samples_per_record = static_cast<int>(cur.integer(8, "samples per record"));
    if (s.samples_per_record <= 0) {
      throw Error("EDF field 'samples per record' at byte " +
                  std::to_string(cur.last_offset()) + " must be positive");
    }
  }
  for (std::size_t i = 0; i < h.signals.size(); ++i) cur.text(32, "reserved");

  for (std::size_t i = 0; i < h.signals.size(); ++i) {
    const auto& s = h.signals[i];
    if (s.physical_max == s.physical_min) {
      throw Error("EDF signal " + std::to_string(i) + " ('" + s.label +
                  "') has equal physical minimum and maximum");
    }
    if (s.digital_max == s.digital_min) {
      throw Error("EDF signal " + std::to_string(i) + " ('" + s.label +
                  "') has equal digital minimum and maximum");
    }
  }
  return h;
}

EegRecording read_edf(std::span<const std::uint8_t> bytes) {
  EdfHeader h = read_edf_header(bytes);
  const int spr = h.signals.front().samples_per_record;
  for (std::size_t i = 1; i < h.signals.size(); ++i) {
    if (h.signals[i].samples_per_record != spr) {
      throw Error("EDF signal " + std::to_string(i) + " ('" +
                  h.signals[i].label + "') has " +
                  std::to_string(h.signals[i].samples_per_record) +
                  " samples per record, signal 0 has " + std::to_string(spr) +
                  "; mixed sample rates are not supported");
    }
  }
  const std::size_t record_bytes = 2 * static_cast<std::size_t>(spr) * h.signals.size();
  const std::size_t data_bytes = bytes.size() - static_cast<std::size_t>(h.header_bytes);
  if (h.record_count == -1) {
    // Writers that crashed mid-recording leave the count unset.
    h.record_count = static_cast<long>(data_bytes / record_bytes);
  }
  if (h.record_count < 0) {
    throw Error("EDF field 'number of data records' at byte 236 is negative");
  }
  const std::size_t needed = static_cast<std::size_t>(h.header_bytes) +
                             record_bytes * static_cast<std::size_t>(h.record_count);
  if (bytes.size() < needed) {
    const std::size_t full = data_bytes / record_bytes;
    throw Error("EDF truncated at byte " + std::to_string(bytes.size()) +
                ": data record " + std::to_string(full) + " starting at byte " +
                std::to_string(h.header_bytes + full * record_bytes) +
                " is incomplete (" + std::to_string(needed) +
                " bytes declared)");
  }

  const std::size_t per_signal = static_cast<std::size_t>(spr) * h.record_count;
  std::vector<Channel> channels(h.signals.size());
  std::vector<double> gain(h.signals.size()), offset(h.signals.size());
  for (std::size_t s = 0; s < h.signals.size(); ++s) {
    const auto& sh = h.signals[s];
    channels[s].label = sh.label;
    channels[s].samples.reserve(per_signal);
    gain[s] = (sh.physical_max - sh.physical_min) /
              static_cast<double>(sh.digital_max - sh.digital_min);
    offset[s] = sh.physical_min;
  }
  std::size_t pos = static_cast<std::size_t>(h.header_bytes);
  for (long r = 0; r < h.record_count; ++r) {
    for (std::size_t s = 0; s < h.signals.size(); ++s) {
      const int dmin = h.signals[s].digital_min;
      for (int k = 0; k < spr; ++k) {
        const auto raw = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(bytes[pos]) |
            static_cast<std::uint16_t>(bytes[pos + 1]) << 8);
        pos += 2;
        channels[s].samples.push_back((raw - dmin) * gain[s] + offset[s]);
      }
    }
  }
  return EegRecording(spr / h.record_duration_s, std::move(channels));
}

std::vector<std::uint8_t> write_edf(const EegRecording& rec,
                                    const EdfWriteOptions& options) {
  if (rec.channel_count() == 0) throw Error("cannot write EDF without channels");
  const double spr_real = rec.sample_rate_hz() * options.record_duration_s;
  const auto spr = static_cast<long>(std::llround(spr_real));
  if (spr <= 0 || std::abs(spr_real - spr) > 1e-9) {
    throw Error("sample rate times record duration must be a whole number");
  }
  const std::size_t n = rec.sample_count();
  if (n % static_cast<std::size_t>(spr) != 0) {
    throw Error("sample count " + std::to_string(n) +
                " does not fill whole data records of " + std::to_string(spr));
  }
  const std::size_t records = n / static_cast<std::size_t>(spr);
  const std::size_t ns = rec.channel_count();
  constexpr int kDigitalMin = -32768;
  constexpr int kDigitalMax = 32767;

  std::vector<std::string> pmin_text(ns), pmax_text(ns);
  std::vector<double> pmin(ns), pmax(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& x = rec.channels()[s].samples;
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    double a = x.empty() ? -1.0 : *lo;
    double b = x.empty() ? 1.0 : *hi;
    if (b - a < 1e-6) {
      a -= 1.0;
      b += 1.0;
    }
    pmin_text[s] = format_bound(a, true);
    pmax_text[s] = format_bound(b, false);
    pmin[s] = std::stod(pmin_text[s]);
    pmax[s] = std::stod(pmax_text[s]);
  }

  std::vector<std::uint8_t> out;
  out.reserve(kMainHeaderBytes + kSignalHeaderBytes * ns + 2 * n * ns);
  char buf[32];
  put_field(out, "0", 8, "version");
  put_field(out, options.patient_id, 80, "patient id");
  put_field(out, options.recording_id, 80, "recording id");
  put_field(out, "01.01.00", 8, "start date");
  put_field(out, "00.00.00", 8, "start time");
  put_field(out, std::to_string(kMainHeaderBytes + kSignalHeaderBytes * ns), 8,
            "header bytes");
  put_field(out, "", 44, "reserved");
  put_field(out, std::to_string(records), 8, "number of data records");
  std::snprintf(buf, sizeof(buf), "%g", options.record_duration_s);
  put_field(out, buf, 8, "duration of a data record");
  put_field(out, std::to_string(ns), 4, "number of signals");
  for (const auto& ch : rec.channels()) put_field(out, ch.label, 16, "label");
  for (std::size_t s = 0; s < ns; ++s) put_field(out, "", 80, "transducer type");
  for (std::size_t s = 0; s < ns; ++s) {
    put_field(out, options.physical_dimension, 8, "physical dimension");
  }
  for (std::size_t s = 0; s < ns; ++s) put_field(out, pmin_text[s], 8, "physical minimum");
  for (std::size_t s = 0; s < ns; ++s) put_field(out, pmax_text[s], 8, "physical maximum");
  for (std::size_t s = 0; s < ns; ++s) {
    put_field(out, std::to_string(kDigitalMin), 8, "digital minimum");
  }
  for (std::size_t s = 0; s < ns; ++s) {
    put_field(out, std::to_string(kDigitalMax), 8, "digital maximum");
  }
  for (std::size_t s = 0; s < ns; ++s) put_field(out, "", 80, "prefiltering");
  for (std::size_t s = 0; s < ns; ++s) {
    put_field(out, std::to_string(spr), 8, "samples per record");
  }
  for (std::size_t s = 0; s < ns; ++s) put_field(out, "", 32, "reserved");

  constexpr double kDigitalSpan = static_cast<double>(kDigitalMax) - kDigitalMin;
  for (std::size_t r = 0; r < records; ++r) {
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& x = rec.channels()[s].samples;
      const double scale = kDigitalSpan / (pmax[s] - pmin[s]);
      for (long k = 0; k < spr; ++k) {
        const double v = x[r * static_cast<std::size_t>(spr) + static_cast<std::size_t>(k)];
        const long d = std::clamp<long>(
            std::lround((v - pmin[s]) * scale + kDigitalMin), kDigitalMin,
            kDigitalMax);
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(d));
        out.push_back(static_cast<std::uint8_t>(u & 0xff));
        out.push_back(static_cast<std::uint8_t>(u >> 8));
      }
    }
  }
  return out;
}

}  // namespace neoburst
