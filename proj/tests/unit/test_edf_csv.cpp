#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "helpers.hpp"
#include "neoburst/csv.hpp"
#include "neoburst/edf.hpp"
#include "neoburst/error.hpp"

using namespace neoburst;

namespace {

void field(std::string& out, const std::string& value, std::size_t width) {
  out += value;
  out.append(width - value.size(), ' ');
}

// Hand-assembled single-signal EDF, independent of the writer.
std::vector<std::uint8_t> one_signal_edf(double pmin, double pmax, int dmin, int dmax,
                                         const std::vector<std::int16_t>& digital) {
  std::string h;
  field(h, "0", 8);
  field(h, "X X X X", 80);
  field(h, "Startdate X X X X", 80);
  field(h, "01.01.00", 8);
  field(h, "00.00.00", 8);
  field(h, "512", 8);
  field(h, "", 44);
  field(h, "1", 8);
  field(h, "1", 8);
  field(h, "1", 4);
  field(h, "F4", 16);
  field(h, "", 80);
  field(h, "uV", 8);
  field(h, format_shortest(pmin), 8);
  field(h, format_shortest(pmax), 8);
  field(h, std::to_string(dmin), 8);
  field(h, std::to_string(dmax), 8);
  field(h, "", 80);
  field(h, std::to_string(digital.size()), 8);
  field(h, "", 32);
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  for (std::int16_t d : digital) {
    const auto u = static_cast<std::uint16_t>(d);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return bytes;
}

void overwrite(std::vector<std::uint8_t>& bytes, std::size_t offset, const std::string& text) {
  std::memcpy(bytes.data() + offset, text.data(), text.size());
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("edf_csv") {
  TEST_CASE("digital extremes map to physical extremes") {
    const auto bytes = one_signal_edf(-200.0, 300.0, -2048, 2047, {-2048, 2047});
    const EegRecording rec = read_edf(bytes);
    REQUIRE(rec.sample_count() == 2);
    CHECK(rec.sample_rate_hz() == 2.0);
    CHECK(rec.channels()[0].label == "F4");
    CHECK(rec.channels()[0].samples[0] == doctest::Approx(-200.0).epsilon(1e-12));
    CHECK(rec.channels()[0].samples[1] == doctest::Approx(300.0).epsilon(1e-12));
  }

  TEST_CASE("decoding is monotone in the digital value") {
    std::vector<std::int16_t> ramp;
    for (int d = -1000; d <= 1000; d += 7) ramp.push_back(static_cast<std::int16_t>(d));
    const EegRecording rec = read_edf(one_signal_edf(-50.0, 75.0, -1000, 1000, ramp));
    const auto& s = rec.channels()[0].samples;
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
  }

  TEST_CASE("nine-channel round trip within half a quantisation step") {
    std::mt19937_64 rng(4);
    const EegRecording rec = testing::random_recording(rng, 256.0, 256 * 4);
    const auto bytes = write_edf(rec);
    const EdfHeader h = read_edf_header(bytes);
    const EegRecording back = read_edf(bytes);
    REQUIRE(back.channel_count() == 9);
    REQUIRE(back.sample_count() == rec.sample_count());
    CHECK(back.sample_rate_hz() == 256.0);
    for (std::size_t c = 0; c < 9; ++c) {
      const auto& sh = h.signals[c];
      const double step =
          (sh.physical_max - sh.physical_min) / (sh.digital_max - sh.digital_min);
      CHECK(back.channels()[c].label == rec.channels()[c].label);
      for (std::size_t i = 0; i < rec.sample_count(); ++i) {
        CHECK(std::abs(back.channels()[c].samples[i] - rec.channels()[c].samples[i]) <=
              0.5 * step + 1e-9);
      }
    }
  }

  TEST_CASE("writer rejects partial records") {
    std::mt19937_64 rng(4);
    CHECK_THROWS_AS(write_edf(testing::random_recording(rng, 256.0, 300)), Error);
  }

  TEST_CASE("truncated data names the byte offset") {
    std::mt19937_64 rng(8);
    auto bytes = write_edf(testing::random_recording(rng, 64.0, 128));
    const std::size_t full = bytes.size();
    bytes.resize(full - 10);
    const std::string msg = error_of([&] { read_edf(bytes); });
    CHECK(testing::contains(msg, "truncated at byte " + std::to_string(full - 10)));
    CHECK(testing::contains(msg, "data record 1"));
  }

  TEST_CASE("truncated header names the field") {
    std::mt19937_64 rng(8);
    auto bytes = write_edf(testing::random_recording(rng, 64.0, 64));
    bytes.resize(200);
    const std::string msg = error_of([&] { read_edf(bytes); });
    CHECK(testing::contains(msg, "truncated at byte 200"));
    CHECK(testing::contains(msg, "reserved"));
  }

  TEST_CASE("non-numeric field names field and offset") {
    std::mt19937_64 rng(8);
    auto bytes = write_edf(testing::random_recording(rng, 64.0, 64));
    overwrite(bytes, 252, "ab  ");
    const std::string msg = error_of([&] { read_edf(bytes); });
    CHECK(testing::contains(msg, "'number of signals' at byte 252"));
    CHECK(testing::contains(msg, "'ab'"));
  }

  TEST_CASE("header byte count must match the signal count") {
    std::mt19937_64 rng(8);
    auto bytes = write_edf(testing::random_recording(rng, 64.0, 64));
    overwrite(bytes, 184, "999     ");
    const std::string msg = error_of([&] { read_edf(bytes); });
    CHECK(testing::contains(msg, "'header bytes' at byte 184 is 999"));
    CHECK(testing::contains(msg, "expected 2560"));
  }

  TEST_CASE("csv exact round trip") {
    const EegRecording rec(64.0, {{"A", {1.5, -2.25, 0.1}}, {"B", {1e-7, 3.0, -4.0}}});
    const std::string text = write_csv(rec);
    const EegRecording back = read_csv(text);
    CHECK(back.sample_rate_hz() == 64.0);
    REQUIRE(back.channel_count() == 2);
    CHECK(back.channels()[0].samples == rec.channels()[0].samples);
    CHECK(back.channels()[1].samples == rec.channels()[1].samples);
    CHECK(back.channels()[1].label == "B");
  }

  TEST_CASE("csv diagnostics") {
    CHECK_THROWS_WITH_AS(read_csv("time_s,A\n"), doctest::Contains("no samples"), Error);
    CHECK_THROWS_WITH_AS(read_csv(""), doctest::Contains("empty"), Error);
    CHECK_THROWS_WITH_AS(read_csv("t,A\n0,1\n"), doctest::Contains("row 1"), Error);
    CHECK_THROWS_WITH_AS(read_csv("time_s,A\n0,1\n"), doctest::Contains("two samples"),
                         Error);
    CHECK_THROWS_WITH_AS(read_csv("time_s,A\n0,1\n0.5,2\n1.001,3\n"),
                         doctest::Contains("row 4: non-uniform"), Error);
    CHECK_THROWS_WITH_AS(read_csv("time_s,A,B\n0,1,2\n1,2\n"),
                         doctest::Contains("row 3 has 2 fields"), Error);
    CHECK_THROWS_WITH_AS(read_csv("time_s,A\n0,1\n1,x\n"),
                         doctest::Contains("row 3, column 2"), Error);
    CHECK_THROWS_WITH_AS(read_csv("time_s,A\n0,1\n0,2\n"), doctest::Contains("increase"),
                         Error);
  }

  TEST_CASE("csv tolerates CR line endings and blank lines") {
    const EegRecording rec = read_csv("time_s,A\r\n0,1\r\n\r\n0.5,2\r\n");
    CHECK(rec.sample_rate_hz() == 2.0);
    CHECK(rec.channels()[0].samples == std::vector<double>{1.0, 2.0});
  }

  TEST_CASE("csv round trip on random recordings") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const double rate = trial % 2 ? 256.0 : 200.0;
      const EegRecording rec = testing::random_recording(rng, rate, 10 + rng() % 300);
      const EegRecording back = read_csv(write_csv(rec));
      CHECK(back.sample_rate_hz() == rate);
      for (std::size_t c = 0; c < rec.channel_count(); ++c) {
        for (std::size_t i = 0; i < rec.sample_count(); ++i) {
          CHECK(std::abs(back.channels()[c].samples[i] - rec.channels()[c].samples[i]) < 1e-6);
        }
      }
    }
  }

  TEST_CASE("mask csv round trip and header check") {
    std::mt19937_64 rng(2);
    const BinaryMask m(64.0, testing::random_labels(rng, 500, 0.05));
    CHECK(read_mask_csv(write_mask_csv(m)) == m);
    CHECK_THROWS_WITH_AS(read_mask_csv("time_s,foo\n0,1\n1,0\n"),
                         doctest::Contains("time_s,mask"), Error);
  }
}
