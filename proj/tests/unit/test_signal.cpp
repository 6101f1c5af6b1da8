#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "neoburst/error.hpp"
#include "neoburst/signal.hpp"

using namespace neoburst;

namespace {

EegRecording constant_recording(double f4, double c4) {
  std::vector<Channel> ch;
  for (const std::string& e : default_electrodes()) {
    const double v = e == "F4" ? f4 : e == "C4" ? c4 : 0.0;
    ch.push_back({e, std::vector<double>(16, v)});
  }
  return EegRecording(64.0, std::move(ch));
}

BinaryMask mask_from(std::initializer_list<int> bits, double rate = 1.0) {
  std::vector<std::uint8_t> v;
  for (int b : bits) v.push_back(static_cast<std::uint8_t>(b));
  return BinaryMask(rate, v);
}

}  // namespace

TEST_SUITE("signal") {
  TEST_CASE("recording invariants are enforced") {
    CHECK_THROWS_AS(EegRecording(0.0, {{"a", {1.0}}}), Error);
    CHECK_THROWS_AS(EegRecording(64.0, {{"a", {1.0}}, {"a", {2.0}}}), Error);
    CHECK_THROWS_AS(EegRecording(64.0, {{"a", {1.0}}, {"b", {2.0, 3.0}}}), Error);
    const EegRecording ok(64.0, {{"a", std::vector<double>(128)}});
    CHECK(ok.duration_s() == 2.0);
    CHECK_THROWS_WITH_AS(ok.channel("zz"), doctest::Contains("zz"), Error);
  }

  TEST_CASE("default montage pairs") {
    const MontageSpec m = default_montage();
    REQUIRE(m.pairs.size() == 8);
    CHECK(m.pairs.front() == std::pair<std::string, std::string>{"F4", "C4"});
    CHECK(m.pairs.back() == std::pair<std::string, std::string>{"C3", "T3"});
    CHECK(default_electrodes().size() == 9);
  }

  TEST_CASE("self-referenced pair is all zero") {
    std::mt19937_64 rng(3);
    const EegRecording rec = testing::random_recording(rng, 64.0, 100);
    const EegRecording out = derive_montage(rec, {{{"F4", "F4"}}});
    REQUIRE(out.channel_count() == 1);
    CHECK(out.channels()[0].label == "F4-F4");
    for (double v : out.channels()[0].samples) CHECK(v == 0.0);
  }

  TEST_CASE("constant difference") {
    const EegRecording out = derive_montage(constant_recording(5.0, 2.0), default_montage());
    for (double v : out.channel("F4-C4").samples) CHECK(v == 3.0);
    CHECK(out.sample_rate_hz() == 64.0);
    CHECK(out.sample_count() == 16);
  }

  TEST_CASE("unknown electrode is named") {
    const EegRecording rec = constant_recording(1.0, 1.0);
    CHECK_THROWS_WITH_AS(derive_montage(rec, {{{"P3", "C3"}}}), doctest::Contains("'P3'"),
                         Error);
  }

  TEST_CASE("montage is linear") {
    // Power-of-two scales keep both sides exactly representable.
    std::mt19937_64 rng(11);
    for (double a : {0.25, 0.5, 2.0, 4.0, -8.0, -1.0}) {
      const EegRecording rec = testing::random_recording(rng, 64.0, 50);
      std::vector<Channel> scaled = rec.channels();
      for (Channel& c : scaled) {
        for (double& v : c.samples) v *= a;
      }
      const EegRecording lhs = derive_montage(EegRecording(64.0, scaled), default_montage());
      const EegRecording rhs = derive_montage(rec, default_montage());
      for (std::size_t c = 0; c < lhs.channel_count(); ++c) {
        for (std::size_t i = 0; i < lhs.sample_count(); ++i) {
          CHECK(lhs.channels()[c].samples[i] == a * rhs.channels()[c].samples[i]);
        }
      }
    }
  }

  TEST_CASE("mask values are validated") {
    CHECK_THROWS_AS(BinaryMask(1.0, {0, 2}), Error);
    CHECK_THROWS_AS(BinaryMask(0.0, {0}), Error);
  }

  TEST_CASE("mask to intervals examples") {
    const IntervalList none = mask_to_intervals(BinaryMask(64.0, std::vector<std::uint8_t>(640, 0)));
    CHECK(none.empty());
    CHECK(none.epoch_length_s() == 10.0);

    const IntervalList all = mask_to_intervals(BinaryMask(1.0, std::vector<std::uint8_t>(60, 1)));
    REQUIRE(all.size() == 1);
    CHECK(all.intervals()[0] == Interval{0.0, 60.0});

    std::vector<std::uint8_t> bits(100, 0);
    std::fill(bits.begin() + 10, bits.begin() + 20, 1);
    std::fill(bits.begin() + 40, bits.begin() + 60, 1);
    const IntervalList il = mask_to_intervals(BinaryMask(1.0, bits));
    REQUIRE(il.size() == 2);
    CHECK(il.intervals()[0] == Interval{10.0, 10.0});
    CHECK(il.intervals()[1] == Interval{40.0, 20.0});
    CHECK(il.epoch_length_s() == 100.0);

    CHECK_THROWS_AS(mask_to_intervals(BinaryMask(1.0, {})), Error);
  }

  TEST_CASE("intervals to mask examples") {
    const BinaryMask empty = intervals_to_mask(IntervalList(10.0, {}), 64.0);
    CHECK(empty.size() == 640);
    CHECK(empty.interburst_count() == 0);

    const BinaryMask full = intervals_to_mask(IntervalList(10.0, {{0.0, 10.0}}), 64.0);
    CHECK(full.interburst_count() == 640);

    const IntervalList il(100.0, {{10.0, 10.0}, {40.0, 20.0}});
    const IntervalList back = mask_to_intervals(intervals_to_mask(il, 1.0));
    CHECK(back.intervals() == il.intervals());
    CHECK_THROWS_AS(intervals_to_mask(il, 0.0), Error);
  }

  TEST_CASE("interval list invariants") {
    CHECK_THROWS_AS(IntervalList(0.0, {}), Error);
    CHECK_THROWS_AS(IntervalList(10.0, {{0.0, 0.0}}), Error);
    CHECK_THROWS_AS(IntervalList(10.0, {{5.0, 2.0}, {1.0, 1.0}}), Error);
    CHECK_THROWS_AS(IntervalList(10.0, {{0.0, 5.0}, {4.0, 1.0}}), Error);
    CHECK_THROWS_AS(IntervalList(10.0, {{8.0, 5.0}}), Error);
  }

  TEST_CASE("round trip on sample-aligned interval lists") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const double rate = trial % 2 ? 64.0 : 1.0;
      const std::size_t n = 1 + rng() % 500;
      const BinaryMask m(rate, testing::random_labels(rng, n, 0.05));
      const IntervalList il = mask_to_intervals(m);
      CHECK(intervals_to_mask(il, rate) == m);
      CHECK(mask_to_intervals(intervals_to_mask(il, rate)).intervals() == il.intervals());
    }
  }

  TEST_CASE("interval durations sum to the inter-burst count") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      const BinaryMask m(64.0, testing::random_labels(rng, 1 + rng() % 2000, 0.02));
      const IntervalList il = mask_to_intervals(m);
      double total = 0.0;
      for (const Interval& iv : il.intervals()) total += iv.duration_s;
      CHECK(total == static_cast<double>(m.interburst_count()) / 64.0);
    }
  }

  TEST_CASE("majority vote examples") {
    std::vector<BinaryMask> eight(8, mask_from({1, 1, 1}));
    CHECK(majority_vote(eight) == mask_from({1, 1, 1}));

    std::vector<BinaryMask> five_of_eight;
    for (int i = 0; i < 8; ++i) five_of_eight.push_back(mask_from({i < 5, i < 4, 0}));
    CHECK(majority_vote(five_of_eight) == mask_from({1, 0, 0}));

    const BinaryMask one = mask_from({0, 1, 1, 0});
    CHECK(majority_vote(std::vector<BinaryMask>{one}) == one);

    CHECK_THROWS_AS(majority_vote(std::vector<BinaryMask>{}), Error);
    CHECK_THROWS_AS(majority_vote(std::vector<BinaryMask>{one, mask_from({0, 1})}), Error);
    CHECK_THROWS_AS(majority_vote(std::vector<BinaryMask>{one, mask_from({0, 1, 1, 0}, 2.0)}),
                    Error);
  }

  TEST_CASE("majority vote is permutation invariant and idempotent") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<BinaryMask> masks;
      const std::size_t k = 1 + rng() % 9;
      for (std::size_t i = 0; i < k; ++i) {
        masks.emplace_back(64.0, testing::random_labels(rng, 300, 0.1));
      }
      const BinaryMask ref = majority_vote(masks);
      std::shuffle(masks.begin(), masks.end(), rng);
      CHECK(majority_vote(masks) == ref);
      std::vector<BinaryMask> copies(k, masks.front());
      CHECK(majority_vote(copies) == masks.front());
    }
  }
}
