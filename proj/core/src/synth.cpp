#include "neoburst/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "neoburst/csv.hpp"
#include "neoburst/dsp.hpp"
#include "neoburst/error.hpp"
#include "neoburst/ibi_features.hpp"

namespace neoburst {
namespace {

constexpr int kMaxAttempts = 100;
constexpr double kMinBurstS = 1.0;
constexpr double kInterburstRmsLimit = 10.0;
constexpr double kBurstPeakToPeakFloor = 25.0;
constexpr double kSevereIbiS = 60.0;

struct Segment {
  std::size_t start = 0;  // truth-mask samples
  std::size_t length = 0;
  bool interburst = false;
};

double uniform(std::mt19937_64& rng, Range r) {
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

// Bursts first and last; inter-burst durations always inside the profile range.
std::vector<Segment> draw_layout(const GradeProfile& p, std::size_t total,
                                 std::mt19937_64& rng) {
  const double pct = uniform(rng, {std::max(p.ibi_percent.lo, 0.5),
                                   std::min(p.ibi_percent.hi, 98.0)});
  const auto ibi_lo = static_cast<std::size_t>(std::ceil(p.ibi_duration_s.lo * kTruthRateHz));
  const auto ibi_hi = static_cast<std::size_t>(std::floor(p.ibi_duration_s.hi * kTruthRateHz));
  const double mean_ibi = 0.5 * (ibi_lo + ibi_hi);
  const double mean_burst = mean_ibi * (100.0 - pct) / pct;
  const auto min_burst = static_cast<std::size_t>(kMinBurstS * kTruthRateHz);
  std::uniform_int_distribution<std::size_t> ibi_draw(ibi_lo, ibi_hi);
  auto burst_draw = [&] {
    const double d = uniform(rng, {0.5 * mean_burst, 1.5 * mean_burst});
    return std::max(min_burst, static_cast<std::size_t>(std::llround(d)));
  };

  std::vector<Segment> segs;
  std::size_t t = std::min(burst_draw(), total);
  segs.push_back({0, t, false});
  while (t < total) {
    const std::size_t ibi = ibi_draw(rng);
    if (t + ibi + min_burst > total) {
      segs.back().length += total - t;
      break;
    }
    segs.push_back({t, ibi, true});
    t += ibi;
    const std::size_t burst = std::min(burst_draw(), total - t);
    segs.push_back({t, burst, false});
    t += burst;
  }
  return segs;
}

std::vector<std::uint8_t> layout_labels(const std::vector<Segment>& segs, std::size_t total) {
  std::vector<std::uint8_t> labels(total, 0);
  for (const Segment& s : segs) {
    if (s.interburst) std::fill_n(labels.begin() + s.start, s.length, 1);
  }
  return labels;
}

bool layout_ok(const GradeProfile& p, const BinaryMask& mask) {
  const IntervalList il = mask_to_intervals(mask);
  if (!p.ibi_percent.contains(ibi_percentage(il))) return false;
  if (p.grade.value() == 4 && max_ibi(il) < kSevereIbiS) return false;
  return true;
}

// Random-phase spectrum with magnitude 1/f between lo and hi (Hz).
std::vector<double> pink_noise(std::size_t n, double fs, double lo, double hi,
                               std::mt19937_64& rng) {
  const std::size_t bins = n / 2 + 1;
  std::vector<double> re(bins, 0.0), im(bins, 0.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 1; k < bins; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    const double a = normal(rng), b = normal(rng);
    if (f < lo || f > hi) continue;
    re[k] = a / f;
    im[k] = b / f;
  }
  if (n % 2 == 0) im[bins - 1] = 0.0;
  return inverse_real_fft(re, im, n);
}

void normalize_rms(std::span<double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = x.empty() ? 0.0 : sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (double& v : x) {
    v -= mean;
    ss += v * v;
  }
  const double rms = std::sqrt(ss / static_cast<double>(x.size()));
  if (rms > 0.0) {
    for (double& v : x) v /= rms;
  }
}

double rms(std::span<const double> x) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double peak_to_peak(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

std::vector<double> electrode_signal(const GradeProfile& p, const std::vector<Segment>& segs,
                                     std::size_t n, double fs, std::mt19937_64& rng) {
  std::vector<double> burst = pink_noise(n, fs, 0.5, 12.0, rng);
  std::vector<double> quiet = pink_noise(n, fs, 0.5, fs / 2.0, rng);
  normalize_rms(quiet);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : quiet) v += normal(rng);

  const double ratio = fs / kTruthRateHz;
  std::vector<double> out(n, 0.0);
  for (const Segment& s : segs) {
    const auto a = std::min<std::size_t>(n, std::llround(s.start * ratio));
    const auto b = std::min<std::size_t>(n, std::llround((s.start + s.length) * ratio));
    if (b <= a) continue;
    const std::vector<double>& src = s.interburst ? quiet : burst;
    std::span<double> dst(out.data() + a, b - a);
    std::copy(src.begin() + a, src.begin() + b, dst.begin());
    normalize_rms(dst);
    const double amp = uniform(rng, s.interburst ? p.interburst_rms_uv : p.burst_rms_uv);
    for (double& v : dst) v *= amp;
  }
  return out;
}

bool amplitudes_ok(const EegRecording& bipolar, const std::vector<Segment>& segs, double fs) {
  const double ratio = fs / kTruthRateHz;
  for (const Channel& ch : bipolar.channels()) {
    for (const Segment& s : segs) {
      const auto a = std::min<std::size_t>(ch.samples.size(), std::llround(s.start * ratio));
      const auto b = std::min<std::size_t>(ch.samples.size(),
                                           std::llround((s.start + s.length) * ratio));
      if (b <= a) continue;
      std::span<const double> x(ch.samples.data() + a, b - a);
      if (s.interburst ? rms(x) >= kInterburstRmsLimit
                       : peak_to_peak(x) <= kBurstPeakToPeakFloor) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

const std::array<GradeProfile, HieGrade::kCount>& default_profiles() {
  static const std::array<GradeProfile, HieGrade::kCount> profiles{{
      {HieGrade(1), {0.5, 3.0}, {0.0, 5.0}, {25.0, 50.0}, {2.0, 6.0}, 0.0},
      {HieGrade(2), {2.0, 8.0}, {20.0, 50.0}, {30.0, 100.0}, {2.0, 6.0}, 0.0},
      {HieGrade(3), {15.0, 50.0}, {40.0, 80.0}, {30.0, 100.0}, {2.0, 6.0}, 0.0},
      {HieGrade(4), {70.0, 150.0}, {90.0, 100.0}, {30.0, 100.0}, {2.0, 6.0}, 0.25},
  }};
  return profiles;
}

const GradeProfile& profile_for(HieGrade grade) { return default_profiles()[grade.index()]; }

double minimum_epoch_s(HieGrade grade) {
  return std::min(600.0, 10.0 * profile_for(grade).ibi_duration_s.hi);
}

void check_subject_args(HieGrade grade, double duration_s, double fs_hz) {
  if (!(fs_hz >= kTruthRateHz)) {
    throw Error("sampling rate must be at least 64 Hz, got " + format_shortest(fs_hz));
  }
  if (!(duration_s >= minimum_epoch_s(grade))) {
    throw Error("epoch of " + format_shortest(duration_s) + " s is too short for grade " +
                std::to_string(grade.value()) + " (needs " +
                format_shortest(minimum_epoch_s(grade)) + " s)");
  }
}

SyntheticSubject generate_subject(HieGrade grade, double duration_s, double fs_hz,
                                  std::uint64_t seed, std::string subject_id) {
  const GradeProfile& p = profile_for(grade);
  check_subject_args(grade, duration_s, fs_hz);
  const auto total = static_cast<std::size_t>(std::llround(duration_s * kTruthRateHz));
  const auto n = static_cast<std::size_t>(std::llround(duration_s * fs_hz));

  std::mt19937_64 rng(seed);
  const bool flat = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p.flat_probability;
  const MontageSpec montage = default_montage();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Segment> segs =
        flat ? std::vector<Segment>{{0, total, true}} : draw_layout(p, total, rng);
    BinaryMask truth(kTruthRateHz, layout_labels(segs, total));
    if (!flat && !layout_ok(p, truth)) continue;

    std::vector<Channel> channels;
    for (const std::string& e : default_electrodes()) {
      channels.push_back({e, electrode_signal(p, segs, n, fs_hz, rng)});
    }
    EegRecording rec(fs_hz, std::move(channels));
    if (!amplitudes_ok(derive_montage(rec, montage), segs, fs_hz)) continue;

    SyntheticSubject s{std::move(subject_id), std::move(rec), {}, {}, grade, seed, flat};
    for (const auto& [anode, cathode] : montage.pairs) {
      s.truth_labels.push_back(anode + "-" + cathode);
      s.truth_masks.push_back(truth);
    }
    return s;
  }
  throw Error("could not satisfy the grade " + std::to_string(grade.value()) +
              " profile within 100 attempts");
}

LabeledRecording labeled_recording(const SyntheticSubject& subject) {
  return {derive_montage(subject.recording, default_montage()), subject.truth_masks};
}

std::vector<CorpusEntry> corpus_plan(const CorpusOptions& options) {
  int sum = 0;
  for (int c : options.grade_counts) {
    if (c < 0) throw Error("grade counts must be non-negative");
    sum += c;
  }
  if (sum != options.n) {
    throw Error("grade counts sum to " + std::to_string(sum) + " but n is " +
                std::to_string(options.n));
  }
  std::vector<CorpusEntry> plan;
  for (int g = 0; g < HieGrade::kCount; ++g) {
    if (options.grade_counts[g] > 0) {
      check_subject_args(HieGrade(g + 1), options.epoch_s, options.fs_hz);
    }
    for (int i = 0; i < options.grade_counts[g]; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "S%02zu", plan.size() + 1);
      plan.push_back({id, HieGrade(g + 1), options.seed + plan.size()});
    }
  }
  return plan;
}

std::vector<SyntheticSubject> generate_corpus(const CorpusOptions& options) {
  std::vector<SyntheticSubject> out;
  for (const CorpusEntry& e : corpus_plan(options)) {
    out.push_back(
        generate_subject(e.grade, options.epoch_s, options.fs_hz, e.seed, e.subject_id));
  }
  return out;
}

}  // namespace neoburst
