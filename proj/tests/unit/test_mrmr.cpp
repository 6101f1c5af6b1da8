#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "neoburst/error.hpp"
#include "neoburst/mrmr.hpp"

using namespace neoburst;

namespace {

double entropy(const std::map<std::pair<int, int>, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [key, c] : counts) h -= (c / n) * std::log(c / n);
  return h;
}

// I(a; b) = H(a) + H(b) - H(a, b), counted directly.
double mi_oracle(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> ha, hb, hab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ha[{a[i], 0}] += 1.0;
    hb[{b[i], 0}] += 1.0;
    hab[{a[i], b[i]}] += 1.0;
  }
  const double n = static_cast<double>(a.size());
  return entropy(ha, n) + entropy(hb, n) - entropy(hab, n);
}

std::vector<std::size_t> greedy_oracle(const FeatureMatrix& x, const std::vector<int>& labels,
                                       std::size_t k) {
  std::vector<int> y;
  for (int l : labels) y.push_back(l > 0);
  std::vector<std::vector<int>> q;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    q.push_back(quantize_equal_frequency(x.column(c), 16));
  }
  std::vector<std::size_t> chosen;
  while (chosen.size() < k) {
    std::size_t best = x.cols();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      double score = mi_oracle(q[c], y);
      if (!chosen.empty()) {
        double red = 0.0;
        for (std::size_t s : chosen) red += mi_oracle(q[c], q[s]);
        score -= red / static_cast<double>(chosen.size());
      }
      if (score > best_score + 1e-12) {
        best = c;
        best_score = score;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                            std::vector<int>& labels) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("f" + std::to_string(c));
  FeatureMatrix x(names, rows);
  std::normal_distribution<double> normal;
  labels.assign(rows, 0);
  std::vector<double> signal(cols);
  for (double& s : signal) s = normal(rng);
  for (std::size_t r = 0; r < rows; ++r) {
    labels[r] = rng() % 2 ? 1 : -1;
    for (std::size_t c = 0; c < cols; ++c) {
      x.at(r, c) = signal[c] * labels[r] + normal(rng);
    }
  }
  return x;
}

}  // namespace

TEST_SUITE("mrmr") {
  TEST_CASE("equal-frequency quantisation") {
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(quantize_equal_frequency(v, 2) == std::vector<int>{1, 0, 1, 0});
    CHECK(quantize_equal_frequency(v, 4) == std::vector<int>{3, 0, 2, 1});
    const std::vector<double> ties{5.0, 5.0, 5.0, 1.0};
    CHECK(quantize_equal_frequency(ties, 4) == std::vector<int>{1, 1, 1, 0});
  }

  TEST_CASE("mutual information matches the entropy identity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> a(200), b(200);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = static_cast<int>(rng() % 5);
        b[i] = rng() % 3 == 0 ? a[i] % 3 : static_cast<int>(rng() % 3);
      }
      CHECK(mutual_information(a, 5, b, 3) == doctest::Approx(mi_oracle(a, b)).epsilon(1e-9));
    }
    const std::vector<int> same{0, 1, 0, 1};
    CHECK(mutual_information(same, 2, same, 2) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(mutual_information(same, 2, std::vector<int>{0}, 2), Error);
  }

  TEST_CASE("a column equal to the label is picked first") {
    std::mt19937_64 rng(8);
    std::vector<int> labels;
    FeatureMatrix x = random_matrix(rng, 300, 5, labels);
    for (std::size_t r = 0; r < x.rows(); ++r) x.at(r, 3) = labels[r];
    const MrmrResult res = select_features(x, labels, 1);
    CHECK(res.selected == std::vector<std::size_t>{3});
    CHECK(res.relevance[3] == doctest::Approx(mi_oracle(
                                  quantize_equal_frequency(x.column(3), 16),
                                  std::vector<int>(labels.begin(), labels.end()))));
  }

  TEST_CASE("a duplicate of a selected column is passed over") {
    std::mt19937_64 rng(10);
    std::vector<int> labels;
    FeatureMatrix x = random_matrix(rng, 400, 4, labels);
    std::normal_distribution<double> normal;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      x.at(r, 0) = 2.0 * labels[r] + normal(rng);
      x.at(r, 1) = x.at(r, 0);
      x.at(r, 2) = 1.0 * labels[r] + normal(rng);
      x.at(r, 3) = normal(rng);
    }
    const MrmrResult res = select_features(x, labels, 2);
    CHECK(res.selected[0] == 0);
    CHECK(res.selected[1] == 2);
    CHECK(res.selected == greedy_oracle(x, labels, 2));
  }

  TEST_CASE("selection agrees with an exhaustive greedy oracle") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> labels;
      const FeatureMatrix x = random_matrix(rng, 150, 6, labels);
      CHECK(select_features(x, labels, 4).selected == greedy_oracle(x, labels, 4));
    }
  }

  TEST_CASE("k equal to the column count returns every index once") {
    std::mt19937_64 rng(14);
    std::vector<int> labels;
    const FeatureMatrix x = random_matrix(rng, 200, 14, labels);
    auto sel = select_features(x, labels, 14).selected;
    std::sort(sel.begin(), sel.end());
    for (std::size_t i = 0; i < 14; ++i) CHECK(sel[i] == i);
    CHECK(select_features(x, labels, 14).selected == select_features(x, labels, 14).selected);
  }

  TEST_CASE("argument errors") {
    std::mt19937_64 rng(1);
    std::vector<int> labels;
    const FeatureMatrix x = random_matrix(rng, 20, 3, labels);
    CHECK_THROWS_AS(select_features(x, labels, 0), Error);
    CHECK_THROWS_AS(select_features(x, labels, 4), Error);
    CHECK_THROWS_AS(select_features(x, std::vector<int>(20, 1), 1), Error);
    CHECK_THROWS_AS(select_features(x, std::vector<int>(19, 1), 1), Error);
  }
}
