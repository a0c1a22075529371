// tests/test_features.cpp

#include <doctest.h>

#include <cmath>
#include <random>

#include "speechaug/error.hpp"
#include "speechaug/features.hpp"
#include "testutil.hpp"

using namespace speechaug;
using namespace speechaug::features;

TEST_CASE("fbank shape: 1 s at 16 kHz with defaults is 98 x 80") {
  auto buf = testutil::sine(440.0, 1.0);
  auto m = compute_fbank(buf);
  CHECK(m.rows() == 98);
  CHECK(m.cols() == 80);
}

TEST_CASE("fbank frame-count formula over random lengths") {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> len_dist(400, 40000);
  for (int i = 0; i < 20; ++i) {
    const int len = len_dist(gen);
    auto buf = testutil::noise(len / 16000.0, 100 + i);
    if (buf.samples.size() < 400) continue;
    auto m = compute_fbank(buf);
    CHECK(m.rows() == 1 + (buf.samples.size() - 400) / 160);
  }
}

TEST_CASE("fbank on silence hits the log floor everywhere") {
  AudioBuffer z;
  z.sample_rate = 16000;
  z.samples = Eigen::ArrayXd::Zero(16000);
  auto m = compute_fbank(z);
  CHECK(m.minCoeff() == doctest::Approx(std::log(1e-10)));
  CHECK(m.maxCoeff() == doctest::Approx(std::log(1e-10)));
}

TEST_CASE("1 kHz tone peaks in the analytically located mel bin") {
  auto buf = testutil::sine(1000.0, 1.0);
  FbankConfig cfg;
  auto m = compute_fbank(buf, cfg);

  // Oracle: triangle support [f_{j-1}, f_{j+1}] from the HTK mel formula
  const double mel_lo = hz_to_mel(cfg.f_min_hz);
  const double mel_hi = hz_to_mel(cfg.f_max_hz);
  auto edge = [&](int i) {
    return mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));
  };
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    Eigen::Index j;
    m.row(t).maxCoeff(&j);
    CHECK(edge(static_cast<int>(j)) < 1000.0);
    CHECK(edge(static_cast<int>(j) + 2) > 1000.0);
  }
}

TEST_CASE("scaling the waveform shifts log energies by 2 ln g") {
  auto buf = testutil::sine(700.0, 0.5, 16000, 0.25);
  auto m1 = compute_fbank(buf);
  AudioBuffer scaled;
  scaled.sample_rate = 16000;
  scaled.samples = buf.samples * 2.0;
  auto m2 = compute_fbank(scaled);

  const double floor_val = std::log(1e-10);
  const double shift = 2.0 * std::log(2.0);
  int checked = 0;
  for (Eigen::Index t = 0; t < m1.rows(); ++t)
    for (Eigen::Index j = 0; j < m1.cols(); ++j)
      if (m1(t, j) > floor_val + 2.0 && m2(t, j) > floor_val + 2.0) {
        CHECK(std::abs(m2(t, j) - m1(t, j) - shift) < 1e-6);
        ++checked;
      }
  CHECK(checked > 100);
}

TEST_CASE("fbank error paths") {
  auto buf = testutil::sine(440.0, 1.0, 8000);
  CHECK_THROWS_AS(compute_fbank(buf), RateMismatch);
  auto tiny = testutil::sine(440.0, 0.01);  // 160 samples < 400
  CHECK_THROWS_AS(compute_fbank(tiny), TooShort);
}

namespace {

FeatureMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  FeatureMatrix m(rows, cols);
  for (Eigen::Index t = 0; t < rows; ++t)
    for (Eigen::Index j = 0; j < cols; ++j) m(t, j) = d(gen);
  return m;
}

}  // namespace

TEST_CASE("spec_augment: zero widths are bit-identity") {
  auto m = random_matrix(98, 80, 1);
  SpecAugmentConfig cfg;
  cfg.max_freq_width = 0;
  cfg.max_time_width = 0;
  auto out = spec_augment(m, cfg, 42);
  CHECK((out.array() == m.array()).all());
}

TEST_CASE("spec_augment: fixed seed is bit-deterministic") {
  auto m = random_matrix(98, 80, 2);
  SpecAugmentConfig cfg;
  auto a = spec_augment(m, cfg, 1234);
  auto b = spec_augment(m, cfg, 1234);
  CHECK((a.array() == b.array()).all());
  auto c = spec_augment(m, cfg, 1235);
  CHECK(!(a.array() == c.array()).all());
}

TEST_CASE("spec_augment: masked extents bounded, unmasked cells untouched") {
  auto m = random_matrix(98, 80, 3);
  SpecAugmentConfig cfg;
  const double fill = m.mean();

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto out = spec_augment(m, cfg, seed);
    REQUIRE(out.rows() == m.rows());
    REQUIRE(out.cols() == m.cols());

    // time masks fill whole rows, so freq-mask extent is measured over the
    // rows they left untouched
    std::vector<Eigen::Index> live_rows;
    for (Eigen::Index t = 0; t < m.rows(); ++t)
      if (!(out.row(t).array() == fill).all()) live_rows.push_back(t);
    const int full_rows = static_cast<int>(m.rows() - live_rows.size());
    int full_cols = 0;
    if (!live_rows.empty()) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        bool full = true;
        for (Eigen::Index t : live_rows)
          if (out(t, j) != fill) {
            full = false;
            break;
          }
        if (full) ++full_cols;
      }
    }
    CHECK(full_cols <= 2 * cfg.max_freq_width);
    CHECK(full_rows <= 2 * cfg.max_time_width);

    // every changed cell equals the fill value
    for (Eigen::Index t = 0; t < m.rows(); ++t)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (out(t, j) != m(t, j)) REQUIRE(out(t, j) == fill);
  }
}

TEST_CASE("spec_augment: time warp preserves shape and is deterministic") {
  auto m = random_matrix(98, 80, 4);
  SpecAugmentConfig cfg;
  cfg.time_warp_enabled = true;
  cfg.max_warp = 20;
  cfg.n_freq_masks = 0;
  cfg.n_time_masks = 0;
  auto a = spec_augment(m, cfg, 7);
  auto b = spec_augment(m, cfg, 7);
  CHECK((a.array() == b.array()).all());
  CHECK(a.rows() == m.rows());

  SpecAugmentConfig bad = cfg;
  bad.max_warp = 200;
  CHECK_THROWS_AS(spec_augment(m, bad, 7), ConfigShapeMismatch);
}

TEST_CASE("fbm1 roundtrip") {
  testutil::TempDir tmp("fbm1");
  auto m = random_matrix(13, 7, 5);
  write_fbm1(m, tmp / "m.fbm1");
  auto back = read_fbm1(tmp / "m.fbm1");
  REQUIRE(back.rows() == 13);
  REQUIRE(back.cols() == 7);
  // values survive the float32 cast
  CHECK((back - m).cwiseAbs().maxCoeff() < 1e-6);
  // float32 grid is a fixed point
  write_fbm1(back, tmp / "m2.fbm1");
  CHECK(testutil::read_bytes(tmp / "m.fbm1") == testutil::read_bytes(tmp / "m2.fbm1"));
}
