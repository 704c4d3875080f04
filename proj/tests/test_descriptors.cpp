#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mpf/cnn_features.hpp"
#include "mpf/hog.hpp"
#include "mpf/sad.hpp"
#include "mpf/template_database.hpp"

using namespace mpf;
using namespace mpf::features;
using doctest::Approx;

namespace {

GrayImage affine(const GrayImage& img, double a, double b) {
  GrayImage out = img;
  for (auto& p : out.pixels) p = a * p + b;
  return out;
}

double max_abs_diff(const DescriptorVector& a, const DescriptorVector& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(double(a[i]) - double(b[i])));
  return m;
}

// Direct per-patch normalisation of a thumbnail that needs no resampling.
std::vector<double> patch_oracle(const GrayImage& img, int patch) {
  std::vector<double> out(img.pixels.size());
  for (int py = 0; py < img.height; py += patch)
    for (int px = 0; px < img.width; px += patch) {
      double s = 0, ss = 0;
      for (int y = py; y < py + patch; ++y)
        for (int x = px; x < px + patch; ++x) s += img.at(x, y);
      const double mean = s / (patch * patch);
      for (int y = py; y < py + patch; ++y)
        for (int x = px; x < px + patch; ++x) ss += (img.at(x, y) - mean) * (img.at(x, y) - mean);
      const double sd = std::sqrt(ss / (patch * patch));
      for (int y = py; y < py + patch; ++y)
        for (int x = px; x < px + patch; ++x)
          out[static_cast<std::size_t>(y) * img.width + x] = sd == 0 ? 0.0 : (img.at(x, y) - mean) / sd;
    }
  return out;
}

// Straightforward HOG for a frame already at the working size.
std::vector<double> hog_oracle(const GrayImage& f, const HogParams& p) {
  const int cx = p.width / p.cell, cy = p.height / p.cell;
  std::vector<std::vector<double>> cells(cx * cy, std::vector<double>(p.bins, 0.0));
  const auto px = [&](int x, int y) { return f.at(std::clamp(x, 0, p.width - 1), std::clamp(y, 0, p.height - 1)); };
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      const double gx = px(x + 1, y) - px(x - 1, y);
      const double gy = px(x, y + 1) - px(x, y - 1);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0) continue;
      double deg = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      while (deg < 0) deg += 180.0;
      while (deg >= 180.0) deg -= 180.0;
      const double width = 180.0 / p.bins;
      const int lo = static_cast<int>(deg / width);
      const double t = deg / width - lo;
      cells[(y / p.cell) * cx + x / p.cell][lo % p.bins] += mag * (1 - t);
      cells[(y / p.cell) * cx + x / p.cell][(lo + 1) % p.bins] += mag * t;
    }
  std::vector<double> out;
  for (int by = 0; by + p.block <= cy; ++by)
    for (int bx = 0; bx + p.block <= cx; ++bx) {
      std::vector<double> v;
      for (int y = by; y < by + p.block; ++y)
        for (int x = bx; x < bx + p.block; ++x) v.insert(v.end(), cells[y * cx + x].begin(), cells[y * cx + x].end());
      double n = 0;
      for (double e : v) n += e * e;
      for (double e : v) out.push_back(e / std::sqrt(n + p.epsilon * p.epsilon));
    }
  return out;
}

io::FeatureMapSet random_maps(std::uint32_t f, std::uint32_t h, std::uint32_t w, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> d(0.0f, 10.0f);
  io::FeatureMapSet m(f, h, w);
  for (auto& v : m.values) v = d(rng);
  return m;
}

KeypointSet random_keypoints(std::size_t f, int h, int w, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1);
  KeypointSet k{{}, h, w};
  for (std::size_t i = 0; i < f; ++i) k.points.push_back({dx(rng), dy(rng)});
  return k;
}

}  // namespace

TEST_CASE("bilinear 2x downsample averages 2x2 blocks") {
  const auto img = testing::random_image(8, 6, 3);
  const auto half = resize_bilinear(img, 4, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) {
      const double box = (img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) + img.at(2 * x, 2 * y + 1) +
                          img.at(2 * x + 1, 2 * y + 1)) / 4.0;
      CHECK(half.at(x, y) == Approx(box).epsilon(1e-12));
    }
  CHECK(resize_bilinear(img, 8, 6).pixels == img.pixels);
  CHECK_THROWS(resize_bilinear(GrayImage{}, 2, 2));
}

TEST_CASE("SAD descriptor of a constant image is all zeros") {
  const auto d = sad_descriptor(GrayImage(640, 480, 128));
  CHECK(d.size() == 2048);
  for (float v : d) CHECK(v == 0.0f);
}

TEST_CASE("SAD descriptor with one bright patch") {
  GrayImage img(64, 32, 50);
  // patch (2,1): x 16..23, y 8..15; one bright quarter inside it
  for (int y = 8; y < 12; ++y)
    for (int x = 16; x < 20; ++x) img.at(x, y) = 250;
  const auto d = sad_descriptor(img);
  const auto oracle = patch_oracle(img, 8);
  std::size_t nonzero = 0;
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 64; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 64 + x;
      const bool inside = x >= 16 && x < 24 && y >= 8 && y < 16;
      if (!inside) CHECK(d[i] == 0.0f);
      if (d[i] != 0.0f) ++nonzero;
      CHECK(d[i] == Approx(oracle[i]).epsilon(1e-6));
    }
  CHECK(nonzero == 64);
  // 16 bright of 64: mean 100, sd sqrt(16*150^2 + 48*50^2)/8 = 86.6025...
  CHECK(d[8 * 64 + 16] == Approx(150.0 / std::sqrt(7500.0)).epsilon(1e-6));
}

TEST_CASE("SAD descriptor matches per-patch arithmetic on random thumbnails") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto img = testing::random_image(64, 32, seed);
    const auto d = sad_descriptor(img);
    const auto oracle = patch_oracle(img, 8);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == Approx(oracle[i]).epsilon(1e-5));
  }
  const auto img = testing::random_image(64, 32, 9);
  const auto d4 = sad_descriptor(img, {64, 32, 4});
  const auto o4 = patch_oracle(img, 4);
  for (std::size_t i = 0; i < d4.size(); ++i) CHECK(d4[i] == Approx(o4[i]).epsilon(1e-5));
}

TEST_CASE("SAD descriptor is invariant to affine intensity changes") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto img = testing::random_image(320, 240, 100 + seed);
    const auto base = sad_descriptor(img);
    CHECK(max_abs_diff(base, sad_descriptor(affine(img, 2.0, 10.0))) < 1e-6);
    CHECK(max_abs_diff(base, sad_descriptor(affine(img, 0.37, -4.0))) < 1e-6);
  }
}

TEST_CASE("SAD refuses images smaller than the thumbnail") {
  CHECK_THROWS_AS(sad_descriptor(GrayImage(63, 32, 1)), std::invalid_argument);
  CHECK_THROWS_AS(sad_descriptor(GrayImage(64, 31, 1)), std::invalid_argument);
  CHECK_NOTHROW(sad_descriptor(GrayImage(64, 32, 1)));
  GrayImage t(64, 32);
  CHECK_THROWS_AS(patch_normalize(t, 7), std::invalid_argument);
}

TEST_CASE("HOG geometry gives 6156 values") {
  CHECK(hog_length() == 19 * 9 * 4 * 9);
  CHECK(hog_length() == 6156);
  CHECK(hog_descriptor(testing::random_image(100, 50, 1)).size() == 6156);
}

TEST_CASE("HOG of a constant image is zero") {
  for (float v : hog_descriptor(GrayImage(640, 320, 77))) CHECK(v == 0.0f);
}

TEST_CASE("HOG vertical step edge lands in the horizontal-gradient bin") {
  GrayImage img(640, 320, 0);
  // edge between x = 335 and 336, inside cell column 10
  for (int y = 0; y < 320; ++y)
    for (int x = 336; x < 640; ++x) img.at(x, y) = 200;
  const auto d = hog_descriptor(img);
  const HogParams p;
  // block (by, bx) covers cells bx..bx+1; cell 10 sits in blocks 9 and 10
  for (int by = 0; by < 9; ++by)
    for (int bx = 0; bx < 19; ++bx) {
      const std::size_t base = (static_cast<std::size_t>(by) * 19 + bx) * 36;
      for (int c = 0; c < 4; ++c) {
        const int cell_x = bx + c % 2;
        for (int b = 0; b < 9; ++b) {
          const float v = d[base + c * 9 + b];
          if (cell_x == 10 && b == 0) {
            // two cells in the block carry the edge, equal energy
            CHECK(v == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
          } else {
            CHECK(v == 0.0f);
          }
        }
      }
    }
  const auto oracle = hog_oracle(img, p);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == Approx(oracle[i]).epsilon(1e-6));
}

TEST_CASE("HOG matches a direct recomputation on random frames") {
  const HogParams p{128, 64, 16, 9, 2, 1e-6};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto img = testing::random_image(128, 64, 40 + seed);
    const auto d = hog_descriptor(img, p);
    const auto oracle = hog_oracle(img, p);
    REQUIRE(d.size() == oracle.size());
    REQUIRE(d.size() == hog_length(p));
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == Approx(oracle[i]).epsilon(1e-5));
  }
}

TEST_CASE("HOG is invariant to intensity scaling and offset") {
  const auto img = testing::random_image(640, 320, 5);
  const auto base = hog_descriptor(img);
  CHECK(max_abs_diff(base, hog_descriptor(affine(img, 2.0, 0.0))) < 1e-6);
  CHECK(max_abs_diff(base, hog_descriptor(affine(img, 3.5, -20.0))) < 1e-6);
  const auto small = testing::random_image(200, 150, 6);
  CHECK(max_abs_diff(hog_descriptor(small), hog_descriptor(affine(small, 0.5, 7.0))) < 1e-6);
}

TEST_CASE("HOG rejects non-finite pixels and bad geometry") {
  GrayImage img(64, 32, 1);
  img.at(3, 3) = std::nan("");
  CHECK_THROWS_AS(hog_descriptor(img), std::invalid_argument);
  img.at(3, 3) = INFINITY;
  CHECK_THROWS_AS(hog_descriptor(img), std::invalid_argument);
  CHECK_THROWS_AS(hog_length({640, 320, 30}), std::invalid_argument);
  CHECK_THROWS_AS(hog_descriptor(GrayImage{}), std::invalid_argument);
}

TEST_CASE("pyramid pooling of a single 7 at row 1 col 1") {
  io::FeatureMapSet m(1, 4, 4);
  m.at(0, 1, 1) = 7.0f;
  CHECK(pyramid_pool(m) == DescriptorVector{7, 7, 0, 0, 0});
}

TEST_CASE("pyramid pooling of a constant map") {
  io::FeatureMapSet m(2, 5, 3, 2.5f);
  CHECK(pyramid_pool(m) == DescriptorVector(10, 2.5f));
}

TEST_CASE("pyramid quadrants split at floor(H/2), floor(W/2)") {
  io::FeatureMapSet m(1, 3, 5);
  // rows 0 | 1..2, cols 0..1 | 2..4
  m.at(0, 0, 1) = 1;
  m.at(0, 0, 2) = 2;
  m.at(0, 1, 0) = 3;
  m.at(0, 2, 4) = 4;
  CHECK(pyramid_pool(m) == DescriptorVector{4, 1, 2, 3, 4});
  io::FeatureMapSet row(1, 1, 4);
  row.values = {5, 0, 0, 6};
  // one row: north and south both span it
  CHECK(pyramid_pool(row) == DescriptorVector{6, 5, 6, 5, 6});
  CHECK_THROWS(pyramid_pool(io::FeatureMapSet{}));
}

TEST_CASE("pyramid descriptor standardisation uses running statistics") {
  io::FeatureMapSet m(2, 2, 2);
  m.values = {1, 2, 3, 4, 0, 0, 0, 8};
  RunningStats stats;
  const auto first = cnn_pyramid_descriptor(m, stats);
  CHECK(first == DescriptorVector(10, 0.0f));
  CHECK(stats.images() == 1);

  io::FeatureMapSet n(2, 2, 2);
  n.values = {2, 2, 2, 2, 1, 1, 1, 1};
  const auto second = cnn_pyramid_descriptor(n, stats);
  // map 0 has seen {4,1,2,3,4} and {2,2,2,2,2}
  std::vector<double> seen0{4, 1, 2, 3, 4, 2, 2, 2, 2, 2};
  double mean = 0, var = 0;
  for (double v : seen0) mean += v / 10;
  for (double v : seen0) var += (v - mean) * (v - mean) / 10;
  CHECK(stats.mean(0) == Approx(mean));
  CHECK(stats.stddev(0) == Approx(std::sqrt(var)));
  for (int j = 0; j < 5; ++j) CHECK(second[j] == Approx((2 - mean) / std::sqrt(var)).epsilon(1e-6));
  CHECK(second.size() == 10);

  RunningStats flat;
  io::FeatureMapSet c(1, 2, 2, 3.0f);
  cnn_pyramid_descriptor(c, flat);
  CHECK(cnn_pyramid_descriptor(c, flat) == DescriptorVector(5, 0.0f));
  io::FeatureMapSet other(3, 2, 2);
  CHECK_THROWS(cnn_pyramid_descriptor(other, flat));
}

TEST_CASE("pyramid descriptor length is 5F") {
  std::mt19937_64 rng(2);
  for (std::uint32_t f : {1u, 4u, 13u}) {
    RunningStats s;
    CHECK(cnn_pyramid_descriptor(random_maps(f, 6, 7, rng), s).size() == 5 * f);
  }
}

TEST_CASE("argmax keypoints and tie-breaks") {
  io::FeatureMapSet m(3, 4, 5);
  m.at(0, 3, 2) = 9;  // unique max at x=2, y=3
  m.at(2, 0, 1) = 4;  // equal maxima at (1,0) and (0,1)
  m.at(2, 1, 0) = 4;
  const auto k = cnn_argmax_keypoints(m);
  CHECK(k.height == 4);
  CHECK(k.width == 5);
  CHECK(k.points[0] == Keypoint{2, 3});
  CHECK(k.points[1] == Keypoint{0, 0});  // constant map
  CHECK(k.points[2] == Keypoint{1, 0});
}

TEST_CASE("argmax keypoints survive monotone rescaling") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    auto m = random_maps(4, 6, 6, rng);
    auto r = m;
    for (auto& v : r.values) v = std::exp(0.3f * v) + 2.0f;
    CHECK(cnn_argmax_keypoints(m) == cnn_argmax_keypoints(r));
  }
}

TEST_CASE("keypoint distance examples") {
  const KeypointSet q{{{0, 0}}, 10, 10};
  const KeypointSet t{{{3, 4}}, 10, 10};
  CHECK(keypoint_distance(q, t) == 5.0);
  CHECK(keypoint_distance(t, t) == 0.0);
  const KeypointSet a{{{0, 0}, {1, 1}}, 10, 10};
  const KeypointSet b{{{3, 4}, {1, 1}}, 10, 10};
  CHECK(keypoint_distance(a, b) == 2.5);
  CHECK_THROWS(keypoint_distance(q, a));
  CHECK_THROWS(keypoint_distance(q, KeypointSet{{{0, 0}}, 10, 11}));
}

TEST_CASE("keypoint distance is a metric") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const auto a = random_keypoints(6, 13, 13, rng);
    const auto b = random_keypoints(6, 13, 13, rng);
    const auto c = random_keypoints(6, 13, 13, rng);
    CHECK(keypoint_distance(a, b) == keypoint_distance(b, a));
    CHECK(keypoint_distance(a, a) == 0.0);
    CHECK((keypoint_distance(a, b) == 0.0) == (a == b));
    CHECK(keypoint_distance(a, c) <= keypoint_distance(a, b) + keypoint_distance(b, c) + 1e-12);
  }
}

TEST_CASE("cosine distance examples") {
  const std::vector<float> q{1, 0};
  CHECK(cosine_distance(q, std::vector<float>{1, 1}) == Approx(1 - 1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cosine_distance(q, std::vector<float>{0, 3}) == 1.0);
  CHECK(cosine_distance(q, std::vector<float>{0, 0}) == 1.0);
  CHECK(cosine_distance(std::vector<float>{0, 0}, std::vector<float>{0, 0}) == 1.0);
  CHECK(cosine_distance(q, std::vector<float>{-2, 0}) == 2.0);

  DescriptorMatrix db;
  db.append(std::vector<float>{1, 1});
  db.append(std::vector<float>{1, 0});
  db.append(std::vector<float>{0, 1});
  const auto col = cosine_distance_column(q, db);
  CHECK(col[1] == 0.0);
  CHECK(col[2] == 1.0);
  CHECK_THROWS(cosine_distance_column(q, DescriptorMatrix{}));
  CHECK_THROWS(cosine_distance_column(std::vector<float>{1, 2, 3}, db));
}

TEST_CASE("true SAD metric is the mean absolute difference") {
  CHECK(sad_distance(std::vector<float>{1, 2, 3, 4}, std::vector<float>{2, 2, 1, 4}) == 0.75);
}

TEST_CASE("distance columns are finite and non-negative") {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> n(0, 1);
  DescriptorMatrix db;
  for (int k = 0; k < 30; ++k) {
    std::vector<float> v(16);
    for (auto& x : v) x = n(rng);
    if (k == 7) std::fill(v.begin(), v.end(), 0.0f);
    db.append(v);
  }
  for (int t = 0; t < 20; ++t) {
    std::vector<float> q(16);
    for (auto& x : q) x = n(rng);
    for (const auto& col : {cosine_distance_column(q, db), sad_distance_column(q, db)})
      for (double d : col) {
        CHECK(std::isfinite(d));
        CHECK(d >= 0.0);
      }
  }
}
