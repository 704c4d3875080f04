#include <fstream>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mpf/errors.hpp"
#include "mpf/template_database.hpp"
#include "mpf/tensor_file.hpp"

using namespace mpf;
using features::KeypointSet;

namespace {

TemplateDatabase sample_db() {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> n(0, 1);
  TemplateDatabase db;
  db.frame_ids = {0, 3, 6, 9};
  db.channels.emplace_back(ChannelSpec::parse("sad"));
  db.channels.emplace_back(ChannelSpec::parse("cnn-argmax"));
  db.channels.emplace_back(ChannelSpec::parse("generic-tensor:conv4"));
  for (int k = 0; k < 4; ++k) {
    DescriptorVector v(6), w(10);
    for (auto& x : v) x = n(rng);
    for (auto& x : w) x = n(rng);
    db.channels[0].add(v);
    db.channels[1].add(KeypointSet{{{k, 1}, {2, k}, {0, 0}}, 5, 4});
    db.channels[2].add(w);
  }
  return db;
}

}  // namespace

TEST_CASE("channel specs parse and name round trip") {
  for (const char* text : {"sad", "hog", "cnn-pyramid", "cnn-argmax", "generic-tensor:conv3", "external:c0"}) {
    CHECK(ChannelSpec::parse(text).name() == text);
  }
  CHECK(ChannelSpec::parse("cnn-argmax").metric == Metric::keypoint);
  CHECK(ChannelSpec::parse("sad").metric == Metric::cosine);
  CHECK(ChannelSpec::parse("generic-tensor:conv5").layer == "conv5");
  CHECK(ChannelSpec::parse("generic-tensor:conv5").needs_tensors());
  CHECK_FALSE(ChannelSpec::parse("hog").needs_tensors());
  CHECK_FALSE(ChannelSpec::parse("external:x").needs_tensors());
  for (const char* bad : {"", "sift", "sad:x", "generic-tensor", "generic-tensor:", "external"}) {
    CHECK_THROWS_AS(ChannelSpec::parse(bad), ConfigError);
  }
}

TEST_CASE("channel templates reject bad descriptors") {
  ChannelTemplates ch(ChannelSpec::parse("hog"));
  ch.add(DescriptorVector{1, 2, 3});
  CHECK_THROWS(ch.add(DescriptorVector{1, 2}));
  CHECK_THROWS(ch.add(DescriptorVector{1, NAN, 3}));
  CHECK_THROWS(ch.add(KeypointSet{{{0, 0}}, 1, 1}));
  CHECK(ch.size() == 1);

  ChannelTemplates kp(ChannelSpec::parse("cnn-argmax"));
  kp.add(KeypointSet{{{0, 0}}, 2, 2});
  CHECK_THROWS(kp.add(KeypointSet{{{0, 0}}, 3, 2}));
  CHECK_THROWS(kp.add(DescriptorVector{1}));
}

TEST_CASE("distance columns follow the channel metric") {
  ChannelTemplates cos(ChannelSpec::parse("sad"));
  cos.add(DescriptorVector{1, 0});
  cos.add(DescriptorVector{0, 1});
  const auto c = cos.distance_column(DescriptorVector{1, 0});
  CHECK(c == std::vector<double>{0.0, 1.0});

  ChannelSpec true_sad = ChannelSpec::parse("sad");
  true_sad.metric = Metric::sad;
  ChannelTemplates sad(true_sad);
  sad.add(DescriptorVector{1, 0});
  sad.add(DescriptorVector{0, 1});
  CHECK(sad.distance_column(DescriptorVector{1, 0}) == std::vector<double>{0.0, 1.0});
  CHECK(sad.distance_column(DescriptorVector{3, 0}) == std::vector<double>{1.0, 2.0});

  ChannelTemplates kp(ChannelSpec::parse("cnn-argmax"));
  kp.add(KeypointSet{{{3, 4}}, 9, 9});
  kp.add(KeypointSet{{{0, 0}}, 9, 9});
  CHECK(kp.distance_column(KeypointSet{{{0, 0}}, 9, 9}) == std::vector<double>{5.0, 0.0});
  CHECK_THROWS(kp.distance_column(DescriptorVector{0, 0}));
}

TEST_CASE("template database validation") {
  auto db = sample_db();
  CHECK_NOTHROW(db.validate());
  db.channels[1].add(KeypointSet{{{0, 0}, {0, 0}, {0, 0}}, 5, 4});
  CHECK_THROWS(db.validate());
  TemplateDatabase unordered = sample_db();
  unordered.frame_ids = {0, 3, 3, 9};
  CHECK_THROWS(unordered.validate());
  CHECK_THROWS(TemplateDatabase{}.validate());
}

TEST_CASE("template database save/load round trip") {
  testing::TempDir dir("db");
  const auto db = sample_db();
  save_database(db, dir.path());
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "0_sad.sqft"));
  CHECK(std::filesystem::exists(dir / "1_cnn-argmax.sqft"));
  CHECK(std::filesystem::exists(dir / "2_generic-tensor_conv4.sqft"));
  const auto t = io::read_tensor(dir / "0_sad.sqft");
  CHECK(t.maps == 4);
  CHECK(t.height == 1);
  CHECK(t.width == 6);

  const auto back = load_database(dir.path());
  CHECK(back.frame_ids == db.frame_ids);
  REQUIRE(back.channels.size() == 3);
  for (std::size_t c = 0; c < 3; ++c) CHECK(back.channels[c].spec().name() == db.channels[c].spec().name());
  CHECK(back.channels[0].vectors().data() == db.channels[0].vectors().data());
  CHECK(back.channels[1].keypoints() == db.channels[1].keypoints());
  CHECK(back.channels[2].vectors().data() == db.channels[2].vectors().data());
}

TEST_CASE("loading a broken database fails") {
  testing::TempDir dir("db");
  CHECK_THROWS_AS(load_database(dir.path()), IngestError);
  save_database(sample_db(), dir.path());
  std::filesystem::remove(dir / "1_cnn-argmax.sqft");
  CHECK_THROWS(load_database(dir.path()));
  {
    std::ofstream out(dir / "manifest.json");
    out << "{\"format\": \"other\"}";
  }
  CHECK_THROWS_AS(load_database(dir.path()), IngestError);
}
