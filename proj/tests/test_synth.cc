#include <gtest/gtest.h>

#include "test_util.h"
#include "vprkit/core/error.h"
#include "vprkit/similarity/similarity.h"
#include "vprkit/synth/synthgen.h"

using namespace vprkit;
using namespace vprkit::synth;

namespace {

World world(int n, int dim, int aliasing = 0, std::uint64_t seed = 1) {
  return generate_world(WorldConfig{n, dim, aliasing, seed});
}

Traverse traverse(const World& w, const std::string& events, double noise = 0.0,
                  std::uint64_t seed = 0) {
  TraverseScript s;
  s.events = parse_events(events);
  s.noise_sigma = noise;
  s.seed = seed;
  return generate_traverse(w, s);
}

double cosine(const Vector& a, const Vector& b) { return a.dot(b) / (a.norm() * b.norm()); }

SimilarityMatrix cos_sim(const Traverse& db, const Traverse& q) {
  return similarity::similarity_matrix(db.descriptors.values, q.descriptors.values,
                                       similarity::Metric::kCosine);
}

}  // namespace

TEST(World, DeterministicInSeed) {
  EXPECT_EQ(world(20, 8, 2, 5).latents, world(20, 8, 2, 5).latents);
  EXPECT_NE(world(20, 8, 2, 5).latents, world(20, 8, 2, 6).latents);
}

TEST(World, LatentsAreUnitNorm) {
  const World w = world(30, 16, 3);
  for (Eigen::Index i = 0; i < w.latents.rows(); ++i)
    EXPECT_NEAR(w.latents.row(i).norm(), 1.0, 1e-12);
}

TEST(World, OneAliasingPairExactlyOneHighCosine) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const World w = world(20, 32, 1, seed);
    int high = 0;
    for (int a = 0; a < 20; ++a)
      for (int b = a + 1; b < 20; ++b)
        if (cosine(w.latents.row(a), w.latents.row(b)) > 0.99) ++high;
    EXPECT_EQ(high, 1) << "seed " << seed;
    ASSERT_EQ(w.aliased.size(), 1u);
  }
}

TEST(World, IndependentPlacesAreDissimilar) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const World w = world(2, 64, 0, seed);
    EXPECT_LT(std::abs(cosine(w.latents.row(0), w.latents.row(1))), 0.9);
  }
}

TEST(World, ConfigValidation) {
  EXPECT_THROW(generate_world({1, 8, 0, 0}), ArgumentError);
  EXPECT_THROW(generate_world({4, 1, 0, 0}), ArgumentError);
  EXPECT_THROW(generate_world({4, 8, 3, 0}), ArgumentError);
}

TEST(Traverse, ZeroNoiseVisitCopiesLatents) {
  const World w = world(10, 8);
  const Traverse t = traverse(w, "visit 0 5 1");
  ASSERT_EQ(t.descriptors.n(), 5);
  EXPECT_EQ(t.descriptors.values, w.latents.topRows(5));
  EXPECT_EQ(t.place_ids, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Traverse, StopRepeatsPlaceAndFormsVerticalLine) {
  const World w = world(10, 8);
  const Traverse db = traverse(w, "visit 0 4 1, stop 4 3, visit 5 10 1");
  EXPECT_EQ(db.place_ids, (std::vector<int>{0, 1, 2, 3, 4, 4, 4, 5, 6, 7, 8, 9}));
  const Traverse q = traverse(w, "visit 0 10 1");
  const GroundTruth g = derive_gt(db, q);
  for (std::size_t i = 0; i < g.rows(); ++i) EXPECT_EQ(g.gt(i, 4), i >= 4 && i <= 6);
  // Same column, three consecutive rows: a vertical line.
  std::size_t col_count = 0;
  for (std::size_t i = 0; i < g.rows(); ++i) col_count += g.gt(i, 4);
  EXPECT_EQ(col_count, 3u);
}

TEST(Traverse, StopInQueryFormsHorizontalLine) {
  const World w = world(10, 8);
  const GroundTruth g =
      derive_gt(traverse(w, "visit 0 10 1"), traverse(w, "visit 0 3 1, stop 3 4, visit 4 10 1"));
  for (std::size_t j = 0; j < g.cols(); ++j) EXPECT_EQ(g.gt(3, j), j >= 3 && j <= 6);
}

TEST(Traverse, StopInBothFormsBlock) {
  const World w = world(10, 8);
  const GroundTruth g = derive_gt(traverse(w, "visit 0 2 1, stop 2 3, visit 3 6 1"),
                                  traverse(w, "visit 0 2 1, stop 2 2, visit 3 6 1"));
  for (std::size_t i = 2; i <= 4; ++i)
    for (std::size_t j = 2; j <= 3; ++j) EXPECT_TRUE(g.gt(i, j));
  EXPECT_EQ(g.gt.count(), 2u + 6u + 3u);
}

TEST(Traverse, FastQueryGivesSlopeTwoLine) {
  const World w = world(10, 8);
  const GroundTruth g = derive_gt(traverse(w, "visit 0 10 1"), traverse(w, "visit 0 10 2"));
  ASSERT_EQ(g.cols(), 5u);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(g.gt(i, j), i == 2 * j);
}

TEST(Traverse, SlowVisitRepeatsPlaces) {
  const World w = world(10, 8);
  EXPECT_EQ(traverse(w, "visit 0 3 0.5").place_ids, (std::vector<int>{0, 0, 1, 1, 2, 2}));
}

TEST(Traverse, IdenticalScriptsGiveIdentity) {
  const World w = world(12, 8);
  const GroundTruth g = derive_gt(traverse(w, "visit 0 12 1"), traverse(w, "visit 0 12 1"));
  EXPECT_EQ(g.gt, testutil::identity_gt(12).gt);
}

TEST(Traverse, SkipColumnsAreAllFalse) {
  const World w = world(20, 16);
  const Traverse q = traverse(w, "visit 0 5 1, skip 5 9, visit 9 20 1");
  const GroundTruth g = derive_gt(traverse(w, "visit 0 20 1"), q);
  ASSERT_EQ(g.cols(), 20u);
  for (std::size_t j = 0; j < g.cols(); ++j) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) c += g.gt(i, j);
    EXPECT_EQ(c, (j >= 5 && j < 9) ? 0u : 1u) << "column " << j;
    EXPECT_EQ(q.place_ids[j] == -1, j >= 5 && j < 9);
  }
}

TEST(Traverse, LoopInDbGivesNonConsecutiveRows) {
  const World w = world(10, 8);
  const GroundTruth g =
      derive_gt(traverse(w, "visit 0 10 1, loop 2 5"), traverse(w, "visit 0 10 1"));
  for (std::size_t j = 2; j < 5; ++j) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < g.rows(); ++i)
      if (g.gt(i, j)) rows.push_back(i);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GT(rows[1] - rows[0], 1u);
  }
}

TEST(Traverse, ZeroNoiseCosineIsOneExactlyOnGroundTruth) {
  const World w = world(40, 32, 0, 3);
  const Traverse db = traverse(w, "visit 0 40 1, stop 10 3, loop 0 5");
  const Traverse q = traverse(w, "visit 0 20 1, skip 20 25, visit 25 40 2");
  const GroundTruth g = derive_gt(db, q);
  const SimilarityMatrix s = cos_sim(db, q);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (g.gt(i, j)) {
        ASSERT_EQ(s(i, j), 1.0);
      } else {
        ASSERT_LT(s(i, j), 1.0);
      }
    }
  }
}

TEST(Traverse, NoiseAndConditionAreApplied) {
  const World w = world(10, 8);
  TraverseScript s;
  s.events = parse_events("visit 0 10 1");
  const Condition c = make_condition(8, 2.0, 0.5, 1.5, 4);
  EXPECT_NEAR(c.bias.norm(), 2.0, 1e-12);
  for (int k = 0; k < 8; ++k) {
    EXPECT_GE(c.scale(k), 0.5);
    EXPECT_LE(c.scale(k), 1.5);
  }
  s.condition_bias = c.bias;
  s.condition_scale = c.scale;
  const Traverse t = generate_traverse(w, s);
  for (int i = 0; i < 10; ++i) {
    const Vector expect = c.scale.cwiseProduct(w.latents.row(i).transpose()) + c.bias;
    EXPECT_LT((t.descriptors.values.row(i).transpose() - expect).norm(), 1e-12);
  }
  s.noise_sigma = 0.1;
  const Traverse noisy = generate_traverse(w, s);
  EXPECT_GT((noisy.descriptors.values - t.descriptors.values).norm(), 0.0);
  EXPECT_EQ(generate_traverse(w, s).descriptors.values, noisy.descriptors.values);
}

TEST(Script, ValidationRejectsBadEvents) {
  const World w = world(5, 4);
  auto bad = [&](const std::string& ev) {
    TraverseScript s;
    s.events = parse_events(ev);
    return s;
  };
  EXPECT_THROW(generate_traverse(w, bad("visit 0 6 1")), ArgumentError);
  EXPECT_THROW(generate_traverse(w, bad("stop 1 0")), ArgumentError);
  EXPECT_THROW(generate_traverse(w, bad("stop 5 1")), ArgumentError);
  TraverseScript neg = bad("visit 0 5 1");
  neg.noise_sigma = -1;
  EXPECT_THROW(generate_traverse(w, neg), ArgumentError);
}

TEST(Script, ParseFormatRoundTrip) {
  const std::string text = "visit 0 20 1.5, stop 5 3, loop 0 5, skip 20 25";
  const auto events = parse_events(text);
  ASSERT_EQ(events.size(), 4u);
  EXPECT_EQ(format_events(events), text);
  EXPECT_EQ(format_events(parse_events("visit 0 3; stop 1 2")), "visit 0 3 1, stop 1 2");
  EXPECT_THROW(parse_events("jump 1 2"), ArgumentError);
  EXPECT_THROW(parse_events("stop 1"), ArgumentError);
  EXPECT_THROW(parse_events("loop 1 2 3"), ArgumentError);
}
