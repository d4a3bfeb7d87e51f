#include <gtest/gtest.h>

#include <random>

#include "dsi/errors.hpp"
#include "dsi/measures.hpp"
#include "dsi/separability.hpp"
#include "dsi/synthetic.hpp"
#include "oracles.hpp"

using namespace dsi;

TEST(Quantile, LinearInterpolation) {
  std::vector<double> v{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.15), 1.45);
}

TEST(F1, IdenticalClassesAreMaximallyComplex) {
  const Dataset ds(2, {0, 0, 1, 1, 0, 0, 1, 1}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(f1(ds).value, 1.0);
}

TEST(F1, FisherRatioByHand) {
  // Class means 0 and 10, overall mean 5.
  // between = 2*25 + 2*25 = 100, within = 4 squared deviations of 1, r = 25.
  const Dataset ds(1, {-1, 1, 9, 11}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(f1(ds).value, 1.0 / 26.0);
  // A second, useless feature does not change the max ratio.
  const Dataset two(2, {-1, 5, 1, 6, 9, 5, 11, 6}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(f1(two).value, 1.0 / 26.0);
}

TEST(N1, MatchesKruskalOracle) {
  std::mt19937_64 g(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = oracle::random_dataset(g, 20 + g() % 180, 1 + g() % 4, 2 + g() % 3);
    EXPECT_DOUBLE_EQ(n1(ds).value, oracle::n1_kruskal(ds));
  }
}

TEST(N3, MatchesLeaveOneOutOracle) {
  std::mt19937_64 g(22);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = oracle::random_dataset(g, 20 + g() % 180, 1 + g() % 4, 2 + g() % 3);
    EXPECT_DOUBLE_EQ(n3(ds).value, oracle::n3_loo(ds));
  }
}

TEST(N3, DuplicatedPointsWithDifferentLabelsAreAllErrors) {
  // Each point's nearest neighbour is its twin with the other label.
  const Dataset ds(1, {0, 0, 5, 5, 20, 20}, {0, 1, 0, 1, 1, 0});
  EXPECT_DOUBLE_EQ(n3(ds).value, 1.0);
}

TEST(N2, HandExample) {
  // Nearest friend distances: 1 each; nearest enemy: 10, 9, 9, 10.
  const Dataset ds(1, {0, 1, 10, 11}, {0, 0, 1, 1});
  const double r = 4.0 / 38.0;
  EXPECT_DOUBLE_EQ(n2(ds).value, r / (1 + r));
}

TEST(Lsc, SimplexWithAlternatingLabels) {
  // Four unit basis vectors: all pairwise distances equal sqrt(2), so each
  // local set is the point itself and LSC = 1 - 4/16.
  const Dataset ds(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}, {0, 1, 0, 1});
  EXPECT_DOUBLE_EQ(lsc(ds).value, 0.75);
}

TEST(Density, RadiusExtremes) {
  // One class entirely within the radius: complete graph.
  const Dataset tight(1, {0.0, 0.1, 0.2, 0.3}, {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(density_with_radius(tight, 1.0).value, 0.0);
  const Dataset spread(1, {0, 10, 20, 30}, {0, 1, 0, 1});
  EXPECT_DOUBLE_EQ(density_with_radius(spread, 5.0).value, 1.0);
  // Strictly closer: a pair exactly at the radius is not joined.
  const Dataset pair(1, {0, 1}, {0, 0});
  EXPECT_DOUBLE_EQ(density_with_radius(pair, 1.0).value, 1.0);
}

TEST(T1, WellSeparatedBlobsNeedFewSpheres) {
  GeneratorSpec spec;
  spec.shape = Shape::Blobs;
  spec.n_per_class = 500;
  spec.seed = 3;
  EXPECT_LE(t1(generate(spec)).value, 0.02);
}

TEST(N4, DeterministicForSeed) {
  std::mt19937_64 g(23);
  const auto ds = oracle::random_dataset(g, 150, 2, 2);
  EXPECT_EQ(n4(ds, 150, 5).value, n4(ds, 150, 5).value);
  EXPECT_EQ(n4(ds, 150, 5).value, n4(ds, 150, 5, 4).value);
  EXPECT_EQ(n4(ds, 0, 5).value, n4(ds, 150, 5).value);
}

TEST(Measures, BoundedAndWorkerIndependent) {
  std::mt19937_64 g(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = oracle::random_dataset(g, 10 + g() % 120, 1 + g() % 5, 2 + g() % 4);
    MeasureOptions opt;
    opt.seed = trial;
    const auto serial = compute_measures(ds, kAllMeasures, opt);
    opt.workers = 3;
    const auto threaded = compute_measures(ds, kAllMeasures, opt);
    ASSERT_EQ(serial.size(), std::size(kAllMeasures));
    for (std::size_t i = 0; i < serial.size(); ++i) {
      EXPECT_GE(serial[i].value, 0.0) << to_string(serial[i].code);
      EXPECT_LE(serial[i].value, 1.0) << to_string(serial[i].code);
      EXPECT_EQ(serial[i].value, threaded[i].value) << to_string(serial[i].code);
    }
  }
}

TEST(Measures, SharedTableMatchesIndividualCalls) {
  std::mt19937_64 g(25);
  const auto ds = oracle::random_dataset(g, 90, 3, 3);
  MeasureOptions opt;
  opt.seed = 11;
  const auto all = compute_measures(ds, kAllMeasures, opt);
  EXPECT_EQ(all[0].value, f1(ds).value);
  EXPECT_EQ(all[1].value, n1(ds).value);
  EXPECT_EQ(all[2].value, n2(ds).value);
  EXPECT_EQ(all[3].value, n3(ds).value);
  EXPECT_EQ(all[4].value, n4(ds, ds.size(), 11).value);
  EXPECT_EQ(all[5].value, t1(ds).value);
  EXPECT_EQ(all[6].value, lsc(ds).value);
  EXPECT_EQ(all[7].value, density(ds).value);
}

TEST(Measures, ParseCodes) {
  EXPECT_EQ(parse_measure("n3"), MeasureCode::N3);
  EXPECT_EQ(parse_measure("Density"), MeasureCode::Density);
  EXPECT_EQ(to_string(MeasureCode::LSC), "LSC");
  EXPECT_THROW(parse_measure("N9"), InvalidDataset);
}

TEST(Measures, SingleClassIsRejected) {
  const Dataset ds(1, {0, 1, 2}, {0, 0, 0});
  EXPECT_THROW(n3(ds), DegenerateDataset);
  EXPECT_THROW(compute_measures(ds, kAllMeasures), DegenerateDataset);
}

TEST(Measures, RankingOnSyntheticSuite) {
  // Random is hardest and Blobs easiest for both DSI and the neighbourhood measures.
  auto make = [](Shape s) {
    GeneratorSpec spec;
    spec.shape = s;
    spec.n_per_class = 400;
    spec.seed = 17;
    return generate(spec);
  };
  const auto random = make(Shape::Random), blobs = make(Shape::Blobs);
  const auto circles = make(Shape::Circles);
  EXPECT_GT(compute_dsi(random).complexity, compute_dsi(circles).complexity);
  EXPECT_GT(compute_dsi(circles).complexity, compute_dsi(blobs).complexity);
  EXPECT_GT(n3(random).value, n3(blobs).value);
  EXPECT_GT(n1(random).value, n1(blobs).value);
}
