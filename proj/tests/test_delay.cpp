#include <gtest/gtest.h>

#include <cmath>

#include "pkco/delay.hpp"
#include "support.hpp"

namespace pkco {
namespace {

using testing::kSimEta;
using testing::kSimKappa;

TEST(Delay, ZeroVarianceReturnsTheMean) {
  RngStream rng(1, 1);
  const DelayModel kappa{kSimKappa, 0.0, 0.0};
  const DelayModel eta{kSimEta, 0.0, 0.0};
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample(kappa, rng), 349e-6);
    EXPECT_EQ(sample(eta, rng), 514e-6);
  }
}

TEST(Delay, SampleMeanConverges) {
  const DelayModel kappa{kSimKappa, 1e-10, 0.0};
  RngStream rng(2024, 3);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(kappa, rng);
  // 0.5 us is about 16 standard errors at this sample size.
  EXPECT_NEAR(sum / n, kSimKappa, 0.5e-6);
}

TEST(Delay, SampleVarianceWithinThreeSigmaBand) {
  const double variance = 4e-10;
  const DelayModel eta{kSimEta, variance, 0.0};
  RngStream rng(99, 2);
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample(eta, rng) - kSimEta;
    sum += x;
    sum_sq += x * x;
  }
  const double var = sum_sq / n - (sum / n) * (sum / n);
  // Standard error of a Gaussian sample variance is variance * sqrt(2 / n).
  EXPECT_NEAR(var, variance, 3.0 * variance * std::sqrt(2.0 / n));
  EXPECT_NEAR(sum / n, 0.0, 3.0 * std::sqrt(variance / n));
}

TEST(Delay, FloorTruncatesFromBelow) {
  const DelayModel wide{1e-6, 1e-8, 0.0};
  RngStream rng(5, 5);
  int clamped = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = sample(wide, rng);
    ASSERT_GE(x, 0.0);
    if (x == 0.0) ++clamped;
  }
  EXPECT_GT(clamped, 4000);
  EXPECT_LT(clamped, 6000);
}

TEST(Delay, SameSeedSameSequence) {
  const DelayModel m{kSimKappa, 1e-10, 0.0};
  RngStream a(8, 1);
  RngStream b(8, 1);
  RngStream c(8, 2);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = sample(m, a);
    ASSERT_EQ(x, sample(m, b));
    if (x != sample(m, c)) differs = true;
  }
  EXPECT_TRUE(differs);
}

TEST(Delay, ZeroVarianceStillConsumesADraw) {
  RngStream a(4, 4);
  RngStream b(4, 4);
  sample(DelayModel{1e-3, 0.0, 0.0}, a);
  b.gaussian();
  EXPECT_EQ(a.gaussian(), b.gaussian());
}

TEST(Delay, Validation) {
  EXPECT_NO_THROW((DelayModel{1e-3, 0.0, 0.0}.validate()));
  EXPECT_THROW((DelayModel{1e-3, -1.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((DelayModel{1e-3, 0.0, 2e-3}.validate()), std::invalid_argument);
  EXPECT_THROW((DelayModel{-1e-3, 0.0, -2e-3}.validate()), std::invalid_argument);
}

TEST(Rng, UniformInUnitInterval) {
  RngStream rng(0, 0);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(Rng, NodeStreamsAreDistinct) {
  RngStream a = RngStream::for_node(1, 1, NoiseSource::kappa);
  RngStream b = RngStream::for_node(1, 2, NoiseSource::kappa);
  RngStream c = RngStream::for_node(1, 1, NoiseSource::eta);
  const auto x = a.next_u64();
  EXPECT_NE(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

}  // namespace
}  // namespace pkco
