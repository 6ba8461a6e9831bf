#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pmb/arms.hpp"
#include "pmb/cdf.hpp"
#include "pmb/choquet.hpp"
#include "pmb/distortion.hpp"
#include "pmb/errors.hpp"
#include "pmb/rng.hpp"

using pmb::bernoulli_cdf;
using pmb::cdf_from_points;
using pmb::ContinuousCdf;
using pmb::Distortion;
using pmb::FiniteSupportCdf;

namespace {

std::vector<Distortion> builtin_global() {
  // Families whose Holder constants do not depend on the support window.
  return {pmb::make_mean(),     pmb::make_dual_power(2.0), pmb::make_quadratic(1.0),
          pmb::make_cvar(0.5),  pmb::make_mean_median(),   pmb::make_inter_es(),
          pmb::make_gini()};
}

std::vector<Distortion> builtin_all() {
  auto v = builtin_global();
  v.push_back(pmb::make_pht(0.5));
  v.push_back(pmb::make_wang_rtd());
  v.push_back(pmb::make_inverted_s(0.5));
  v.push_back(pmb::make_inverted_s(2.0));
  return v;
}

ContinuousCdf gaussian_cdf(double mu, double sigma) {
  pmb::ArmModel arm = pmb::ArmModel::gaussian(mu, sigma);
  auto [a, b] = arm.support_bounds();
  return ContinuousCdf{[arm](double x) { return arm.cdf_at(x); }, a, b};
}

FiniteSupportCdf random_step_cdf(pmb::Rng& rng, int max_points, double lo, double hi) {
  int m = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_points - 1)));
  std::vector<std::pair<double, double>> pts;
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    double mass = 0.05 + rng.uniform();
    pts.push_back({lo + (hi - lo) * rng.uniform(), mass});
    total += mass;
  }
  for (auto& pm : pts) pm.second /= total;
  return cdf_from_points(std::move(pts));
}

}  // namespace

TEST(StepIntegral, FrozenExamples) {
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_gini(), bernoulli_cdf(0.3)), 0.21);
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_mean(), bernoulli_cdf(0.3)), 0.3);
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_mean(), bernoulli_cdf(0.75)), 0.75);

  FiniteSupportCdf at_zero = cdf_from_points({{0.0, 1.0}});
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_gini(), at_zero), 0.0);

  FiniteSupportCdf sym = cdf_from_points({{-1.0, 0.5}, {1.0, 0.5}});
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_mean(), sym), 0.0);

  FiniteSupportCdf at_five = cdf_from_points({{5.0, 1.0}});
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_mean(), at_five), 5.0);
  FiniteSupportCdf at_minus3 = cdf_from_points({{-3.0, 1.0}});
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_mean(), at_minus3), -3.0);
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_gini(), at_minus3), 0.0);
}

TEST(StepIntegral, NegativeSupportHandDerived) {
  // Two atoms at -1 and 2 with masses 0.4 / 0.6.
  FiniteSupportCdf f = cdf_from_points({{-1.0, 0.4}, {2.0, 0.6}});
  EXPECT_NEAR(pmb::choquet_step(pmb::make_mean(), f), 0.8, 1e-15);
  // Gini deviation equals E|X - X'| / 2 = (2 * 0.4 * 0.6 * 3) / 2.
  EXPECT_NEAR(pmb::choquet_step(pmb::make_gini(), f), 0.72, 1e-15);
}

TEST(StepIntegral, MorePinnedValues) {
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_cvar(0.5), bernoulli_cdf(0.3)), 0.6);
  EXPECT_DOUBLE_EQ(pmb::choquet_step(pmb::make_mean_median(), bernoulli_cdf(0.3)), 0.3);
  FiniteSupportCdf three = cdf_from_points({{0.0, 0.25}, {0.5, 0.5}, {1.0, 0.25}});
  EXPECT_NEAR(pmb::choquet_step(pmb::make_gini(), three), 0.1875, 1e-15);
}

TEST(StepIntegral, NonFiniteSupportRejected) {
  FiniteSupportCdf bad;
  bad.xs = {0.0, std::numeric_limits<double>::infinity()};
  bad.cum = {0.5, 1.0};
  EXPECT_THROW(pmb::choquet_step(pmb::make_mean(), bad), pmb::DomainError);
  FiniteSupportCdf nan_cdf;
  nan_cdf.xs = {std::nan("")};
  nan_cdf.cum = {1.0};
  EXPECT_THROW(pmb::choquet_step(pmb::make_mean(), nan_cdf), pmb::DomainError);
}

TEST(MixtureIntegral, PinnedExamples) {
  std::vector<FiniteSupportCdf> owned = {bernoulli_cdf(0.2), bernoulli_cdf(0.8)};
  std::vector<const FiniteSupportCdf*> fs = {&owned[0], &owned[1]};
  EXPECT_DOUBLE_EQ(pmb::choquet_mixture(pmb::make_gini(), {0.5, 0.5}, fs), 0.25);
  EXPECT_NEAR(pmb::choquet_mixture(pmb::make_gini(), {0.3, 0.7}, fs), 0.2356, 1e-15);
}

TEST(MixtureIntegral, UnitWeightReducesToSingleArm) {
  pmb::Rng rng = pmb::Rng::for_trial(101u, 0u);
  std::vector<FiniteSupportCdf> owned;
  for (int i = 0; i < 3; ++i) owned.push_back(random_step_cdf(rng, 5, -2.0, 2.0));
  std::vector<const FiniteSupportCdf*> fs;
  for (const auto& f : owned) fs.push_back(&f);
  for (const auto& d : builtin_all()) {
    for (int i = 0; i < 3; ++i) {
      std::vector<double> w(3, 0.0);
      w[static_cast<size_t>(i)] = 1.0;
      EXPECT_NEAR(pmb::choquet_mixture(d, w, fs), pmb::choquet_step(d, owned[static_cast<size_t>(i)]),
                  1e-12)
          << d.family << " arm " << i;
    }
  }
}

TEST(MixtureIntegral, LengthMismatchRejected) {
  std::vector<FiniteSupportCdf> owned = {bernoulli_cdf(0.2), bernoulli_cdf(0.8)};
  std::vector<const FiniteSupportCdf*> fs = {&owned[0], &owned[1]};
  EXPECT_THROW(pmb::choquet_mixture(pmb::make_gini(), {1.0}, fs), pmb::DomainError);
  EXPECT_THROW(pmb::choquet_mixture(pmb::make_gini(), {0.2, 0.2, 0.6}, fs), pmb::DomainError);
}

TEST(MixtureIntegral, BernoulliIdentityExact) {
  // For Bernoulli arms the mixture CDF is Bernoulli(<w,p>), so the integral
  // collapses to h evaluated at the blended success rate.
  pmb::Rng rng = pmb::Rng::for_trial(102u, 0u);
  std::vector<double> p = {0.15, 0.4, 0.9};
  std::vector<FiniteSupportCdf> owned;
  for (double pi : p) owned.push_back(bernoulli_cdf(pi));
  std::vector<const FiniteSupportCdf*> fs;
  for (const auto& f : owned) fs.push_back(&f);
  for (const auto& d : builtin_all()) {
    for (int rep = 0; rep < 50; ++rep) {
      double a = rng.uniform(), b = rng.uniform();
      if (a > b) std::swap(a, b);
      std::vector<double> w = {a, b - a, 1.0 - b};
      double blend = w[0] * p[0] + w[1] * p[1] + w[2] * p[2];
      EXPECT_NEAR(pmb::choquet_mixture(d, w, fs), d(blend), 1e-12) << d.family;
    }
  }
}

TEST(UnionEvaluator, MatchesMixtureIntegral) {
  pmb::Rng rng = pmb::Rng::for_trial(103u, 0u);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<FiniteSupportCdf> owned;
    for (int i = 0; i < 4; ++i) owned.push_back(random_step_cdf(rng, 6, -1.5, 2.5));
    std::vector<const FiniteSupportCdf*> fs;
    for (const auto& f : owned) fs.push_back(&f);
    pmb::StepUnionEvaluator ev = pmb::StepUnionEvaluator::build(fs);
    for (const auto& d : builtin_all()) {
      for (int t = 0; t < 5; ++t) {
        double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
        std::vector<double> cuts = {a, b, c};
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> w = {cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1],
                                 1.0 - cuts[2]};
        EXPECT_NEAR(ev.value(d, w.data()), pmb::choquet_mixture(d, w, fs), 1e-12) << d.family;
      }
    }
  }
}

TEST(Quadrature, PinnedContinuousExamples) {
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_mean(), gaussian_cdf(3.0, 1.0)), 3.0, 1e-6);

  pmb::ArmModel sexp = pmb::ArmModel::shifted_exponential(1.0, 1.0);
  auto [a, b] = sexp.support_bounds();
  ContinuousCdf F{[sexp](double x) { return sexp.cdf_at(x); }, a, b};
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_gini(), F), 0.5, 1e-6);

  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_mean(), gaussian_cdf(0.0, 1e-4)), 0.0, 1e-7);
}

TEST(Quadrature, KnownGaussianValues) {
  // Gini deviation of N(0,1) is 1/sqrt(pi); expected shortfall at c = 1/2 is
  // sqrt(2/pi); both follow from the standard normal density at the median.
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_gini(), gaussian_cdf(0.0, 1.0)),
              1.0 / std::sqrt(std::numbers::pi), 1e-6);
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_cvar(0.5), gaussian_cdf(0.0, 1.0)),
              std::sqrt(2.0 / std::numbers::pi), 1e-6);
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_gini(), gaussian_cdf(0.0, 2.0)),
              2.0 / std::sqrt(std::numbers::pi), 1e-6);
}

TEST(Quadrature, WindowEntirelyOffOrigin) {
  // Uniform(2,5): window never touches the negative axis, so the [0,a] strip
  // contributes a * h(1) in closed form.
  ContinuousCdf up{[](double x) { return std::clamp((x - 2.0) / 3.0, 0.0, 1.0); }, 2.0, 5.0};
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_mean(), up), 3.5, 1e-7);
  ContinuousCdf un{[](double x) { return std::clamp((x + 5.0) / 3.0, 0.0, 1.0); }, -5.0, -2.0};
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_mean(), un), -3.5, 1e-7);
  // Gini is translation invariant: uniform spread 3 has gini deviation 0.5.
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_gini(), up), 0.5, 1e-7);
  EXPECT_NEAR(pmb::choquet_quadrature(pmb::make_gini(), un), 0.5, 1e-7);
}

TEST(Quadrature, BudgetExhaustionThrowsWithPartialValue) {
  // The Cantor function is monotone but rough at every scale, so the
  // subdivision never settles and the evaluation budget runs out.
  auto cantor = [](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double y = 0.0, f = 0.5;
    for (int k = 0; k < 50; ++k) {
      x *= 3.0;
      if (x >= 2.0) {
        x -= 2.0;
        y += f;
      } else if (x >= 1.0) {
        return y + f;
      }
      f *= 0.5;
    }
    return y;
  };
  // Composing with x^2 breaks the staircase's self-symmetry, which would
  // otherwise cancel the refinement signal at the top level.
  ContinuousCdf devil{[cantor](double x) { return cantor(x * x); }, 0.0, 1.0};
  EXPECT_THROW(pmb::choquet_quadrature(pmb::make_mean(), devil, 1e-12), pmb::NumericError);
  try {
    pmb::choquet_quadrature(pmb::make_mean(), devil, 1e-12);
  } catch (const pmb::NumericError& e) {
    EXPECT_TRUE(std::isfinite(e.partial));
    EXPECT_GT(e.partial, 0.0);
    EXPECT_LT(e.partial, 1.0);
  }
}

TEST(Properties, MonteCarloOracleEquivalence) {
  // Stratified quantile sampling: u_i = (i - U_i)/n is ascending, so the
  // distortion-weighted order-statistic sum needs no sort. Independent of the
  // implementation's segment-merging evaluation.
  pmb::Rng rng = pmb::Rng::for_trial(104u, 0u);
  const int n = 1000000;
  for (int rep = 0; rep < 3; ++rep) {
    FiniteSupportCdf f = random_step_cdf(rng, 6, -1.0, 1.5);
    for (const auto& d : builtin_all()) {
      double est = 0.0;
      double h_hi = d(1.0);  // h at survival fraction 1 - (i-1)/n, descending
      for (int i = 1; i <= n; ++i) {
        double u = (static_cast<double>(i) - rng.uniform()) / static_cast<double>(n);
        double x = f.quantile(u);
        double h_lo = d(1.0 - static_cast<double>(i) / static_cast<double>(n));
        est += x * (h_hi - h_lo);
        h_hi = h_lo;
      }
      EXPECT_NEAR(est, pmb::choquet_step(d, f), 1e-3) << d.family << " rep " << rep;
    }
  }
}

TEST(Properties, SubGaussianFinitenessBound) {
  // |U_h| <= L sqrt(2 pi / r) on sub-Gaussian inputs, with (r, L) from the
  // constants table (support-scaled families use the truncation window).
  for (double sigma : {1.0, 0.6}) {
    ContinuousCdf F = gaussian_cdf(0.0, sigma);
    auto bound_check = [&](const Distortion& d) {
      auto [r, L] = pmb::holder_params(d, std::make_pair(F.a, F.b));
      double bound = L * std::sqrt(2.0 * std::numbers::pi / r);
      double u = pmb::choquet_quadrature(d, F);
      EXPECT_LE(std::abs(u), bound + 1e-9) << d.family << " sigma=" << sigma;
    };
    for (const auto& d : builtin_global()) bound_check(d);
    bound_check(pmb::make_pht(0.5));
    bound_check(pmb::make_wang_rtd());
  }
}

TEST(Properties, HolderContinuityInWasserstein) {
  // U_h(G1) - U_h(G2) <= L * W1(G1, G2)^q for random mixture pairs.
  pmb::Rng rng = pmb::Rng::for_trial(105u, 0u);
  std::vector<FiniteSupportCdf> owned;
  for (int i = 0; i < 3; ++i) owned.push_back(random_step_cdf(rng, 5, 0.0, 1.0));
  std::vector<const FiniteSupportCdf*> fs;
  for (const auto& f : owned) fs.push_back(&f);

  auto families = builtin_global();
  families.push_back(pmb::make_pht(0.5));
  families.push_back(pmb::make_wang_rtd());
  for (const auto& d : families) {
    auto [q, L] = pmb::holder_params(d, std::make_pair(0.0, 1.0));
    for (int rep = 0; rep < 60; ++rep) {
      double a1 = rng.uniform(), b1 = rng.uniform();
      if (a1 > b1) std::swap(a1, b1);
      double a2 = rng.uniform(), b2 = rng.uniform();
      if (a2 > b2) std::swap(a2, b2);
      std::vector<double> w1 = {a1, b1 - a1, 1.0 - b1};
      std::vector<double> w2 = {a2, b2 - a2, 1.0 - b2};
      FiniteSupportCdf g1 = pmb::mix_step(w1, fs);
      FiniteSupportCdf g2 = pmb::mix_step(w2, fs);
      double dv = std::abs(pmb::choquet_step(d, g1) - pmb::choquet_step(d, g2));
      double w1dist = pmb::wasserstein1_step(g1, g2);
      EXPECT_LE(dv, L * std::pow(w1dist, q) + 1e-9) << d.family;
    }
  }
}
