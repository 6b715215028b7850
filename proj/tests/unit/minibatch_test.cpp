#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "mcaux/errors.hpp"
#include "mcaux/minibatch.hpp"
#include "mcaux/models/toys.hpp"
#include "mcaux/rng.hpp"
#include "test_support.hpp"

using namespace mcaux;
using mcaux::testing::vec;

namespace {

std::vector<double> frequencies(const AliasTable& table, int draws, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> f(table.size(), 0.0);
  for (int k = 0; k < draws; ++k) f[table.draw(rng)] += 1.0;
  for (double& x : f) x /= draws;
  return f;
}

}  // namespace

TEST(AliasTable, UniformWeights) {
  const std::vector<double> w{1, 1, 1, 1};
  for (double f : frequencies(build_alias(w), 1000000, 1)) EXPECT_NEAR(f, 0.25, 0.0015);
}

TEST(AliasTable, DegenerateWeights) {
  const std::vector<double> w{0, 0, 5};
  RngStream rng(2, 0);
  const AliasTable table(w);
  for (int k = 0; k < 10000; ++k) ASSERT_EQ(table.draw(rng), 2u);
}

TEST(AliasTable, UnequalWeightsWithinThreeSigma) {
  const std::vector<double> w{1, 2, 3};
  const int n = 1000000;
  const auto f = frequencies(build_alias(w), n, 3);
  for (int i = 0; i < 3; ++i) {
    const double p = w[i] / 6.0;
    EXPECT_NEAR(f[i], p, 3.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(AliasTable, ReconstructionForRandomWeights) {
  RngStream rng(4, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng.uniform_index(40);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
      x = rng.uniform() < 0.2 ? 0.0 : rng.uniform() * 10.0;
      total += x;
    }
    if (total == 0.0) w[0] = total = 1.0;
    const auto r = AliasTable(w).reconstructed();
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(r[i], w[i] / total, 1e-12);
  }
}

TEST(AliasTable, InvalidWeights) {
  EXPECT_THROW(AliasTable(std::vector<double>{0, 0}), InvalidWeightsError);
  EXPECT_THROW(AliasTable(std::vector<double>{1, -1}), InvalidWeightsError);
  EXPECT_THROW(AliasTable(std::vector<double>{}), InvalidWeightsError);
  EXPECT_THROW(AliasTable(std::vector<double>{1, INFINITY}), InvalidWeightsError);
}

TEST(PoissonMinibatch, UpperBoundaryKeepsEveryBall) {
  const mcaux::testing::ConstantBoundedModel model({1.0, 2.0, 0.5}, {1.0, 2.0, 0.5});
  const PoissonMinibatcher batcher(model, 4.0);
  RngStream rng(5, 0);
  for (int k = 0; k < 1000; ++k) {
    const PoissonAuxState s = batcher.draw(vec({0.0}), rng);
    ASSERT_EQ(s.kept_total(), s.total_draws());
  }
}

TEST(PoissonMinibatch, ZeroPotentialGivesUnitMeans) {
  const mcaux::testing::ConstantBoundedModel model({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  const PoissonMinibatcher batcher(model, 3.0);
  RngStream rng(6, 0);
  const int n = 100000;
  int zeros = 0;
  for (int k = 0; k < n; ++k) zeros += batcher.draw(vec({0.0}), rng).count(0) == 0;
  const double p = std::exp(-1.0);
  EXPECT_NEAR(static_cast<double>(zeros) / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(PoissonMinibatch, ExpectedKeptTotal) {
  const auto toy = models::gaussian_grid_toy();
  const double lambda = 1.5;
  const PoissonMinibatcher batcher(*toy.model, lambda);
  const ParamVec theta = vec({0.3});
  const double expected = lambda + toy.model->sum_phi(theta);
  RngStream rng(7, 0);
  const int n = 200000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += static_cast<double>(batcher.draw(theta, rng).kept_total());
  EXPECT_NEAR(sum / n, expected, 3.0 * std::sqrt(expected / n));
}

TEST(PoissonMinibatch, StateIsSparseAndSorted) {
  const auto toy = models::gaussian_grid_toy();
  const PoissonMinibatcher batcher(*toy.model, 5.0);
  RngStream rng(8, 0);
  for (int k = 0; k < 1000; ++k) {
    const PoissonAuxState s = batcher.draw(vec({0.0}), rng);
    for (std::size_t j = 0; j < s.distinct(); ++j) {
      ASSERT_GE(s.counts()[j], 1u);
      ASSERT_LT(s.indices()[j], toy.model->size());
      if (j) ASSERT_LT(s.indices()[j - 1], s.indices()[j]);
    }
  }
}

TEST(PoissonMinibatch, PromiseViolationNamesTheDatum) {
  const mcaux::testing::ConstantBoundedModel model({0.5, 3.0}, {1.0, 1.0});
  const PoissonMinibatcher batcher(model, 1.0);
  RngStream rng(9, 0);
  try {
    for (int k = 0; k < 1000; ++k) batcher.draw(vec({0.0}), rng);
    FAIL() << "expected a contract error";
  } catch (const ModelContractError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(PoissonMinibatch, JointLawMatchesProductPoissonForTwoData) {
  const auto toy = models::gaussian_grid_toy();
  const PoissonMinibatcher batcher(*toy.model, 0.8);
  const ParamVec theta = vec({-0.5});
  const auto means = batcher.means(theta);
  RngStream rng(10, 0);
  const int n = 300000;
  std::map<std::pair<int, int>, double> seen;
  for (int k = 0; k < n; ++k) {
    const auto d = batcher.draw(theta, rng).dense(toy.model->size());
    seen[{std::min(d[0], 4), std::min(d[1], 4)}] += 1.0;
  }
  std::vector<double> obs, exp;
  const auto pmf = [](int k, double m) {
    if (k < 4) return std::exp(poisson_log_pmf(static_cast<std::uint64_t>(k), m));
    double tail = 1.0;
    for (int j = 0; j < 4; ++j) tail -= std::exp(poisson_log_pmf(static_cast<std::uint64_t>(j), m));
    return tail;
  };
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      obs.push_back(seen[{a, b}]);
      exp.push_back(n * pmf(a, means[0]) * pmf(b, means[1]));
    }
  }
  EXPECT_GT(mcaux::testing::chi_square_p(obs, exp), 0.001);
}

TEST(TunaMinibatch, IdenticalPointsGiveEmptyBatch) {
  const auto toy = models::logistic_grid_toy();
  const TunaMinibatcher batcher(*toy.model, 1.0);
  RngStream rng(11, 0);
  const ParamVec theta = vec({0.2});
  EXPECT_DOUBLE_EQ(batcher.lambda_for(theta, theta), 0.0);
  for (int k = 0; k < 100; ++k) {
    const auto s = batcher.draw(theta, theta, rng);
    ASSERT_EQ(s.kept_total(), 0u);
    ASSERT_EQ(s.total_draws(), 0u);
  }
}

TEST(TunaMinibatch, LipschitzBoundaryGivesZeroPhi) {
  // U_0 = theta with c_0 = 1: moving up by delta hits the bound exactly.
  RowMatrix slopes(2, 1);
  slopes << 1.0, 0.5;
  Eigen::VectorXd offsets = Eigen::VectorXd::Zero(2);
  const models::LinearPotentials model(slopes, offsets);
  const ParamVec a = vec({0.4}), b = vec({-0.3});
  // U_0(b) - U_0(a) = -0.7 = -c_0 * |b - a|.
  EXPECT_NEAR(tuna_phi(model, 0, a, b, model.distance(a, b)), 0.0, 1e-15);
  const TunaMinibatcher batcher(model, 0.5);
  const auto means = batcher.means(a, b);
  const double lambda = batcher.lambda_for(a, b);
  EXPECT_NEAR(means[0], lambda * 1.0 / 1.5, 1e-14);
}

TEST(TunaMinibatch, NegativePhiBeyondToleranceIsAContractError) {
  class Liar final : public LipschitzFactorModel {
   public:
    Liar() { set_lipschitz({0.1}); }
    std::size_t size() const override { return 1; }
    std::size_t dim() const override { return 1; }
    double potential(std::size_t, const ParamVec& t) const override { return 5.0 * t[0]; }
    void accumulate_grad_potential(std::size_t, const ParamVec&, double s,
                                   ParamVec& out) const override {
      out[0] += 5.0 * s;
    }
    double distance(const ParamVec& a, const ParamVec& b) const override {
      return std::abs(a[0] - b[0]);
    }
    ParamVec random_support_point(RngStream& rng) const override { return vec({rng.normal()}); }
  } model;
  EXPECT_THROW(tuna_phi(model, 0, vec({1.0}), vec({0.0}), 1.0), ModelContractError);
}

TEST(TunaMinibatch, JointLawMatchesProductPoisson) {
  RowMatrix slopes(2, 1);
  slopes << 1.0, -0.7;
  Eigen::VectorXd offsets(2);
  offsets << 0.2, 0.1;
  const models::LinearPotentials model(slopes, offsets);
  const TunaMinibatcher batcher(model, 0.6);
  const ParamVec a = vec({0.1}), b = vec({0.9});
  const auto means = batcher.means(a, b);
  RngStream rng(12, 0);
  const int n = 300000;
  std::map<std::pair<int, int>, double> seen;
  for (int k = 0; k < n; ++k) {
    const auto d = batcher.draw(a, b, rng).dense(2);
    seen[{std::min(d[0], 3), std::min(d[1], 3)}] += 1.0;
  }
  const auto pmf = [](int k, double m) {
    if (k < 3) return std::exp(poisson_log_pmf(static_cast<std::uint64_t>(k), m));
    double tail = 1.0;
    for (int j = 0; j < 3; ++j) tail -= std::exp(poisson_log_pmf(static_cast<std::uint64_t>(j), m));
    return tail;
  };
  std::vector<double> obs, exp;
  for (int x = 0; x <= 3; ++x) {
    for (int y = 0; y <= 3; ++y) {
      obs.push_back(seen[{x, y}]);
      exp.push_back(n * pmf(x, means[0]) * pmf(y, means[1]));
    }
  }
  EXPECT_GT(mcaux::testing::chi_square_p(obs, exp), 0.001);
}

TEST(AuxLogDensityFull, AllZeroCounts) {
  const auto toy = models::gaussian_grid_toy();
  const PoissonMinibatcher batcher(*toy.model, 2.0);
  const ParamVec theta = vec({0.1});
  const auto means = batcher.means(theta);
  double total = 0.0;
  for (double m : means) total += m;
  EXPECT_NEAR(aux_log_density_full(batcher, theta, PoissonAuxState{}), -total, 1e-12);
}

TEST(AuxLogDensityFull, SingleCountClosedForm) {
  const std::vector<double> means{1.0};
  const std::vector<int> counts{2};
  EXPECT_NEAR(product_poisson_log_pmf(means, PoissonAuxState::from_dense(counts, 0.0)),
              std::log(std::exp(-1.0) / 2.0), 1e-14);
}

TEST(AuxLogDensityFull, MatchesIndependentPmfSum) {
  RngStream rng(13, 0);
  const auto toy = models::gaussian_grid_toy();
  const PoissonMinibatcher batcher(*toy.model, 1.3);
  for (int rep = 0; rep < 50; ++rep) {
    const ParamVec theta = vec({2.0 * rng.uniform() - 1.0});
    const auto state = batcher.draw(theta, rng);
    const auto means = batcher.means(theta);
    const auto dense = state.dense(means.size());
    double direct = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) {
      direct += dense[i] * std::log(means[i]) - means[i] - std::lgamma(dense[i] + 1.0);
    }
    ASSERT_NEAR(aux_log_density_full(batcher, theta, state), direct, 1e-12);
  }
}
