#include <cmath>

#include <gtest/gtest.h>

#include "hermitize/errors.hpp"
#include "hermitize/metric.hpp"
#include "hermitize/oracles.hpp"
#include "test_support.hpp"

using namespace hermitize;
using hermitize::testing::m2;
using hermitize::testing::Random;

TEST(MetricRhs, ZeroHamiltonian)
{
	Random rng(1);
	EXPECT_EQ(max_norm(metric_rhs(rng.positive(3), Matrix::Zero(3, 3))), 0.0);
}

TEST(MetricRhs, HermitianHamiltonianWithIdentityMetric)
{
	Random rng(2);
	EXPECT_LE(max_norm(metric_rhs(Matrix::Identity(3, 3), rng.hermitian(3))), 1e-16);
}

TEST(MetricRhs, PureLoss)
{
	const Matrix h = m2(-I, 0.0, 0.0, 0.0);
	EXPECT_LE(max_norm(metric_rhs(Matrix::Identity(2, 2), h) - m2(2.0, 0.0, 0.0, 0.0)), 0.0);
}

TEST(MetricRhs, PreservesHermiticity)
{
	Random rng(3);
	const Matrix g = rng.positive(4);
	const Matrix rhs = metric_rhs(g, rng.matrix(4));
	EXPECT_LE(hermiticity_residual(rhs), 1e-14 * max_norm(rhs));
}

TEST(EvolveMetric, HermitianModelKeepsIdentity)
{
	const MetricTrajectory g = evolve_metric(two_level_loss({1.0, 0.0}), Matrix::Identity(2, 2), TimeGrid(0.0, 5.0, 500));
	for(std::size_t k = 0; k < g.size(); ++k)
	{
		EXPECT_LE(max_norm(g[k] - Matrix::Identity(2, 2)), 1e-14);
	}
}

TEST(EvolveMetric, MatchesUnderdampedClosedForm)
{
	const OracleParams p{1.0, 1.0};
	const TimeGrid grid(0.0, 5.0, 5000);
	const MetricTrajectory g =
		evolve_metric(two_level_loss({1.0, 1.0}), metric_closed_form_underdamped(p, 0.0).value, grid);
	double worst = 0.0;
	for(std::size_t k = 0; k < g.size(); ++k)
	{
		const Matrix oracle = metric_closed_form_underdamped(p, grid.time(k)).value;
		worst = std::max(worst, max_norm(g[k] - oracle) / std::max(1.0, max_norm(oracle)));
	}
	EXPECT_LE(worst, 1e-8);
}

TEST(EvolveMetric, IndefiniteSeedRejected)
{
	EXPECT_THROW((void)evolve_metric(two_level_loss({1.0, 1.0}), m2(1.0, 0.0, 0.0, -1.0), TimeGrid(0.0, 1.0, 10)),
	             MetricDegeneracyError);
}

TEST(EvolveMetric, NonHermitianSeedRejected)
{
	EXPECT_THROW((void)evolve_metric(two_level_loss({1.0, 1.0}), m2(1.0, 0.5, 0.0, 1.0), TimeGrid(0.0, 1.0, 10)),
	             HermiticityError);
}

TEST(EvolveMetric, CollapseCarriesTimeStamp)
{
	const HamiltonianModel gain = custom_model(2, [](double) { return Matrix(m2(15.0 * I, 0.0, 0.0, 0.0)); }, "gain");
	try
	{
		(void)evolve_metric(gain, Matrix::Identity(2, 2), TimeGrid(0.0, 2.0, 2000));
		FAIL() << "expected MetricCollapseError";
	}
	catch(const MetricCollapseError& e)
	{
		// G11 = exp(-30 t) crosses 1e-12 at t = ln(1e12) / 30
		EXPECT_NEAR(e.time(), std::log(1e12) / 30.0, 2e-3);
		EXPECT_LE(e.min_eigenvalue(), 1e-12);
	}
}

TEST(EvolveMetric, DiagnosticsPerNode)
{
	const MetricTrajectory g = evolve_metric(two_level_loss({1.0, 4.0}), Matrix::Identity(2, 2), TimeGrid(0.0, 3.0, 3000));
	ASSERT_EQ(g.min_eigenvalues.size(), g.size());
	ASSERT_EQ(g.hermiticity_residuals.size(), g.size());
	ASSERT_EQ(g.condition_numbers.size(), g.size());
	for(std::size_t k = 0; k < g.size(); ++k)
	{
		EXPECT_GT(g.min_eigenvalues[k], 0.0);
		EXPECT_EQ(hermiticity_residual(g[k]), 0.0);
		EXPECT_GE(g.condition_numbers[k], 1.0);
	}
}

TEST(EvolveMetric, PreProjectionDriftIsRoundoff)
{
	const TimeGrid grid(0.0, 5.0, 5000);
	const MetricTrajectory g = evolve_metric(two_level_loss({1.0, 1.0}), Matrix::Identity(2, 2), grid);
	for(std::size_t k = 0; k < g.size(); ++k)
	{
		EXPECT_LE(g.hermiticity_residuals[k], 1e-12 * max_norm(g[k]) * grid.step()) << "node " << k;
	}
}

TEST(EvolveMetric, DeterminantGrowsLikeExpGammaT)
{
	for(double gamma : {1.0, 2.0, 4.0})
	{
		const TimeGrid grid(0.0, 5.0, 5000);
		Random rng(static_cast<std::uint64_t>(gamma * 10));
		const Matrix g0 = rng.positive(2, 0.5);
		const MetricTrajectory g = evolve_metric(two_level_loss({1.0, gamma}), g0, grid);
		const double det0 = g0.determinant().real();
		for(std::size_t k = 0; k < g.size(); k += 250)
		{
			const double expected = det0 * std::exp(gamma * grid.time(k));
			const double tol = std::max(1e-8, 1e-15 * g.condition_numbers[k]);
			EXPECT_NEAR(g[k].determinant().real() / expected, 1.0, tol) << "gamma " << gamma << " node " << k;
			if(gamma < 3.0)
			{
				EXPECT_EQ(tol, 1e-8);
			}
		}
	}
}

TEST(GaugeRelated, IdenticalTrajectories)
{
	const HamiltonianModel m = two_level_loss({1.0, 1.0});
	const MetricTrajectory g = evolve_metric(m, Matrix::Identity(2, 2), TimeGrid(0.0, 3.0, 3000));
	EXPECT_TRUE(metric_gauge_related(g, g, m, 1e-10));
}

TEST(GaugeRelated, ConstantScaling)
{
	const HamiltonianModel m = two_level_loss({1.0, 1.0});
	Random rng(7);
	const Matrix g0 = rng.positive(2, 0.3);
	const TimeGrid grid(0.0, 3.0, 3000);
	const MetricTrajectory g1 = evolve_metric(m, g0, grid);
	const MetricTrajectory g2 = evolve_metric(m, 2.0 * g0, grid);
	EXPECT_TRUE(metric_gauge_related(g1, g2, m, 1e-8));
}

TEST(GaugeRelated, DifferentClosedFormConstants)
{
	const HamiltonianModel m = two_level_loss({1.0, 1.0});
	OracleParams p1{1.0, 1.0};
	OracleParams p2{1.0, 1.0};
	p2.h_const = m2(std::sqrt(2.0), 0.0, 0.0, 1.0);
	const TimeGrid grid(0.0, 5.0, 5000);
	const MetricTrajectory g1 = evolve_metric(m, metric_closed_form_underdamped(p1, 0.0).value, grid);
	const MetricTrajectory g2 = evolve_metric(m, metric_closed_form_underdamped(p2, 0.0).value, grid);
	EXPECT_TRUE(metric_gauge_related(g1, g2, m, 1e-7));
}

TEST(GaugeRelated, UnrelatedMetricIsRejected)
{
	const HamiltonianModel m = two_level_loss({1.0, 1.0});
	const TimeGrid grid(0.0, 2.0, 2000);
	const MetricTrajectory g1 = evolve_metric(m, Matrix::Identity(2, 2), grid);
	const MetricTrajectory g2 = evolve_metric(two_level_loss({1.0, 0.5}), Matrix::Identity(2, 2), grid);
	EXPECT_FALSE(metric_gauge_related(g1, g2, m, 1e-7));
}
