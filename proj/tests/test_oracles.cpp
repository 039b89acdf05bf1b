#include <cmath>

#include <gtest/gtest.h>

#include "hermitize/errors.hpp"
#include "hermitize/metric.hpp"
#include "hermitize/oracles.hpp"
#include "test_support.hpp"

using namespace hermitize;
using hermitize::testing::m2;

namespace
{
struct RegimeCase
{
	double gamma;
	double sign;
	double t_max;
};

OracleParams params(const RegimeCase& c)
{
	OracleParams p{1.0, c.gamma};
	p.sign = c.gamma < 0 ? -1 : 1;
	return p;
}

double rel(const Matrix& a, const Matrix& b)
{
	return max_norm(a - b) / std::max(1.0, max_norm(b));
}
} // namespace

TEST(UnderdampedOracle, HermitianLimitIsConstantTwoIdentity)
{
	for(double t : {0.0, 0.7, 3.1})
	{
		EXPECT_LE(max_norm(metric_closed_form_underdamped({1.0, 0.0}, t).value - 2.0 * Matrix::Identity(2, 2)), 1e-14);
	}
}

TEST(UnderdampedOracle, InitialVielbeinAsPrinted)
{
	const double l = std::sqrt(3.0) / 2.0;
	const Matrix m0 = m2(1.0, 0.5 * I + l, 1.0, 0.5 * I - l);
	EXPECT_LE(max_norm(vielbein_closed_form_underdamped({1.0, 1.0}, 0.0).value - m0), 1e-15);
	EXPECT_LE(max_norm(metric_closed_form_underdamped({1.0, 1.0}, 0.0).value - m0.adjoint() * m0), 1e-14);
}

TEST(UnderdampedOracle, MetricStaysPositive)
{
	for(int k = 0; k < 100; ++k)
	{
		const double t = 5.0 * k / 99.0;
		EXPECT_GT(min_eigenvalue_hermitian(metric_closed_form_underdamped({1.0, 1.0}, t).value), 0.0);
	}
}

TEST(UnderdampedOracle, VielbeinFactorsMetricAndInducesZero)
{
	const OracleParams p{1.0, 1.0};
	const OracleSample e = vielbein_closed_form_underdamped(p, 1.3);
	EXPECT_LE(max_norm(e.value.adjoint() * e.value - metric_closed_form_underdamped(p, 1.3).value), 1e-12);
	const Matrix h = two_level_loss({1.0, 1.0})(0.0);
	EXPECT_LE(max_norm(e.rate - I * e.value * h), 1e-10);
	EXPECT_LE(max_norm(induced_hamiltonian(e.value, e.rate, h)), 1e-12);
}

TEST(OverdampedOracle, GammaFour)
{
	const OracleParams p{1.0, 4.0};
	const OracleSample e = vielbein_closed_form_overdamped(p, 0.9);
	const Matrix h = two_level_loss({1.0, 4.0})(0.0);
	EXPECT_LE(max_norm(induced_hamiltonian(e.value, e.rate, h)), 1e-12 * max_norm(e.value));
	EXPECT_LE(rel(e.value.adjoint() * e.value, metric_closed_form_overdamped(p, 0.9).value), 1e-14);
	// f± = exp(±sqrt(3) t / 2) enters the metric through its growth rate
	const double r = std::exp(std::sqrt(3.0));
	const double growth = max_norm(metric_closed_form_overdamped(p, 6.0).value) /
	                      max_norm(metric_closed_form_overdamped(p, 5.0).value);
	EXPECT_NEAR(std::log(growth), std::log(r) + 2.0, 0.05);
}

TEST(EpOracle, InitialVielbeinAsPrinted)
{
	const Matrix e0 = m2(1.0, I, 0.0, -4.0 * I);
	EXPECT_LE(max_norm(vielbein_closed_form_ep({1.0, 2.0}, 0.0).value - e0), 1e-15);
}

TEST(EpOracle, LowerSignBranch)
{
	OracleParams p{1.0, -2.0};
	p.sign = -1;
	const Matrix h = two_level_loss({1.0, -2.0})(0.0);
	for(double t : {0.0, 0.5, 2.5})
	{
		const OracleSample e = vielbein_closed_form_ep(p, t);
		EXPECT_LE(max_norm(induced_hamiltonian(e.value, e.rate, h) - 0.5 * pauli::x()), 1e-10);
		EXPECT_LE(rel(e.value.adjoint() * e.value, metric_closed_form_ep(p, t).value), 1e-14);
	}
}

TEST(Oracle, WrongRegimeRejected)
{
	EXPECT_THROW((void)metric_closed_form_underdamped({1.0, 4.0}, 0.0), ParameterError);
	EXPECT_THROW((void)vielbein_closed_form_overdamped({1.0, 1.0}, 0.0), ParameterError);
	EXPECT_THROW((void)vielbein_closed_form_ep({1.0, 1.0}, 0.0), ParameterError);
}

TEST(Oracle, InconsistentConstantsRejected)
{
	OracleParams p{1.0, 1.0};
	p.g_const = m2(3.0, 0.0, 0.0, 1.0);
	EXPECT_THROW((void)oracle_metric_constant(p), ParameterError);
	p.h_const = m2(1.0, 1.0, 1.0, 1.0);
	p.g_const.reset();
	EXPECT_THROW((void)oracle_metric_constant(p), PreconditionError);
}

class RegimeOracle : public ::testing::TestWithParam<RegimeCase>
{
};

TEST_P(RegimeOracle, VielbeinSatisfiesItsOde)
{
	const OracleParams p = params(GetParam());
	const Matrix h = two_level_loss({p.omega, p.gamma})(0.0);
	const Matrix flat = oracle_induced_hamiltonian(p);
	for(int k = 0; k < 50; ++k)
	{
		const double t = GetParam().t_max * k / 49.0;
		const OracleSample e = vielbein_closed_form(p, t);
		const Matrix rhs = -I * flat * e.value + I * e.value * h;
		EXPECT_LE(max_norm(e.rate - rhs), 1e-9 * std::max(1.0, max_norm(e.value))) << "t " << t;
	}
}

TEST_P(RegimeOracle, MetricSatisfiesItsFlow)
{
	const OracleParams p = params(GetParam());
	const Matrix h = two_level_loss({p.omega, p.gamma})(0.0);
	for(int k = 0; k < 50; ++k)
	{
		const double t = GetParam().t_max * k / 49.0;
		const OracleSample g = metric_closed_form(p, t);
		EXPECT_LE(max_norm(g.rate - metric_rhs(g.value, h)), 1e-9 * std::max(1.0, max_norm(g.value))) << "t " << t;
	}
}

TEST_P(RegimeOracle, MetricIsVielbeinSquaredWithCustomConstants)
{
	OracleParams p = params(GetParam());
	p.h_const = m2(1.5, Complex(0.2, 0.3), 0.0, 0.8);
	for(double t : {0.0, 0.4, 1.9})
	{
		const Matrix e = vielbein_closed_form(p, t).value;
		EXPECT_LE(rel(e.adjoint() * e, metric_closed_form(p, t).value), 1e-14);
	}
}

INSTANTIATE_TEST_SUITE_P(Regimes, RegimeOracle,
                         ::testing::Values(RegimeCase{1.0, 1, 5.0}, RegimeCase{0.0, 1, 5.0}, RegimeCase{1.9, 1, 5.0},
                                           RegimeCase{4.0, 1, 5.0}, RegimeCase{2.1, 1, 5.0}, RegimeCase{2.0, 1, 3.0},
                                           RegimeCase{-2.0, -1, 3.0}, RegimeCase{-1.0, 1, 5.0}));

TEST(OracleFrame, InducedHamiltonianMatchesRegime)
{
	const TimeGrid grid(0.0, 1.0, 50);
	for(double gamma : {1.0, 4.0})
	{
		const VielbeinFrame frame = oracle_frame({1.0, gamma}, grid);
		for(const Matrix& h : frame.induced)
		{
			EXPECT_LE(max_norm(h), 1e-10);
		}
	}
	const VielbeinFrame ep = oracle_frame({1.0, 2.0}, grid);
	for(const Matrix& h : ep.induced)
	{
		EXPECT_LE(max_norm(h - 0.5 * pauli::x()), 1e-10);
	}
}

TEST(BosonicModes, FreeHoppingLimit)
{
	const BosonicNormalModes m = bosonic_normal_modes({0.0, 0.0, 1.0, 3});
	EXPECT_LE(std::abs(m.zeta - 4.0), 1e-15);
	EXPECT_LE(std::abs(m.h_plus - 1.0), 1e-15);
	EXPECT_LE(std::abs(m.h_minus + 1.0), 1e-15);
	// c± are symmetric and antisymmetric combinations of a and b
	const TwoModeFockSpace space(3);
	const Matrix a = space.annihilate_a();
	const Matrix b = space.annihilate_b();
	const Matrix sym = (a + b) / std::sqrt(2.0);
	const Matrix anti = (a - b) / std::sqrt(2.0);
	const auto proportional = [](const Matrix& x, const Matrix& y) {
		const Complex ratio = x.cwiseProduct(y.conjugate()).sum() / y.squaredNorm();
		return max_norm(x - ratio * y);
	};
	const double plus = std::min(proportional(m.c_plus_a, sym), proportional(m.c_plus_a, anti));
	const double minus = std::min(proportional(m.c_minus_a, sym), proportional(m.c_minus_a, anti));
	EXPECT_LE(plus, 1e-14);
	EXPECT_LE(minus, 1e-14);
}

TEST(BosonicModes, EpRegimeRejected)
{
	EXPECT_THROW((void)bosonic_normal_modes({4.0, 0.0, 1.0, 2}), ParameterError);
	EXPECT_THROW((void)bosonic_ep_modes({1.0, 0.0, 1.0, 2}), ParameterError);
}

TEST(BosonicModes, CommutatorsHoldOnInteriorBlocks)
{
	for(const TwoModeBosonicParams& p :
	    {TwoModeBosonicParams{1.0, 0.0, 1.0, 4}, TwoModeBosonicParams{4.0, 0.0, 1.0, 4},
	     TwoModeBosonicParams{0.0, 4.0, 1.0, 4}, TwoModeBosonicParams{0.5, 2.0, -0.7, 5},
	     TwoModeBosonicParams{10.0, 0.0, 1.0, 4}})
	{
		const std::vector<NamedResidual> residuals = bosonic_commutator_residuals(p);
		EXPECT_EQ(residuals.size(), 8u);
		for(const NamedResidual& r : residuals)
		{
			EXPECT_LE(r.residual, 1e-10) << r.relation << " at gamma_a " << p.gamma_a;
		}
	}
}

TEST(BosonicVielbein, VacuumElementIsOne)
{
	for(double t : {0.0, 1.0, 2.5})
	{
		EXPECT_LE(std::abs(bosonic_vielbein_closed_form({1.0, 0.0, 1.0, 3}, t).value(0, 0) - 1.0), 1e-14);
		EXPECT_LE(std::abs(bosonic_vielbein_closed_form({4.0, 0.0, 1.0, 3}, t).value(0, 0) - 1.0), 1e-14);
	}
}

TEST(BosonicVielbein, InducesZeroAndFactorsMetric)
{
	for(const TwoModeBosonicParams& p : {TwoModeBosonicParams{1.0, 0.0, 1.0, 4}, TwoModeBosonicParams{4.0, 0.0, 1.0, 4}})
	{
		const Matrix h = two_mode_bosonic_matrix(p);
		for(double t : {0.0, 0.8, 2.0})
		{
			const OracleSample e = bosonic_vielbein_closed_form(p, t);
			EXPECT_LE(max_norm(induced_hamiltonian(e.value, e.rate, h)), 1e-9 * max_norm(e.value));
			EXPECT_LE(rel(e.value.adjoint() * e.value, bosonic_metric_closed_form(p, t)), 1e-12);
		}
	}
}

TEST(BosonicVielbein, CustomCoefficientsScaleMetric)
{
	const TwoModeBosonicParams p{1.0, 0.0, 1.0, 3};
	const ModeCoefficients c = [](int np, int nm) { return Complex(1.0 + np, 0.5 * nm); };
	const Matrix e = bosonic_vielbein_closed_form(p, 0.6, c).value;
	EXPECT_LE(rel(e.adjoint() * e, bosonic_metric_closed_form(p, 0.6, c)), 1e-12);
}

TEST(BosonicGauge, HoppingPhaseGivesPlusG)
{
	for(const TwoModeBosonicParams& p : {TwoModeBosonicParams{0.0, 0.0, 1.0, 1}, TwoModeBosonicParams{1.0, 0.0, 1.0, 4},
	                                     TwoModeBosonicParams{4.0, 0.0, 1.0, 4}})
	{
		const Matrix h = two_mode_bosonic_matrix(p);
		const TwoModeFockSpace space(p.n_max);
		for(double t : {0.0, 0.5, 1.7})
		{
			const OracleSample e = bosonic_vielbein_closed_form(p, t);
			const OracleSample u = bosonic_gauge_closed_form(p, t);
			const Matrix ep = u.value * e.value;
			const Matrix dep = u.rate * e.value + u.value * e.rate;
			const Matrix flat = induced_hamiltonian(ep, dep, h);
			EXPECT_LE(interior_block_residual(space, flat - bosonic_hopping(p)), 1e-8);
			EXPECT_LE(unitarity_residual(u.value), 1e-12);
		}
	}
}

TEST(BosonicGauge, SingleExcitationBlock)
{
	const TwoModeBosonicParams p{0.0, 0.0, 1.0, 1};
	const Matrix hop = bosonic_hopping(p);
	EXPECT_LE(max_norm(hop.block(1, 1, 2, 2) - m2(0.0, 1.0, 1.0, 0.0)), 1e-15);
}

TEST(BosonicGauge, ReversedPhaseGivesMinusG)
{
	const TwoModeBosonicParams p{1.0, 0.0, 1.0, 3};
	const Matrix h = two_mode_bosonic_matrix(p);
	const TwoModeFockSpace space(p.n_max);
	const double t = 0.9;
	const OracleSample e = bosonic_vielbein_closed_form(p, t);
	const OracleSample u = bosonic_gauge_closed_form(p, t, BeamSplitterPhase::Reversed);
	const Matrix flat = induced_hamiltonian(u.value * e.value, u.rate * e.value + u.value * e.rate, h);
	EXPECT_LE(interior_block_residual(space, flat + bosonic_hopping(p)), 1e-8);
}

TEST(BosonicGauge, GeneratorReproducesClosedForm)
{
	const TwoModeBosonicParams p{1.0, 0.0, 1.0, 3};
	const GaugeGenerator gen = bosonic_gauge_generator(p);
	const TimeGrid grid(0.0, 2.0, 1000);
	const OperatorTrajectory u = gauge_flow(gen, grid);
	for(std::size_t k = 0; k < u.size(); k += 100)
	{
		EXPECT_LE(max_norm(u[k] - bosonic_gauge_closed_form(p, grid.time(k)).value), 1e-9);
	}
}

TEST(BosonicOracleFrame, InducesZeroOnGrid)
{
	const VielbeinFrame frame = bosonic_oracle_frame({1.0, 0.0, 1.0, 3}, TimeGrid(0.0, 1.0, 20));
	for(const Matrix& h : frame.induced)
	{
		EXPECT_LE(max_norm(h), 1e-9);
	}
}
