#include <cmath>

#include <gtest/gtest.h>

#include "hermitize/errors.hpp"
#include "hermitize/models.hpp"
#include "test_support.hpp"

using namespace hermitize;
using hermitize::testing::m2;

namespace
{
Matrix block(const Matrix& h, int total)
{
	const Eigen::Index start = static_cast<Eigen::Index>(total) * (total + 1) / 2;
	return h.block(start, start, total + 1, total + 1);
}
} // namespace

TEST(TwoLevelLoss, HermitianLimit)
{
	const Matrix h = two_level_loss({1.0, 0.0})(0.0);
	EXPECT_LE(max_norm(h - 0.5 * pauli::x()), 0.0);
	EXPECT_TRUE(is_hermitian(h, 0.0));
}

TEST(TwoLevelLoss, ExceptionalPointMatrix)
{
	const Matrix h = two_level_loss({1.0, 2.0})(0.0);
	EXPECT_LE(max_norm(h - m2(-I, 0.5, 0.5, 0.0)), 0.0);
}

TEST(TwoLevelLoss, DirectSubstitution)
{
	const Matrix h = two_level_loss({2.0, 1.0})(3.7);
	EXPECT_LE(max_norm(h - m2(-0.5 * I, 1.0, 1.0, 0.0)), 0.0);
}

TEST(TwoLevelLoss, ZeroOmegaIsParameterError)
{
	EXPECT_THROW((void)two_level_loss({0.0, 1.0}), ParameterError);
	EXPECT_THROW((void)classify_regime({0.0, 1.0}), ParameterError);
}

TEST(TwoLevelLoss, IsTimeIndependent)
{
	const HamiltonianModel m = two_level_loss({1.3, 0.7});
	EXPECT_TRUE(m.is_time_independent());
	EXPECT_EQ(m.dim(), 2);
	for(double t : {0.0, 0.5, 17.0, -3.0})
	{
		EXPECT_LE(max_norm(m(t) - m(0.0)), 0.0);
	}
}

TEST(ClassifyRegime, ThreeRegimes)
{
	EXPECT_EQ(classify_regime({1.0, 1.0}, 1e-9), DampingRegime::Underdamped);
	EXPECT_EQ(classify_regime({1.0, 4.0}, 1e-9), DampingRegime::Overdamped);
	EXPECT_EQ(classify_regime({1.0, 2.0}, 1e-9), DampingRegime::ExceptionalPoint);
}

TEST(ClassifyRegime, SignsAndTolerance)
{
	EXPECT_EQ(classify_regime({-1.0, 2.0}), DampingRegime::ExceptionalPoint);
	EXPECT_EQ(classify_regime({1.0, -2.0}), DampingRegime::ExceptionalPoint);
	EXPECT_EQ(classify_regime({1.0, 2.0 + 1e-12}), DampingRegime::ExceptionalPoint);
	EXPECT_EQ(classify_regime({1.0, 2.0 + 1e-6}), DampingRegime::Overdamped);
	EXPECT_EQ(classify_regime({1.0, 2.0 - 1e-6}), DampingRegime::Underdamped);
	EXPECT_EQ(classify_regime({1.0, 2.0 + 1e-6}, 1e-5), DampingRegime::ExceptionalPoint);
}

TEST(TwoLevelLoss, EigenvaluesMatchClosedForm)
{
	for(double gamma : {0.0, 0.5, 1.0, 1.9, 2.1, 3.0, 4.0, -1.0, -3.0})
	{
		for(double omega : {1.0, 0.7, -1.4})
		{
			const double r = gamma * gamma / (4.0 * omega * omega);
			const Complex lambda = r < 1.0 ? Complex(std::sqrt(1.0 - r), 0.0) : Complex(0.0, std::sqrt(r - 1.0));
			Vector expected(2);
			expected << -I * gamma / 4.0 + (omega / 2.0) * lambda, -I * gamma / 4.0 - (omega / 2.0) * lambda;
			const Vector actual = sorted_eigenvalues(two_level_loss({omega, gamma})(0.0));
			EXPECT_LE(spectrum_distance(actual, expected), 1e-10) << "omega " << omega << " gamma " << gamma;
		}
	}
}

TEST(FockSpace, DimensionAndOrdering)
{
	const TwoModeFockSpace space(3);
	EXPECT_EQ(space.dim(), 10);
	EXPECT_EQ(space.index(0, 0), 0);
	EXPECT_EQ(space.index(0, 1), 1);
	EXPECT_EQ(space.index(1, 0), 2);
	EXPECT_EQ(space.index(3, 0), 9);
	for(Eigen::Index k = 0; k < space.dim(); ++k)
	{
		const auto [na, nb] = space.occupation(k);
		EXPECT_EQ(space.index(na, nb), k);
		EXPECT_EQ(space.total_number(k), na + nb);
	}
	EXPECT_EQ(space.interior().size(), 6u);
	EXPECT_THROW((void)space.index(2, 2), PreconditionError);
}

TEST(FockSpace, CutoffBelowOneRejected)
{
	EXPECT_THROW(TwoModeFockSpace(0), ParameterError);
}

TEST(FockSpace, CommutatorIsIdentityOnInterior)
{
	const TwoModeFockSpace space(4);
	const Matrix a = space.annihilate_a();
	const Matrix b = space.annihilate_b();
	const Matrix ca = a * a.adjoint() - a.adjoint() * a;
	const Matrix cb = b * b.adjoint() - b.adjoint() * b;
	for(Eigen::Index k : space.interior())
	{
		EXPECT_NEAR(std::abs(ca(k, k) - 1.0), 0.0, 1e-14);
		EXPECT_NEAR(std::abs(cb(k, k) - 1.0), 0.0, 1e-14);
	}
	EXPECT_LE(max_norm(a.adjoint() * a - space.number_a()), 1e-14);
}

TEST(TwoModeBosonic, SingleExcitationHopping)
{
	const Matrix h = two_mode_bosonic_matrix({0.0, 0.0, 1.0, 1});
	EXPECT_LE(max_norm(block(h, 1) - m2(0.0, 1.0, 1.0, 0.0)), 1e-15);
}

TEST(TwoModeBosonic, DecoupledLoss)
{
	const TwoModeFockSpace space(1);
	const Matrix h = two_mode_bosonic_matrix({2.0, 0.0, 0.0, 1});
	const Eigen::Index k10 = space.index(1, 0);
	const Eigen::Index k01 = space.index(0, 1);
	EXPECT_LE(std::abs(h(k10, k10) + I), 1e-15);
	EXPECT_LE(std::abs(h(k01, k01)), 1e-15);
	EXPECT_LE(std::abs(h(k10, k01)), 1e-15);
}

TEST(TwoModeBosonic, VacuumBlockIsZero)
{
	for(const TwoModeBosonicParams& p :
	    {TwoModeBosonicParams{1.0, 0.3, 0.7, 3}, TwoModeBosonicParams{4.0, 0.0, 1.0, 2}})
	{
		EXPECT_EQ(std::abs(two_mode_bosonic_matrix(p)(0, 0)), 0.0);
	}
}

TEST(TwoModeBosonic, CommutesWithTotalNumber)
{
	for(int n_max : {1, 3, 6})
	{
		const TwoModeBosonicParams p{1.3, 0.4, 0.9, n_max};
		const Matrix h = two_mode_bosonic_matrix(p);
		const Matrix n = TwoModeFockSpace(n_max).total_number_operator();
		EXPECT_LE(max_norm(h * n - n * h), 1e-14 * max_norm(h));
	}
}

TEST(TwoModeBosonic, BlockDiagonalStructure)
{
	const TwoModeFockSpace space(4);
	const Matrix h = two_mode_bosonic_matrix({1.0, 0.5, 0.8, 4});
	for(Eigen::Index i = 0; i < space.dim(); ++i)
	{
		for(Eigen::Index j = 0; j < space.dim(); ++j)
		{
			if(space.total_number(i) != space.total_number(j))
			{
				EXPECT_EQ(std::abs(h(i, j)), 0.0);
			}
		}
	}
}

TEST(ClassifyBosonicRegime, Examples)
{
	EXPECT_EQ(classify_bosonic_regime({4.0, 0.0, 1.0, 1}), BosonicRegime::EP);
	EXPECT_EQ(classify_bosonic_regime({0.0, 0.0, 1.0, 1}), BosonicRegime::NonEP);
	EXPECT_EQ(classify_bosonic_regime({2.0, 0.0, 1.0, 1}), BosonicRegime::NonEP);
	EXPECT_EQ(classify_bosonic_regime({0.0, 4.0, 1.0, 1}), BosonicRegime::EP);
	EXPECT_EQ(classify_bosonic_regime({0.0, 4.0, -1.0, 1}), BosonicRegime::EP);
}

TEST(ClassifyBosonicRegime, ZeroCouplingRejected)
{
	EXPECT_THROW((void)classify_bosonic_regime({1.0, 0.0, 0.0, 1}), ParameterError);
}

TEST(CustomModel, ScalarLossIsValid)
{
	const double gamma = 0.8;
	const HamiltonianModel m = custom_model(1, [=](double) { return Matrix::Constant(1, 1, -I * gamma / 2.0); }, "loss");
	EXPECT_EQ(m.dim(), 1);
	EXPECT_EQ(m.label(), "loss");
	EXPECT_FALSE(m.is_time_independent());
	EXPECT_LE(std::abs(m(2.0)(0, 0) + I * 0.4), 0.0);
}

TEST(CustomModel, WrongDimensionRejected)
{
	EXPECT_THROW((void)custom_model(2, [](double) { return Matrix::Identity(3, 3); }, "bad"), PreconditionError);
}

TEST(CustomModel, NonFiniteSampleRejected)
{
	EXPECT_THROW((void)custom_model(
	                 1, [](double t) { return Matrix::Constant(1, 1, t > 0.5 ? Complex(INFINITY) : Complex(0.0)); },
	                 "bad"),
	             PreconditionError);
}

TEST(CustomModel, InteractionPictureFixture)
{
	const double delta = 1.0;
	const double g = 1.0;
	const HamiltonianModel m =
		custom_model(2, [=](double) { return Matrix(delta / 2.0 * pauli::z() + g * pauli::x()); }, "qubit");
	EXPECT_TRUE(is_hermitian(m(0.3), 0.0));
}
