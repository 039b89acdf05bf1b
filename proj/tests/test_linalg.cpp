#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hermitize/errors.hpp"
#include "hermitize/linalg.hpp"
#include "test_support.hpp"

using namespace hermitize;
using hermitize::testing::m2;
using hermitize::testing::Random;

TEST(IsHermitian, PauliXIsHermitianAtZeroTolerance)
{
	EXPECT_TRUE(is_hermitian(pauli::x(), 0.0));
}

TEST(IsHermitian, AntiHermitianIsRejected)
{
	EXPECT_FALSE(is_hermitian(I * pauli::x(), 1e-12));
}

TEST(IsHermitian, SmallResidualWithinTolerance)
{
	const Matrix a = m2(1.0, Complex(1.0, 1e-10), Complex(1.0, -1e-10), 2.0);
	EXPECT_TRUE(is_hermitian(a, 1e-9));
	EXPECT_NEAR(hermiticity_residual(a), 0.0, 1e-15);
}

TEST(IsHermitian, ResidualIsMaxNormOfDifference)
{
	const Matrix a = m2(0.0, 1.0, 0.5, 0.0);
	EXPECT_DOUBLE_EQ(hermiticity_residual(a), 0.5);
	EXPECT_FALSE(is_hermitian(a, 0.49));
	EXPECT_TRUE(is_hermitian(a, 0.5));
}

TEST(MinEigenvalue, Diagonal)
{
	EXPECT_NEAR(min_eigenvalue_hermitian(m2(2.0, 0.0, 0.0, 1.0)), 1.0, 1e-15);
	EXPECT_NEAR(min_eigenvalue_hermitian(m2(1.0, 0.0, 0.0, -1.0)), -1.0, 1e-15);
}

TEST(MinEigenvalue, TwoByTwo)
{
	EXPECT_NEAR(min_eigenvalue_hermitian(m2(2.0, 1.0, 1.0, 2.0)), 1.0, 1e-14);
}

TEST(MinEigenvalue, NonHermitianInputThrows)
{
	EXPECT_THROW((void)min_eigenvalue_hermitian(m2(0.0, 1.0, 0.0, 0.0)), HermiticityError);
}

TEST(Cholesky, IdentityFactorsToIdentity)
{
	EXPECT_LE(max_norm(cholesky_upper(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)), 1e-15);
}

TEST(Cholesky, HandFactorization)
{
	const Matrix e = cholesky_upper(m2(4.0, 2.0, 2.0, 2.0));
	EXPECT_LE(max_norm(e - m2(2.0, 1.0, 0.0, 1.0)), 1e-15);
}

TEST(Cholesky, IndefiniteMetricCarriesPivotIndex)
{
	try
	{
		(void)cholesky_upper(m2(1.0, 0.0, 0.0, -1.0));
		FAIL() << "expected MetricDegeneracyError";
	}
	catch(const MetricDegeneracyError& e)
	{
		EXPECT_EQ(e.pivot(), 1u);
		EXPECT_EQ(e.invariant(), "positivity");
	}
}

TEST(Cholesky, UpperTriangularWithPositiveRealDiagonal)
{
	Random rng(11);
	const Matrix g = rng.positive(4);
	const Matrix e = cholesky_upper(g);
	for(Eigen::Index i = 0; i < 4; ++i)
	{
		EXPECT_GT(e(i, i).real(), 0.0);
		EXPECT_EQ(e(i, i).imag(), 0.0);
		for(Eigen::Index j = 0; j < i; ++j)
		{
			EXPECT_EQ(e(i, j), Complex(0.0));
		}
	}
}

TEST(HermitianSqrt, Diagonal)
{
	EXPECT_LE(max_norm(hermitian_sqrt(m2(4.0, 0.0, 0.0, 1.0)) - m2(2.0, 0.0, 0.0, 1.0)), 1e-15);
	EXPECT_LE(max_norm(hermitian_sqrt(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)), 1e-15);
}

TEST(HermitianSqrt, SquaresBackToInput)
{
	const Matrix g = m2(2.0, 1.0, 1.0, 2.0);
	const Matrix e = hermitian_sqrt(g);
	EXPECT_LE(max_norm(e * e - g), 1e-12);
	EXPECT_LE(hermiticity_residual(e), 1e-15);
	EXPECT_GT(min_eigenvalue_hermitian(e), 0.0);
}

TEST(HermitianSqrt, IndefiniteThrows)
{
	EXPECT_THROW((void)hermitian_sqrt(m2(1.0, 0.0, 0.0, -1.0)), MetricDegeneracyError);
}

TEST(MatrixExponential, ZeroGivesIdentity)
{
	EXPECT_LE(max_norm(matrix_exponential(Matrix::Zero(2, 2)) - Matrix::Identity(2, 2)), 1e-15);
}

TEST(MatrixExponential, EulerIdentityForPauli)
{
	const Matrix x = matrix_exponential(I * (std::numbers::pi / 2.0) * pauli::x());
	EXPECT_LE(max_norm(x - I * pauli::x()), 1e-12);
}

TEST(MatrixExponential, Diagonal)
{
	const Matrix x = matrix_exponential(m2(1.0, 0.0, 0.0, 2.0));
	EXPECT_NEAR(std::abs(x(0, 0) - std::exp(1.0)), 0.0, 1e-12 * std::exp(1.0));
	EXPECT_NEAR(std::abs(x(1, 1) - std::exp(2.0)), 0.0, 1e-12 * std::exp(2.0));
	EXPECT_EQ(std::abs(x(0, 1)), 0.0);
}

TEST(MatrixExponential, OverflowThrows)
{
	EXPECT_THROW((void)matrix_exponential(m2(1000.0, 0.0, 0.0, 0.0)), DivergenceError);
}

TEST(SolveLinear, IdentityReturnsRightHandSide)
{
	Random rng(3);
	const Matrix b = rng.matrix(3);
	EXPECT_LE(max_norm(solve_linear(Matrix::Identity(3, 3), b) - b), 1e-15);
}

TEST(SolveLinear, Diagonal)
{
	const Matrix x = solve_linear(m2(2.0, 0.0, 0.0, 4.0), Matrix::Identity(2, 2));
	EXPECT_LE(max_norm(x - m2(0.5, 0.0, 0.0, 0.25)), 1e-15);
}

TEST(SolveLinear, BackSubstitution)
{
	Matrix b(2, 1);
	b << 1.0, 1.0;
	const Matrix x = solve_linear(m2(1.0, 1.0, 0.0, 1.0), b);
	EXPECT_LE(std::abs(x(0, 0)), 1e-15);
	EXPECT_LE(std::abs(x(1, 0) - 1.0), 1e-15);
}

TEST(SolveLinear, SingularMatrixThrows)
{
	EXPECT_THROW((void)solve_linear(m2(1.0, 1.0, 1.0, 1.0), Matrix::Identity(2, 2)), SingularityError);
	EXPECT_THROW((void)solve_linear(m2(1.0, 0.0, 0.0, 1e-14), Matrix::Identity(2, 2)), SingularityError);
}

TEST(SolveLinear, NonConformableThrows)
{
	EXPECT_THROW((void)solve_linear(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), PreconditionError);
}

TEST(SolveLinear, RightSolveInvertsFromTheRight)
{
	Random rng(5);
	const Matrix a = rng.matrix(3) + 3.0 * Matrix::Identity(3, 3);
	const Matrix b = rng.matrix(3);
	EXPECT_LE(max_norm(right_solve(b, a) * a - b), 1e-12);
}

TEST(RequireOperator, RejectsNonSquareEmptyAndNonFinite)
{
	EXPECT_THROW(require_operator(Matrix::Zero(2, 3), "x"), PreconditionError);
	EXPECT_THROW(require_operator(Matrix(0, 0), "x"), PreconditionError);
	Matrix bad = Matrix::Identity(2, 2);
	bad(0, 1) = Complex(std::nan(""), 0.0);
	EXPECT_THROW(require_operator(bad, "x"), PreconditionError);
}

TEST(Spectrum, DistanceIsPermutationInvariant)
{
	Vector x(3);
	Vector y(3);
	x << Complex(1, 0), Complex(2, 1), Complex(-1, 0);
	y << Complex(-1, 0), Complex(1, 0), Complex(2, 1);
	EXPECT_EQ(spectrum_distance(x, y), 0.0);
}

TEST(Tolerance, DefaultsScaleWithDimension)
{
	const StructuralTolerance t = StructuralTolerance::for_dim(4);
	EXPECT_DOUBLE_EQ(t.hermiticity, 4e-10);
	EXPECT_DOUBLE_EQ(t.positivity, 1e-12);
	EXPECT_DOUBLE_EQ(t.unitarity, 1e-8);
}

class RandomMetric : public ::testing::TestWithParam<int>
{
};

TEST_P(RandomMetric, FactorsReproduceMetric)
{
	Random rng(100 + static_cast<std::uint64_t>(GetParam()));
	const Eigen::Index n = 2 + GetParam() % 5;
	const Matrix g = rng.positive(n);
	const double scale = max_norm(g);
	const Matrix c = cholesky_upper(g);
	const Matrix s = hermitian_sqrt(g);
	EXPECT_LE(max_norm(c.adjoint() * c - g), 1e-10 * scale);
	EXPECT_LE(max_norm(s.adjoint() * s - g), 1e-10 * scale);
}

TEST_P(RandomMetric, SqrtAndCholeskyDifferByUnitary)
{
	Random rng(200 + static_cast<std::uint64_t>(GetParam()));
	const Eigen::Index n = 2 + GetParam() % 4;
	const Matrix g = rng.positive(n, 0.1);
	const Matrix u = right_solve(hermitian_sqrt(g), cholesky_upper(g));
	EXPECT_LE(unitarity_residual(u), 1e-8);
}

TEST_P(RandomMetric, ExponentialOfNegativeIsInverse)
{
	Random rng(300 + static_cast<std::uint64_t>(GetParam()));
	Matrix a = rng.matrix(3);
	a *= 5.0 / std::max(1.0, a.operatorNorm());
	EXPECT_LE(max_norm(matrix_exponential(a) * matrix_exponential(-a) - Matrix::Identity(3, 3)), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomMetric, ::testing::Range(0, 25));
