#include "hermitize/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "hermitize/errors.hpp"

namespace hermitize
{

double max_norm(const Matrix& a)
{
	if(a.size() == 0)
	{
		return 0.0;
	}
	return a.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& a)
{
	for(Eigen::Index k = 0; k < a.size(); ++k)
	{
		const Complex z = a.data()[k];
		if(!std::isfinite(z.real()) || !std::isfinite(z.imag()))
		{
			return false;
		}
	}
	return true;
}

void require_operator(const Matrix& a, std::string_view what)
{
	if(a.rows() == 0 || a.rows() != a.cols())
	{
		throw PreconditionError(std::string(what) + ": operator must be square with dim >= 1 (got "
		                        + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
	}
	if(!all_finite(a))
	{
		throw PreconditionError(std::string(what) + ": operator has non-finite entries");
	}
}

double hermiticity_residual(const Matrix& a)
{
	return max_norm(a - a.adjoint());
}

bool is_hermitian(const Matrix& a, double tol)
{
	return a.rows() == a.cols() && hermiticity_residual(a) <= tol;
}

Matrix hermitian_part(const Matrix& a)
{
	return 0.5 * (a + a.adjoint());
}

double unitarity_residual(const Matrix& u)
{
	return max_norm(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

RealVector hermitian_eigenvalues(const Matrix& a, double hermiticity_tol)
{
	require_operator(a, "hermitian_eigenvalues");
	const double residual = hermiticity_residual(a);
	if(residual > hermiticity_tol)
	{
		throw HermiticityError("matrix is not Hermitian (residual " + hermitize::format_number(residual) + ")",
		                       residual);
	}
	Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
	return solver.eigenvalues();
}

double min_eigenvalue_hermitian(const Matrix& a, double hermiticity_tol)
{
	return hermitian_eigenvalues(a, hermiticity_tol).minCoeff();
}

double min_eigenvalue_hermitian(const Matrix& a)
{
	return min_eigenvalue_hermitian(a, StructuralTolerance::for_dim(a.rows()).hermiticity);
}

Matrix cholesky_upper(const Matrix& g, const StructuralTolerance& tol)
{
	require_operator(g, "cholesky_upper");
	const double residual = hermiticity_residual(g);
	if(residual > tol.hermiticity)
	{
		throw HermiticityError("cholesky_upper: metric is not Hermitian", residual);
	}

	const Eigen::Index n = g.rows();
	Matrix e = Matrix::Zero(n, n);
	for(Eigen::Index j = 0; j < n; ++j)
	{
		double pivot = g(j, j).real();
		for(Eigen::Index k = 0; k < j; ++k)
		{
			pivot -= std::norm(e(k, j));
		}
		if(!(pivot > tol.positivity))
		{
			throw MetricDegeneracyError("cholesky_upper: non-positive pivot " + hermitize::format_number(pivot)
			                                + " at index " + std::to_string(j),
			                            static_cast<std::size_t>(j));
		}
		const double diag = std::sqrt(pivot);
		e(j, j) = diag;
		for(Eigen::Index i = j + 1; i < n; ++i)
		{
			Complex s = g(j, i);
			for(Eigen::Index k = 0; k < j; ++k)
			{
				s -= std::conj(e(k, j)) * e(k, i);
			}
			e(j, i) = s / diag;
		}
	}
	return e;
}

Matrix cholesky_upper(const Matrix& g)
{
	return cholesky_upper(g, StructuralTolerance::for_dim(g.rows()));
}

Matrix hermitian_sqrt(const Matrix& g, const StructuralTolerance& tol)
{
	require_operator(g, "hermitian_sqrt");
	const double residual = hermiticity_residual(g);
	if(residual > tol.hermiticity)
	{
		throw HermiticityError("hermitian_sqrt: metric is not Hermitian", residual);
	}
	Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(g));
	const RealVector& values = solver.eigenvalues();
	for(Eigen::Index k = 0; k < values.size(); ++k)
	{
		if(!(values(k) > tol.positivity))
		{
			throw MetricDegeneracyError("hermitian_sqrt: non-positive eigenvalue "
			                                + hermitize::format_number(values(k)),
			                            static_cast<std::size_t>(k));
		}
	}
	const Matrix& v = solver.eigenvectors();
	Matrix root = v * values.cwiseSqrt().cast<Complex>().asDiagonal() * v.adjoint();
	return hermitian_part(root);
}

Matrix hermitian_sqrt(const Matrix& g)
{
	return hermitian_sqrt(g, StructuralTolerance::for_dim(g.rows()));
}

Matrix matrix_exponential(const Matrix& a)
{
	require_operator(a, "matrix_exponential");
	Matrix result = a.exp();
	if(!all_finite(result))
	{
		throw DivergenceError("matrix_exponential: result overflowed", 0);
	}
	return result;
}

double condition_estimate(const Matrix& a)
{
	Eigen::PartialPivLU<Matrix> lu(a);
	const double rcond = lu.rcond();
	return rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

namespace
{
Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& a, const char* what)
{
	require_operator(a, what);
	Eigen::PartialPivLU<Matrix> lu(a);
	const double rcond = lu.rcond();
	if(!(rcond * kSingularCondition > 1.0))
	{
		const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
		throw SingularityError(std::string(what) + ": matrix is numerically singular (condition estimate "
		                           + hermitize::format_number(cond) + ")",
		                       cond);
	}
	return lu;
}
} // namespace

Matrix solve_linear(const Matrix& a, const Matrix& b)
{
	if(b.rows() != a.rows())
	{
		throw PreconditionError("solve_linear: right-hand side is not conformable");
	}
	return checked_lu(a, "solve_linear").solve(b);
}

Matrix right_solve(const Matrix& b, const Matrix& a)
{
	if(b.cols() != a.rows())
	{
		throw PreconditionError("right_solve: left operand is not conformable");
	}
	// X A = B  <=>  A† X† = B†
	const Matrix at = a.adjoint();
	return checked_lu(at, "right_solve").solve(b.adjoint()).adjoint();
}

Vector sorted_eigenvalues(const Matrix& a)
{
	require_operator(a, "sorted_eigenvalues");
	Eigen::ComplexEigenSolver<Matrix> solver(a, false);
	Vector values = solver.eigenvalues();
	std::sort(values.data(), values.data() + values.size(), [](const Complex& x, const Complex& y) {
		if(x.real() != y.real())
		{
			return x.real() < y.real();
		}
		return x.imag() < y.imag();
	});
	return values;
}

double spectrum_distance(const Vector& x, const Vector& y)
{
	if(x.size() != y.size())
	{
		throw PreconditionError("spectrum_distance: spectra have different sizes");
	}
	const auto n = static_cast<std::size_t>(x.size());
	auto distance = [&](const std::vector<std::size_t>& perm) {
		double worst = 0.0;
		for(std::size_t k = 0; k < n; ++k)
		{
			worst = std::max(worst, std::abs(x(static_cast<Eigen::Index>(k))
			                                 - y(static_cast<Eigen::Index>(perm[k]))));
		}
		return worst;
	};

	std::vector<std::size_t> perm(n);
	std::iota(perm.begin(), perm.end(), std::size_t{0});
	// sorted pairing can mismatch nearly degenerate eigenvalues; small spectra
	// get the optimal bottleneck matching
	if(n > 8)
	{
		return distance(perm);
	}
	double best = std::numeric_limits<double>::infinity();
	do
	{
		best = std::min(best, distance(perm));
	} while(std::next_permutation(perm.begin(), perm.end()));
	return best;
}

namespace pauli
{
Matrix x()
{
	Matrix m(2, 2);
	m << 0.0, 1.0, 1.0, 0.0;
	return m;
}

Matrix y()
{
	Matrix m(2, 2);
	m << 0.0, -I, I, 0.0;
	return m;
}

Matrix z()
{
	Matrix m(2, 2);
	m << 1.0, 0.0, 0.0, -1.0;
	return m;
}

Matrix identity()
{
	return Matrix::Identity(2, 2);
}
} // namespace pauli

} // namespace hermitize
