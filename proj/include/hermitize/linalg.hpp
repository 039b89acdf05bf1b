#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace hermitize
{

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};

/// Thresholds for the structural predicates. Defaults scale the Hermiticity
/// threshold with the dimension.
struct StructuralTolerance
{
	double hermiticity = 1e-10;
	double positivity = 1e-12;
	double unitarity = 1e-8;

	[[nodiscard]] static StructuralTolerance for_dim(Eigen::Index dim)
	{
		return {1e-10 * static_cast<double>(dim), 1e-12, 1e-8};
	}
};

/// Largest absolute entry; the norm used for every residual in this library.
[[nodiscard]] double max_norm(const Matrix& a);
[[nodiscard]] bool all_finite(const Matrix& a);

/// Throws PreconditionError unless `a` is square, non-empty and finite.
void require_operator(const Matrix& a, std::string_view what);

[[nodiscard]] double hermiticity_residual(const Matrix& a);
[[nodiscard]] bool is_hermitian(const Matrix& a, double tol);
[[nodiscard]] Matrix hermitian_part(const Matrix& a);

/// max-norm of U†U - 1.
[[nodiscard]] double unitarity_residual(const Matrix& u);

/// Ascending eigenvalues of (A + A†)/2. Throws HermiticityError if A is not
/// Hermitian within `hermiticity_tol`.
[[nodiscard]] RealVector hermitian_eigenvalues(const Matrix& a, double hermiticity_tol);
[[nodiscard]] double min_eigenvalue_hermitian(const Matrix& a, double hermiticity_tol);
[[nodiscard]] double min_eigenvalue_hermitian(const Matrix& a);

/// Upper-triangular E with positive real diagonal and E†E = G.
/// Throws MetricDegeneracyError carrying the index of the failing pivot.
[[nodiscard]] Matrix cholesky_upper(const Matrix& g, const StructuralTolerance& tol);
[[nodiscard]] Matrix cholesky_upper(const Matrix& g);

/// Principal square root of a Hermitian positive-definite matrix.
[[nodiscard]] Matrix hermitian_sqrt(const Matrix& g, const StructuralTolerance& tol);
[[nodiscard]] Matrix hermitian_sqrt(const Matrix& g);

[[nodiscard]] Matrix matrix_exponential(const Matrix& a);

/// Reciprocal of LAPACK-style one-norm reciprocal condition estimate.
[[nodiscard]] double condition_estimate(const Matrix& a);

inline constexpr double kSingularCondition = 1e12;

/// X with A X = B. Throws SingularityError when the condition estimate
/// exceeds kSingularCondition.
[[nodiscard]] Matrix solve_linear(const Matrix& a, const Matrix& b);

/// X with X A = B, i.e. B A^-1 without forming the inverse.
[[nodiscard]] Matrix right_solve(const Matrix& b, const Matrix& a);

/// Eigenvalues of a general complex matrix sorted by real part, then
/// imaginary part.
[[nodiscard]] Vector sorted_eigenvalues(const Matrix& a);

/// Bottleneck distance between two eigenvalue multisets of equal size.
[[nodiscard]] double spectrum_distance(const Vector& x, const Vector& y);

namespace pauli
{
[[nodiscard]] Matrix x();
[[nodiscard]] Matrix y();
[[nodiscard]] Matrix z();
[[nodiscard]] Matrix identity();
} // namespace pauli

} // namespace hermitize
