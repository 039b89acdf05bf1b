#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hermitize/linalg.hpp"

namespace hermitize
{

/// Operator-valued function of time (hbar = 1).
using TimeFunction = std::function<Matrix(double)>;

/// A time-dependent Hamiltonian H(t) of fixed dimension.
class HamiltonianModel
{
public:
	HamiltonianModel(Eigen::Index dim, TimeFunction evaluate, std::string label, bool time_independent);

	/// H(t); throws PreconditionError if the evaluator returns a matrix of the
	/// wrong size or with non-finite entries.
	[[nodiscard]] Matrix operator()(double t) const;

	[[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
	[[nodiscard]] const std::string& label() const noexcept { return label_; }
	[[nodiscard]] bool is_time_independent() const noexcept { return time_independent_; }

private:
	Eigen::Index dim_;
	TimeFunction evaluate_;
	std::string label_;
	bool time_independent_;
};

/// H = (omega/2) sigma_x - i (gamma/2) sigma+ sigma-, basis (excited, ground).
struct TwoLevelLossParams
{
	double omega = 1.0;
	double gamma = 0.0;
};

enum class DampingRegime
{
	Underdamped,
	Overdamped,
	ExceptionalPoint
};

[[nodiscard]] std::string_view to_string(DampingRegime regime);

[[nodiscard]] HamiltonianModel two_level_loss(const TwoLevelLossParams& params);

/// ep_tol is relative to 2|omega|.
[[nodiscard]] DampingRegime classify_regime(const TwoLevelLossParams& params, double ep_tol = 1e-9);

/// H = -i (gamma_a/2) a†a - i (gamma_b/2) b†b + g (a†b + b†a), truncated to
/// total excitation number n_a + n_b <= n_max.
struct TwoModeBosonicParams
{
	double gamma_a = 0.0;
	double gamma_b = 0.0;
	double g = 1.0;
	int n_max = 1;
};

enum class BosonicRegime
{
	NonEP,
	EP
};

[[nodiscard]] std::string_view to_string(BosonicRegime regime);

/// Two-mode Fock space truncated by total excitation number. Basis states
/// are ordered by total number N ascending, then n_a ascending, so each
/// number block occupies the contiguous index range [N(N+1)/2, (N+1)(N+2)/2).
class TwoModeFockSpace
{
public:
	explicit TwoModeFockSpace(int n_max);

	[[nodiscard]] int n_max() const noexcept { return n_max_; }
	[[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }

	[[nodiscard]] Eigen::Index index(int n_a, int n_b) const;
	[[nodiscard]] std::pair<int, int> occupation(Eigen::Index index) const;
	[[nodiscard]] int total_number(Eigen::Index index) const;

	/// Basis indices with total number below the cutoff, where raising
	/// operators do not leave the truncated space.
	[[nodiscard]] std::vector<Eigen::Index> interior() const;

	[[nodiscard]] Matrix annihilate_a() const;
	[[nodiscard]] Matrix annihilate_b() const;
	[[nodiscard]] Matrix number_a() const;
	[[nodiscard]] Matrix number_b() const;
	[[nodiscard]] Matrix total_number_operator() const;

private:
	int n_max_;
	Eigen::Index dim_;
	std::vector<std::pair<int, int>> states_;
};

[[nodiscard]] Matrix two_mode_bosonic_matrix(const TwoModeBosonicParams& params);
[[nodiscard]] HamiltonianModel two_mode_bosonic(const TwoModeBosonicParams& params);

/// ep_tol is relative to 4|g|.
[[nodiscard]] BosonicRegime classify_bosonic_regime(const TwoModeBosonicParams& params, double ep_tol = 1e-9);

/// Wraps a user evaluator; probes t in {0, 0.37, 1} at construction.
[[nodiscard]] HamiltonianModel custom_model(Eigen::Index dim, TimeFunction evaluator, std::string label);

} // namespace hermitize
