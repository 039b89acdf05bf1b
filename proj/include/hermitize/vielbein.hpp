#pragma once

#include <vector>

#include "hermitize/flow.hpp"
#include "hermitize/metric.hpp"
#include "hermitize/models.hpp"

namespace hermitize
{

enum class GaugeLabel
{
	Cholesky,
	HermitianSqrt,
	TargetFlat,
	Custom
};

[[nodiscard]] std::string_view to_string(GaugeLabel label);

/// A sampled vielbein E(t) with G = E†E, together with its time derivative,
/// the model Hamiltonian and the induced Hamiltonian at every node.
struct VielbeinFrame
{
	OperatorTrajectory trajectory;
	std::vector<Matrix> rates;
	std::vector<Matrix> hamiltonians;
	std::vector<Matrix> induced;
	std::vector<double> hermiticity_residuals;
	GaugeLabel gauge = GaugeLabel::Custom;

	/// Pointwise frames take dE/dt from finite differences of the sampled
	/// factors; their induced Hamiltonian is only grid-accurate and
	/// `induced_error_bounds` carries a per-node estimate of that error.
	bool pointwise = false;
	std::vector<double> induced_error_bounds;

	/// max-norm gap between the gauge formula and the direct evaluation,
	/// filled by apply_gauge.
	std::vector<double> gauge_route_residuals;

	/// Induced Hamiltonian as a function of time, when it is known off the
	/// grid (co-evolved frames). Empty otherwise.
	TimeFunction induced_generator;

	[[nodiscard]] const TimeGrid& grid() const noexcept { return trajectory.grid; }
	[[nodiscard]] std::size_t size() const noexcept { return trajectory.size(); }
	[[nodiscard]] const Matrix& vielbein(std::size_t k) const { return trajectory[k]; }
	[[nodiscard]] Matrix metric(std::size_t k) const { return trajectory[k].adjoint() * trajectory[k]; }
};

/// E H E^-1 + i dE E^-1, evaluated with linear solves.
[[nodiscard]] Matrix induced_hamiltonian(const Matrix& e, const Matrix& de, const Matrix& h);

/// dE/dt = -i H_flat E + i E H
[[nodiscard]] Matrix coevolution_rate(const Matrix& target_flat, const Matrix& e, const Matrix& h);

/// Hermiticity threshold for induced Hamiltonians: 1e-8 (1 + |H_flat|).
[[nodiscard]] double induced_hermiticity_tolerance(const Matrix& induced);

/// Integrates E so that its induced Hamiltonian is `target_flat`.
[[nodiscard]] VielbeinFrame coevolve_vielbein(const HamiltonianModel& model, const TimeFunction& target_flat,
                                              const Matrix& e0, const TimeGrid& grid,
                                              const FlowOptions& options = {});

enum class PointwiseFactor
{
	Cholesky,
	HermitianSqrt
};

/// Factors every node of a metric trajectory independently. The rate dE/dt
/// comes from fourth-order finite differences (needs at least 5 nodes).
[[nodiscard]] VielbeinFrame factor_metric_pointwise(const MetricTrajectory& metric, const HamiltonianModel& model,
                                                    PointwiseFactor factor);

/// Unitary gauge flow dU/dt = -i H_L U + i U H_R from a unitary U(0).
struct GaugeGenerator
{
	TimeFunction h_left;
	TimeFunction h_right;
	Matrix u0;
};

[[nodiscard]] OperatorTrajectory gauge_flow(const GaugeGenerator& generator, const TimeGrid& grid,
                                            const FlowOptions& options = {}, double unitarity_tol = 1e-8);

/// E' = U E with H'_flat = H_L + U (H_flat - H_R) U^-1; the formula is
/// cross-checked against the direct evaluation from E' and dE'.
[[nodiscard]] VielbeinFrame apply_gauge(const VielbeinFrame& frame, const OperatorTrajectory& unitary,
                                        const GaugeGenerator& generator, double agreement_tol = 1e-7);

/// Gauge-transforms a co-evolved frame so its induced Hamiltonian becomes
/// `new_target`. Requires `frame.induced_generator`.
[[nodiscard]] VielbeinFrame retarget_gauge(const VielbeinFrame& frame, const TimeFunction& new_target,
                                           const TimeGrid& grid, const FlowOptions& options = {});

} // namespace hermitize
