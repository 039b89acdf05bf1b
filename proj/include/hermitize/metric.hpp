#pragma once

#include <optional>
#include <vector>

#include "hermitize/flow.hpp"
#include "hermitize/models.hpp"

namespace hermitize
{

/// Sampled solution of dG/dt = i (G H - H† G) with per-node diagnostics.
struct MetricTrajectory
{
	OperatorTrajectory trajectory;
	std::vector<double> min_eigenvalues;
	/// Hermiticity residual of each sample before projection.
	std::vector<double> hermiticity_residuals;
	std::vector<double> condition_numbers;

	[[nodiscard]] const Matrix& operator[](std::size_t k) const { return trajectory[k]; }
	[[nodiscard]] std::size_t size() const noexcept { return trajectory.size(); }
	[[nodiscard]] const TimeGrid& grid() const noexcept { return trajectory.grid; }
};

/// i (G H - H† G)
[[nodiscard]] Matrix metric_rhs(const Matrix& g, const Matrix& h);

/// Integrates the metric flow from a Hermitian positive-definite G0.
/// Throws MetricDegeneracyError / HermiticityError for an invalid G0 and
/// MetricCollapseError (with the time stamp) when positivity is lost.
[[nodiscard]] MetricTrajectory evolve_metric(const HamiltonianModel& model, const Matrix& g0, const TimeGrid& grid,
                                             const FlowOptions& options = {},
                                             std::optional<StructuralTolerance> tolerance = std::nullopt);

/// True iff G2(t) = T(t)† G1(t) T(t) within `tol` at every node, where T
/// solves dT/dt = -i H T + i T H from T(0) = G1(0)^{-1/2} G2(0)^{1/2}.
[[nodiscard]] bool metric_gauge_related(const MetricTrajectory& g1, const MetricTrajectory& g2,
                                        const HamiltonianModel& model, double tol,
                                        const FlowOptions& options = {});

} // namespace hermitize
