#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hermitize/models.hpp"
#include "hermitize/vielbein.hpp"

namespace hermitize
{

/// Closed-form metrics and vielbeins of the two-level loss model. The
/// constant matrices h and g enter as E = (...) h M(t) and G = (...) M† g M;
/// g defaults to h†h.
struct OracleParams
{
	double omega = 1.0;
	double gamma = 0.0;
	Matrix h_const = Matrix::Identity(2, 2);
	std::optional<Matrix> g_const;
	/// Exceptional-point branch: gamma = 2 sign omega.
	int sign = 1;
};

/// Value and analytic time derivative.
struct OracleSample
{
	Matrix value;
	Matrix rate;
};

/// g_const if given (checked against h†h), else h†h. Validates positivity.
[[nodiscard]] Matrix oracle_metric_constant(const OracleParams& p);

[[nodiscard]] OracleSample metric_closed_form_underdamped(const OracleParams& p, double t);
[[nodiscard]] OracleSample metric_closed_form_overdamped(const OracleParams& p, double t);
[[nodiscard]] OracleSample metric_closed_form_ep(const OracleParams& p, double t);

[[nodiscard]] OracleSample vielbein_closed_form_underdamped(const OracleParams& p, double t);
[[nodiscard]] OracleSample vielbein_closed_form_overdamped(const OracleParams& p, double t);
[[nodiscard]] OracleSample vielbein_closed_form_ep(const OracleParams& p, double t);

/// Dispatch on the damping regime of (omega, gamma).
[[nodiscard]] OracleSample metric_closed_form(const OracleParams& p, double t, double ep_tol = 1e-9);
[[nodiscard]] OracleSample vielbein_closed_form(const OracleParams& p, double t, double ep_tol = 1e-9);

/// Induced Hamiltonian of the closed-form vielbein: 0 off the exceptional
/// point, omega sigma_x / 2 on it.
[[nodiscard]] Matrix oracle_induced_hamiltonian(const OracleParams& p, double ep_tol = 1e-9);

/// Sampled closed form on a grid, with induced Hamiltonians evaluated from
/// the analytic derivative.
[[nodiscard]] VielbeinFrame oracle_frame(const OracleParams& p, const TimeGrid& grid, double ep_tol = 1e-9);

// ---- two-mode bosonic model --------------------------------------------

/// Coefficients h_{n+ n-} of the vielbein sums; default 1.
using ModeCoefficients = std::function<Complex(int n_plus, int n_minus)>;

struct BosonicNormalModes
{
	Complex zeta;
	Complex h_plus;
	Complex h_minus;
	Matrix c_plus_c;
	Matrix c_minus_c;
	Matrix c_plus_a;
	Matrix c_minus_a;
};

/// Normal modes away from the exceptional point; throws ParameterError at it.
[[nodiscard]] BosonicNormalModes bosonic_normal_modes(const TwoModeBosonicParams& p, double ep_tol = 1e-9);

struct BosonicEpModes
{
	int chi;
	double delta_gamma;
	Matrix d_plus_c;
	Matrix d_minus_c;
	Matrix d_plus_a;
	Matrix d_minus_a;
};

/// Jordan-chain modes at gamma_a - gamma_b = 4 chi g.
[[nodiscard]] BosonicEpModes bosonic_ep_modes(const TwoModeBosonicParams& p, double ep_tol = 1e-9);

/// Vielbein with induced Hamiltonian 0 (either regime), exact on the
/// truncated space since it is block diagonal in the total number.
[[nodiscard]] OracleSample bosonic_vielbein_closed_form(const TwoModeBosonicParams& p, double t,
                                                        const ModeCoefficients& coefficients = {},
                                                        double ep_tol = 1e-9);

/// Sampled bosonic closed form on a grid (induced Hamiltonian 0).
[[nodiscard]] VielbeinFrame bosonic_oracle_frame(const TwoModeBosonicParams& p, const TimeGrid& grid,
                                                 double ep_tol = 1e-9);

/// G = E†E written as the metric sum with g_{n+ n-} = |h_{n+ n-}|^2.
[[nodiscard]] Matrix bosonic_metric_closed_form(const TwoModeBosonicParams& p, double t,
                                                const ModeCoefficients& coefficients = {}, double ep_tol = 1e-9);

/// Phase convention of the beam-splitter gauge sum exp(+-i t g (m - n)).
/// `Hopping` yields +g (a†b + a b†); `Reversed` yields -g (a†b + a b†).
enum class BeamSplitterPhase
{
	Hopping,
	Reversed
};

[[nodiscard]] OracleSample bosonic_gauge_closed_form(const TwoModeBosonicParams& p, double t,
                                                     BeamSplitterPhase phase = BeamSplitterPhase::Hopping);

/// H_L = 0, H_R = -+g (n_a - n_b) and U(0) from the closed form, generating
/// the gauge above.
[[nodiscard]] GaugeGenerator bosonic_gauge_generator(const TwoModeBosonicParams& p,
                                                     BeamSplitterPhase phase = BeamSplitterPhase::Hopping);

/// g (a†b + a b†)
[[nodiscard]] Matrix bosonic_hopping(const TwoModeBosonicParams& p);

/// max |A_ij| over basis states with total number below the cutoff.
[[nodiscard]] double interior_block_residual(const TwoModeFockSpace& space, const Matrix& a);

struct NamedResidual
{
	std::string relation;
	double residual;
};

/// Residuals of the mode commutation relations on interior blocks.
[[nodiscard]] std::vector<NamedResidual> bosonic_commutator_residuals(const TwoModeBosonicParams& p,
                                                                      double ep_tol = 1e-9);

} // namespace hermitize
