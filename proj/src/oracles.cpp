#include "hermitize/oracles.hpp"

#include <cmath>
#include <optional>

#include "hermitize/errors.hpp"

namespace hermitize
{

namespace
{
void require_regime(const OracleParams& p, DampingRegime expected, double ep_tol = 1e-9)
{
	const DampingRegime actual = classify_regime({p.omega, p.gamma}, ep_tol);
	if(actual != expected)
	{
		throw ParameterError("closed form for the " + std::string(to_string(expected)) + " regime called with "
		                     + std::string(to_string(actual)) + " parameters");
	}
}

// scale(t) M† g M and its derivative
OracleSample sandwich(double scale, double scale_rate, const Matrix& m, const Matrix& dm, const Matrix& g)
{
	const Matrix core = m.adjoint() * g * m;
	const Matrix core_rate = dm.adjoint() * g * m + m.adjoint() * g * dm;
	return {scale * core, scale_rate * core + scale * core_rate};
}

// scale(t) h M and its derivative
OracleSample left_factor(double scale, double scale_rate, const Matrix& h, const Matrix& m, const Matrix& dm)
{
	return {scale * (h * m), scale_rate * (h * m) + scale * (h * dm)};
}

// columns as printed: M = [[f, (i gamma/2omega + lambda) f], [f*, (i gamma/2omega - lambda) f*]]
std::pair<Matrix, Matrix> underdamped_core(const OracleParams& p, double t)
{
	const double ratio = p.gamma / (2.0 * p.omega);
	const double lambda = std::sqrt(1.0 - ratio * ratio);
	const Complex f = std::exp(I * (lambda * p.omega * t / 2.0));
	const Complex fc = std::conj(f);
	const Complex rate = I * (lambda * p.omega / 2.0);

	Matrix m(2, 2);
	m << f, (I * ratio + lambda) * f, fc, (I * ratio - lambda) * fc;
	Matrix dm(2, 2);
	dm.row(0) = rate * m.row(0);
	dm.row(1) = -rate * m.row(1);
	return {m, dm};
}

std::pair<Matrix, Matrix> overdamped_core(const OracleParams& p, double t)
{
	const double ratio = p.gamma / (2.0 * p.omega);
	const double lambda = std::sqrt(ratio * ratio - 1.0);
	const double rate = lambda * p.omega / 2.0;
	const double fp = std::exp(rate * t);
	const double fm = std::exp(-rate * t);

	Matrix m(2, 2);
	m << fp, I * (ratio - lambda) * fp, fm, I * (ratio + lambda) * fm;
	Matrix dm(2, 2);
	dm.row(0) = rate * m.row(0);
	dm.row(1) = -rate * m.row(1);
	return {m, dm};
}

int ep_sign(const OracleParams& p)
{
	if(p.sign != 1 && p.sign != -1)
	{
		throw ParameterError("exceptional-point branch sign must be +1 or -1");
	}
	const int implied = p.gamma / p.omega > 0.0 ? 1 : -1;
	if(implied != p.sign)
	{
		throw ParameterError("exceptional-point branch sign does not match gamma = 2 sign omega");
	}
	return p.sign;
}

// N = [[1, s i], [2 omega t, i (2 s omega t - 4)]]
std::pair<Matrix, Matrix> ep_core(const OracleParams& p, double t, int s)
{
	const double w = p.omega;
	Matrix n(2, 2);
	n << 1.0, I * static_cast<double>(s), 2.0 * w * t, I * (2.0 * s * w * t - 4.0);
	Matrix dn(2, 2);
	dn << 0.0, 0.0, 2.0 * w, I * (2.0 * s * w);
	return {n, dn};
}

double factorial(int n)
{
	return std::tgamma(static_cast<double>(n) + 1.0);
}
} // namespace

Matrix oracle_metric_constant(const OracleParams& p)
{
	require_operator(p.h_const, "h_const");
	if(p.h_const.rows() != 2)
	{
		throw ParameterError("h_const must be 2x2");
	}
	if(!(condition_estimate(p.h_const) < kSingularCondition))
	{
		throw ParameterError("h_const must be invertible");
	}
	const Matrix from_h = p.h_const.adjoint() * p.h_const;
	if(!p.g_const)
	{
		return from_h;
	}
	const Matrix& g = *p.g_const;
	require_operator(g, "g_const");
	if(g.rows() != 2)
	{
		throw ParameterError("g_const must be 2x2");
	}
	(void)cholesky_upper(g);
	if(max_norm(g - from_h) > 1e-12 * std::max(1.0, max_norm(g)))
	{
		throw ParameterError("g_const is inconsistent with h_const (expected g = h†h)");
	}
	return g;
}

OracleSample metric_closed_form_underdamped(const OracleParams& p, double t)
{
	require_regime(p, DampingRegime::Underdamped);
	const auto [m, dm] = underdamped_core(p, t);
	const double scale = std::exp(p.gamma * t / 2.0);
	return sandwich(scale, p.gamma / 2.0 * scale, m, dm, oracle_metric_constant(p));
}

OracleSample metric_closed_form_overdamped(const OracleParams& p, double t)
{
	require_regime(p, DampingRegime::Overdamped);
	const auto [m, dm] = overdamped_core(p, t);
	const double scale = std::exp(p.gamma * t / 2.0);
	return sandwich(scale, p.gamma / 2.0 * scale, m, dm, oracle_metric_constant(p));
}

OracleSample metric_closed_form_ep(const OracleParams& p, double t)
{
	require_regime(p, DampingRegime::ExceptionalPoint);
	const int s = ep_sign(p);
	const auto [n, dn] = ep_core(p, t, s);
	const double scale = std::exp(s * p.omega * t);
	return sandwich(scale, s * p.omega * scale, n, dn, oracle_metric_constant(p));
}

OracleSample vielbein_closed_form_underdamped(const OracleParams& p, double t)
{
	require_regime(p, DampingRegime::Underdamped);
	(void)oracle_metric_constant(p);
	const auto [m, dm] = underdamped_core(p, t);
	const double scale = std::exp(p.gamma * t / 4.0);
	return left_factor(scale, p.gamma / 4.0 * scale, p.h_const, m, dm);
}

OracleSample vielbein_closed_form_overdamped(const OracleParams& p, double t)
{
	require_regime(p, DampingRegime::Overdamped);
	(void)oracle_metric_constant(p);
	const auto [m, dm] = overdamped_core(p, t);
	const double scale = std::exp(p.gamma * t / 4.0);
	return left_factor(scale, p.gamma / 4.0 * scale, p.h_const, m, dm);
}

OracleSample vielbein_closed_form_ep(const OracleParams& p, double t)
{
	require_regime(p, DampingRegime::ExceptionalPoint);
	(void)oracle_metric_constant(p);
	const int s = ep_sign(p);
	const auto [n, dn] = ep_core(p, t, s);
	const Matrix exponent = (static_cast<double>(s) * pauli::identity() - I * pauli::x()) * (p.omega / 2.0);
	const Matrix prefactor = matrix_exponential(exponent * t);
	const Matrix hn = p.h_const * n;
	return {prefactor * hn, exponent * prefactor * hn + prefactor * (p.h_const * dn)};
}

OracleSample metric_closed_form(const OracleParams& p, double t, double ep_tol)
{
	switch(classify_regime({p.omega, p.gamma}, ep_tol))
	{
	case DampingRegime::Underdamped:
		return metric_closed_form_underdamped(p, t);
	case DampingRegime::Overdamped:
		return metric_closed_form_overdamped(p, t);
	case DampingRegime::ExceptionalPoint:
		break;
	}
	OracleParams at_ep = p;
	at_ep.gamma = 2.0 * p.omega * (p.gamma / p.omega > 0.0 ? 1.0 : -1.0);
	at_ep.sign = p.gamma / p.omega > 0.0 ? 1 : -1;
	return metric_closed_form_ep(at_ep, t);
}

OracleSample vielbein_closed_form(const OracleParams& p, double t, double ep_tol)
{
	switch(classify_regime({p.omega, p.gamma}, ep_tol))
	{
	case DampingRegime::Underdamped:
		return vielbein_closed_form_underdamped(p, t);
	case DampingRegime::Overdamped:
		return vielbein_closed_form_overdamped(p, t);
	case DampingRegime::ExceptionalPoint:
		break;
	}
	OracleParams at_ep = p;
	at_ep.gamma = 2.0 * p.omega * (p.gamma / p.omega > 0.0 ? 1.0 : -1.0);
	at_ep.sign = p.gamma / p.omega > 0.0 ? 1 : -1;
	return vielbein_closed_form_ep(at_ep, t);
}

Matrix oracle_induced_hamiltonian(const OracleParams& p, double ep_tol)
{
	if(classify_regime({p.omega, p.gamma}, ep_tol) == DampingRegime::ExceptionalPoint)
	{
		return p.omega / 2.0 * pauli::x();
	}
	return Matrix::Zero(2, 2);
}

VielbeinFrame oracle_frame(const OracleParams& p, const TimeGrid& grid, double ep_tol)
{
	const HamiltonianModel model = two_level_loss({p.omega, p.gamma});
	const Matrix flat = oracle_induced_hamiltonian(p, ep_tol);

	VielbeinFrame frame;
	frame.gauge = GaugeLabel::Custom;
	frame.trajectory = {grid, {}, TrajectoryRole::Vielbein};
	frame.induced_generator = [flat](double) { return flat; };
	for(std::size_t k = 0; k < grid.nodes(); ++k)
	{
		const double t = grid.time(k);
		OracleSample e = vielbein_closed_form(p, t, ep_tol);
		Matrix h = model(t);
		Matrix induced = induced_hamiltonian(e.value, e.rate, h);
		frame.hermiticity_residuals.push_back(hermiticity_residual(induced));
		frame.trajectory.samples.push_back(std::move(e.value));
		frame.rates.push_back(std::move(e.rate));
		frame.hamiltonians.push_back(std::move(h));
		frame.induced.push_back(std::move(induced));
	}
	return frame;
}

// ---- bosonic ----------------------------------------------------------

BosonicNormalModes bosonic_normal_modes(const TwoModeBosonicParams& p, double ep_tol)
{
	if(classify_bosonic_regime(p, ep_tol) != BosonicRegime::NonEP)
	{
		throw ParameterError("bosonic_normal_modes: parameters are at the exceptional point");
	}
	const TwoModeFockSpace space(p.n_max);
	const Matrix a = space.annihilate_a();
	const Matrix b = space.annihilate_b();
	const double delta = p.gamma_a - p.gamma_b;
	const Complex zeta = std::sqrt(Complex(16.0 * p.g * p.g - delta * delta, 0.0));

	BosonicNormalModes modes;
	modes.zeta = zeta;
	modes.h_plus = -I * ((p.gamma_a + p.gamma_b) / 4.0) + zeta / 4.0;
	modes.h_minus = -I * ((p.gamma_a + p.gamma_b) / 4.0) - zeta / 4.0;
	modes.c_plus_c = a.adjoint() + (zeta + I * delta) / (4.0 * p.g) * b.adjoint();
	modes.c_minus_c = a.adjoint() - (zeta - I * delta) / (4.0 * p.g) * b.adjoint();
	modes.c_plus_a = ((zeta - I * delta) / 2.0 * a + 2.0 * p.g * b) / zeta;
	modes.c_minus_a = ((zeta + I * delta) / 2.0 * a - 2.0 * p.g * b) / zeta;
	return modes;
}

BosonicEpModes bosonic_ep_modes(const TwoModeBosonicParams& p, double ep_tol)
{
	if(classify_bosonic_regime(p, ep_tol) != BosonicRegime::EP)
	{
		throw ParameterError("bosonic_ep_modes: parameters are not at the exceptional point");
	}
	const TwoModeFockSpace space(p.n_max);
	const Matrix a = space.annihilate_a();
	const Matrix b = space.annihilate_b();
	const int chi = (p.gamma_a - p.gamma_b) / (4.0 * p.g) > 0.0 ? 1 : -1;
	const double x = static_cast<double>(chi);
	const double r = 1.0 / std::sqrt(2.0);

	BosonicEpModes modes;
	modes.chi = chi;
	modes.delta_gamma = (p.gamma_a + p.gamma_b) / 4.0;
	modes.d_plus_c = r * (a.adjoint() + I * x * b.adjoint());
	modes.d_minus_c = -x * r * (a.adjoint() - I * x * b.adjoint());
	modes.d_plus_a = r * (a - I * x * b);
	modes.d_minus_a = -x * r * (a + I * x * b);
	return modes;
}

namespace
{
Complex coefficient(const ModeCoefficients& c, int n_plus, int n_minus)
{
	if(!c)
	{
		return 1.0;
	}
	const Complex value = c(n_plus, n_minus);
	if(value == 0.0 || !std::isfinite(value.real()) || !std::isfinite(value.imag()))
	{
		throw ParameterError("vielbein coefficients must be finite and nonzero");
	}
	return value;
}

// (a†)^{n-} (b†)^{n+} |0> as a column
Vector creation_ket(const TwoModeFockSpace& space, int n_plus, int n_minus)
{
	Vector ket = Vector::Zero(space.dim());
	ket(space.index(n_minus, n_plus)) = std::sqrt(factorial(n_plus) * factorial(n_minus));
	return ket;
}

Matrix power(const Matrix& m, int n)
{
	Matrix out = Matrix::Identity(m.rows(), m.cols());
	for(int k = 0; k < n; ++k)
	{
		out = out * m;
	}
	return out;
}

struct BosonicTerm
{
	int n_plus;
	int n_minus;
	Complex weight;
	Complex weight_rate;
	Eigen::RowVectorXcd row;
	Eigen::RowVectorXcd row_rate;
};

// Terms of the vielbein sum: weight * ket * <0| X  (X a product of annihilators).
std::vector<BosonicTerm> bosonic_terms(const TwoModeBosonicParams& p, double t, const ModeCoefficients& c,
                                       double ep_tol)
{
	const TwoModeFockSpace space(p.n_max);
	std::vector<BosonicTerm> terms;
	const bool at_ep = classify_bosonic_regime(p, ep_tol) == BosonicRegime::EP;
	const std::optional<BosonicNormalModes> normal =
		at_ep ? std::nullopt : std::optional<BosonicNormalModes>(bosonic_normal_modes(p, ep_tol));
	const std::optional<BosonicEpModes> jordan =
		at_ep ? std::optional<BosonicEpModes>(bosonic_ep_modes(p, ep_tol)) : std::nullopt;

	for(int total = 0; total <= p.n_max; ++total)
	{
		for(int n_minus = 0; n_minus <= total; ++n_minus)
		{
			const int n_plus = total - n_minus;
			const Complex h = coefficient(c, n_plus, n_minus);
			const double norm = std::pow(factorial(n_plus) * factorial(n_minus), 1.5);
			BosonicTerm term{n_plus, n_minus, 0.0, 0.0, {}, {}};
			if(!at_ep)
			{
				const BosonicNormalModes& m = *normal;
				const Complex exponent = I * (static_cast<double>(n_plus) * m.h_plus + static_cast<double>(n_minus) * m.h_minus);
				term.weight = h / norm * std::exp(exponent * t);
				term.weight_rate = exponent * term.weight;
				const Matrix x = power(m.c_plus_a, n_plus) * power(m.c_minus_a, n_minus);
				term.row = x.row(0);
				term.row_rate = Eigen::RowVectorXcd::Zero(space.dim());
			}
			else
			{
				const BosonicEpModes& m = *jordan;
				const double exponent = m.delta_gamma * static_cast<double>(total);
				term.weight = h / norm * std::exp(exponent * t);
				term.weight_rate = exponent * term.weight;
				const Matrix y = m.d_plus_a - 2.0 * p.g * t * m.d_minus_a;
				const Matrix tail = power(m.d_minus_a, n_minus);
				term.row = (power(y, n_plus) * tail).row(0);
				if(n_plus > 0)
				{
					const Matrix dy = -2.0 * p.g * m.d_minus_a;
					term.row_rate = (static_cast<double>(n_plus) * power(y, n_plus - 1) * dy * tail).row(0);
				}
				else
				{
					term.row_rate = Eigen::RowVectorXcd::Zero(space.dim());
				}
			}
			terms.push_back(std::move(term));
		}
	}
	return terms;
}
} // namespace

OracleSample bosonic_vielbein_closed_form(const TwoModeBosonicParams& p, double t, const ModeCoefficients& c,
                                          double ep_tol)
{
	const TwoModeFockSpace space(p.n_max);
	OracleSample out{Matrix::Zero(space.dim(), space.dim()), Matrix::Zero(space.dim(), space.dim())};
	for(const BosonicTerm& term : bosonic_terms(p, t, c, ep_tol))
	{
		const Vector ket = creation_ket(space, term.n_plus, term.n_minus);
		out.value += term.weight * ket * term.row;
		out.rate += term.weight_rate * ket * term.row + term.weight * ket * term.row_rate;
	}
	return out;
}

VielbeinFrame bosonic_oracle_frame(const TwoModeBosonicParams& p, const TimeGrid& grid, double ep_tol)
{
	const Matrix h = two_mode_bosonic_matrix(p);
	const Eigen::Index n = h.rows();

	VielbeinFrame frame;
	frame.gauge = GaugeLabel::Custom;
	frame.trajectory = {grid, {}, TrajectoryRole::Vielbein};
	frame.induced_generator = [n](double) { return Matrix(Matrix::Zero(n, n)); };
	for(std::size_t k = 0; k < grid.nodes(); ++k)
	{
		OracleSample e = bosonic_vielbein_closed_form(p, grid.time(k), {}, ep_tol);
		Matrix induced = induced_hamiltonian(e.value, e.rate, h);
		frame.hermiticity_residuals.push_back(hermiticity_residual(induced));
		frame.trajectory.samples.push_back(std::move(e.value));
		frame.rates.push_back(std::move(e.rate));
		frame.hamiltonians.push_back(h);
		frame.induced.push_back(std::move(induced));
	}
	return frame;
}

Matrix bosonic_metric_closed_form(const TwoModeBosonicParams& p, double t, const ModeCoefficients& c, double ep_tol)
{
	const TwoModeFockSpace space(p.n_max);
	const bool at_ep = classify_bosonic_regime(p, ep_tol) == BosonicRegime::EP;
	Matrix g = Matrix::Zero(space.dim(), space.dim());
	for(const BosonicTerm& term : bosonic_terms(p, t, c, ep_tol))
	{
		const double g_n = std::norm(coefficient(c, term.n_plus, term.n_minus));
		const double norm = std::pow(factorial(term.n_plus) * factorial(term.n_minus), 2.0);
		double decay = 0.0;
		if(at_ep)
		{
			decay = 2.0 * bosonic_ep_modes(p, ep_tol).delta_gamma * (term.n_plus + term.n_minus) * t;
		}
		else
		{
			const BosonicNormalModes m = bosonic_normal_modes(p, ep_tol);
			decay = -2.0 * t * (term.n_plus * m.h_plus.imag() + term.n_minus * m.h_minus.imag());
		}
		g += g_n / norm * std::exp(decay) * term.row.adjoint() * term.row;
	}
	return g;
}

OracleSample bosonic_gauge_closed_form(const TwoModeBosonicParams& p, double t, BeamSplitterPhase phase)
{
	const TwoModeFockSpace space(p.n_max);
	const Matrix ad = space.annihilate_a().adjoint();
	const Matrix bd = space.annihilate_b().adjoint();
	const Matrix plus = ad + bd;
	const Matrix minus = ad - bd;
	const double direction = phase == BeamSplitterPhase::Hopping ? -1.0 : 1.0;

	Vector vacuum = Vector::Zero(space.dim());
	vacuum(0) = 1.0;
	OracleSample out{Matrix::Zero(space.dim(), space.dim()), Matrix::Zero(space.dim(), space.dim())};
	for(int total = 0; total <= p.n_max; ++total)
	{
		for(int n = 0; n <= total; ++n)
		{
			const int m = total - n;
			const double rate = direction * p.g * static_cast<double>(m - n);
			const Complex weight = std::exp(I * (rate * t)) / (std::pow(std::sqrt(2.0), total) * factorial(m) * factorial(n));
			const Vector ket = power(plus, m) * power(minus, n) * vacuum;
			// <0| a^m b^n = sqrt(m! n!) <m, n|
			const Eigen::Index col = space.index(m, n);
			const Complex amp = weight * std::sqrt(factorial(m) * factorial(n));
			out.value.col(col) += amp * ket;
			out.rate.col(col) += I * rate * amp * ket;
		}
	}
	return out;
}

GaugeGenerator bosonic_gauge_generator(const TwoModeBosonicParams& p, BeamSplitterPhase phase)
{
	const TwoModeFockSpace space(p.n_max);
	const double direction = phase == BeamSplitterPhase::Hopping ? -1.0 : 1.0;
	const Matrix right = direction * p.g * (space.number_a() - space.number_b());
	const Eigen::Index n = space.dim();
	return {[n](double) { return Matrix(Matrix::Zero(n, n)); }, [right](double) { return right; },
	        bosonic_gauge_closed_form(p, 0.0, phase).value};
}

Matrix bosonic_hopping(const TwoModeBosonicParams& p)
{
	const TwoModeFockSpace space(p.n_max);
	// a†b conserves the total number, so it is exact on the truncated space
	const Matrix hop = space.annihilate_a().adjoint() * space.annihilate_b();
	return p.g * (hop + hop.adjoint());
}

double interior_block_residual(const TwoModeFockSpace& space, const Matrix& a)
{
	const std::vector<Eigen::Index> keep = space.interior();
	double worst = 0.0;
	for(const Eigen::Index i : keep)
	{
		for(const Eigen::Index j : keep)
		{
			worst = std::max(worst, std::abs(a(i, j)));
		}
	}
	return worst;
}

std::vector<NamedResidual> bosonic_commutator_residuals(const TwoModeBosonicParams& p, double ep_tol)
{
	const TwoModeFockSpace space(p.n_max);
	const Matrix h = two_mode_bosonic_matrix(p);
	const Matrix one = Matrix::Identity(space.dim(), space.dim());
	const Matrix zero = Matrix::Zero(space.dim(), space.dim());
	auto comm = [](const Matrix& x, const Matrix& y) { return Matrix(x * y - y * x); };
	auto check = [&](std::string name, const Matrix& lhs, const Matrix& rhs) {
		return NamedResidual{std::move(name), interior_block_residual(space, lhs - rhs)};
	};

	std::vector<NamedResidual> out;
	if(classify_bosonic_regime(p, ep_tol) == BosonicRegime::NonEP)
	{
		const BosonicNormalModes m = bosonic_normal_modes(p, ep_tol);
		out.push_back(check("[c+a, c+c] = 1", comm(m.c_plus_a, m.c_plus_c), one));
		out.push_back(check("[c-a, c-c] = 1", comm(m.c_minus_a, m.c_minus_c), one));
		out.push_back(check("[c+a, c-c] = 0", comm(m.c_plus_a, m.c_minus_c), zero));
		out.push_back(check("[c-a, c+c] = 0", comm(m.c_minus_a, m.c_plus_c), zero));
		out.push_back(check("[H, c+c] = h+ c+c", comm(h, m.c_plus_c), m.h_plus * m.c_plus_c));
		out.push_back(check("[H, c-c] = h- c-c", comm(h, m.c_minus_c), m.h_minus * m.c_minus_c));
		out.push_back(check("[H, c+a] = -h+ c+a", comm(h, m.c_plus_a), -m.h_plus * m.c_plus_a));
		out.push_back(check("[H, c-a] = -h- c-a", comm(h, m.c_minus_a), -m.h_minus * m.c_minus_a));
	}
	else
	{
		const BosonicEpModes m = bosonic_ep_modes(p, ep_tol);
		const Complex dg = I * m.delta_gamma;
		const Complex hop = 2.0 * I * p.g;
		out.push_back(check("[d+a, d+c] = 1", comm(m.d_plus_a, m.d_plus_c), one));
		out.push_back(check("[d-a, d-c] = 1", comm(m.d_minus_a, m.d_minus_c), one));
		out.push_back(check("[d+a, d-c] = 0", comm(m.d_plus_a, m.d_minus_c), zero));
		out.push_back(check("[d-a, d+c] = 0", comm(m.d_minus_a, m.d_plus_c), zero));
		out.push_back(check("[H, d+c] = -i dg d+c", comm(h, m.d_plus_c), -dg * m.d_plus_c));
		out.push_back(check("[H, d-c] = -i dg d-c + 2ig d+c", comm(h, m.d_minus_c),
		                    -dg * m.d_minus_c + hop * m.d_plus_c));
		out.push_back(check("[H, d+a] = i dg d+a - 2ig d-a", comm(h, m.d_plus_a),
		                    dg * m.d_plus_a - hop * m.d_minus_a));
		out.push_back(check("[H, d-a] = i dg d-a", comm(h, m.d_minus_a), dg * m.d_minus_a));
	}
	return out;
}

} // namespace hermitize
