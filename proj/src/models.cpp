#include "hermitize/models.hpp"

#include <cmath>
#include <string>

#include "hermitize/errors.hpp"

namespace hermitize
{

HamiltonianModel::HamiltonianModel(Eigen::Index dim, TimeFunction evaluate, std::string label,
                                   bool time_independent)
	: dim_{dim}, evaluate_{std::move(evaluate)}, label_{std::move(label)}, time_independent_{time_independent}
{
	if(dim_ < 1)
	{
		throw PreconditionError("HamiltonianModel: dimension must be >= 1");
	}
	if(!evaluate_)
	{
		throw PreconditionError("HamiltonianModel: empty evaluator");
	}
}

Matrix HamiltonianModel::operator()(double t) const
{
	Matrix h = evaluate_(t);
	if(h.rows() != dim_ || h.cols() != dim_)
	{
		throw PreconditionError("model '" + label_ + "' returned a " + std::to_string(h.rows()) + "x"
		                        + std::to_string(h.cols()) + " matrix, expected dim " + std::to_string(dim_));
	}
	if(!all_finite(h))
	{
		throw PreconditionError("model '" + label_ + "' returned non-finite entries at t = " + hermitize::format_number(t));
	}
	return h;
}

std::string_view to_string(DampingRegime regime)
{
	switch(regime)
	{
	case DampingRegime::Underdamped:
		return "Underdamped";
	case DampingRegime::Overdamped:
		return "Overdamped";
	case DampingRegime::ExceptionalPoint:
		return "ExceptionalPoint";
	}
	return "?";
}

std::string_view to_string(BosonicRegime regime)
{
	return regime == BosonicRegime::EP ? "EP" : "NonEP";
}

namespace
{
void require_nonzero_omega(const TwoLevelLossParams& p)
{
	if(p.omega == 0.0 || !std::isfinite(p.omega) || !std::isfinite(p.gamma))
	{
		throw ParameterError("two_level_loss: omega must be finite and nonzero, gamma finite");
	}
}
} // namespace

HamiltonianModel two_level_loss(const TwoLevelLossParams& params)
{
	require_nonzero_omega(params);
	Matrix h(2, 2);
	h << -I * (params.gamma / 2.0), params.omega / 2.0, params.omega / 2.0, 0.0;
	return HamiltonianModel(
		2, [h](double) { return h; }, "two_level_loss", true);
}

DampingRegime classify_regime(const TwoLevelLossParams& params, double ep_tol)
{
	require_nonzero_omega(params);
	const double edge = 2.0 * std::abs(params.omega);
	const double gap = std::abs(params.gamma) - edge;
	if(std::abs(gap) <= ep_tol * edge)
	{
		return DampingRegime::ExceptionalPoint;
	}
	return gap < 0.0 ? DampingRegime::Underdamped : DampingRegime::Overdamped;
}

TwoModeFockSpace::TwoModeFockSpace(int n_max)
	: n_max_{n_max}, dim_{static_cast<Eigen::Index>(n_max + 1) * (n_max + 2) / 2}
{
	if(n_max < 1)
	{
		throw ParameterError("TwoModeFockSpace: n_max must be >= 1");
	}
	states_.reserve(static_cast<std::size_t>(dim_));
	for(int total = 0; total <= n_max; ++total)
	{
		for(int n_a = 0; n_a <= total; ++n_a)
		{
			states_.emplace_back(n_a, total - n_a);
		}
	}
}

Eigen::Index TwoModeFockSpace::index(int n_a, int n_b) const
{
	const int total = n_a + n_b;
	if(n_a < 0 || n_b < 0 || total > n_max_)
	{
		throw PreconditionError("TwoModeFockSpace: state outside the truncated space");
	}
	return static_cast<Eigen::Index>(total) * (total + 1) / 2 + n_a;
}

std::pair<int, int> TwoModeFockSpace::occupation(Eigen::Index index) const
{
	return states_.at(static_cast<std::size_t>(index));
}

int TwoModeFockSpace::total_number(Eigen::Index index) const
{
	const auto [n_a, n_b] = occupation(index);
	return n_a + n_b;
}

std::vector<Eigen::Index> TwoModeFockSpace::interior() const
{
	std::vector<Eigen::Index> kept;
	for(Eigen::Index k = 0; k < dim_; ++k)
	{
		if(total_number(k) < n_max_)
		{
			kept.push_back(k);
		}
	}
	return kept;
}

Matrix TwoModeFockSpace::annihilate_a() const
{
	Matrix a = Matrix::Zero(dim_, dim_);
	for(Eigen::Index k = 0; k < dim_; ++k)
	{
		const auto [n_a, n_b] = occupation(k);
		if(n_a > 0)
		{
			a(index(n_a - 1, n_b), k) = std::sqrt(static_cast<double>(n_a));
		}
	}
	return a;
}

Matrix TwoModeFockSpace::annihilate_b() const
{
	Matrix b = Matrix::Zero(dim_, dim_);
	for(Eigen::Index k = 0; k < dim_; ++k)
	{
		const auto [n_a, n_b] = occupation(k);
		if(n_b > 0)
		{
			b(index(n_a, n_b - 1), k) = std::sqrt(static_cast<double>(n_b));
		}
	}
	return b;
}

Matrix TwoModeFockSpace::number_a() const
{
	Matrix n = Matrix::Zero(dim_, dim_);
	for(Eigen::Index k = 0; k < dim_; ++k)
	{
		n(k, k) = occupation(k).first;
	}
	return n;
}

Matrix TwoModeFockSpace::number_b() const
{
	Matrix n = Matrix::Zero(dim_, dim_);
	for(Eigen::Index k = 0; k < dim_; ++k)
	{
		n(k, k) = occupation(k).second;
	}
	return n;
}

Matrix TwoModeFockSpace::total_number_operator() const
{
	return number_a() + number_b();
}

Matrix two_mode_bosonic_matrix(const TwoModeBosonicParams& params)
{
	const TwoModeFockSpace space(params.n_max);
	const Eigen::Index dim = space.dim();
	Matrix h = Matrix::Zero(dim, dim);
	for(Eigen::Index k = 0; k < dim; ++k)
	{
		const auto [n_a, n_b] = space.occupation(k);
		h(k, k) = -I * (params.gamma_a / 2.0 * n_a + params.gamma_b / 2.0 * n_b);
		// g a†b |n_a, n_b> = g sqrt((n_a + 1) n_b) |n_a + 1, n_b - 1>
		if(n_b > 0)
		{
			const Eigen::Index to = space.index(n_a + 1, n_b - 1);
			const double amp = params.g * std::sqrt(static_cast<double>((n_a + 1) * n_b));
			h(to, k) += amp;
			h(k, to) += amp;
		}
	}
	return h;
}

HamiltonianModel two_mode_bosonic(const TwoModeBosonicParams& params)
{
	if(!std::isfinite(params.gamma_a) || !std::isfinite(params.gamma_b) || !std::isfinite(params.g))
	{
		throw ParameterError("two_mode_bosonic: parameters must be finite");
	}
	Matrix h = two_mode_bosonic_matrix(params);
	const Eigen::Index dim = h.rows();
	return HamiltonianModel(
		dim, [h = std::move(h)](double) { return h; }, "two_mode_bosonic", true);
}

BosonicRegime classify_bosonic_regime(const TwoModeBosonicParams& params, double ep_tol)
{
	if(params.g == 0.0)
	{
		throw ParameterError("classify_bosonic_regime: g must be nonzero");
	}
	const double edge = 4.0 * std::abs(params.g);
	const double gap = std::abs(params.gamma_a - params.gamma_b) - edge;
	return std::abs(gap) <= ep_tol * edge ? BosonicRegime::EP : BosonicRegime::NonEP;
}

HamiltonianModel custom_model(Eigen::Index dim, TimeFunction evaluator, std::string label)
{
	HamiltonianModel model(dim, std::move(evaluator), std::move(label), false);
	for(const double t : {0.0, 0.37, 1.0})
	{
		(void)model(t);
	}
	return model;
}

} // namespace hermitize
