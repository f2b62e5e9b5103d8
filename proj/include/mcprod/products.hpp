#pragma once

// Maurer-Cartan higher products, Massey products found by solving a
// defining system window by window, and the characteristic map of a
// Chevalley-Eilenberg cochain.

#include "cochain.hpp"

#include <cstdlib>
#include <string>

namespace mcprod {

struct MCProduct {
	CohomologyClass cls;
	TensorElement witness_lift;
	Element curvature; // A-component of F(lift) along the center
};

inline TensorElement lift_system(const MCProductData& lambda, const TensorElement& sigma)
{
	return map_lie(sigma, lambda.section);
}

inline int product_degree(const MCProductData& lambda)
{
	return 2 - lambda.q;
}

/// Checks that sigma is a defining system: degree one, in A+ ⊗ L and MC.
inline void require_defining_system(const TensorAlgebra& TL, const TensorElement& sigma)
{
	if (!TL.has_degree(sigma, 1))
		throw InputError("defining system must have total degree 1");
	if (!TL.in_positive_part(sigma))
		throw InputError("defining system must lie in A+ ⊗ L");
	if (!TL.is_mc(sigma))
		throw MathError("not a defining system: curvature is nonzero (" + TL.format(TL.curvature(sigma)) + ")");
}

inline MCProduct mc_product(const FreeCDGA& A, const MCProductData& lambda, const TensorElement& sigma)
{
	int k = product_degree(lambda);
	if (k > A.max_cohomology_degree())
		throw InputError("product degree " + std::to_string(k) + " exceeds the trustworthy range 0.." +
		                 std::to_string(A.max_cohomology_degree()) + "; raise the truncation");
	TensorAlgebra TL(A, lambda.quotient);
	require_defining_system(TL, sigma);
	TensorAlgebra TLt(A, lambda.total);
	auto lift = lift_system(lambda, sigma);
	auto F = TLt.curvature(lift);
	for (const auto& [l, a] : F.terms())
		if (l != lambda.center)
			throw AssertionFailure("curvature of the lift escapes A+ ⊗ Z at " + lambda.total.name(l));
	Element c = F.component(lambda.center);
	if (!A.differential(c).is_zero())
		throw AssertionFailure("curvature of the lift is not closed");
	return {reduce_to_class(A, c, k), lift, c};
}

struct MasseyObstruction {
	std::size_t first = 0; // window (first, last), 1-based
	std::size_t last = 0;
	CohomologyClass residue;
	bool budget_exhausted = false;
};

struct MasseyResult {
	MCProductData data;
	TensorElement system; // in A ⊗ L; complete only when value is set
	std::optional<MCProduct> value;
	SubspaceBasis indeterminacy;
	std::optional<MasseyObstruction> obstruction;
	std::size_t attempts = 0;
};

struct MasseyOptions {
	std::size_t budget = 256;
};

namespace detail {

struct Window {
	std::size_t i, j, index;
	int algebra_degree;
};

class MasseySolver {
public:
	MasseySolver(const FreeCDGA& A, const MCProductData& lambda, std::size_t n)
		: A_(A), lambda_(lambda), T_(A, lambda.quotient)
	{
		for (std::size_t len = 2; len < n; ++len)
			for (std::size_t i = 1; i + len - 1 <= n; ++i) {
				auto idx = lambda.quotient.index_of(window_name(i, i + len - 1));
				windows_.push_back({i, i + len - 1, idx, 1 - lambda.quotient.degree(idx)});
			}
	}

	const std::vector<Window>& windows() const { return windows_; }
	const TensorAlgebra& tensor() const { return T_; }

	/// Solves windows from `start` on; returns the failing window and its
	/// residue, or nullopt after completing sigma in place.
	std::optional<std::pair<std::size_t, Element>> solve_from(TensorElement& sigma, std::size_t start) const
	{
		for (std::size_t w = start; w < windows_.size(); ++w) {
			const auto& win = windows_[w];
			sigma.add(win.index, -sigma.component(win.index));
			if (win.algebra_degree + 1 > A_.truncation())
				continue;
			Element Q = T_.curvature(sigma).component(win.index);
			if (Q.is_zero())
				continue;
			auto a = find_primitive(A_, -Q, win.algebra_degree + 1);
			if (!a)
				return std::make_pair(w, Q);
			sigma.add(win.index, *a);
		}
		return std::nullopt;
	}

	std::vector<Element> cocycles(int degree) const
	{
		std::vector<Element> out;
		if (degree > A_.max_cohomology_degree())
			return out;
		const auto& h = A_.cohomology_basis(degree);
		for (const auto& v : h.cocycles().vectors)
			out.push_back(h.elementize(v));
		return out;
	}

private:
	const FreeCDGA& A_;
	const MCProductData& lambda_;
	TensorAlgebra T_;
	std::vector<Window> windows_;
};

} // namespace detail

/// Searches a defining system for <c_1, ..., c_n>, solving windows in order
/// of increasing length. On an obstruction, single closed perturbations of
/// earlier windows are tried within the budget. The indeterminacy is the
/// span of value changes under single closed perturbations of each window.
inline MasseyResult massey_product(const FreeCDGA& A, const std::vector<CohomologyClass>& classes,
                                   const MasseyOptions& options = {})
{
	const std::size_t n = classes.size();
	if (n < 2)
		throw InputError("Massey products need at least two classes");
	std::vector<int> degrees;
	for (const auto& c : classes) {
		if (!A.differential(c.representative).is_zero())
			throw NotACocycle("Massey product input is not closed");
		if (auto d = A.degree_of(c.representative); d && *d != c.degree)
			throw InputError("class representative has the wrong degree");
		degrees.push_back(c.degree);
	}
	MasseyResult result{massey_data(n, degrees), {}, {}, {}, {}, 0};
	const auto& lambda = result.data;
	int k = product_degree(lambda);
	if (k > A.max_cohomology_degree())
		throw InputError("product degree " + std::to_string(k) + " exceeds the trustworthy range; raise the truncation");
	result.indeterminacy = SubspaceBasis{A.cohomology_basis(k).dim(), {}};
	detail::MasseySolver solver(A, lambda, n);
	const auto& wins = solver.windows();

	TensorElement sigma;
	for (std::size_t i = 1; i <= n; ++i)
		sigma.add(lambda.quotient.index_of(window_name(i, i)), classes[i - 1].representative);
	auto failure = solver.solve_from(sigma, 0);
	if (failure) {
		const auto base = sigma;
		for (std::size_t w = 0; failure && w < failure->first; ++w) {
			for (const auto& z : solver.cocycles(wins[w].algebra_degree)) {
				if (result.attempts >= options.budget)
					break;
				++result.attempts;
				auto trial = base;
				trial.add(wins[w].index, z);
				if (!solver.solve_from(trial, w + 1)) {
					sigma = trial;
					failure.reset();
					break;
				}
			}
		}
	}
	if (failure) {
		const auto& win = wins[failure->first];
		result.system = sigma;
		result.obstruction = MasseyObstruction{win.i, win.j, reduce_to_class(A, failure->second, win.algebra_degree + 1),
		                                       result.attempts >= options.budget};
		return result;
	}
	result.system = sigma;
	result.value = mc_product(A, lambda, sigma);
	Echelon diffs(result.indeterminacy.ambient_dim);
	for (std::size_t w = 0; w < wins.size(); ++w) {
		for (const auto& z : solver.cocycles(wins[w].algebra_degree)) {
			auto trial = sigma;
			trial.add(wins[w].index, z);
			if (solver.solve_from(trial, w + 1))
				continue;
			auto v = mc_product(A, lambda, trial).cls.coordinates;
			for (std::size_t i = 0; i < v.size(); ++i)
				v[i] -= result.value->cls.coordinates[i];
			diffs.insert(to_sparse(v));
		}
	}
	result.indeterminacy.vectors = diffs.basis();
	return result;
}

/// Class of gamma_mu(eta) for a Maurer-Cartan element mu.
inline CohomologyClass characteristic_map(const ChevalleyEilenberg& ce, const LieCochain& eta, const TensorAlgebra& T,
                                          const TensorElement& mu)
{
	require_defining_system(T, mu);
	int degree = ce.degree_of(eta).value_or(0);
	if (!eta.is_zero() && !ce.degree_of(eta))
		throw InputError("cochain is not homogeneous");
	return reduce_to_class(T.algebra(), ce.characteristic(eta, T, mu), degree);
}

struct HomotopyReport {
	bool pass = false;         // corrected identity
	bool literal_pass = false; // with the global sign (-1)^{|eta|}
	Element lhs;               // gamma_{mu_1}(eta) - gamma_{mu_0}(eta)
	Element rhs;               // (-1)^{|eta|+1} (d H(eta) - H(D eta))
	TensorElement mu1;
};

/// Compares gamma_{mu_1}(eta) - gamma_{mu_0}(eta) with
/// (-1)^{|eta|+1}(d_A H(eta) - H(D eta)), mu_1 = (exp X)·mu_0. The variant
/// with sign (-1)^{|eta|} is recorded as well; it fails whenever the
/// difference is nonzero (already for abelian L with zero differential).
inline HomotopyReport gauge_homotopy_check(const ChevalleyEilenberg& ce, const LieCochain& eta, const TensorAlgebra& T,
                                           const TensorElement& X, const TensorElement& mu0)
{
	HomotopyReport r;
	r.mu1 = T.gauge_action(X, mu0);
	r.lhs = ce.characteristic(eta, T, r.mu1) - ce.characteristic(eta, T, mu0);
	const auto& A = T.algebra();
	Element inner = A.differential(ce.homotopy(eta, T, X, mu0)) - ce.homotopy(ce.differential(eta), T, X, mu0);
	int deg = ce.degree_of(eta).value_or(0);
	r.rhs = Rational(sign_of(deg + 1)) * inner;
	r.pass = r.lhs == r.rhs;
	r.literal_pass = r.lhs == -r.rhs;
	return r;
}

} // namespace mcprod
