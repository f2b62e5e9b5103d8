#pragma once

// Algebraic fibrations A -> A ⊗ ΛV, odd spherical steps A -> A[x] with
// dx = e, Gysin kernels, the degree-truncated TA, annihilation witnesses,
// and the descent of a defining system over A[x] to one over A.

#include "products.hpp"

#include <cstdlib>
#include <functional>
#include <set>
#include <string>

namespace mcprod {

struct StagedGenerator {
	Generator gen;
	int stage = 0;
	Element differential; // in the total algebra
};

struct OddSphericalStep {
	Generator x;
	Element euler; // in the base
};

struct AlgebraicFibration {
	FreeCDGA base;
	std::vector<StagedGenerator> new_generators;
	FreeCDGA total;
	bool spherical = false;
};

/// Builds base ⊗ ΛV. Differentials of the new generators are given as
/// expressions over the combined generator names.
inline AlgebraicFibration make_fibration(const FreeCDGA& base, const std::vector<std::pair<Generator, int>>& generators,
                                         const std::map<std::string, Expression>& differentials, bool spherical)
{
	std::vector<Generator> all = base.generators();
	std::map<std::string, Expression> d;
	for (const auto& g : base.generators())
		d.emplace(g.name, base.to_expression(base.d_image(g.name)));
	for (const auto& [g, stage] : generators)
		all.push_back(g);
	for (const auto& [name, expr] : differentials)
		d[name] = expr;
	AlgebraicFibration f{base, {}, FreeCDGA(all, d, base.truncation()), spherical};
	for (const auto& [g, stage] : generators)
		f.new_generators.push_back({g, stage, f.total.d_image(g.name)});
	return f;
}

inline ValidationReport validate_fibration(const AlgebraicFibration& f)
{
	ValidationReport report;
	report.merge(validate_cdga(f.total));
	std::map<int, int> stage_of; // total generator index -> stage, base = -1
	for (const auto& g : f.base.generators()) {
		if (!f.total.has_generator(g.name)) {
			report.fail("base generator " + g.name + " is missing from the total algebra");
			continue;
		}
		stage_of[f.total.index_of(g.name)] = -1;
		auto image = f.total.import(f.base, f.base.d_image(g.name));
		if (!(image == f.total.d_image(g.name)))
			report.fail("differential of base generator " + g.name + " changed in the total algebra");
	}
	for (const auto& s : f.new_generators) {
		if (!f.total.has_generator(s.gen.name)) {
			report.fail("new generator " + s.gen.name + " is missing from the total algebra");
			continue;
		}
		stage_of[f.total.index_of(s.gen.name)] = s.stage;
		if (f.spherical && s.gen.degree % 2 == 0)
			report.fail("spherical fibration has even generator " + s.gen.name);
	}
	for (const auto& s : f.new_generators) {
		if (!f.total.has_generator(s.gen.name))
			continue;
		for (const auto& [m, c] : f.total.d_image(s.gen.name).terms())
			for (int g : m) {
				auto it = stage_of.find(g);
				if (it == stage_of.end() || it->second >= s.stage)
					report.fail("d(" + s.gen.name + ") at stage " + std::to_string(s.stage) + " involves " +
					            f.total.generators()[static_cast<std::size_t>(g)].name + " outside earlier stages");
			}
	}
	if (f.total.generators().size() != f.base.generators().size() + f.new_generators.size())
		report.fail("total algebra has generators that are neither base nor new");
	return report;
}

/// A[x] with |x| = |e| - 1 odd and dx = e. Zero e needs an explicit degree.
inline AlgebraicFibration adjoin_odd(const FreeCDGA& A, const Element& e, const std::string& name = "x",
                                     std::optional<int> euler_degree = std::nullopt)
{
	auto d = A.degree_of(e);
	if (!e.is_zero() && !d)
		throw InputError("adjoin_odd: Euler class is not homogeneous");
	if (d && euler_degree && *d != *euler_degree)
		throw InputError("adjoin_odd: Euler class has degree " + std::to_string(*d));
	if (!d)
		d = euler_degree;
	if (!d)
		throw InputError("adjoin_odd: degree of a zero Euler class must be given");
	if (*d % 2 != 0 || *d < 2)
		throw InputError("adjoin_odd: Euler class must have even degree >= 2");
	if (!A.differential(e).is_zero())
		throw NotACocycle("adjoin_odd: Euler class is not closed");
	std::set<std::string> taken;
	for (const auto& g : A.generators())
		taken.insert(g.name);
	auto x = fresh_name(name, taken);
	return make_fibration(A, {{Generator{x, *d - 1}, 0}}, {{x, A.to_expression(e)}}, true);
}

inline OddSphericalStep spherical_step(const AlgebraicFibration& f)
{
	if (f.new_generators.size() != 1 || f.new_generators.front().gen.degree % 2 == 0)
		throw InputError("not a single odd spherical step");
	const auto& g = f.new_generators.front();
	return {g.gen, f.base.import(f.total, g.differential)};
}

inline CohomologyClass pushforward(const AlgebraicFibration& f, const CohomologyClass& cls)
{
	if (cls.degree > f.total.max_cohomology_degree())
		throw InputError("pushforward: degree " + std::to_string(cls.degree) + " exceeds the trustworthy range 0.." +
		                 std::to_string(f.total.max_cohomology_degree()));
	return reduce_to_class(f.total, f.total.import(f.base, cls.representative), cls.degree);
}

/// ker(ι_*: H^k(A) -> H^k(A[x])), checked against e·H^{k-|e|}(A).
inline SubspaceBasis gysin_kernel(const FreeCDGA& A, const OddSphericalStep& step, int k)
{
	auto fib = adjoin_odd(A, step.euler, step.x.name, step.x.degree + 1);
	if (k < 0 || k > A.max_cohomology_degree())
		throw InputError("gysin_kernel: degree out of the trustworthy range");
	const auto& h = A.cohomology_basis(k);
	std::size_t target_dim = fib.total.cohomology_basis(k).dim();
	SparseMatrix push(target_dim, h.dim());
	for (std::size_t i = 0; i < h.dim(); ++i) {
		auto image = pushforward(fib, h.classes()[i]).coordinates;
		for (std::size_t r = 0; r < image.size(); ++r)
			if (image[r] != 0)
				push.set(r, i, image[r]);
	}
	auto kernel = kernel_basis(push);

	SubspaceBasis multiples{h.dim(), {}};
	int ke = k - (step.x.degree + 1);
	if (ke >= 0) {
		Echelon span(h.dim());
		for (const auto& r : A.cohomology_basis(ke).representatives())
			span.insert(to_sparse(h.coordinates(A.multiply(step.euler, r))));
		multiples.vectors = span.basis();
	}
	if (!same_subspace(kernel, multiples))
		throw AssertionFailure("Gysin sequence: ker(ι_*) differs from e·H(A) in degree " + std::to_string(k));
	return kernel;
}

inline int adjunction_cap(std::optional<int> requested = std::nullopt)
{
	if (requested)
		return *requested;
	if (const char* env = std::getenv("MCPROD_MAX_ITER")) {
		try {
			return std::stoi(env);
		}
		catch (const std::exception&) {
			throw InputError(std::string("MCPROD_MAX_ITER is not an integer: ") + env);
		}
	}
	return 50;
}

namespace detail {

/// Grows the iterated odd spherical fibration one round at a time until
/// H^{2i} = 0 for 0 < 2i <= N, or until `done` holds after some round.
/// Returns the fibration and whether the even cohomology was exhausted.
inline std::pair<AlgebraicFibration, bool> grow_ta(const FreeCDGA& A, int N, int limit,
                                                   const std::function<bool(const AlgebraicFibration&)>& done)
{
	std::vector<std::pair<Generator, int>> gens;
	std::map<std::string, Expression> diffs;
	std::set<std::string> taken;
	for (const auto& g : A.generators())
		taken.insert(g.name);
	AlgebraicFibration current = make_fibration(A, {}, {}, true);
	int count = 0, round = 0;
	for (int k = 2; k <= N; k += 2) {
		while (true) {
			if (done && done(current))
				return {current, false};
			const auto& h = current.total.cohomology_basis(k);
			if (h.dim() == 0)
				break;
			for (const auto& rep : h.representatives()) {
				if (count >= limit)
					throw MathError("truncated TA: adjunction cap of " + std::to_string(limit) +
					                " exceeded while killing H^" + std::to_string(k));
				std::string name;
				do
					name = "tau" + std::to_string(count++);
				while (taken.count(name));
				taken.insert(name);
				gens.push_back({Generator{name, k - 1}, round});
				diffs.emplace(name, current.total.to_expression(rep));
			}
			++round;
			current = make_fibration(A, gens, diffs, true);
		}
	}
	return {current, true};
}

} // namespace detail

/// Iterated odd spherical fibration killing H^{2i} for 0 < 2i <= N. Each
/// round adjoins one generator tau{k} of degree 2i-1 per basis class of the
/// lowest nonvanishing even cohomology.
inline AlgebraicFibration build_truncated_ta(const FreeCDGA& A, int N, std::optional<int> cap = std::nullopt)
{
	if (N > A.max_cohomology_degree())
		throw InputError("build_truncated_ta: N = " + std::to_string(N) + " exceeds truncation - 1 = " +
		                 std::to_string(A.max_cohomology_degree()));
	return detail::grow_ta(A, N, adjunction_cap(cap), {}).first;
}

struct Annihilation {
	bool annihilated = false;
	std::optional<AlgebraicFibration> witness;
	std::optional<Element> primitive; // d(primitive) = class representative in the witness
};

/// Restriction of f to the new generators in `keep` (which must be closed
/// under differential dependency).
inline AlgebraicFibration sub_fibration(const AlgebraicFibration& f, const std::set<std::string>& keep)
{
	std::vector<std::pair<Generator, int>> gens;
	std::map<std::string, Expression> diffs;
	for (const auto& s : f.new_generators)
		if (keep.count(s.gen.name)) {
			gens.push_back({s.gen, s.stage});
			diffs.emplace(s.gen.name, f.total.to_expression(s.differential));
		}
	return make_fibration(f.base, gens, diffs, f.spherical);
}

/// Decides whether cls dies in the truncated TA. Positive answers carry a
/// finite fibration in which the class is exact.
inline Annihilation annihilates(const FreeCDGA& A, const CohomologyClass& cls, int N)
{
	if (cls.degree + 1 > N)
		throw InputError("annihilates: need |class| + 1 <= N");
	if (N > A.max_cohomology_degree())
		throw InputError("annihilates: N exceeds truncation - 1");
	if (!A.differential(cls.representative).is_zero())
		throw NotACocycle("annihilates: representative is not closed");
	Annihilation out;
	AlgebraicFibration witness;
	if (cls.is_zero()) {
		witness = make_fibration(A, {}, {}, true);
	}
	else if (cls.degree == 0) {
		return out;
	}
	else if (cls.degree % 2 == 0) {
		witness = adjoin_odd(A, cls.representative, "x");
	}
	else {
		// the class is tested after every round, so a class that dies in a
		// finite stage is decided even when the full tower is infinite
		auto killed = [&](const AlgebraicFibration& f) { return pushforward(f, cls).is_zero(); };
		auto [ta, complete] = detail::grow_ta(A, N, adjunction_cap(), killed);
		if (complete && !killed(ta))
			return out;
		auto w = find_primitive(ta.total, ta.total.import(A, cls.representative), cls.degree);
		if (!w)
			throw AssertionFailure("annihilates: pushforward is zero but no primitive was found");
		std::set<std::string> keep;
		std::vector<int> todo;
		std::set<std::string> new_names;
		for (const auto& s : ta.new_generators)
			new_names.insert(s.gen.name);
		auto visit = [&](const Element& x) {
			for (const auto& [m, c] : x.terms())
				for (int g : m) {
					const auto& name = ta.total.generators()[static_cast<std::size_t>(g)].name;
					if (new_names.count(name) && keep.insert(name).second)
						todo.push_back(g);
				}
		};
		visit(*w);
		while (!todo.empty()) {
			int g = todo.back();
			todo.pop_back();
			visit(ta.total.d_image(g));
		}
		witness = sub_fibration(ta, keep);
	}
	if (auto r = validate_fibration(witness); !r.ok())
		throw AssertionFailure("annihilation witness is not a valid fibration: " + r.violations.front());
	auto w = find_primitive(witness.total, witness.total.import(A, cls.representative), cls.degree);
	if (!w)
		throw AssertionFailure("annihilation witness does not kill the class");
	out.annihilated = true;
	out.witness = std::move(witness);
	out.primitive = std::move(w);
	return out;
}

// ---------------------------------------------------------------------------
// Descent from A[x] to A

namespace detail {

/// Splits y in A[x] as x·p + r with p, r free of x; both are returned in
/// total-algebra coordinates.
inline std::pair<Element, Element> split_by_x(const FreeCDGA& total, int x, const Element& y)
{
	Element p, r;
	for (const auto& [m, c] : y.terms()) {
		auto it = std::find(m.begin(), m.end(), x);
		if (it == m.end()) {
			r.add_term(m, c);
			continue;
		}
		int before = 0;
		for (auto jt = m.begin(); jt != it; ++jt)
			before += total.generators()[static_cast<std::size_t>(*jt)].degree;
		Monomial rest(m.begin(), it);
		rest.insert(rest.end(), it + 1, m.end());
		p.add_term(rest, sign_of(before) * c);
	}
	return {p, r};
}

inline TensorElement import_tensor(const FreeCDGA& target, const FreeCDGA& source, const TensorElement& t)
{
	TensorElement out;
	for (const auto& [l, a] : t.terms())
		out.add(l, target.import(source, a));
	return out;
}

/// Rewrites t in the basis of a sub-DGLA, or nullopt if some coefficient
/// vector leaves it.
inline std::optional<TensorElement> restrict_tensor(const SubDGLA& sub, const TensorElement& t)
{
	std::map<Monomial, LieVector> vecs;
	for (const auto& [l, a] : t.terms())
		for (const auto& [m, c] : a.terms())
			vecs[m].emplace(l, c);
	TensorElement out;
	for (const auto& [m, v] : vecs) {
		auto r = sub.restrict(v);
		if (!r)
			return std::nullopt;
		for (const auto& [k, c] : *r)
			out.add(k, Element::monomial(m, c));
	}
	return out;
}

} // namespace detail

struct SplitSystem {
	TensorElement omega; // A ⊗ L
	TensorElement theta; // A+ ⊗ L
};

/// σ = x·ω + θ over A[x] with ω, θ free of x, returned over the base.
inline SplitSystem split_defining_system(const AlgebraicFibration& fib, const TensorElement& sigma)
{
	auto step = spherical_step(fib);
	int x = fib.total.index_of(step.x.name);
	SplitSystem out;
	for (const auto& [l, a] : sigma.terms()) {
		auto [p, r] = detail::split_by_x(fib.total, x, a);
		out.omega.add(l, fib.base.import(fib.total, p));
		out.theta.add(l, fib.base.import(fib.total, r));
	}
	return out;
}

inline TensorElement recombine(const AlgebraicFibration& fib, const SplitSystem& s)
{
	auto step = spherical_step(fib);
	auto x = fib.total.generator(step.x.name);
	TensorElement out = detail::import_tensor(fib.total, fib.base, s.theta);
	for (const auto& [l, a] : s.omega.terms())
		out.add(l, fib.total.multiply(x, fib.total.import(fib.base, a)));
	return out;
}

struct DescendResult {
	MCProductData zeta;
	TensorElement system;  // over the base, in A+ ⊗ M/Z
	Element normalized_c;  // cocycle in the base
	SubDGLA m_tilde;       // inside N' = N with perturbed differential
	TensorElement mu_bar;  // over the base, in A+ ⊗ M
	LieVector l0;
};

/// Turns a defining system over A[x] whose product is ι_*[c] into a defining
/// system over A for the MC-product data ζ = (Z -> M -> M/Z) built from
/// N = Q eta ⋉ L[eps].
inline DescendResult descend(const AlgebraicFibration& fib, const MCProductData& lambda, const TensorElement& sigma,
                             const Element& c)
{
	const auto step = spherical_step(fib);
	const int n = step.x.degree;
	const FreeCDGA& A = fib.base;
	const FreeCDGA& Ax = fib.total;
	auto cdeg = A.degree_of(c);
	int k = product_degree(lambda);
	if (cdeg && *cdeg != k)
		throw InputError("descend: c has degree " + std::to_string(*cdeg) + ", the product lives in degree " +
		                 std::to_string(k));
	if (k % 2 == 0)
		throw InputError("descend: c must have odd degree");
	if (!A.differential(c).is_zero())
		throw NotACocycle("descend: c is not closed");

	// (1) split, (2) lift
	auto parts = split_defining_system(fib, sigma);
	TensorAlgebra TA(A, lambda.total), TAx(Ax, lambda.total);
	TensorElement alpha = lift_system(lambda, parts.omega);
	TensorElement beta = lift_system(lambda, parts.theta);
	auto xe = Ax.generator(step.x.name);
	auto lift = TAx.left_multiply(xe, detail::import_tensor(Ax, A, alpha)) + detail::import_tensor(Ax, A, beta);

	// (3) normalize F(xα + β) = c z
	{
		TensorAlgebra TLx(Ax, lambda.quotient);
		require_defining_system(TLx, sigma);
	}
	auto F = TAx.curvature(lift);
	for (const auto& [l, a] : F.terms())
		if (l != lambda.center)
			throw AssertionFailure("descend: curvature of the lift escapes A[x] ⊗ Z");
	Element f = F.component(lambda.center);
	auto w = find_primitive(Ax, f - Ax.import(A, c), k);
	if (!w)
		throw MathError("descend: normalization unsolvable; the product of sigma is not the pushforward of [c]");
	auto [u, v] = detail::split_by_x(Ax, Ax.index_of(step.x.name), *w);
	alpha.add(lambda.center, -A.import(Ax, u));
	Element c_norm = c + A.differential(A.import(Ax, v));

	// (4) the two equations
	if (!(TA.bracket(alpha, beta) - TA.differential(alpha)).is_zero())
		throw AssertionFailure("descend: -dα + [α,β] = 0 fails");
	TensorElement second = TA.left_multiply(step.euler, alpha) + TA.differential(beta) +
	                       make_rational(1, 2) * TA.bracket(beta, beta);
	if (!(second == TensorElement::single(c_norm, lambda.center)))
		throw AssertionFailure("descend: eα + dβ + ½[β,β] = cz fails");

	// (5) unit part of α
	LieVector l0;
	TensorElement alpha_bar;
	for (const auto& [l, a] : alpha.terms()) {
		Rational unit = a.coefficient({});
		if (unit != 0)
			l0.emplace(l, unit);
		Element rest = a;
		rest.add_term({}, -unit);
		alpha_bar.add(l, rest);
	}
	for (const auto& [l, x] : l0)
		if (lambda.total.degree(l) != 1 - n)
			throw AssertionFailure("descend: unit part of α has the wrong degree");

	// (6) N, N', M
	FDGLA N = build_N_tilde(lambda, n);
	EpsilonLayout lay{lambda.total.dim()};
	FDGLA Np = perturb_differential(N, l0);
	SubDGLA M = truncate_at_zero(Np);
	if (!is_nilpotent(M.algebra))
		throw NotNilpotent("descend: M is not nilpotent");

	// (7) μ = ᾱ eps + β + e ⊗ eta
	TensorElement mu;
	for (const auto& [l, a] : alpha_bar.terms())
		mu.add(lay.eps(l), a);
	for (const auto& [l, a] : beta.terms())
		mu.add(lay.plain(l), a);
	mu.add(lay.eta(), step.euler);
	TensorAlgebra TN(A, Np);
	if (!TN.in_positive_part(mu) || !TN.has_degree(mu, 1))
		throw AssertionFailure("descend: μ is not in (A+ ⊗ N)^1");
	auto mu_m = detail::restrict_tensor(M, mu);
	if (!mu_m)
		throw AssertionFailure("descend: μ does not lie in A+ ⊗ M");
	auto FN = TN.curvature(mu);
	if (!(FN == TensorElement::single(c_norm, lay.plain(lambda.center))))
		throw AssertionFailure("descend: F(μ) = cz fails");

	// (8) ζ and the projected system
	auto z = M.restrict(unit_vector(lay.plain(lambda.center)));
	if (!z || z->size() != 1 || z->begin()->second != 1)
		throw AssertionFailure("descend: center is not a basis element of M");
	auto zeta = central_quotient(M.algebra, z->begin()->first);
	if (auto r = validate_mc_data(zeta); !r.ok())
		throw AssertionFailure("descend: ζ is not valid MC-product data: " + r.violations.front());
	auto system = map_lie(*mu_m, zeta.projection);
	return {zeta, system, c_norm, M, *mu_m, l0};
}

}
