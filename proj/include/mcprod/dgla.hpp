#pragma once

// Finite-dimensional differential graded Lie algebras given by structure
// constants, central extensions, and the derived algebras used when pushing
// a defining system down an odd spherical fibration.

#include "errors.hpp"
#include "linalg.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mcprod {

struct BasisElement {
	std::string name;
	int degree = 0;
};

/// Element of a DGLA in basis coordinates.
using LieVector = SparseVector;

inline LieVector unit_vector(std::size_t i, const Rational& c = Rational(1))
{
	LieVector v;
	if (c != 0)
		v.emplace(i, c);
	return v;
}

inline int koszul(int a, int b)
{
	return ((a * b) % 2 == 0) ? 1 : -1;
}

class FDGLA {
public:
	FDGLA() = default;

	/// `auxiliary` algebras may carry positive degrees.
	explicit FDGLA(std::vector<BasisElement> basis, bool auxiliary = false)
		: basis_(std::move(basis)), bracket_(basis_.size(), std::vector<LieVector>(basis_.size())),
		  differential_(basis_.size()), auxiliary_(auxiliary)
	{
		std::set<std::string> seen;
		for (std::size_t i = 0; i < basis_.size(); ++i) {
			if (basis_[i].name.empty() || !seen.insert(basis_[i].name).second)
				throw InputError("duplicate or empty basis name '" + basis_[i].name + "'");
			index_.emplace(basis_[i].name, i);
		}
	}

	std::size_t dim() const { return basis_.size(); }
	const std::vector<BasisElement>& basis() const { return basis_; }
	int degree(std::size_t i) const { return basis_.at(i).degree; }
	const std::string& name(std::size_t i) const { return basis_.at(i).name; }
	bool auxiliary() const { return auxiliary_; }
	void set_auxiliary(bool a) { auxiliary_ = a; }

	std::size_t index_of(const std::string& name) const
	{
		auto it = index_.find(name);
		if (it == index_.end())
			throw InputError("unknown basis element '" + name + "'");
		return it->second;
	}
	bool has(const std::string& name) const { return index_.count(name) > 0; }

	/// Sets [e_i, e_j] = v and [e_j, e_i] = -(-1)^{|i||j|} v.
	void set_bracket(std::size_t i, std::size_t j, const LieVector& v)
	{
		bracket_.at(i).at(j) = v;
		LieVector w = v;
		Rational s = -koszul(degree(i), degree(j));
		for (auto& [k, c] : w)
			c *= s;
		if (i != j)
			bracket_.at(j).at(i) = std::move(w);
	}

	/// Sets d(e_j) = v.
	void set_differential(std::size_t j, const LieVector& v) { differential_.at(j) = v; }

	const LieVector& bracket_basis(std::size_t i, std::size_t j) const { return bracket_.at(i).at(j); }
	const LieVector& d_basis(std::size_t j) const { return differential_.at(j); }

	LieVector bracket(const LieVector& u, const LieVector& v) const
	{
		LieVector out;
		for (const auto& [i, a] : u)
			for (const auto& [j, b] : v)
				axpy(out, a * b, bracket_.at(i).at(j));
		return out;
	}

	LieVector d(const LieVector& u) const
	{
		LieVector out;
		for (const auto& [j, a] : u)
			axpy(out, a, differential_.at(j));
		return out;
	}

	SparseMatrix differential_matrix() const
	{
		SparseMatrix m(dim(), dim());
		for (std::size_t j = 0; j < dim(); ++j)
			for (const auto& [i, c] : differential_[j])
				m.set(i, j, c);
		return m;
	}

	std::optional<int> degree_of(const LieVector& u) const
	{
		std::optional<int> d;
		for (const auto& [i, c] : u) {
			if (d && *d != degree(i))
				return std::nullopt;
			d = degree(i);
		}
		return d;
	}

	bool nonpositive() const
	{
		for (const auto& b : basis_)
			if (b.degree > 0)
				return false;
		return true;
	}

	std::string format(const LieVector& u) const
	{
		if (u.empty())
			return "0";
		std::string out;
		bool first = true;
		for (const auto& [i, c] : u) {
			Rational mag = abs(c);
			out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
			first = false;
			if (mag != 1)
				out += mag.get_str() + "*";
			out += name(i);
		}
		return out;
	}

private:
	std::vector<BasisElement> basis_;
	std::map<std::string, std::size_t> index_;
	std::vector<std::vector<LieVector>> bracket_;
	std::vector<LieVector> differential_;
	bool auxiliary_ = false;
};

inline ValidationReport validate_dgla(const FDGLA& g)
{
	ValidationReport r;
	const auto n = g.dim();
	auto nm = [&](std::size_t i) { return g.name(i); };
	for (std::size_t i = 0; i < n; ++i)
		if (!g.auxiliary() && g.degree(i) > 0)
			r.fail(nm(i) + " has positive degree in a non-auxiliary algebra");
	for (std::size_t i = 0; i < n; ++i) {
		for (const auto& [k, c] : g.d_basis(i))
			if (g.degree(k) != g.degree(i) + 1)
				r.fail("d(" + nm(i) + ") has a component of the wrong degree");
		if (!g.d(g.d_basis(i)).empty())
			r.fail("d^2(" + nm(i) + ") != 0");
	}
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j) {
			const auto& b = g.bracket_basis(i, j);
			for (const auto& [k, c] : b)
				if (g.degree(k) != g.degree(i) + g.degree(j))
					r.fail("[" + nm(i) + "," + nm(j) + "] violates degree additivity");
			LieVector sym = b;
			axpy(sym, Rational(koszul(g.degree(i), g.degree(j))), g.bracket_basis(j, i));
			if (!sym.empty())
				r.fail("[" + nm(i) + "," + nm(j) + "] violates graded antisymmetry");
			// d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]
			auto ei = unit_vector(i), ej = unit_vector(j);
			LieVector leib = g.d(b);
			axpy(leib, Rational(-1), g.bracket(g.d_basis(i), ej));
			axpy(leib, Rational(-koszul(1, g.degree(i))), g.bracket(ei, g.d_basis(j)));
			if (!leib.empty())
				r.fail("Leibniz rule fails on (" + nm(i) + "," + nm(j) + ")");
		}
	}
	// (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]] = 0
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j) {
			for (std::size_t k = 0; k < n; ++k) {
				auto x = unit_vector(i), y = unit_vector(j), z = unit_vector(k);
				int dx = g.degree(i), dy = g.degree(j), dz = g.degree(k);
				LieVector jac;
				axpy(jac, Rational(koszul(dx, dz)), g.bracket(x, g.bracket_basis(j, k)));
				axpy(jac, Rational(koszul(dy, dx)), g.bracket(y, g.bracket_basis(k, i)));
				axpy(jac, Rational(koszul(dz, dy)), g.bracket(z, g.bracket_basis(i, j)));
				if (!jac.empty())
					r.fail("Jacobi identity fails on (" + nm(i) + "," + nm(j) + "," + nm(k) + ")");
			}
		}
	}
	return r;
}

struct Filtration {
	std::vector<SubspaceBasis> stages;

	std::size_t length() const { return stages.size(); }
};

/// L^1 = L, L^i = [L, L^{i-1}], ending with the zero stage.
inline Filtration lower_central_series(const FDGLA& g)
{
	Filtration f;
	SubspaceBasis current{g.dim(), {}};
	for (std::size_t i = 0; i < g.dim(); ++i)
		current.vectors.push_back(unit_vector(i));
	f.stages.push_back(current);
	for (std::size_t step = 0; step <= g.dim() + 1; ++step) {
		Echelon e(g.dim());
		for (std::size_t i = 0; i < g.dim(); ++i)
			for (const auto& v : current.vectors)
				e.insert(g.bracket(unit_vector(i), v));
		SubspaceBasis next{g.dim(), e.basis()};
		if (next.dim() == current.dim() && next.dim() > 0)
			throw NotNilpotent("lower central series stabilizes in dimension " + std::to_string(next.dim()));
		f.stages.push_back(next);
		if (next.dim() == 0)
			return f;
		current = std::move(next);
	}
	throw NotNilpotent("lower central series does not terminate");
}

inline bool is_nilpotent(const FDGLA& g)
{
	try {
		lower_central_series(g);
		return true;
	}
	catch (const NotNilpotent&) {
		return false;
	}
}

/// Central extension Z -> total -> quotient with Z spanned by one basis
/// element of the total algebra.
struct MCProductData {
	FDGLA total;
	std::size_t center = 0;
	int q = 0;
	FDGLA quotient;
	SparseMatrix projection; // dim(quotient) x dim(total)
	SparseMatrix section;    // dim(total) x dim(quotient)

	LieVector project(const LieVector& v) const { return projection.apply(v); }
	LieVector lift(const LieVector& v) const { return section.apply(v); }
};

/// Quotient by the span of the basis element `center`; the default section
/// sends each remaining basis element to itself.
inline MCProductData central_quotient(const FDGLA& total, std::size_t center)
{
	if (center >= total.dim())
		throw InputError("center index out of range");
	const auto m = total.dim();
	std::vector<BasisElement> qb;
	std::vector<std::size_t> to_quot(m, static_cast<std::size_t>(-1));
	for (std::size_t i = 0; i < m; ++i) {
		if (i == center)
			continue;
		to_quot[i] = qb.size();
		qb.push_back(total.basis()[i]);
	}
	MCProductData data;
	data.total = total;
	data.center = center;
	data.q = total.degree(center);
	data.projection = SparseMatrix(qb.size(), m);
	data.section = SparseMatrix(m, qb.size());
	for (std::size_t i = 0; i < m; ++i) {
		if (i == center)
			continue;
		data.projection.set(to_quot[i], i, Rational(1));
		data.section.set(i, to_quot[i], Rational(1));
	}
	FDGLA quot(qb, total.auxiliary());
	for (std::size_t a = 0; a < qb.size(); ++a) {
		auto la = data.section.apply(unit_vector(a));
		quot.set_differential(a, data.projection.apply(total.d(la)));
		for (std::size_t b = a; b < qb.size(); ++b) {
			auto lb = data.section.apply(unit_vector(b));
			quot.set_bracket(a, b, data.projection.apply(total.bracket(la, lb)));
		}
	}
	data.quotient = std::move(quot);
	return data;
}

/// Replaces the section; it must be a degree-preserving right inverse of the
/// projection.
inline MCProductData with_section(MCProductData data, const SparseMatrix& section)
{
	if (section.rows() != data.total.dim() || section.cols() != data.quotient.dim())
		throw InputError("section has the wrong shape");
	if (!(data.projection * section == SparseMatrix::identity(data.quotient.dim())))
		throw InputError("section is not a right inverse of the projection");
	for (const auto& [rc, v] : section.entries())
		if (data.total.degree(rc.first) != data.quotient.degree(rc.second))
			throw InputError("section does not preserve degrees");
	data.section = section;
	return data;
}

inline ValidationReport validate_mc_data(const MCProductData& d)
{
	ValidationReport r;
	r.merge(validate_dgla(d.total), "total: ");
	r.merge(validate_dgla(d.quotient), "quotient: ");
	if (!d.total.nonpositive())
		r.fail("total algebra is not concentrated in nonpositive degrees");
	if (!d.quotient.nonpositive())
		r.fail("quotient algebra is not concentrated in nonpositive degrees");
	if (!is_nilpotent(d.total))
		r.fail("total algebra is not nilpotent");
	if (!is_nilpotent(d.quotient))
		r.fail("quotient algebra is not nilpotent");
	if (d.center >= d.total.dim()) {
		r.fail("center index out of range");
		return r;
	}
	if (d.q > 0)
		r.fail("q = " + std::to_string(d.q) + " is positive");
	if (d.total.degree(d.center) != d.q)
		r.fail("center has degree " + std::to_string(d.total.degree(d.center)) + " but q = " + std::to_string(d.q));
	auto z = unit_vector(d.center);
	for (std::size_t i = 0; i < d.total.dim(); ++i)
		if (!d.total.bracket(z, unit_vector(i)).empty())
			r.fail("center does not commute with " + d.total.name(i));
	if (!d.total.d(z).empty())
		r.fail("center is not in the kernel of the differential");
	if (in_span(image_basis(d.total.differential_matrix()), z))
		r.fail("image of the differential meets the center");
	if (d.projection.rows() != d.quotient.dim() || d.projection.cols() != d.total.dim() ||
	    d.section.rows() != d.total.dim() || d.section.cols() != d.quotient.dim()) {
		r.fail("projection or section has the wrong shape");
		return r;
	}
	if (!(d.projection * d.section == SparseMatrix::identity(d.quotient.dim())))
		r.fail("projection composed with section is not the identity");
	if (!d.project(z).empty())
		r.fail("projection does not kill the center");
	if (rank(d.projection) != d.quotient.dim() || d.total.dim() != d.quotient.dim() + 1)
		r.fail("kernel of the projection is not one-dimensional");
	for (std::size_t i = 0; i < d.total.dim(); ++i) {
		auto ei = unit_vector(i);
		auto pi = d.project(ei);
		LieVector diff = d.project(d.total.d(ei));
		axpy(diff, Rational(-1), d.quotient.d(pi));
		if (!diff.empty())
			r.fail("projection does not commute with differentials at " + d.total.name(i));
		for (const auto& [k, c] : pi)
			if (d.quotient.degree(k) != d.total.degree(i))
				r.fail("projection does not preserve the degree of " + d.total.name(i));
		for (std::size_t j = 0; j < d.total.dim(); ++j) {
			LieVector br = d.project(d.total.bracket_basis(i, j));
			axpy(br, Rational(-1), d.quotient.bracket(pi, d.project(unit_vector(j))));
			if (!br.empty())
				r.fail("projection is not a Lie morphism on (" + d.total.name(i) + "," + d.total.name(j) + ")");
		}
	}
	for (const auto& [rc, v] : d.section.entries())
		if (d.total.degree(rc.first) != d.quotient.degree(rc.second))
			r.fail("section does not preserve degrees");
	return r;
}

/// Name of the window basis element b_(i,j), 1-based.
inline std::string window_name(std::size_t i, std::size_t j)
{
	if (i == j)
		return "e" + std::to_string(i);
	return "b" + std::to_string(i) + "_" + std::to_string(j);
}

/// Data whose defining systems are Massey systems for <a_1, ..., a_n>.
/// The total algebra is spanned by the windows b_(i,j), 1 <= i <= j <= n,
/// realized as the matrix units E_{i,j+1} of a graded vector space with
/// graded commutator; b_(i,i) = e_i has degree 1 - |a_i| and
/// b_(i,j) = [e_i, b_(i+1,j)]. The center is b_(1,n).
inline MCProductData massey_data(std::size_t n, const std::vector<int>& degrees)
{
	if (n < 2)
		throw InputError("massey_data needs n >= 2");
	if (degrees.size() != n)
		throw InputError("massey_data needs one degree per input class");
	for (int d : degrees)
		if (d < 1)
			throw InputError("massey_data: class degrees must be positive");
	std::vector<std::pair<std::size_t, std::size_t>> windows;
	for (std::size_t len = 1; len <= n; ++len)
		for (std::size_t i = 1; i + len - 1 <= n; ++i)
			windows.emplace_back(i, i + len - 1);
	auto window_degree = [&](std::size_t i, std::size_t j) {
		int s = 0;
		for (std::size_t k = i; k <= j; ++k)
			s += 1 - degrees[k - 1];
		return s;
	};
	int q = window_degree(1, n);
	if (q > 0)
		throw InputError("massey_data: q = " + std::to_string(q) + " is positive");
	std::vector<BasisElement> basis;
	std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
	for (const auto& [i, j] : windows) {
		index.emplace(std::make_pair(i, j), basis.size());
		basis.push_back({window_name(i, j), window_degree(i, j)});
	}
	FDGLA total(basis);
	for (const auto& [i, j] : windows) {
		for (const auto& [k, l] : windows) {
			auto a = index.at({i, j}), b = index.at({k, l});
			if (a > b)
				continue;
			// [E_{i,j+1}, E_{k,l+1}] = d_{j+1,k} E_{i,l+1} - (-1)^{|a||b|} d_{l+1,i} E_{k,j+1}
			LieVector v;
			if (j + 1 == k)
				axpy(v, Rational(1), unit_vector(index.at({i, l})));
			if (l + 1 == i)
				axpy(v, Rational(-koszul(total.degree(a), total.degree(b))), unit_vector(index.at({k, j})));
			total.set_bracket(a, b, v);
		}
	}
	return central_quotient(total, index.at({1, n}));
}

/// Layout of the algebra Q eta ⋉ L[eps] built from a total algebra of
/// dimension m: s -> s, s eps -> m + s, eta -> 2m.
struct EpsilonLayout {
	std::size_t m = 0;

	std::size_t plain(std::size_t s) const { return s; }
	std::size_t eps(std::size_t s) const { return m + s; }
	std::size_t eta() const { return 2 * m; }
	bool is_plain(std::size_t i) const { return i < m; }
	bool is_eps(std::size_t i) const { return i >= m && i < 2 * m; }

	LieVector embed(const LieVector& v) const { return v; }
	LieVector times_eps(const LieVector& v) const
	{
		LieVector out;
		for (const auto& [i, c] : v)
			out.emplace(eps(i), c);
		return out;
	}
};

inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken)
{
	std::string name = base;
	while (taken.count(name))
		name += "'";
	return name;
}

/// Builds Q eta ⋉ L~[eps] with |eps| = n odd and |eta| = -n, where eta acts
/// as d/d eps:
///   [s, t eps] = [s,t] eps,  [s eps, t eps] = 0,  [eta, s eps] = (-1)^{|s|} s,
///   [eta, t] = 0,  [eta, eta] = 0,
/// and d(s) = d~(s), d(s eps) = d~(s) eps, d(eta) = 0.
inline FDGLA build_N_tilde(const MCProductData& lambda, int n)
{
	if (n <= 0 || n % 2 == 0)
		throw InputError("build_N_tilde: eps degree must be odd and positive");
	if (auto r = validate_mc_data(lambda); !r.ok())
		throw InputError("build_N_tilde: invalid MC-product data: " + r.violations.front());
	const auto& L = lambda.total;
	EpsilonLayout lay{L.dim()};
	std::set<std::string> taken;
	for (const auto& b : L.basis())
		taken.insert(b.name);
	std::vector<BasisElement> basis = L.basis();
	for (const auto& b : L.basis()) {
		auto nm = fresh_name(b.name + "_eps", taken);
		taken.insert(nm);
		basis.push_back({nm, b.degree + n});
	}
	basis.push_back({fresh_name("eta", taken), -n});
	FDGLA N(basis, true);
	for (std::size_t s = 0; s < lay.m; ++s) {
		for (std::size_t t = 0; t < lay.m; ++t) {
			const auto& st = L.bracket_basis(s, t);
			if (s <= t)
				N.set_bracket(lay.plain(s), lay.plain(t), st);
			N.set_bracket(lay.plain(s), lay.eps(t), lay.times_eps(st));
		}
		N.set_bracket(lay.eta(), lay.eps(s), unit_vector(lay.plain(s), Rational(koszul(L.degree(s), 1))));
		N.set_differential(lay.plain(s), L.d_basis(s));
		N.set_differential(lay.eps(s), lay.times_eps(L.d_basis(s)));
	}
	return N;
}

/// Same graded Lie algebra with differential d + [l0 eps, -].
inline FDGLA perturb_differential(const FDGLA& n_tilde, const LieVector& l0)
{
	if (n_tilde.dim() % 2 != 1)
		throw InputError("perturb_differential: expected an algebra built by build_N_tilde");
	EpsilonLayout lay{(n_tilde.dim() - 1) / 2};
	for (const auto& [i, c] : l0)
		if (i >= lay.m)
			throw InputError("perturb_differential: l0 must lie in the plain part");
	if (!n_tilde.d(l0).empty())
		throw AssertionFailure("d~_L(l0) = 0 fails: l0 is not closed");
	auto y = lay.times_eps(l0);
	FDGLA out = n_tilde;
	for (std::size_t j = 0; j < n_tilde.dim(); ++j) {
		LieVector dj = n_tilde.d_basis(j);
		axpy(dj, Rational(1), n_tilde.bracket(y, unit_vector(j)));
		out.set_differential(j, dj);
	}
	return out;
}

/// Sub-DGLA spanned by given vectors of a parent algebra.
struct SubDGLA {
	FDGLA algebra;
	std::vector<LieVector> embedding; // basis element i -> vector in the parent

	/// Coordinates of a parent vector in the sub-algebra basis, if it lies there.
	std::optional<LieVector> restrict(const LieVector& v) const
	{
		Echelon e(parent_dim, true);
		for (const auto& w : embedding)
			e.insert(w);
		return e.express(v);
	}

	LieVector extend(const LieVector& v) const
	{
		LieVector out;
		for (const auto& [i, c] : v)
			axpy(out, c, embedding.at(i));
		return out;
	}

	std::size_t parent_dim = 0;
};

/// Builds the sub-DGLA on the given (independent) parent vectors, checking
/// closure under bracket and differential.
inline SubDGLA sub_dgla(const FDGLA& parent, std::vector<BasisElement> basis, std::vector<LieVector> vectors,
                        bool auxiliary)
{
	SubDGLA sub;
	sub.parent_dim = parent.dim();
	sub.embedding = std::move(vectors);
	Echelon e(parent.dim(), true);
	for (const auto& v : sub.embedding)
		if (!e.insert(v))
			throw InputError("sub_dgla: vectors are dependent");
	FDGLA g(std::move(basis), auxiliary);
	for (std::size_t a = 0; a < sub.embedding.size(); ++a) {
		auto da = e.express(parent.d(sub.embedding[a]));
		if (!da)
			throw AssertionFailure("sub-DGLA is not closed under the differential at " + g.name(a));
		g.set_differential(a, *da);
		for (std::size_t b = a; b < sub.embedding.size(); ++b) {
			auto br = e.express(parent.bracket(sub.embedding[a], sub.embedding[b]));
			if (!br)
				throw AssertionFailure("sub-DGLA is not closed under the bracket at (" + g.name(a) + "," + g.name(b) +
				                       ")");
			g.set_bracket(a, b, *br);
		}
	}
	sub.algebra = std::move(g);
	return sub;
}

/// Degree-zero truncation: everything of negative degree, the cycles of
/// degree zero, nothing of positive degree.
inline SubDGLA truncate_at_zero(const FDGLA& g)
{
	std::vector<BasisElement> basis;
	std::vector<LieVector> vectors;
	std::vector<std::size_t> zero;
	for (std::size_t i = 0; i < g.dim(); ++i) {
		if (g.degree(i) < 0) {
			basis.push_back(g.basis()[i]);
			vectors.push_back(unit_vector(i));
		}
		else if (g.degree(i) == 0) {
			zero.push_back(i);
		}
	}
	// kernel of d restricted to degree 0
	std::vector<std::size_t> targets;
	for (std::size_t i = 0; i < g.dim(); ++i)
		if (g.degree(i) == 1)
			targets.push_back(i);
	std::map<std::size_t, std::size_t> row_of;
	for (std::size_t r = 0; r < targets.size(); ++r)
		row_of.emplace(targets[r], r);
	SparseMatrix d0(targets.size(), zero.size());
	for (std::size_t c = 0; c < zero.size(); ++c)
		for (const auto& [k, v] : g.d_basis(zero[c]))
			d0.set(row_of.at(k), c, v);
	std::set<std::string> taken;
	for (const auto& b : g.basis())
		taken.insert(b.name);
	std::size_t fresh = 0;
	for (const auto& kv : kernel_basis(d0).vectors) {
		LieVector v;
		for (const auto& [c, x] : kv)
			v.emplace(zero[c], x);
		std::string name;
		if (v.size() == 1 && v.begin()->second == 1) {
			name = g.name(v.begin()->first);
		}
		else {
			do
				name = "k" + std::to_string(fresh++);
			while (taken.count(name));
			taken.insert(name);
		}
		basis.push_back({name, 0});
		vectors.push_back(std::move(v));
	}
	return sub_dgla(g, std::move(basis), std::move(vectors), false);
}

} // namespace mcprod
