#pragma once

// Free graded-commutative algebras with a derivation differential, truncated
// above a fixed degree. Truncating is a quotient by a differential ideal, so
// every algebraic identity holds exactly; only cohomology in the top degree is
// incomplete, hence cohomology is served for degrees k <= N - 1.

#include "errors.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mcprod {

struct Generator {
	std::string name;
	int degree = 1;

	bool odd() const { return degree % 2 != 0; }
	bool operator==(const Generator&) const = default;
};

/// Sorted generator indices; the empty monomial is 1.
using Monomial = std::vector<int>;

/// Unnormalized symbolic expression: sum of coefficient * product of names.
struct Term {
	Rational coefficient{1};
	std::vector<std::string> factors;
};
using Expression = std::vector<Term>;

class Element {
public:
	using Terms = std::map<Monomial, Rational>;

	Element() = default;
	explicit Element(Terms terms) : terms_(std::move(terms))
	{
		std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
	}

	static Element one() { return Element(Terms{{Monomial{}, Rational(1)}}); }
	static Element monomial(Monomial m, Rational c = Rational(1)) { return Element(Terms{{std::move(m), std::move(c)}}); }

	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }

	Rational coefficient(const Monomial& m) const
	{
		auto it = terms_.find(m);
		return it == terms_.end() ? Rational(0) : it->second;
	}

	void add_term(const Monomial& m, const Rational& c)
	{
		if (c == 0)
			return;
		auto [it, inserted] = terms_.try_emplace(m, c);
		if (!inserted) {
			it->second += c;
			if (it->second == 0)
				terms_.erase(it);
		}
	}

	Element& operator+=(const Element& o)
	{
		for (const auto& [m, c] : o.terms_)
			add_term(m, c);
		return *this;
	}
	Element& operator-=(const Element& o)
	{
		for (const auto& [m, c] : o.terms_)
			add_term(m, -c);
		return *this;
	}
	Element& operator*=(const Rational& s)
	{
		if (s == 0)
			terms_.clear();
		for (auto& [m, c] : terms_)
			c *= s;
		return *this;
	}

	friend Element operator+(Element a, const Element& b) { return a += b; }
	friend Element operator-(Element a, const Element& b) { return a -= b; }
	friend Element operator-(Element a) { return a *= Rational(-1); }
	friend Element operator*(const Rational& s, Element a) { return a *= s; }
	bool operator==(const Element& o) const { return terms_ == o.terms_; }

private:
	Terms terms_;
};

struct CohomologyClass {
	int degree = 0;
	Element representative;
	Vector coordinates;

	bool is_zero() const { return mcprod::is_zero(coordinates); }
};

class FreeCDGA;

/// Cocycles, coboundaries and a chosen complement in one degree.
class CohomologyBasis {
public:
	int degree() const { return degree_; }
	std::size_t dim() const { return representatives_.size(); }
	const std::vector<Monomial>& monomials() const { return monomials_; }
	const std::vector<Element>& representatives() const { return representatives_; }
	const SubspaceBasis& cocycles() const { return cocycles_; }
	const SubspaceBasis& boundaries() const { return boundaries_; }

	std::vector<CohomologyClass> classes() const
	{
		std::vector<CohomologyClass> out;
		for (std::size_t i = 0; i < dim(); ++i) {
			Vector coords(dim(), Rational(0));
			coords[i] = 1;
			out.push_back({degree_, representatives_[i], std::move(coords)});
		}
		return out;
	}

	/// Coordinates of a cocycle; throws NotACocycle otherwise.
	Vector coordinates(const Element& z) const
	{
		auto v = vectorize(z);
		if (!quotient_->in_space(v))
			throw NotACocycle("element is not a cocycle in degree " + std::to_string(degree_));
		return quotient_->coordinates(v);
	}

	CohomologyClass classify(const Element& z) const { return {degree_, z, coordinates(z)}; }

	/// Cocycle with the given coordinates.
	Element lift(const Vector& coords) const
	{
		Element out;
		for (std::size_t i = 0; i < coords.size(); ++i)
			out += coords.at(i) * representatives_[i];
		return out;
	}

	SparseVector vectorize(const Element& z) const
	{
		SparseVector v;
		for (const auto& [m, c] : z.terms()) {
			auto it = index_.find(m);
			if (it == index_.end())
				throw InputError("element is not homogeneous of degree " + std::to_string(degree_));
			v.emplace(it->second, c);
		}
		return v;
	}

	Element elementize(const SparseVector& v) const
	{
		Element out;
		for (const auto& [i, c] : v)
			out.add_term(monomials_.at(i), c);
		return out;
	}

private:
	friend class FreeCDGA;

	int degree_ = 0;
	std::vector<Monomial> monomials_;
	std::map<Monomial, std::size_t> index_;
	SubspaceBasis cocycles_;
	SubspaceBasis boundaries_;
	std::shared_ptr<QuotientMap> quotient_;
	std::vector<Element> representatives_;
};

class FreeCDGA {
public:
	FreeCDGA() : FreeCDGA({}, {}, 1) {}

	FreeCDGA(std::vector<Generator> generators, const std::map<std::string, Expression>& differential, int truncation)
		: truncation_(truncation), cache_(std::make_shared<Cache>())
	{
		if (truncation < 1)
			throw InputError("truncation must be positive");
		std::set<std::string> seen;
		for (const auto& g : generators) {
			if (g.degree < 1)
				throw InputError("generator " + g.name + " must have positive degree");
			if (g.name.empty() || !seen.insert(g.name).second)
				throw InputError("duplicate or empty generator name '" + g.name + "'");
		}
		std::sort(generators.begin(), generators.end(), [](const Generator& a, const Generator& b) {
			return std::tie(a.degree, a.name) < std::tie(b.degree, b.name);
		});
		generators_ = std::move(generators);
		for (std::size_t i = 0; i < generators_.size(); ++i)
			index_.emplace(generators_[i].name, static_cast<int>(i));
		d_images_.resize(generators_.size());
		for (const auto& [name, expr] : differential)
			d_images_.at(static_cast<std::size_t>(index_of(name))) = element(expr);
	}

	const std::vector<Generator>& generators() const { return generators_; }
	int truncation() const { return truncation_; }
	const Element& d_image(int g) const { return d_images_.at(static_cast<std::size_t>(g)); }
	const Element& d_image(const std::string& name) const { return d_image(index_of(name)); }

	bool has_generator(const std::string& name) const { return index_.count(name) > 0; }

	int index_of(const std::string& name) const
	{
		auto it = index_.find(name);
		if (it == index_.end())
			throw InputError("unknown generator '" + name + "'");
		return it->second;
	}

	int degree(const Monomial& m) const
	{
		int d = 0;
		for (int g : m)
			d += generators_[static_cast<std::size_t>(g)].degree;
		return d;
	}

	/// Degree when x is nonzero and homogeneous.
	std::optional<int> degree_of(const Element& x) const
	{
		std::optional<int> d;
		for (const auto& [m, c] : x.terms()) {
			int dm = degree(m);
			if (d && *d != dm)
				return std::nullopt;
			d = dm;
		}
		return d;
	}

	/// Sorts factors into normal form. Returns the Koszul sign, or 0 when an
	/// odd generator repeats.
	int normalize(Monomial& factors) const
	{
		int sign = 1;
		for (std::size_t i = 1; i < factors.size(); ++i) {
			for (std::size_t j = i; j > 0 && factors[j - 1] > factors[j]; --j) {
				if (odd(factors[j - 1]) && odd(factors[j]))
					sign = -sign;
				std::swap(factors[j - 1], factors[j]);
			}
		}
		for (std::size_t i = 1; i < factors.size(); ++i)
			if (factors[i] == factors[i - 1] && odd(factors[i]))
				return 0;
		return sign;
	}

	Element element(const Expression& expr) const
	{
		Element out;
		for (const auto& t : expr) {
			Monomial m;
			for (const auto& f : t.factors)
				m.push_back(index_of(f));
			int s = normalize(m);
			if (s == 0 || degree(m) > truncation_)
				continue;
			out.add_term(m, s * t.coefficient);
		}
		return out;
	}

	Element generator(const std::string& name) const { return Element::monomial({index_of(name)}); }

	Expression to_expression(const Element& x) const
	{
		Expression out;
		for (const auto& [m, c] : x.terms()) {
			Term t{c, {}};
			for (int g : m)
				t.factors.push_back(generators_[static_cast<std::size_t>(g)].name);
			out.push_back(std::move(t));
		}
		return out;
	}

	/// Transports an element of `other` by generator names.
	Element import(const FreeCDGA& other, const Element& x) const { return element(other.to_expression(x)); }

	Element multiply(const Element& x, const Element& y) const
	{
		Element out;
		for (const auto& [m1, c1] : x.terms()) {
			int d1 = degree(m1);
			for (const auto& [m2, c2] : y.terms()) {
				if (d1 + degree(m2) > truncation_)
					continue;
				Monomial m = m1;
				m.insert(m.end(), m2.begin(), m2.end());
				int s = normalize(m);
				if (s != 0)
					out.add_term(m, s * c1 * c2);
			}
		}
		return out;
	}

	Element differential(const Element& x) const
	{
		Element out;
		for (const auto& [m, c] : x.terms()) {
			if (degree(m) + 1 > truncation_)
				continue;
			int prefix_degree = 0;
			for (std::size_t i = 0; i < m.size(); ++i) {
				const auto& dg = d_images_[static_cast<std::size_t>(m[i])];
				if (!dg.is_zero()) {
					Monomial prefix(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(i));
					Monomial suffix(m.begin() + static_cast<std::ptrdiff_t>(i) + 1, m.end());
					Element term = multiply(multiply(Element::monomial(prefix), dg), Element::monomial(suffix));
					Rational s = prefix_degree % 2 == 0 ? c : Rational(-c);
					out += s * term;
				}
				prefix_degree += generators_[static_cast<std::size_t>(m[i])].degree;
			}
		}
		return out;
	}

	/// All normal-form monomials of degree k, in lexicographic index order.
	const std::vector<Monomial>& monomial_basis(int k) const
	{
		if (k < 0 || k > truncation_)
			throw std::out_of_range("monomial_basis: degree " + std::to_string(k) + " outside 0.." +
			                        std::to_string(truncation_));
		std::lock_guard lock(cache_->mutex);
		auto it = cache_->bases.find(k);
		if (it != cache_->bases.end())
			return *it->second;
		auto basis = std::make_shared<std::vector<Monomial>>();
		Monomial current;
		enumerate(0, k, current, *basis);
		return *cache_->bases.emplace(k, std::move(basis)).first->second;
	}

	/// Matrix of d: A^k -> A^{k+1} in monomial bases.
	SparseMatrix differential_matrix(int k) const
	{
		const auto& src = monomial_basis(k);
		const auto& dst = monomial_basis(k + 1);
		std::map<Monomial, std::size_t> index;
		for (std::size_t i = 0; i < dst.size(); ++i)
			index.emplace(dst[i], i);
		SparseMatrix m(dst.size(), src.size());
		for (std::size_t j = 0; j < src.size(); ++j) {
			auto dx = differential(Element::monomial(src[j]));
			for (const auto& [mono, c] : dx.terms())
				m.set(index.at(mono), j, c);
		}
		return m;
	}

	int max_cohomology_degree() const { return truncation_ - 1; }

	const CohomologyBasis& cohomology_basis(int k) const
	{
		if (k < 0 || k > max_cohomology_degree())
			throw std::out_of_range("cohomology degree " + std::to_string(k) + " outside trustworthy range 0.." +
			                        std::to_string(max_cohomology_degree()));
		{
			std::lock_guard lock(cache_->mutex);
			auto it = cache_->cohomology.find(k);
			if (it != cache_->cohomology.end())
				return *it->second;
		}
		auto h = std::make_shared<CohomologyBasis>();
		h->degree_ = k;
		h->monomials_ = monomial_basis(k);
		for (std::size_t i = 0; i < h->monomials_.size(); ++i)
			h->index_.emplace(h->monomials_[i], i);
		h->cocycles_ = kernel_basis(differential_matrix(k));
		h->boundaries_ = k > 0 ? image_basis(differential_matrix(k - 1)) : SubspaceBasis{h->monomials_.size(), {}};
		h->quotient_ = std::make_shared<QuotientMap>(h->cocycles_, h->boundaries_);
		for (const auto& v : h->quotient_->complement())
			h->representatives_.push_back(h->elementize(v));
		std::lock_guard lock(cache_->mutex);
		return *cache_->cohomology.emplace(k, std::move(h)).first->second;
	}

	std::string format(const Element& x) const
	{
		if (x.is_zero())
			return "0";
		std::ostringstream os;
		bool first = true;
		for (const auto& [m, c] : x.terms()) {
			Rational mag = abs(c);
			if (first)
				os << (c < 0 ? "-" : "");
			else
				os << (c < 0 ? " - " : " + ");
			first = false;
			if (m.empty()) {
				os << mag.get_str();
				continue;
			}
			if (mag != 1)
				os << mag.get_str() << "*";
			for (std::size_t i = 0; i < m.size(); ++i)
				os << (i ? "*" : "") << generators_[static_cast<std::size_t>(m[i])].name;
		}
		return os.str();
	}

private:
	struct Cache {
		std::mutex mutex;
		std::map<int, std::shared_ptr<std::vector<Monomial>>> bases;
		std::map<int, std::shared_ptr<CohomologyBasis>> cohomology;
	};

	bool odd(int g) const { return generators_[static_cast<std::size_t>(g)].odd(); }

	void enumerate(std::size_t start, int remaining, Monomial& current, std::vector<Monomial>& out) const
	{
		if (remaining == 0) {
			out.push_back(current);
			return;
		}
		for (std::size_t i = start; i < generators_.size(); ++i) {
			int d = generators_[i].degree;
			if (d > remaining)
				break;
			current.push_back(static_cast<int>(i));
			enumerate(generators_[i].odd() ? i + 1 : i, remaining - d, current, out);
			current.pop_back();
		}
	}

	std::vector<Generator> generators_;
	std::map<std::string, int> index_;
	std::vector<Element> d_images_;
	int truncation_;
	std::shared_ptr<Cache> cache_;
};

inline Element multiply(const FreeCDGA& a, const Element& x, const Element& y)
{
	return a.multiply(x, y);
}

inline Element differential(const FreeCDGA& a, const Element& x)
{
	return a.differential(x);
}

inline const std::vector<Monomial>& monomial_basis(int k, const FreeCDGA& a)
{
	return a.monomial_basis(k);
}

inline std::vector<CohomologyClass> cohomology(const FreeCDGA& a, int k)
{
	return a.cohomology_basis(k).classes();
}

/// Class of a homogeneous cocycle of degree k.
inline CohomologyClass reduce_to_class(const FreeCDGA& a, const Element& z, int k)
{
	if (auto d = a.degree_of(z); d && *d != k)
		throw InputError("element has degree " + std::to_string(*d) + ", expected " + std::to_string(k));
	if (!z.is_zero() && !a.degree_of(z))
		throw InputError("element is not homogeneous");
	return a.cohomology_basis(k).classify(z);
}

inline CohomologyClass reduce_to_class(const FreeCDGA& a, const Element& z)
{
	auto d = a.degree_of(z);
	if (!d)
		throw InputError(z.is_zero() ? "degree of the zero element is ambiguous; pass it explicitly"
		                             : "element is not homogeneous");
	return reduce_to_class(a, z, *d);
}

/// Solves d(w) = target for w of degree k - 1 (target of degree k).
inline std::optional<Element> find_primitive(const FreeCDGA& a, const Element& target, int k)
{
	if (k == 0)
		return target.is_zero() ? std::optional<Element>(Element{}) : std::nullopt;
	const auto& dst = a.monomial_basis(k);
	std::map<Monomial, std::size_t> index;
	for (std::size_t i = 0; i < dst.size(); ++i)
		index.emplace(dst[i], i);
	Vector b(dst.size(), Rational(0));
	for (const auto& [m, c] : target.terms()) {
		auto it = index.find(m);
		if (it == index.end())
			throw InputError("find_primitive: target is not homogeneous of degree " + std::to_string(k));
		b[it->second] = c;
	}
	auto x = solve(a.differential_matrix(k - 1), b);
	if (!x)
		return std::nullopt;
	const auto& src = a.monomial_basis(k - 1);
	Element w;
	for (std::size_t j = 0; j < x->size(); ++j)
		w.add_term(src[j], (*x)[j]);
	return w;
}

inline bool is_exact(const FreeCDGA& a, const Element& z, int k)
{
	return find_primitive(a, z, k).has_value();
}

/// True iff the class lies in the span of products of positive-degree classes.
inline bool is_decomposable(const FreeCDGA& a, const CohomologyClass& cls)
{
	if (cls.is_zero())
		return true;
	int k = cls.degree;
	const auto& h = a.cohomology_basis(k);
	std::vector<SparseVector> products;
	for (int p = 1; 2 * p <= k; ++p) {
		const auto& left = a.cohomology_basis(p).representatives();
		const auto& right = a.cohomology_basis(k - p).representatives();
		for (const auto& x : left)
			for (const auto& y : right)
				products.push_back(to_sparse(h.coordinates(a.multiply(x, y))));
	}
	Echelon e(h.dim());
	for (auto& v : products)
		e.insert(std::move(v));
	return e.contains(to_sparse(cls.coordinates));
}

inline ValidationReport validate_cdga(const FreeCDGA& a)
{
	ValidationReport report;
	for (std::size_t i = 0; i < a.generators().size(); ++i) {
		const auto& g = a.generators()[i];
		const auto& dg = a.d_image(static_cast<int>(i));
		for (const auto& [m, c] : dg.terms()) {
			if (a.degree(m) != g.degree + 1) {
				report.fail("d(" + g.name + ") has a term of degree " + std::to_string(a.degree(m)) + ", expected " +
				            std::to_string(g.degree + 1));
				break;
			}
		}
		auto dd = a.differential(dg);
		if (!dd.is_zero())
			report.fail("d(d(" + g.name + ")) = " + a.format(dd) + " is not zero");
	}
	return report;
}

} // namespace mcprod
