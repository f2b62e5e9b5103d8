#pragma once

// The tensor DGLA A ⊗ L of a CDGA with a finite-dimensional DGLA:
//   [b1⊗w1, b2⊗w2] = (-1)^{|w1||b2|} (b1 b2)⊗[w1,w2]
//   d(b⊗w)         = (d b)⊗w + (-1)^{|b|} b⊗(d w)

#include "cdga.hpp"
#include "dgla.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace mcprod {

/// Sum of a_l ⊗ l over basis elements l of the DGLA.
class TensorElement {
public:
	using Terms = std::map<std::size_t, Element>;

	TensorElement() = default;
	explicit TensorElement(Terms terms) : terms_(std::move(terms))
	{
		std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
	}

	static TensorElement single(const Element& a, std::size_t l)
	{
		TensorElement t;
		t.add(l, a);
		return t;
	}

	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	Element component(std::size_t l) const
	{
		auto it = terms_.find(l);
		return it == terms_.end() ? Element{} : it->second;
	}

	void add(std::size_t l, const Element& a)
	{
		if (a.is_zero())
			return;
		auto [it, inserted] = terms_.try_emplace(l, a);
		if (!inserted) {
			it->second += a;
			if (it->second.is_zero())
				terms_.erase(it);
		}
	}

	TensorElement& operator+=(const TensorElement& o)
	{
		for (const auto& [l, a] : o.terms_)
			add(l, a);
		return *this;
	}
	TensorElement& operator-=(const TensorElement& o)
	{
		for (const auto& [l, a] : o.terms_)
			add(l, -a);
		return *this;
	}
	TensorElement& operator*=(const Rational& s)
	{
		if (s == 0)
			terms_.clear();
		for (auto& [l, a] : terms_)
			a *= s;
		return *this;
	}

	friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
	friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
	friend TensorElement operator-(TensorElement a) { return a *= Rational(-1); }
	friend TensorElement operator*(const Rational& s, TensorElement a) { return a *= s; }
	bool operator==(const TensorElement& o) const { return terms_ == o.terms_; }

private:
	Terms terms_;
};

/// Applies a linear map on the Lie factor; `map` has one column per basis
/// element of the source DGLA.
inline TensorElement map_lie(const TensorElement& t, const SparseMatrix& map)
{
	auto cols = map.column_vectors();
	TensorElement out;
	for (const auto& [l, a] : t.terms())
		for (const auto& [k, c] : cols.at(l))
			out.add(k, c * a);
	return out;
}

inline TensorElement map_lie(const TensorElement& t, const std::function<LieVector(std::size_t)>& image)
{
	TensorElement out;
	for (const auto& [l, a] : t.terms())
		for (const auto& [k, c] : image(l))
			out.add(k, c * a);
	return out;
}

inline int sign_of(int parity_product)
{
	return parity_product % 2 == 0 ? 1 : -1;
}

class TensorAlgebra {
public:
	TensorAlgebra(FreeCDGA algebra, FDGLA lie)
		: A_(std::move(algebra)), L_(std::move(lie)), nilpotent_(is_nilpotent(L_))
	{
	}

	const FreeCDGA& algebra() const { return A_; }
	const FDGLA& lie() const { return L_; }

	TensorElement element(std::initializer_list<std::pair<Element, std::string>> terms) const
	{
		TensorElement t;
		for (const auto& [a, name] : terms)
			t.add(L_.index_of(name), a);
		return t;
	}

	/// Total degree when t is nonzero and homogeneous.
	std::optional<int> degree_of(const TensorElement& t) const
	{
		std::optional<int> d;
		for (const auto& [l, a] : t.terms()) {
			for (const auto& [m, c] : a.terms()) {
				int dm = A_.degree(m) + L_.degree(l);
				if (d && *d != dm)
					return std::nullopt;
				d = dm;
			}
		}
		return d;
	}

	bool has_degree(const TensorElement& t, int k) const
	{
		if (t.is_zero())
			return true;
		auto d = degree_of(t);
		return d && *d == k;
	}

	/// All A-components have positive degree.
	bool in_positive_part(const TensorElement& t) const
	{
		for (const auto& [l, a] : t.terms())
			for (const auto& [m, c] : a.terms())
				if (m.empty())
					return false;
		return true;
	}

	TensorElement bracket(const TensorElement& x, const TensorElement& y) const
	{
		TensorElement out;
		for (const auto& [l1, a1] : x.terms()) {
			for (const auto& [l2, a2] : y.terms()) {
				const auto& br = L_.bracket_basis(l1, l2);
				if (br.empty())
					continue;
				Element prod;
				for (const auto& [m2, c2] : a2.terms()) {
					Element piece = A_.multiply(a1, Element::monomial(m2, c2));
					prod += Rational(sign_of(L_.degree(l1) * A_.degree(m2))) * piece;
				}
				if (prod.is_zero())
					continue;
				for (const auto& [k, c] : br)
					out.add(k, c * prod);
			}
		}
		return out;
	}

	TensorElement differential(const TensorElement& x) const
	{
		TensorElement out;
		for (const auto& [l, a] : x.terms()) {
			out.add(l, A_.differential(a));
			const auto& dl = L_.d_basis(l);
			if (dl.empty())
				continue;
			Element signed_a;
			for (const auto& [m, c] : a.terms())
				signed_a.add_term(m, sign_of(A_.degree(m)) * c);
			for (const auto& [k, c] : dl)
				out.add(k, c * signed_a);
		}
		return out;
	}

	/// F(t) = dt + 1/2 [t, t] for t of total degree 1.
	TensorElement curvature(const TensorElement& t) const
	{
		if (!has_degree(t, 1))
			throw InputError("curvature needs an element of total degree 1");
		return differential(t) + make_rational(1, 2) * bracket(t, t);
	}

	bool is_mc(const TensorElement& t) const { return curvature(t).is_zero(); }

	TensorElement ad_power(const TensorElement& X, TensorElement y, int i) const
	{
		for (int k = 0; k < i && !y.is_zero(); ++k)
			y = bracket(X, y);
		return y;
	}

	/// e^{ad X}(y) = sum_i (ad X)^i(y) / i!
	TensorElement exp_ad(const TensorElement& X, const TensorElement& y) const
	{
		TensorElement out, term = y;
		Rational factorial(1);
		for (int i = 0; !term.is_zero(); ++i) {
			check_series(i);
			if (i > 0)
				factorial *= i;
			out += (1 / factorial) * term;
			term = bracket(X, term);
		}
		return out;
	}

	/// (exp X)·t = t - sum_i (ad X)^i/(i+1)! (dX + [t, X])
	TensorElement gauge_action(const TensorElement& X, const TensorElement& t) const
	{
		if (!has_degree(X, 0))
			throw InputError("gauge parameter must have total degree 0");
		if (!has_degree(t, 1))
			throw InputError("gauge action needs an element of total degree 1");
		TensorElement out = t;
		TensorElement term = differential(X) + bracket(t, X);
		Rational factorial(1);
		for (int i = 0; !term.is_zero(); ++i) {
			check_series(i);
			factorial *= (i + 1);
			out -= (1 / factorial) * term;
			term = bracket(X, term);
		}
		return out;
	}

	/// Transports the algebra factor into another CDGA by generator names.
	TensorElement import(const FreeCDGA& source, const TensorElement& t) const
	{
		TensorElement out;
		for (const auto& [l, a] : t.terms())
			out.add(l, A_.import(source, a));
		return out;
	}

	/// a·t, multiplying on the left in the algebra factor.
	TensorElement left_multiply(const Element& a, const TensorElement& t) const
	{
		TensorElement out;
		for (const auto& [l, b] : t.terms())
			out.add(l, A_.multiply(a, b));
		return out;
	}

	std::string format(const TensorElement& t) const
	{
		if (t.is_zero())
			return "0";
		std::string out;
		bool first = true;
		for (const auto& [l, a] : t.terms()) {
			if (!first)
				out += " + ";
			first = false;
			out += "(" + A_.format(a) + ")⊗" + L_.name(l);
		}
		return out;
	}

private:
	void check_series(int i) const
	{
		if (!nilpotent_)
			throw NotNilpotent("exponential series needs a nilpotent host algebra");
		if (i > static_cast<int>(L_.dim()) + A_.truncation() + 2)
			throw NotNilpotent("exponential series does not terminate");
	}

	FreeCDGA A_;
	FDGLA L_;
	bool nilpotent_;
};

} // namespace mcprod
