#pragma once

#include <mcprod/cdga.hpp>

#include <random>
#include <string>
#include <vector>

namespace support {

inline mcprod::Expression expr(std::initializer_list<std::pair<long, std::vector<std::string>>> terms)
{
	mcprod::Expression e;
	for (const auto& [c, f] : terms)
		e.push_back({mcprod::Rational(c), f});
	return e;
}

/// Lambda(a, b, c), all of degree 1, dc = ab.
inline mcprod::FreeCDGA heisenberg(int truncation = 6)
{
	return mcprod::FreeCDGA({{"a", 1}, {"b", 1}, {"c", 1}}, {{"c", expr({{1, {"a", "b"}}})}}, truncation);
}

inline mcprod::Element element(const mcprod::FreeCDGA& A, std::initializer_list<std::pair<long, std::vector<std::string>>> terms)
{
	return A.element(expr(terms));
}

/// Random homogeneous element of degree k with small integer coefficients.
inline mcprod::Element random_element(const mcprod::FreeCDGA& A, int k, std::mt19937& rng)
{
	mcprod::Element x;
	if (k < 0 || k > A.truncation())
		return x;
	std::uniform_int_distribution<int> coef(-3, 3);
	for (const auto& m : A.monomial_basis(k))
		x.add_term(m, mcprod::Rational(coef(rng)));
	return x;
}

}

#include <mcprod/tensor.hpp>

namespace support {

/// Random element of A+ ⊗ L of the given total degree.
inline mcprod::TensorElement random_tensor(const mcprod::TensorAlgebra& T, int total, std::mt19937& rng, int density = 2)
{
	mcprod::TensorElement t;
	std::uniform_int_distribution<int> coin(0, density);
	for (std::size_t l = 0; l < T.lie().dim(); ++l) {
		int k = total - T.lie().degree(l);
		if (k < 1 || k > T.algebra().truncation() || coin(rng) == 0)
			continue;
		t.add(l, random_element(T.algebra(), k, rng));
	}
	return t;
}

/// Lambda(a, b, c, u): |a|=|b|=|c|=1, |u|=2, dc = ab.
inline mcprod::FreeCDGA heisenberg_u(int truncation = 7)
{
	return mcprod::FreeCDGA({{"a", 1}, {"b", 1}, {"c", 1}, {"u", 2}}, {{"c", expr({{1, {"a", "b"}}})}}, truncation);
}

/// A nilpotent DGLA with nonzero differential and bracket:
/// |x| = -1, |y| = 0, |w| = -1, |v| = -2, dx = y, [x, w] = v.
inline mcprod::FDGLA twisted_lie()
{
	mcprod::FDGLA L({{"x", -1}, {"y", 0}, {"w", -1}, {"v", -2}});
	L.set_differential(0, mcprod::unit_vector(1));
	L.set_bracket(0, 2, mcprod::unit_vector(3));
	return L;
}

/// Hosts used by the property tests.
inline std::vector<mcprod::TensorAlgebra> sample_hosts()
{
	using namespace mcprod;
	std::vector<TensorAlgebra> out;
	out.emplace_back(heisenberg_u(7), massey_data(3, {1, 1, 1}).quotient);
	out.emplace_back(heisenberg_u(7), massey_data(3, {2, 2, 1}).quotient);
	out.emplace_back(heisenberg_u(7), massey_data(3, {2, 1, 1}).total);
	out.emplace_back(heisenberg_u(7), twisted_lie());
	out.emplace_back(FreeCDGA({{"p", 1}, {"q", 2}, {"r", 3}}, {{"r", expr({{1, {"q", "q"}}})}}, 8),
	                 massey_data(4, {1, 2, 1, 1}).quotient);
	return out;
}

/// Sections s' = s + phi where phi sends the k-th degree-q quotient basis
/// element to (k * shift) z, for shift = 0, ..., count - 1.
inline std::vector<mcprod::MCProductData> alternative_sections(const mcprod::MCProductData& lam, int count)
{
	using namespace mcprod;
	std::vector<MCProductData> out;
	for (int shift = 0; shift < count; ++shift) {
		SparseMatrix s = lam.section;
		int k = 0;
		for (std::size_t l = 0; l < lam.quotient.dim(); ++l)
			if (lam.quotient.degree(l) == lam.q)
				s.add(lam.center, l, Rational(shift * (++k)));
		out.push_back(with_section(lam, s));
	}
	return out;
}

/// Random gauge parameter of total degree 0, including constant multiples
/// of the degree-0 basis elements.
inline mcprod::TensorElement random_gauge(const mcprod::TensorAlgebra& T, std::mt19937& rng)
{
	auto X = random_tensor(T, 0, rng, 6);
	std::uniform_int_distribution<int> small(-2, 2);
	for (std::size_t l = 0; l < T.lie().dim(); ++l)
		if (T.lie().degree(l) == 0)
			X.add(l, mcprod::Rational(small(rng)) * mcprod::Element::one());
	return X;
}

/// Random defining system for `lam` over an algebra with zero differential,
/// or nullopt when the sparse random choice is not Maurer-Cartan.
inline std::optional<mcprod::TensorElement> random_formal_system(const mcprod::FreeCDGA& B,
                                                                 const mcprod::MCProductData& lam, std::mt19937& rng)
{
	using namespace mcprod;
	TensorAlgebra T(B, lam.quotient);
	TensorElement sigma;
	std::uniform_int_distribution<int> pick(0, 1);
	for (std::size_t l = 0; l < lam.quotient.dim(); ++l) {
		int k = 1 - lam.quotient.degree(l);
		if (k > B.truncation())
			continue;
		Element sparse, dense = random_element(B, k, rng);
		for (const auto& [m, c] : dense.terms())
			if (pick(rng) == 0)
				sparse.add_term(m, c);
		sigma.add(l, sparse);
	}
	if (!T.is_mc(sigma))
		return std::nullopt;
	return sigma;
}

}
