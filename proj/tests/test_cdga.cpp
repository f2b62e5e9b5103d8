#include "support.hpp"

#include <gtest/gtest.h>

using namespace mcprod;
using support::element;
using support::heisenberg;

TEST(Multiply, Unit)
{
	auto A = heisenberg();
	auto x = element(A, {{2, {"a", "c"}}, {-1, {"b"}}});
	EXPECT_EQ(A.multiply(Element::one(), x), x);
}

TEST(Multiply, OddSquare)
{
	auto A = heisenberg();
	EXPECT_TRUE(A.multiply(A.generator("a"), A.generator("a")).is_zero());
}

TEST(Multiply, KoszulTransposition)
{
	auto A = heisenberg();
	EXPECT_EQ(A.multiply(A.generator("b"), A.generator("a")), -element(A, {{1, {"a", "b"}}}));
}

TEST(Multiply, TruncationDropsHighDegrees)
{
	FreeCDGA A({{"u", 2}}, {}, 5);
	auto u2 = A.multiply(A.generator("u"), A.generator("u"));
	EXPECT_FALSE(u2.is_zero());
	EXPECT_TRUE(A.multiply(u2, A.generator("u")).is_zero());
}

TEST(Differential, Unit)
{
	EXPECT_TRUE(heisenberg().differential(Element::one()).is_zero());
}

TEST(Differential, Heisenberg)
{
	auto A = heisenberg();
	EXPECT_EQ(A.differential(A.generator("c")), element(A, {{1, {"a", "b"}}}));
	EXPECT_TRUE(A.differential(element(A, {{1, {"a", "c"}}})).is_zero());
}

TEST(MonomialBasis, Examples)
{
	auto A = heisenberg();
	EXPECT_EQ(A.monomial_basis(0), std::vector<Monomial>{Monomial{}});
	std::vector<std::string> names;
	for (const auto& m : A.monomial_basis(2))
		names.push_back(A.format(Element::monomial(m)));
	EXPECT_EQ(names, (std::vector<std::string>{"a*b", "a*c", "b*c"}));
	FreeCDGA U({{"u", 2}}, {}, 6);
	ASSERT_EQ(U.monomial_basis(6).size(), 1u);
	EXPECT_EQ(U.format(Element::monomial(U.monomial_basis(6)[0])), "u*u*u");
	EXPECT_THROW(A.monomial_basis(7), std::out_of_range);
}

TEST(Cohomology, Heisenberg)
{
	auto A = heisenberg();
	EXPECT_EQ(cohomology(A, 0).size(), 1u);
	EXPECT_EQ(cohomology(A, 1).size(), 2u);
	auto h2 = cohomology(A, 2);
	EXPECT_EQ(h2.size(), 2u);
	EXPECT_EQ(cohomology(A, 3).size(), 1u);
	EXPECT_TRUE(reduce_to_class(A, element(A, {{1, {"a", "b"}}})).is_zero());
	EXPECT_FALSE(reduce_to_class(A, element(A, {{1, {"a", "c"}}})).is_zero());
	EXPECT_FALSE(reduce_to_class(A, element(A, {{1, {"b", "c"}}})).is_zero());
	EXPECT_THROW(cohomology(A, 6), std::out_of_range);
}

TEST(Cohomology, ContractiblePair)
{
	FreeCDGA A({{"u", 2}, {"x", 1}}, {{"x", support::expr({{1, {"u"}}})}}, 6);
	EXPECT_EQ(cohomology(A, 2).size(), 0u);
	EXPECT_EQ(cohomology(A, 1).size(), 0u);
}

TEST(ReduceToClass, Errors)
{
	auto A = heisenberg();
	EXPECT_TRUE(reduce_to_class(A, Element{}, 2).is_zero());
	EXPECT_THROW(reduce_to_class(A, A.generator("c")), NotACocycle);
}

TEST(Decomposable, Examples)
{
	auto A = heisenberg();
	EXPECT_TRUE(is_decomposable(A, reduce_to_class(A, Element{}, 2)));
	EXPECT_FALSE(is_decomposable(A, reduce_to_class(A, element(A, {{1, {"a", "c"}}}))));
	FreeCDGA U({{"u", 2}}, {}, 6);
	EXPECT_TRUE(is_decomposable(U, reduce_to_class(U, element(U, {{1, {"u", "u"}}}))));
	EXPECT_FALSE(is_decomposable(U, reduce_to_class(U, U.generator("u"))));
}

TEST(Validate, Examples)
{
	EXPECT_TRUE(validate_cdga(heisenberg()).ok());
	FreeCDGA bad({{"a", 1}, {"c", 1}}, {{"c", support::expr({{1, {"a"}}})}}, 4);
	EXPECT_FALSE(validate_cdga(bad).ok());
	FreeCDGA loop({{"u", 2}, {"y", 2}}, {{"y", support::expr({{1, {"u"}}})}, {"u", support::expr({{1, {"y"}}})}}, 4);
	EXPECT_FALSE(validate_cdga(loop).ok());
}

TEST(Validate, RejectsBadGenerators)
{
	EXPECT_THROW(FreeCDGA({{"a", 0}}, {}, 3), InputError);
	EXPECT_THROW(FreeCDGA({{"a", 1}, {"a", 1}}, {}, 3), InputError);
	EXPECT_THROW(FreeCDGA({{"a", 1}}, {{"b", {}}}, 3), InputError);
}

namespace {

std::vector<FreeCDGA> sample_algebras(int N)
{
	using support::expr;
	std::vector<FreeCDGA> out;
	out.push_back(heisenberg(N));
	// Lambda(a, u, b, x): |a|=|u|=2, |b|=|x|=3, db = a^2, dx = a*u
	out.emplace_back(std::vector<Generator>{{"a", 2}, {"b", 3}, {"u", 2}, {"x", 3}},
	                 std::map<std::string, Expression>{{"x", expr({{1, {"a", "u"}}})},
	                                                   {"b", expr({{1, {"a", "a"}}})}},
	                 N);
	// free model of a 4-dimensional nilmanifold
	out.emplace_back(std::vector<Generator>{{"x1", 1}, {"x2", 1}, {"x3", 1}, {"x4", 1}},
	                 std::map<std::string, Expression>{{"x3", expr({{1, {"x1", "x2"}}})},
	                                                   {"x4", expr({{1, {"x1", "x3"}}})}},
	                 N);
	return out;
}

}

TEST(CdgaProperties, CommutativityLeibnizAssociativity)
{
	std::mt19937 rng(314159);
	const int N = 7;
	for (const auto& A : sample_algebras(N)) {
		ASSERT_TRUE(validate_cdga(A).ok());
		for (int trial = 0; trial < 40; ++trial) {
			std::uniform_int_distribution<int> deg(0, 3);
			int p = deg(rng), q = deg(rng), r = deg(rng);
			auto x = support::random_element(A, p, rng);
			auto y = support::random_element(A, q, rng);
			auto z = support::random_element(A, r, rng);
			int sign = (p * q) % 2 ? -1 : 1;
			EXPECT_EQ(A.multiply(x, y), Rational(sign) * A.multiply(y, x));
			auto lhs = A.differential(A.multiply(x, y));
			auto rhs = A.multiply(A.differential(x), y) + Rational(p % 2 ? -1 : 1) * A.multiply(x, A.differential(y));
			if (p + q + 1 <= N) {
				EXPECT_EQ(lhs, rhs);
			}
			if (p + q + r <= N) {
				EXPECT_EQ(A.multiply(A.multiply(x, y), z), A.multiply(x, A.multiply(y, z)));
			}
		}
	}
}

TEST(CdgaProperties, DSquaredOnFullBasis)
{
	const int N = 7;
	for (const auto& A : sample_algebras(N))
		for (int k = 0; k + 2 <= N; ++k)
			for (const auto& m : A.monomial_basis(k))
				EXPECT_TRUE(A.differential(A.differential(Element::monomial(m))).is_zero());
}

TEST(CdgaProperties, CohomologyIndependentOfNaming)
{
	using support::expr;
	FreeCDGA A({{"a", 1}, {"b", 1}, {"c", 1}}, {{"c", expr({{1, {"a", "b"}}})}}, 6);
	FreeCDGA B({{"z", 1}, {"y", 1}, {"x", 1}}, {{"x", expr({{1, {"z", "y"}}})}}, 6);
	for (int k = 0; k <= 5; ++k)
		EXPECT_EQ(cohomology(A, k).size(), cohomology(B, k).size());
	auto M = sample_algebras(7)[2];
	FreeCDGA P({{"p4", 1}, {"p3", 1}, {"p2", 1}, {"p1", 1}},
	           {{"p3", expr({{1, {"p1", "p2"}}})}, {"p4", expr({{1, {"p1", "p3"}}})}}, 7);
	for (int k = 0; k <= 6; ++k)
		EXPECT_EQ(cohomology(M, k).size(), cohomology(P, k).size());
}

TEST(CdgaProperties, ClassesAreConsistent)
{
	auto A = heisenberg(6);
	std::mt19937 rng(5);
	for (int k = 1; k <= 5; ++k) {
		const auto& h = A.cohomology_basis(k);
		for (const auto& cls : h.classes()) {
			EXPECT_TRUE(A.differential(cls.representative).is_zero());
			EXPECT_EQ(h.coordinates(cls.representative), cls.coordinates);
		}
		// adding a coboundary does not change the class
		for (int t = 0; t < 5; ++t) {
			auto w = support::random_element(A, k - 1, rng);
			for (const auto& cls : h.classes())
				EXPECT_EQ(h.coordinates(cls.representative + A.differential(w)), cls.coordinates);
		}
	}
}
