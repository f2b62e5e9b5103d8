#include "support.hpp"

#include <mcprod/cochain.hpp>

#include <gtest/gtest.h>

using namespace mcprod;

TEST(CeDifferential, Constant)
{
	ChevalleyEilenberg ce(massey_data(3, {1, 1, 1}).quotient);
	EXPECT_TRUE(ce.differential(ce.constant(Rational(5))).is_zero());
}

TEST(CeDifferential, DualOfAbelian)
{
	FDGLA g({{"x", 0}, {"y", -1}});
	ChevalleyEilenberg ce(g);
	EXPECT_TRUE(ce.differential(ce.dual(0)).is_zero());
	EXPECT_TRUE(ce.differential(ce.dual(1)).is_zero());
}

TEST(CeDifferential, SquaresToZero)
{
	std::vector<FDGLA> algebras{massey_data(3, {1, 1, 1}).quotient, massey_data(4, {2, 1, 1, 3}).total,
	                            support::twisted_lie()};
	std::mt19937 rng(17);
	for (const auto& g : algebras) {
		ChevalleyEilenberg ce(g);
		EXPECT_TRUE(validate_cdga(ce.algebra()).ok());
		for (int k = 0; k <= 4; ++k) {
			LieCochain eta{support::random_element(ce.algebra(), k, rng)};
			EXPECT_TRUE(ce.differential(ce.differential(eta)).is_zero());
		}
	}
}

TEST(CeDifferential, LowDegreeFormulas)
{
	// for L = <x, y, z> abelian except [x, y] = z (degree 0), D z* = -z*([x,y]) x* y*
	FDGLA g({{"x", 0}, {"y", 0}, {"z", 0}});
	g.set_bracket(0, 1, unit_vector(2));
	ChevalleyEilenberg ce(g);
	auto dz = ce.differential(ce.dual(2));
	std::vector<std::size_t> xy{0, 1}, yx{1, 0};
	EXPECT_EQ(ce.value(dz, xy), Rational(1));
	EXPECT_EQ(ce.value(dz, yx), Rational(-1));
}

TEST(Cochain, ValueRoundTrip)
{
	auto g = massey_data(4, {2, 1, 1, 1}).quotient;
	ChevalleyEilenberg ce(g);
	std::mt19937 rng(4);
	for (int k = 1; k <= 3; ++k) {
		for (int deg = 1; deg <= 5; ++deg) {
			LieCochain eta{support::random_element(ce.algebra(), deg, rng)};
			eta = ce.arity_part(eta, static_cast<std::size_t>(k));
			auto rebuilt = ce.from_function(static_cast<std::size_t>(k), [&](std::span<const std::size_t> a) {
				return ce.value(eta, a);
			});
			EXPECT_EQ(rebuilt, eta);
		}
	}
}

TEST(Cochain, GradedSymmetry)
{
	auto g = massey_data(3, {2, 1, 2}).quotient;
	ChevalleyEilenberg ce(g);
	std::mt19937 rng(6);
	LieCochain eta{support::random_element(ce.algebra(), 3, rng)};
	eta = ce.arity_part(eta, 2);
	for (std::size_t i = 0; i < g.dim(); ++i)
		for (std::size_t j = 0; j < g.dim(); ++j) {
			std::vector<std::size_t> ij{i, j}, ji{j, i};
			int p = (g.degree(i) + 1) * (g.degree(j) + 1);
			EXPECT_EQ(ce.value(eta, ji), Rational(p % 2 ? -1 : 1) * ce.value(eta, ij));
		}
}

TEST(ExtensionCocycle, SplitExtensionIsZero)
{
	// L~ = L ⊕ Z as DGLAs: the default section is a morphism
	FDGLA total({{"x", 0}, {"y", -1}, {"w", -1}, {"z", -1}});
	total.set_bracket(0, 1, unit_vector(2));
	auto lam = central_quotient(total, 3);
	ASSERT_TRUE(validate_mc_data(lam).ok());
	ChevalleyEilenberg ce(lam.quotient);
	EXPECT_TRUE(extension_cocycle(ce, lam).is_zero());
}

TEST(ExtensionCocycle, CupProductData)
{
	auto lam = massey_data(2, {1, 1});
	ChevalleyEilenberg ce(lam.quotient);
	auto omega = extension_cocycle(ce, lam);
	std::vector<std::size_t> e12{lam.quotient.index_of("e1"), lam.quotient.index_of("e2")};
	EXPECT_EQ(ce.value(omega, e12), Rational(-1));
	EXPECT_TRUE(ce.arity_part(omega, 1).is_zero());
	EXPECT_EQ(ce.degree_of(omega), 2 - lam.q);
}

TEST(ExtensionCocycle, TripleSupport)
{
	auto lam = massey_data(3, {1, 1, 1});
	const auto& L = lam.quotient;
	ChevalleyEilenberg ce(L);
	auto omega = extension_cocycle(ce, lam);
	for (std::size_t i = 0; i < L.dim(); ++i)
		for (std::size_t j = 0; j < L.dim(); ++j) {
			std::vector<std::size_t> ij{i, j};
			bool adjacent = (L.name(i) == "e1" && L.name(j) == "b2_3") || (L.name(i) == "b2_3" && L.name(j) == "e1") ||
			                (L.name(i) == "b1_2" && L.name(j) == "e3") || (L.name(i) == "e3" && L.name(j) == "b1_2");
			EXPECT_EQ(ce.value(omega, ij) != 0, adjacent) << L.name(i) << "," << L.name(j);
		}
}

TEST(ExtensionCocycle, ClosedForAllData)
{
	std::vector<MCProductData> data;
	for (std::size_t n = 2; n <= 4; ++n)
		data.push_back(massey_data(n, std::vector<int>(n, 1)));
	data.push_back(massey_data(3, {2, 1, 1}));
	data.push_back(massey_data(4, {1, 3, 2, 1}));
	// a central extension with nonzero differential: L~ = <w, x, y, z>, dx = y, [x, w] = z
	FDGLA total({{"x", -1}, {"y", 0}, {"w", -1}, {"z", -2}});
	total.set_differential(0, unit_vector(1));
	total.set_bracket(0, 2, unit_vector(3));
	data.push_back(central_quotient(total, 3));
	for (const auto& lam : data) {
		ASSERT_TRUE(validate_mc_data(lam).ok());
		ChevalleyEilenberg ce(lam.quotient);
		auto omega = extension_cocycle(ce, lam);
		EXPECT_FALSE(omega.is_zero());
		EXPECT_TRUE(ce_differential(ce, omega).is_zero());
	}
}
