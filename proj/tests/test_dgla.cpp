#include <mcprod/dgla.hpp>

#include <gtest/gtest.h>

using namespace mcprod;

namespace {

FDGLA abelian(std::vector<int> degrees)
{
	std::vector<BasisElement> basis;
	for (std::size_t i = 0; i < degrees.size(); ++i)
		basis.push_back({"x" + std::to_string(i), degrees[i]});
	return FDGLA(basis);
}

/// z central of degree q, plus w of degree q-1 with d(w) = z.
MCProductData exact_center_data()
{
	FDGLA total({{"w", -1}, {"z", 0}});
	total.set_differential(0, unit_vector(1));
	return central_quotient(total, 1);
}

}

TEST(ValidateDgla, Abelian)
{
	EXPECT_TRUE(validate_dgla(abelian({0, -1, -2})).ok());
}

TEST(ValidateDgla, MasseyAlgebras)
{
	for (std::size_t n = 2; n <= 5; ++n) {
		std::vector<int> degs(n, 1);
		auto d = massey_data(n, degs);
		EXPECT_TRUE(validate_dgla(d.total).ok()) << n;
		EXPECT_TRUE(validate_dgla(d.quotient).ok()) << n;
	}
	auto mixed = massey_data(4, {2, 1, 3, 1});
	auto r = validate_dgla(mixed.total);
	EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
}

TEST(ValidateDgla, DegreeAdditivity)
{
	auto g = abelian({0, -1});
	g.set_bracket(0, 1, unit_vector(0));
	EXPECT_FALSE(validate_dgla(g).ok());
}

TEST(ValidateDgla, PositiveDegreeNeedsAuxiliaryFlag)
{
	auto g = abelian({1});
	EXPECT_FALSE(validate_dgla(g).ok());
	g.set_auxiliary(true);
	EXPECT_TRUE(validate_dgla(g).ok());
}

TEST(ValidateDgla, JacobiFailure)
{
	FDGLA g({{"x", 0}, {"y", 0}, {"z", 0}});
	g.set_bracket(0, 1, unit_vector(1));
	g.set_bracket(0, 2, unit_vector(2));
	EXPECT_TRUE(validate_dgla(g).ok());
	g.set_bracket(1, 2, unit_vector(0));
	EXPECT_FALSE(validate_dgla(g).ok());
}

TEST(LowerCentralSeries, Abelian)
{
	auto f = lower_central_series(abelian({0, 0}));
	ASSERT_EQ(f.length(), 2u);
	EXPECT_EQ(f.stages[0].dim(), 2u);
	EXPECT_EQ(f.stages[1].dim(), 0u);
}

TEST(LowerCentralSeries, MasseyQuotientLength)
{
	for (std::size_t n = 2; n <= 6; ++n) {
		auto d = massey_data(n, std::vector<int>(n, 1));
		EXPECT_EQ(lower_central_series(d.quotient).length(), n);
	}
	EXPECT_EQ(lower_central_series(massey_data(3, {1, 1, 1}).quotient).length(), 3u);
}

TEST(LowerCentralSeries, NotNilpotent)
{
	FDGLA g({{"x", 0}, {"y", 0}});
	g.set_bracket(0, 1, unit_vector(1));
	EXPECT_THROW(lower_central_series(g), NotNilpotent);
}

TEST(McData, MasseyTriple)
{
	auto d = massey_data(3, {1, 1, 1});
	EXPECT_TRUE(validate_mc_data(d).ok());
	EXPECT_EQ(d.q, 0);
	EXPECT_EQ(d.total.dim(), 6u);
	EXPECT_EQ(d.quotient.dim(), 5u);
}

TEST(McData, ExactCenterRejected)
{
	EXPECT_FALSE(validate_mc_data(exact_center_data()).ok());
}

TEST(McData, PositiveCenterRejected)
{
	FDGLA total({{"z", 1}});
	total.set_auxiliary(true);
	auto d = central_quotient(total, 0);
	EXPECT_FALSE(validate_mc_data(d).ok());
}

TEST(McData, NonCentralRejected)
{
	FDGLA total({{"x", 0}, {"z", 0}});
	total.set_bracket(0, 1, unit_vector(1));
	EXPECT_FALSE(validate_mc_data(central_quotient(total, 1)).ok());
}

TEST(MasseyData, CupProductShape)
{
	auto d = massey_data(2, {1, 1});
	ASSERT_EQ(d.total.dim(), 3u);
	auto e1 = d.total.index_of("e1"), e2 = d.total.index_of("e2");
	EXPECT_EQ(d.total.bracket_basis(e1, e2), unit_vector(d.center));
	EXPECT_EQ(d.total.bracket_basis(e2, e1), unit_vector(d.center, Rational(-1)));
	EXPECT_TRUE(d.quotient.bracket_basis(0, 1).empty());
}

TEST(MasseyData, DegreesAndQ)
{
	auto d = massey_data(3, {2, 1, 1});
	EXPECT_EQ(d.q, -1);
	EXPECT_EQ(2 - d.q, 3);
	EXPECT_EQ(d.total.degree(d.total.index_of("e1")), -1);
	EXPECT_THROW(massey_data(3, {1, 1}), InputError);
	EXPECT_THROW(massey_data(1, {1}), InputError);
}

TEST(MasseyData, NestedBrackets)
{
	for (std::size_t n = 2; n <= 5; ++n) {
		std::vector<int> degs;
		for (std::size_t i = 0; i < n; ++i)
			degs.push_back(1 + static_cast<int>(i % 3));
		auto d = massey_data(n, degs);
		const auto& L = d.total;
		for (std::size_t i = 1; i < n; ++i)
			for (std::size_t j = i + 1; j <= n; ++j)
				EXPECT_EQ(L.bracket(unit_vector(L.index_of(window_name(i, i))), unit_vector(L.index_of(window_name(i + 1, j)))),
				          unit_vector(L.index_of(window_name(i, j))));
		EXPECT_EQ(d.center, L.index_of(window_name(1, n)));
	}
}

TEST(NTilde, AbelianBrackets)
{
	FDGLA total({{"s", 0}, {"z", -1}});
	auto lam = central_quotient(total, 1);
	ASSERT_TRUE(validate_mc_data(lam).ok());
	auto N = build_N_tilde(lam, 1);
	EpsilonLayout lay{2};
	ASSERT_EQ(N.dim(), 5u);
	for (std::size_t i = 0; i < N.dim(); ++i)
		for (std::size_t j = 0; j < N.dim(); ++j) {
			bool eta_eps = (i == lay.eta() && lay.is_eps(j)) || (j == lay.eta() && lay.is_eps(i));
			EXPECT_EQ(N.bracket_basis(i, j).empty(), !eta_eps) << N.name(i) << "," << N.name(j);
		}
	EXPECT_EQ(N.bracket_basis(lay.eta(), lay.eps(0)), unit_vector(0));
	EXPECT_EQ(N.bracket_basis(lay.eta(), lay.eps(1)), unit_vector(1, Rational(-1)));
	EXPECT_TRUE(validate_dgla(N).ok());
}

TEST(NTilde, DimensionAndValidity)
{
	for (auto n : {1, 3}) {
		auto lam = massey_data(3, {2, 1, 1});
		auto N = build_N_tilde(lam, n);
		EXPECT_EQ(N.dim(), 2 * lam.total.dim() + 1);
		EXPECT_TRUE(N.auxiliary());
		auto r = validate_dgla(N);
		EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
	}
	EXPECT_THROW(build_N_tilde(massey_data(2, {1, 1}), 2), InputError);
}

TEST(Perturb, ZeroIsIdentity)
{
	auto lam = massey_data(3, {1, 1, 2});
	auto N = build_N_tilde(lam, 1);
	auto P = perturb_differential(N, {});
	for (std::size_t j = 0; j < N.dim(); ++j)
		EXPECT_EQ(P.d_basis(j), N.d_basis(j));
}

TEST(Perturb, EtaAndSquare)
{
	auto lam = massey_data(3, {1, 1, 1});
	auto N = build_N_tilde(lam, 1);
	EpsilonLayout lay{lam.total.dim()};
	auto l0i = lam.total.index_of("b1_2");
	auto P = perturb_differential(N, unit_vector(l0i));
	// [l0 eps, eta] = -(-1)^{(|l0|+1)(-1)} [eta, l0 eps] = (-1)^{|l0|} * (-1)^{|l0|} l0 = l0 for |l0| = -1
	EXPECT_EQ(P.d_basis(lay.eta()), unit_vector(l0i));
	auto r = validate_dgla(P);
	EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
}

TEST(Perturb, RejectsNonClosed)
{
	FDGLA total({{"w", -1}, {"v", 0}, {"z", -2}});
	total.set_differential(0, unit_vector(1));
	auto lam = central_quotient(total, 2);
	ASSERT_TRUE(validate_mc_data(lam).ok());
	auto N = build_N_tilde(lam, 1);
	EXPECT_THROW(perturb_differential(N, unit_vector(0)), AssertionFailure);
}

TEST(TruncateAtZero, NonpositiveZeroDifferential)
{
	auto g = massey_data(3, {1, 1, 1}).total;
	auto sub = truncate_at_zero(g);
	EXPECT_EQ(sub.algebra.dim(), g.dim());
	EXPECT_TRUE(validate_dgla(sub.algebra).ok());
}

TEST(TruncateAtZero, ExcludesNonClosedDegreeZero)
{
	FDGLA g({{"v", 0}, {"p", 1}, {"u", -1}}, true);
	g.set_differential(0, unit_vector(1));
	auto sub = truncate_at_zero(g);
	ASSERT_EQ(sub.algebra.dim(), 1u);
	EXPECT_EQ(sub.algebra.name(0), "u");
}

TEST(TruncateAtZero, CenterSurvives)
{
	auto lam = massey_data(3, {2, 1, 1});
	auto N = build_N_tilde(lam, 1);
	auto P = perturb_differential(N, {});
	auto M = truncate_at_zero(P);
	auto r = validate_dgla(M.algebra);
	EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front());
	auto z = M.restrict(unit_vector(lam.center));
	ASSERT_TRUE(z);
	ASSERT_EQ(z->size(), 1u);
	auto data = central_quotient(M.algebra, z->begin()->first);
	auto rep = validate_mc_data(data);
	EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front());
}
