#pragma once

// Chevalley-Eilenberg cochains of a nonpositively graded DGLA L.
//
// A cochain is stored as a polynomial in dual generators t_l of degree
// 1 - |l|, i.e. an element of the free CDGA on the shifted dual. The
// coefficient c_I of a normal-form monomial t_{l_1}...t_{l_k} relates to the
// multilinear values by
//
//   eta(l_1, ..., l_k) = (-1)^{sum p + sigma} (prod m_j!) c_I
//
// where p_r = 1 - |l_r| (mod 2), sigma = sum_{r<s} p_r p_s and m_j are the
// multiplicities. The differential is the derivation Q with
//
//   Q t_k = - sum_i (-1)^{|t_i|} D_{ki} t_i - 1/2 sum_{i,j} (-1)^{|l_i||t_j|} c_{ij}^k t_i t_j,
//
// D being the matrix of d_L and c the structure constants. With these
// conventions, evaluation against a Maurer-Cartan element is a chain map.

#include "tensor.hpp"

#include <functional>
#include <span>

namespace mcprod {

struct LieCochain {
	Element poly;

	bool is_zero() const { return poly.is_zero(); }
	bool operator==(const LieCochain&) const = default;
	friend LieCochain operator+(LieCochain a, const LieCochain& b) { return {a.poly + b.poly}; }
	friend LieCochain operator-(LieCochain a, const LieCochain& b) { return {a.poly - b.poly}; }
	friend LieCochain operator*(const Rational& s, LieCochain a) { return {s * a.poly}; }
};

class ChevalleyEilenberg {
public:
	static constexpr int kTruncation = 4096;

	explicit ChevalleyEilenberg(FDGLA lie) : L_(std::move(lie))
	{
		if (L_.auxiliary() || !L_.nonpositive())
			throw InputError("Chevalley-Eilenberg cochains need a nonpositively graded algebra");
		std::vector<Generator> gens;
		for (std::size_t i = 0; i < L_.dim(); ++i)
			gens.push_back({"^" + L_.name(i), 1 - L_.degree(i)});
		std::map<std::string, Expression> q;
		for (std::size_t k = 0; k < L_.dim(); ++k) {
			Expression e;
			for (std::size_t i = 0; i < L_.dim(); ++i) {
				auto it = L_.d_basis(i).find(k);
				if (it != L_.d_basis(i).end())
					e.push_back({Rational(-sign_of(1 - L_.degree(i))) * it->second, {gens[i].name}});
			}
			for (std::size_t i = 0; i < L_.dim(); ++i) {
				for (std::size_t j = 0; j < L_.dim(); ++j) {
					auto it = L_.bracket_basis(i, j).find(k);
					if (it == L_.bracket_basis(i, j).end())
						continue;
					Rational c = make_rational(-1, 2) * sign_of(L_.degree(i) * (1 - L_.degree(j))) * it->second;
					e.push_back({c, {gens[i].name, gens[j].name}});
				}
			}
			if (!e.empty())
				q.emplace(gens[k].name, std::move(e));
		}
		algebra_ = FreeCDGA(gens, q, kTruncation);
		generator_of_.resize(L_.dim());
		basis_of_.resize(L_.dim());
		for (std::size_t i = 0; i < L_.dim(); ++i) {
			generator_of_[i] = algebra_.index_of(gens[i].name);
			basis_of_[static_cast<std::size_t>(generator_of_[i])] = i;
		}
	}

	const FDGLA& lie() const { return L_; }
	const FreeCDGA& algebra() const { return algebra_; }

	/// Cochain degree sum (1 - |l_i|) when homogeneous.
	std::optional<int> degree_of(const LieCochain& eta) const { return algebra_.degree_of(eta.poly); }

	LieCochain dual(std::size_t i) const { return {Element::monomial({generator_of_.at(i)})}; }
	LieCochain constant(const Rational& c) const { return {c * Element::one()}; }

	LieCochain differential(const LieCochain& eta) const { return {algebra_.differential(eta.poly)}; }

	LieCochain arity_part(const LieCochain& eta, std::size_t k) const
	{
		Element out;
		for (const auto& [m, c] : eta.poly.terms())
			if (m.size() == k)
				out.add_term(m, c);
		return {out};
	}

	std::vector<std::size_t> arities(const LieCochain& eta) const
	{
		std::set<std::size_t> s;
		for (const auto& [m, c] : eta.poly.terms())
			s.insert(m.size());
		return {s.begin(), s.end()};
	}

	/// Multilinear value on basis elements (indices into the DGLA basis).
	Rational value(const LieCochain& eta, std::span<const std::size_t> args) const
	{
		Monomial m;
		for (auto l : args)
			m.push_back(generator_of_.at(l));
		int s = algebra_.normalize(m);
		if (s == 0)
			return Rational(0);
		Rational c = eta.poly.coefficient(m);
		if (c == 0)
			return c;
		return s * conversion(m) * c;
	}

	/// The k-cochain whose value on basis tuples is f. f is sampled on one
	/// ordering per multiset; the caller guarantees graded symmetry.
	LieCochain from_function(std::size_t k, const std::function<Rational(std::span<const std::size_t>)>& f) const
	{
		Element out;
		Monomial m;
		enumerate(0, k, m, [&](const Monomial& mono) {
			std::vector<std::size_t> args;
			for (int g : mono)
				args.push_back(basis_of_[static_cast<std::size_t>(g)]);
			Rational v = f(args);
			if (v != 0)
				out.add_term(mono, v / conversion(mono));
		});
		return {out};
	}

	/// eta(Y_1, ..., Y_k) for elements of A ⊗ L, with the sign
	/// eps = |eta| sum |a_r| + sum_{r>s} |a_r| (|l_s| + 1).
	Element evaluate(const LieCochain& eta, const TensorAlgebra& T, const std::vector<TensorElement>& args) const
	{
		check_host(T);
		const auto& A = T.algebra();
		const auto part = arity_part(eta, args.size());
		Element out;
		if (part.is_zero())
			return out;
		if (args.empty())
			return part.poly.coefficient({}) * Element::one();
		std::vector<std::vector<std::pair<std::size_t, Element>>> expanded(args.size());
		for (std::size_t r = 0; r < args.size(); ++r)
			for (const auto& [l, a] : args[r].terms())
				for (const auto& [mono, c] : a.terms())
					expanded[r].emplace_back(l, Element::monomial(mono, c));
		std::vector<std::size_t> choice(args.size(), 0), ls(args.size());
		std::vector<int> adeg(args.size());
		for (const auto& e : expanded)
			if (e.empty())
				return out;
		while (true) {
			int eta_deg = 0, sum_a = 0, eps = 0;
			for (std::size_t r = 0; r < args.size(); ++r) {
				const auto& [l, a] = expanded[r][choice[r]];
				ls[r] = l;
				adeg[r] = A.degree(a.terms().begin()->first);
				eta_deg += L_.degree(l) + 1;
				sum_a += adeg[r];
			}
			Rational v = value(part, ls);
			if (v != 0) {
				for (std::size_t r = 0; r < args.size(); ++r)
					for (std::size_t s = 0; s < r; ++s)
						eps += adeg[r] * (L_.degree(ls[s]) + 1);
				eps += eta_deg * sum_a;
				Element prod = expanded[0][choice[0]].second;
				for (std::size_t r = 1; r < args.size() && !prod.is_zero(); ++r)
					prod = A.multiply(prod, expanded[r][choice[r]].second);
				out += (sign_of(eps) * v) * prod;
			}
			std::size_t r = 0;
			while (r < args.size() && ++choice[r] == expanded[r].size())
				choice[r++] = 0;
			if (r == args.size())
				break;
		}
		return out;
	}

	/// gamma_mu(eta) = sum_k 1/k! eta_k(mu, ..., mu)
	Element characteristic(const LieCochain& eta, const TensorAlgebra& T, const TensorElement& mu) const
	{
		Element out;
		Rational factorial(1);
		for (auto k : arities(eta)) {
			factorial = 1;
			for (std::size_t i = 2; i <= k; ++i)
				factorial *= static_cast<long>(i);
			out += (1 / factorial) * evaluate(eta, T, std::vector<TensorElement>(k, mu));
		}
		return out;
	}

	/// The algebra map t_l -> a_l induced by mu = sum a_l ⊗ l; agrees with
	/// characteristic() and serves as an independent evaluation path.
	Element substitute(const LieCochain& eta, const TensorAlgebra& T, const TensorElement& mu) const
	{
		check_host(T);
		const auto& A = T.algebra();
		Element out;
		for (const auto& [m, c] : eta.poly.terms()) {
			Element prod = Element::one();
			for (int g : m)
				prod = A.multiply(prod, mu.component(basis_of_[static_cast<std::size_t>(g)]));
			out += c * prod;
		}
		return out;
	}

	/// H(eta) = sum_k 1/(k-1)! int_0^1 eta_k(X, mu_t, ..., mu_t) dt with
	/// mu_t = (exp tX)·mu0 expanded as a polynomial in t.
	Element homotopy(const LieCochain& eta, const TensorAlgebra& T, const TensorElement& X, const TensorElement& mu0) const
	{
		auto coeffs = gauge_path(T, X, mu0);
		Element out;
		for (auto k : arities(eta)) {
			if (k == 0)
				continue;
			Rational factorial(1);
			for (std::size_t i = 2; i < k; ++i)
				factorial *= static_cast<long>(i);
			std::vector<std::size_t> js(k - 1, 0);
			while (true) {
				std::size_t total = 0;
				std::vector<TensorElement> args{X};
				for (auto j : js) {
					total += j;
					args.push_back(coeffs[j]);
				}
				Element v = evaluate(eta, T, args);
				out += (1 / (factorial * static_cast<long>(total + 1))) * v;
				std::size_t r = 0;
				while (r < js.size() && ++js[r] == coeffs.size())
					js[r++] = 0;
				if (r == js.size())
					break;
			}
		}
		return out;
	}

	/// Coefficients M_j of mu_t = sum_j t^j M_j.
	std::vector<TensorElement> gauge_path(const TensorAlgebra& T, const TensorElement& X, const TensorElement& mu0) const
	{
		std::vector<TensorElement> coeffs{mu0};
		TensorElement term = T.differential(X) + T.bracket(mu0, X);
		Rational factorial(1);
		for (int j = 1; !term.is_zero(); ++j) {
			if (j > static_cast<int>(L_.dim()) + T.algebra().truncation() + 2)
				throw NotNilpotent("gauge path does not terminate");
			factorial *= j;
			coeffs.push_back(Rational(-1) / factorial * term);
			term = T.bracket(X, term);
		}
		return coeffs;
	}

	std::string format(const LieCochain& eta) const { return algebra_.format(eta.poly); }

private:
	void check_host(const TensorAlgebra& T) const
	{
		if (T.lie().dim() != L_.dim())
			throw InputError("cochain and tensor algebra use different Lie algebras");
	}

	/// (-1)^{sum p + sigma} prod m_j! for a normal-form monomial.
	Rational conversion(const Monomial& m) const
	{
		int odd = 0;
		Rational mult(1);
		std::size_t run = 0;
		for (std::size_t i = 0; i < m.size(); ++i) {
			if (algebra_.generators()[static_cast<std::size_t>(m[i])].odd())
				++odd;
			run = (i > 0 && m[i] == m[i - 1]) ? run + 1 : 1;
			mult *= static_cast<long>(run);
		}
		int sigma = odd * (odd - 1) / 2;
		return sign_of(odd + sigma) * mult;
	}

	void enumerate(std::size_t start, std::size_t remaining, Monomial& current,
	               const std::function<void(const Monomial&)>& visit) const
	{
		if (remaining == 0) {
			visit(current);
			return;
		}
		for (std::size_t g = start; g < algebra_.generators().size(); ++g) {
			current.push_back(static_cast<int>(g));
			enumerate(algebra_.generators()[g].odd() ? g + 1 : g, remaining - 1, current, visit);
			current.pop_back();
		}
	}

	FDGLA L_;
	FreeCDGA algebra_;
	std::vector<int> generator_of_;
	std::vector<std::size_t> basis_of_;
};

/// The cochain (omega_2, omega_1) classifying the central extension, scaled
/// so that its characteristic class against a defining system equals the
/// MC product of that system.
inline LieCochain extension_cocycle(const ChevalleyEilenberg& ce, const MCProductData& lambda)
{
	const auto& L = lambda.quotient;
	const auto& Lt = lambda.total;
	auto z_part = [&](const LieVector& v) -> Rational {
		auto it = v.find(lambda.center);
		return it == v.end() ? Rational(0) : it->second;
	};
	auto omega2 = ce.from_function(2, [&](std::span<const std::size_t> a) -> Rational {
		auto s1 = lambda.lift(unit_vector(a[0])), s2 = lambda.lift(unit_vector(a[1]));
		LieVector v = Lt.bracket(s1, s2);
		axpy(v, Rational(-1), lambda.lift(L.bracket_basis(a[0], a[1])));
		return sign_of(L.degree(a[0]) + 1) * z_part(v);
	});
	auto omega1 = ce.from_function(1, [&](std::span<const std::size_t> a) -> Rational {
		LieVector v = Lt.d(lambda.lift(unit_vector(a[0])));
		axpy(v, Rational(-1), lambda.lift(L.d_basis(a[0])));
		return z_part(v);
	});
	return omega2 + omega1;
}

inline ChevalleyEilenberg ce_complex(const MCProductData& lambda)
{
	return ChevalleyEilenberg(lambda.quotient);
}

inline LieCochain ce_differential(const ChevalleyEilenberg& ce, const LieCochain& eta)
{
	return ce.differential(eta);
}

} // namespace mcprod
