#pragma once

// Exact sparse linear algebra over the rationals.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcprod {

using Rational = mpq_class;
using Vector = std::vector<Rational>;
using SparseVector = std::map<std::size_t, Rational>;

inline Rational make_rational(long num, long den = 1)
{
	if (den == 0)
		throw std::invalid_argument("zero denominator");
	Rational r(num, den);
	r.canonicalize();
	return r;
}

inline std::string to_string(const Rational& r)
{
	return r.get_str();
}

// v += c * w
inline void axpy(SparseVector& v, const Rational& c, const SparseVector& w)
{
	if (c == 0)
		return;
	for (const auto& [i, x] : w) {
		auto it = v.find(i);
		if (it == v.end()) {
			v.emplace(i, c * x);
		}
		else {
			it->second += c * x;
			if (it->second == 0)
				v.erase(it);
		}
	}
}

inline SparseVector to_sparse(const Vector& v)
{
	SparseVector s;
	for (std::size_t i = 0; i < v.size(); ++i)
		if (v[i] != 0)
			s.emplace(i, v[i]);
	return s;
}

inline Vector to_dense(const SparseVector& s, std::size_t dim)
{
	Vector v(dim, Rational(0));
	for (const auto& [i, x] : s) {
		if (i >= dim)
			throw std::out_of_range("sparse index exceeds dimension");
		v[i] = x;
	}
	return v;
}

inline bool is_zero(const Vector& v)
{
	for (const auto& x : v)
		if (x != 0)
			return false;
	return true;
}

class SparseMatrix {
public:
	SparseMatrix() = default;
	SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

	static SparseMatrix identity(std::size_t n)
	{
		SparseMatrix m(n, n);
		for (std::size_t i = 0; i < n; ++i)
			m.set(i, i, Rational(1));
		return m;
	}

	static SparseMatrix from_rows(const std::vector<Vector>& rows)
	{
		std::size_t cols = rows.empty() ? 0 : rows.front().size();
		SparseMatrix m(rows.size(), cols);
		for (std::size_t r = 0; r < rows.size(); ++r) {
			if (rows[r].size() != cols)
				throw std::invalid_argument("ragged matrix rows");
			for (std::size_t c = 0; c < cols; ++c)
				m.set(r, c, rows[r][c]);
		}
		return m;
	}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }

	void set(std::size_t r, std::size_t c, const Rational& v)
	{
		check(r, c);
		if (v == 0)
			entries_.erase({r, c});
		else
			entries_[{r, c}] = v;
	}

	void add(std::size_t r, std::size_t c, const Rational& v)
	{
		check(r, c);
		if (v == 0)
			return;
		auto [it, inserted] = entries_.try_emplace({r, c}, v);
		if (!inserted) {
			it->second += v;
			if (it->second == 0)
				entries_.erase(it);
		}
	}

	Rational at(std::size_t r, std::size_t c) const
	{
		check(r, c);
		auto it = entries_.find({r, c});
		return it == entries_.end() ? Rational(0) : it->second;
	}

	const std::map<std::pair<std::size_t, std::size_t>, Rational>& entries() const { return entries_; }

	std::vector<SparseVector> row_vectors() const
	{
		std::vector<SparseVector> out(rows_);
		for (const auto& [rc, v] : entries_)
			out[rc.first].emplace(rc.second, v);
		return out;
	}

	std::vector<SparseVector> column_vectors() const
	{
		std::vector<SparseVector> out(cols_);
		for (const auto& [rc, v] : entries_)
			out[rc.second].emplace(rc.first, v);
		return out;
	}

	Vector apply(const Vector& x) const
	{
		if (x.size() != cols_)
			throw std::invalid_argument("dimension mismatch in matrix-vector product");
		Vector y(rows_, Rational(0));
		for (const auto& [rc, v] : entries_)
			y[rc.first] += v * x[rc.second];
		return y;
	}

	SparseVector apply(const SparseVector& x) const
	{
		SparseVector y;
		auto cols = column_vectors();
		for (const auto& [c, v] : x) {
			if (c >= cols_)
				throw std::invalid_argument("dimension mismatch in matrix-vector product");
			axpy(y, v, cols[c]);
		}
		return y;
	}

	SparseMatrix operator*(const SparseMatrix& o) const
	{
		if (cols_ != o.rows_)
			throw std::invalid_argument("dimension mismatch in matrix product");
		SparseMatrix out(rows_, o.cols_);
		auto orows = o.row_vectors();
		for (const auto& [rc, v] : entries_)
			for (const auto& [c, w] : orows[rc.second])
				out.add(rc.first, c, v * w);
		return out;
	}

	SparseMatrix transpose() const
	{
		SparseMatrix t(cols_, rows_);
		for (const auto& [rc, v] : entries_)
			t.entries_.emplace(std::make_pair(rc.second, rc.first), v);
		return t;
	}

	bool operator==(const SparseMatrix& o) const
	{
		return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
	}

private:
	void check(std::size_t r, std::size_t c) const
	{
		if (r >= rows_ || c >= cols_)
			throw std::out_of_range("matrix index out of range");
	}

	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::map<std::pair<std::size_t, std::size_t>, Rational> entries_;
};

struct SubspaceBasis {
	std::size_t ambient_dim = 0;
	std::vector<SparseVector> vectors;

	std::size_t dim() const { return vectors.size(); }
};

/// Incremental reduced row echelon form. Rows are kept fully reduced with a
/// unit entry in their pivot column, so the stored rows always form the RREF
/// of everything inserted so far. Optionally tracks, for each stored row, the
/// combination of inserted vectors that produced it.
class Echelon {
public:
	explicit Echelon(std::size_t dim, bool track = false) : dim_(dim), track_(track) {}

	std::size_t dim() const { return dim_; }
	std::size_t rank() const { return rows_.size(); }
	std::size_t inserted() const { return inserted_; }

	/// Reduces v modulo the span of the stored rows. When tracking, `combo`
	/// receives the coefficients c with v = remainder + sum c_i * input_i.
	SparseVector reduce(SparseVector v, SparseVector* combo = nullptr) const
	{
		std::vector<std::pair<std::size_t, Rational>> hits;
		for (const auto& [i, x] : v)
			if (rows_.count(i))
				hits.emplace_back(i, x);
		for (const auto& [p, x] : hits) {
			const auto& row = rows_.at(p);
			Rational c = -x;
			axpy(v, c, row.vec);
			if (combo)
				axpy(*combo, x, row.combo);
		}
		return v;
	}

	/// Inserts v; returns true when v was independent of the stored rows.
	bool insert(SparseVector v)
	{
		std::size_t index = inserted_++;
		SparseVector combo;
		if (track_) {
			SparseVector neg;
			v = reduce(std::move(v), &neg);
			combo.emplace(index, Rational(1));
			axpy(combo, Rational(-1), neg);
		}
		else {
			v = reduce(std::move(v));
		}
		if (v.empty()) {
			if (track_)
				dependencies_.push_back(std::move(combo));
			return false;
		}
		auto pivot = v.begin()->first;
		Rational inv = 1 / v.begin()->second;
		for (auto& [i, x] : v)
			x *= inv;
		for (auto& [i, x] : combo)
			x *= inv;
		for (auto& [p, row] : rows_) {
			auto it = row.vec.find(pivot);
			if (it == row.vec.end())
				continue;
			Rational c = -it->second;
			axpy(row.vec, c, v);
			if (track_)
				axpy(row.combo, c, combo);
		}
		rows_.emplace(pivot, Row{std::move(v), std::move(combo)});
		return true;
	}

	bool contains(const SparseVector& v) const { return reduce(v).empty(); }

	/// Expresses v as a combination of the inserted vectors (tracking mode).
	std::optional<SparseVector> express(const SparseVector& v) const
	{
		if (!track_)
			throw std::logic_error("Echelon::express requires tracking");
		SparseVector combo;
		auto rest = reduce(v, &combo);
		if (!rest.empty())
			return std::nullopt;
		return combo;
	}

	/// Relations among inserted vectors that reduced to zero (tracking mode).
	const std::vector<SparseVector>& dependencies() const { return dependencies_; }

	std::vector<std::size_t> pivots() const
	{
		std::vector<std::size_t> out;
		for (const auto& [p, row] : rows_)
			out.push_back(p);
		return out;
	}

	std::vector<SparseVector> basis() const
	{
		std::vector<SparseVector> out;
		for (const auto& [p, row] : rows_)
			out.push_back(row.vec);
		return out;
	}

	const SparseVector& pivot_row(std::size_t pivot) const { return rows_.at(pivot).vec; }

private:
	struct Row {
		SparseVector vec;
		SparseVector combo;
	};

	std::size_t dim_;
	bool track_;
	std::size_t inserted_ = 0;
	std::map<std::size_t, Row> rows_;
	std::vector<SparseVector> dependencies_;
};

inline Echelon rref(const SparseMatrix& m)
{
	Echelon e(m.cols());
	for (auto& row : m.row_vectors())
		e.insert(std::move(row));
	return e;
}

inline std::size_t rank(const SparseMatrix& m)
{
	return rref(m).rank();
}

/// Basis of {v : m v = 0}: one vector per non-pivot column f of the RREF,
/// with v_f = 1 and v_p = -R[p][f] on pivot columns.
inline SubspaceBasis kernel_basis(const SparseMatrix& m)
{
	auto e = rref(m);
	auto pivots = e.pivots();
	std::vector<bool> is_pivot(m.cols(), false);
	for (auto p : pivots)
		is_pivot[p] = true;
	SubspaceBasis out{m.cols(), {}};
	for (std::size_t f = 0; f < m.cols(); ++f) {
		if (is_pivot[f])
			continue;
		SparseVector v;
		v.emplace(f, Rational(1));
		for (auto p : pivots) {
			const auto& row = e.pivot_row(p);
			auto it = row.find(f);
			if (it != row.end())
				v.emplace(p, -it->second);
		}
		out.vectors.push_back(std::move(v));
	}
	return out;
}

/// RREF basis of the column space of m.
inline SubspaceBasis image_basis(const SparseMatrix& m)
{
	Echelon e(m.rows());
	for (auto& col : m.column_vectors())
		e.insert(std::move(col));
	return SubspaceBasis{m.rows(), e.basis()};
}

/// Solves m x = b. Free variables are zero; pivots follow the RREF of [m | b].
inline std::optional<Vector> solve(const SparseMatrix& m, const Vector& b)
{
	if (b.size() != m.rows())
		throw std::invalid_argument("solve: right-hand side has wrong dimension");
	Echelon e(m.cols() + 1);
	auto rows = m.row_vectors();
	for (std::size_t r = 0; r < rows.size(); ++r) {
		auto row = std::move(rows[r]);
		if (b[r] != 0)
			row.emplace(m.cols(), b[r]);
		e.insert(std::move(row));
	}
	Vector x(m.cols(), Rational(0));
	for (auto p : e.pivots()) {
		if (p == m.cols())
			return std::nullopt;
		const auto& row = e.pivot_row(p);
		auto it = row.find(m.cols());
		if (it != row.end())
			x[p] = it->second;
	}
	return x;
}

inline bool in_span(const SubspaceBasis& s, const SparseVector& v)
{
	Echelon e(s.ambient_dim);
	for (const auto& w : s.vectors)
		e.insert(w);
	return e.contains(v);
}

inline bool subspace_contains(const SubspaceBasis& big, const SubspaceBasis& small)
{
	Echelon e(big.ambient_dim);
	for (const auto& w : big.vectors)
		e.insert(w);
	for (const auto& v : small.vectors)
		if (!e.contains(v))
			return false;
	return true;
}

inline bool same_subspace(const SubspaceBasis& a, const SubspaceBasis& b)
{
	return a.ambient_dim == b.ambient_dim && subspace_contains(a, b) && subspace_contains(b, a);
}

inline std::size_t span_rank(const std::vector<SparseVector>& vs, std::size_t dim)
{
	Echelon e(dim);
	for (const auto& v : vs)
		e.insert(v);
	return e.rank();
}

/// Coordinates of vectors of `space` with respect to a fixed complement of
/// `sub` inside `space`. The complement is chosen greedily from the vectors
/// of `space` in order, after the vectors of `sub`.
class QuotientMap {
public:
	QuotientMap(const SubspaceBasis& space, const SubspaceBasis& sub)
		: echelon_(space.ambient_dim, true)
	{
		if (space.ambient_dim != sub.ambient_dim)
			throw std::invalid_argument("quotient: ambient dimensions differ");
		Echelon check(space.ambient_dim);
		for (const auto& v : space.vectors)
			check.insert(v);
		for (const auto& v : sub.vectors) {
			if (!check.contains(v))
				throw std::invalid_argument("quotient: sub is not contained in space");
			if (echelon_.insert(v))
				order_.push_back(kSub);
			else
				order_.push_back(kSkip);
		}
		for (const auto& v : space.vectors) {
			if (echelon_.insert(v)) {
				order_.push_back(complement_.size());
				complement_.push_back(v);
			}
			else {
				order_.push_back(kSkip);
			}
		}
	}

	std::size_t dim() const { return complement_.size(); }
	const std::vector<SparseVector>& complement() const { return complement_; }

	Vector coordinates(const SparseVector& v) const
	{
		auto combo = echelon_.express(v);
		if (!combo)
			throw std::invalid_argument("quotient: vector is not in the space");
		Vector out(complement_.size(), Rational(0));
		for (const auto& [i, c] : *combo) {
			auto slot = order_.at(i);
			if (slot != kSub && slot != kSkip)
				out[slot] = c;
		}
		return out;
	}

	bool in_space(const SparseVector& v) const { return echelon_.contains(v); }

private:
	static constexpr std::size_t kSub = static_cast<std::size_t>(-1);
	static constexpr std::size_t kSkip = static_cast<std::size_t>(-2);

	Echelon echelon_;
	std::vector<std::size_t> order_;
	std::vector<SparseVector> complement_;
};

inline Vector quotient_coordinates(const SubspaceBasis& space, const SubspaceBasis& sub, const Vector& v)
{
	if (v.size() != space.ambient_dim)
		throw std::invalid_argument("quotient: vector has wrong dimension");
	return QuotientMap(space, sub).coordinates(to_sparse(v));
}

} // namespace mcprod
