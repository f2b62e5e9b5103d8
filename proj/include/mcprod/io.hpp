#pragma once

// Text formats. Expressions follow
//   expr     := term (('+' | '-') term)*
//   term     := [rational '*'] name ('*' name)* | rational
//   rational := int ['/' int]
// Files are line oriented, "key: value", with '#' comments:
//   model:  truncation: N / generators: a:1 b:1 / differential: c = a*b
//   dgla:   basis: e1:0 e2:0 / bracket: [e1,e2] = b1_2 / differential: x = y
//           center: b1_2 / q: 0
//   system: NAME = EXPR (one line per Lie basis element)

#include "tensor.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>

namespace mcprod {

class ParseError : public InputError {
public:
	ParseError(const std::string& msg, std::size_t line, std::size_t column)
		: InputError(where(line, column) + msg), line_(line), column_(column)
	{
	}
	std::size_t line() const { return line_; }
	std::size_t column() const { return column_; }

private:
	static std::string where(std::size_t line, std::size_t column)
	{
		std::string s;
		if (line)
			s += "line " + std::to_string(line) + ", ";
		return s + "column " + std::to_string(column) + ": ";
	}
	std::size_t line_, column_;
};

namespace detail {

inline bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class ExpressionParser {
public:
	using NameCheck = std::function<bool(const std::string&)>;

	ExpressionParser(std::string_view src, std::size_t line, std::size_t offset, NameCheck known)
		: src_(src), line_(line), offset_(offset), known_(std::move(known))
	{
	}

	Expression parse()
	{
		Expression out;
		skip();
		if (pos_ == src_.size())
			fail("empty expression");
		bool first = true;
		while (true) {
			skip();
			Rational sign(1);
			if (peek() == '+' || peek() == '-') {
				sign = peek() == '-' ? -1 : 1;
				++pos_;
				skip();
			}
			else if (!first) {
				fail("expected '+' or '-'");
			}
			first = false;
			Term t = term();
			t.coefficient *= sign;
			out.push_back(std::move(t));
			skip();
			if (pos_ == src_.size())
				break;
		}
		return out;
	}

private:
	Term term()
	{
		Term t;
		if (std::isdigit(static_cast<unsigned char>(peek()))) {
			t.coefficient = rational();
			skip();
			if (peek() != '*')
				return t;
			++pos_;
			skip();
		}
		t.factors.push_back(name());
		skip();
		while (peek() == '*') {
			++pos_;
			skip();
			t.factors.push_back(name());
			skip();
		}
		return t;
	}

	Rational rational()
	{
		auto num = digits();
		skip();
		if (peek() != '/')
			return Rational(mpz_class(num));
		std::size_t at = pos_;
		++pos_;
		skip();
		if (!std::isdigit(static_cast<unsigned char>(peek())))
			fail("malformed rational: expected a denominator");
		mpz_class den(digits());
		if (den == 0)
			fail("zero denominator", at);
		Rational r(mpz_class(num), den);
		r.canonicalize();
		return r;
	}

	std::string digits()
	{
		std::size_t start = pos_;
		while (std::isdigit(static_cast<unsigned char>(peek())))
			++pos_;
		if (name_start(peek()))
			fail("malformed rational");
		return std::string(src_.substr(start, pos_ - start));
	}

	std::string name()
	{
		std::size_t start = pos_;
		if (!name_start(peek()))
			fail(pos_ == src_.size() ? "unexpected end of expression" : std::string("unexpected '") + peek() + "'");
		while (name_char(peek()))
			++pos_;
		std::string n(src_.substr(start, pos_ - start));
		if (known_ && !known_(n))
			fail("unknown generator '" + n + "'", start);
		return n;
	}

	char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

	void skip()
	{
		while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
			++pos_;
	}

	[[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }
	[[noreturn]] void fail(const std::string& msg, std::size_t at) const
	{
		throw ParseError(msg, line_, offset_ + at + 1);
	}

	std::string_view src_;
	std::size_t line_, offset_, pos_ = 0;
	NameCheck known_;
};

inline std::string_view trim(std::string_view s)
{
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
		s.remove_prefix(1);
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
		s.remove_suffix(1);
	return s;
}

/// A non-empty, non-comment line with its 1-based number and the column
/// offset of `text` inside it.
struct Line {
	std::size_t number;
	std::string_view text;
	std::size_t offset;
};

inline std::vector<Line> lines(std::string_view src)
{
	std::vector<Line> out;
	std::size_t number = 0, start = 0;
	while (start <= src.size()) {
		std::size_t end = src.find('\n', start);
		if (end == std::string_view::npos)
			end = src.size();
		++number;
		std::string_view line = src.substr(start, end - start);
		if (auto hash = line.find('#'); hash != std::string_view::npos)
			line = line.substr(0, hash);
		std::size_t lead = 0;
		while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead])))
			++lead;
		auto body = trim(line);
		if (!body.empty())
			out.push_back({number, body, lead});
		if (end == src.size())
			break;
		start = end + 1;
	}
	return out;
}

/// Splits "key: value"; the value keeps its column offset.
inline std::pair<std::string, Line> key_value(const Line& l)
{
	auto colon = l.text.find(':');
	if (colon == std::string_view::npos)
		throw ParseError("expected 'key: value'", l.number, l.offset + 1);
	std::string key(trim(l.text.substr(0, colon)));
	std::size_t vstart = colon + 1;
	while (vstart < l.text.size() && std::isspace(static_cast<unsigned char>(l.text[vstart])))
		++vstart;
	return {key, Line{l.number, l.text.substr(vstart), l.offset + vstart}};
}

/// Splits "lhs = rhs" at the first '='.
inline std::pair<Line, Line> equation(const Line& l)
{
	auto eq = l.text.find('=');
	if (eq == std::string_view::npos)
		throw ParseError("expected 'lhs = rhs'", l.number, l.offset + 1);
	auto lhs = trim(l.text.substr(0, eq));
	std::size_t rstart = eq + 1;
	while (rstart < l.text.size() && std::isspace(static_cast<unsigned char>(l.text[rstart])))
		++rstart;
	return {Line{l.number, lhs, l.offset}, Line{l.number, l.text.substr(rstart), l.offset + rstart}};
}

inline int parse_int(const Line& l)
{
	std::string s(l.text);
	std::size_t used = 0;
	try {
		int v = std::stoi(s, &used);
		if (used == s.size())
			return v;
	}
	catch (const std::exception&) {
	}
	throw ParseError("expected an integer, got '" + s + "'", l.number, l.offset + 1);
}

/// "name:degree name:degree ..."
inline std::vector<std::pair<std::string, int>> parse_degrees(const Line& l)
{
	std::vector<std::pair<std::string, int>> out;
	std::size_t i = 0;
	const auto& s = l.text;
	while (i < s.size()) {
		while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
			++i;
		if (i == s.size())
			break;
		std::size_t start = i;
		while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
			++i;
		std::string_view item = s.substr(start, i - start);
		auto colon = item.find(':');
		if (colon == std::string_view::npos || colon == 0)
			throw ParseError("expected 'name:degree'", l.number, l.offset + start + 1);
		std::string nm(item.substr(0, colon));
		for (std::size_t k = 0; k < nm.size(); ++k)
			if (!(k == 0 ? name_start(nm[k]) : name_char(nm[k])))
				throw ParseError("invalid name '" + nm + "'", l.number, l.offset + start + 1);
		out.emplace_back(nm, parse_int(Line{l.number, item.substr(colon + 1), l.offset + start + colon + 1}));
	}
	return out;
}

inline std::string read_file(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw InputError("cannot open '" + path + "'");
	std::ostringstream os;
	os << in.rdbuf();
	return os.str();
}

} // namespace detail

inline Expression parse_expression(std::string_view src, const std::function<bool(const std::string&)>& known = {},
                                   std::size_t line = 0, std::size_t offset = 0)
{
	auto e = detail::ExpressionParser(src, line, offset, known).parse();
	// a lone "0" is the empty expression
	std::erase_if(e, [](const Term& t) { return t.coefficient == 0; });
	return e;
}

inline Element parse_element(std::string_view src, const FreeCDGA& A, std::size_t line = 0, std::size_t offset = 0)
{
	auto known = [&](const std::string& n) { return A.has_generator(n); };
	return A.element(parse_expression(src, known, line, offset));
}

inline LieVector parse_lie_vector(std::string_view src, const FDGLA& L, std::size_t line = 0, std::size_t offset = 0)
{
	auto known = [&](const std::string& n) { return L.has(n); };
	LieVector out;
	for (const auto& t : parse_expression(src, known, line, offset)) {
		if (t.factors.size() != 1)
			throw ParseError("Lie expressions are linear: each term needs exactly one basis element", line, offset + 1);
		axpy(out, t.coefficient, unit_vector(L.index_of(t.factors.front())));
	}
	return out;
}

// ---------------------------------------------------------------------------
// Model files

inline FreeCDGA parse_model(std::string_view text)
{
	std::optional<int> truncation;
	std::vector<Generator> gens;
	std::vector<std::pair<std::string, detail::Line>> diffs;
	for (const auto& l : detail::lines(text)) {
		auto [key, value] = detail::key_value(l);
		if (key == "truncation") {
			truncation = detail::parse_int(value);
		}
		else if (key == "generators") {
			for (const auto& [n, d] : detail::parse_degrees(value))
				gens.push_back({n, d});
		}
		else if (key == "differential") {
			auto [lhs, rhs] = detail::equation(value);
			diffs.emplace_back(std::string(lhs.text), rhs);
		}
		else {
			throw ParseError("unknown key '" + key + "'", l.number, l.offset + 1);
		}
	}
	if (!truncation)
		throw ParseError("missing 'truncation:'", 0, 1);
	// build once without differentials to resolve names, then with them
	FreeCDGA names(gens, {}, *truncation);
	std::map<std::string, Expression> d;
	for (const auto& [g, rhs] : diffs) {
		if (!names.has_generator(g))
			throw ParseError("differential of unknown generator '" + g + "'", rhs.number, 1);
		if (d.count(g))
			throw ParseError("duplicate differential for '" + g + "'", rhs.number, 1);
		auto known = [&](const std::string& n) { return names.has_generator(n); };
		d.emplace(g, parse_expression(rhs.text, known, rhs.number, rhs.offset));
	}
	return FreeCDGA(gens, d, *truncation);
}

inline FreeCDGA read_model(const std::string& path)
{
	return parse_model(detail::read_file(path));
}

inline std::string format_model(const FreeCDGA& A)
{
	std::ostringstream os;
	os << "truncation: " << A.truncation() << "\n";
	os << "generators:";
	for (const auto& g : A.generators())
		os << " " << g.name << ":" << g.degree;
	os << "\n";
	for (const auto& g : A.generators())
		if (!A.d_image(g.name).is_zero())
			os << "differential: " << g.name << " = " << A.format(A.d_image(g.name)) << "\n";
	return os.str();
}

// ---------------------------------------------------------------------------
// DGLA files

/// The total algebra and the index of its center, without validation.
inline std::pair<FDGLA, std::size_t> parse_dgla_algebra(std::string_view text)
{
	std::vector<BasisElement> basis;
	std::vector<std::pair<detail::Line, detail::Line>> brackets, diffs;
	std::optional<detail::Line> center, q;
	for (const auto& l : detail::lines(text)) {
		auto [key, value] = detail::key_value(l);
		if (key == "basis") {
			for (const auto& [n, d] : detail::parse_degrees(value))
				basis.push_back({n, d});
		}
		else if (key == "bracket") {
			brackets.push_back(detail::equation(value));
		}
		else if (key == "differential") {
			diffs.push_back(detail::equation(value));
		}
		else if (key == "center") {
			center = value;
		}
		else if (key == "q") {
			q = value;
		}
		else {
			throw ParseError("unknown key '" + key + "'", l.number, l.offset + 1);
		}
	}
	if (!center)
		throw ParseError("missing 'center:'", 0, 1);
	FDGLA L(basis);
	auto lookup = [&](std::string_view name, const detail::Line& where) {
		std::string n(detail::trim(name));
		if (!L.has(n))
			throw ParseError("unknown basis element '" + n + "'", where.number, where.offset + 1);
		return L.index_of(n);
	};
	std::set<std::pair<std::size_t, std::size_t>> seen;
	for (const auto& [lhs, rhs] : brackets) {
		auto s = lhs.text;
		if (s.size() < 2 || s.front() != '[' || s.back() != ']' || s.find(',') == std::string_view::npos)
			throw ParseError("expected '[x,y]'", lhs.number, lhs.offset + 1);
		auto comma = s.find(',');
		auto i = lookup(s.substr(1, comma - 1), lhs);
		auto j = lookup(s.substr(comma + 1, s.size() - comma - 2), lhs);
		if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
			throw ParseError("bracket given twice", lhs.number, lhs.offset + 1);
		auto v = parse_lie_vector(rhs.text, L, rhs.number, rhs.offset);
		if (i <= j)
			L.set_bracket(i, j, v);
		else {
			// [y,x] = v means [x,y] = -(-1)^{|x||y|} v
			LieVector w;
			axpy(w, Rational(-koszul(L.degree(i), L.degree(j))), v);
			L.set_bracket(j, i, w);
		}
	}
	for (const auto& [lhs, rhs] : diffs)
		L.set_differential(lookup(lhs.text, lhs), parse_lie_vector(rhs.text, L, rhs.number, rhs.offset));
	auto z = lookup(center->text, *center);
	if (q && detail::parse_int(*q) != L.degree(z))
		throw ParseError("q does not match the degree of the center", q->number, q->offset + 1);
	return {L, z};
}

inline MCProductData parse_dgla(std::string_view text)
{
	auto [L, z] = parse_dgla_algebra(text);
	if (auto r = validate_dgla(L); !r.ok())
		throw InputError("DGLA file: " + r.violations.front());
	auto data = central_quotient(L, z);
	if (auto r = validate_mc_data(data); !r.ok())
		throw InputError("DGLA file: " + r.violations.front());
	return data;
}

inline MCProductData read_dgla(const std::string& path)
{
	return parse_dgla(detail::read_file(path));
}

inline std::string format_dgla(const MCProductData& data)
{
	const auto& L = data.total;
	std::ostringstream os;
	os << "basis:";
	for (const auto& b : L.basis())
		os << " " << b.name << ":" << b.degree;
	os << "\n";
	for (std::size_t i = 0; i < L.dim(); ++i)
		for (std::size_t j = i; j < L.dim(); ++j)
			if (!L.bracket_basis(i, j).empty())
				os << "bracket: [" << L.name(i) << "," << L.name(j) << "] = " << L.format(L.bracket_basis(i, j)) << "\n";
	for (std::size_t i = 0; i < L.dim(); ++i)
		if (!L.d_basis(i).empty())
			os << "differential: " << L.name(i) << " = " << L.format(L.d_basis(i)) << "\n";
	os << "center: " << L.name(data.center) << "\n";
	os << "q: " << data.q << "\n";
	return os.str();
}

// ---------------------------------------------------------------------------
// Defining systems

inline TensorElement parse_system(std::string_view text, const FreeCDGA& A, const FDGLA& L)
{
	TensorElement out;
	std::set<std::string> seen;
	for (const auto& l : detail::lines(text)) {
		auto [lhs, rhs] = detail::equation(l);
		std::string n(lhs.text);
		if (!L.has(n))
			throw ParseError("unknown basis element '" + n + "'", lhs.number, lhs.offset + 1);
		if (!seen.insert(n).second)
			throw ParseError("component '" + n + "' given twice", lhs.number, lhs.offset + 1);
		out.add(L.index_of(n), parse_element(rhs.text, A, rhs.number, rhs.offset));
	}
	return out;
}

inline TensorElement read_system(const std::string& path, const FreeCDGA& A, const FDGLA& L)
{
	return parse_system(detail::read_file(path), A, L);
}

inline std::string format_system(const FreeCDGA& A, const FDGLA& L, const TensorElement& t)
{
	std::ostringstream os;
	for (const auto& [l, a] : t.terms())
		os << L.name(l) << " = " << A.format(a) << "\n";
	return os.str();
}

}
