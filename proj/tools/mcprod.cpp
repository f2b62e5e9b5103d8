// Command line front end. Every command builds a JSON report; `--json`
// prints it verbatim, otherwise it is rendered as indented text.

#include <mcprod/fibrations.hpp>
#include <mcprod/io.hpp>
#include <mcprod/products.hpp>

#include "acceptance/acceptance_suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using json = nlohmann::ordered_json;
using namespace mcprod;

namespace {

enum Exit { ok = 0, math_failure = 1, input_error = 2 };

struct Report {
	json body = json::object();
	int exit = ok;
};

json rational_list(const Vector& v)
{
	json out = json::array();
	for (const auto& r : v)
		out.push_back(to_string(r));
	return out;
}

json class_json(const FreeCDGA& A, const CohomologyClass& c)
{
	json legend = json::array();
	for (const auto& r : A.cohomology_basis(c.degree).representatives())
		legend.push_back(A.format(r));
	return {{"degree", c.degree},
	        {"zero", c.is_zero()},
	        {"coordinates", rational_list(c.coordinates)},
	        {"basis", legend},
	        {"representative", A.format(c.representative)}};
}

json system_json(const FreeCDGA& A, const FDGLA& L, const TensorElement& t)
{
	json out = json::object();
	for (const auto& [l, a] : t.terms())
		out[L.name(l)] = A.format(a);
	return out;
}

json lie_json(const FDGLA& L, const LieVector& v)
{
	json out = json::object();
	for (const auto& [i, c] : v)
		out[L.name(i)] = to_string(c);
	return out;
}

json subspace_json(const SubspaceBasis& s)
{
	json out = json::array();
	for (const auto& v : s.vectors)
		out.push_back(rational_list(to_dense(v, s.ambient_dim)));
	return out;
}

json fibration_json(const AlgebraicFibration& f)
{
	json gens = json::array();
	for (const auto& s : f.new_generators)
		gens.push_back({{"name", s.gen.name},
		                {"degree", s.gen.degree},
		                {"stage", s.stage},
		                {"differential", f.total.format(s.differential)}});
	return {{"spherical", f.spherical}, {"generators", gens}, {"total_model", format_model(f.total)}};
}

CohomologyClass parse_class(const std::string& src, const FreeCDGA& A)
{
	auto z = parse_element(src, A);
	if (z.is_zero())
		throw InputError("'" + src + "' is zero; its degree is ambiguous");
	return reduce_to_class(A, z);
}

bool is_dgla_file(const std::string& text)
{
	for (const auto& l : detail::lines(text))
		if (l.text.rfind("basis", 0) == 0)
			return true;
	return false;
}

// ---------------------------------------------------------------------------

Report cmd_validate(const std::string& path)
{
	Report r;
	auto text = detail::read_file(path);
	ValidationReport v;
	if (is_dgla_file(text)) {
		auto [L, z] = parse_dgla_algebra(text);
		v.merge(validate_dgla(L));
		if (v.ok())
			v.merge(validate_mc_data(central_quotient(L, z)));
		r.body = {{"kind", "dgla"}, {"dimension", L.dim()}, {"center", L.name(z)}, {"q", L.degree(z)}};
	}
	else {
		auto A = parse_model(text);
		v.merge(validate_cdga(A));
		r.body = {{"kind", "model"}, {"generators", A.generators().size()}, {"truncation", A.truncation()}};
	}
	r.body["valid"] = v.ok();
	r.body["violations"] = v.violations;
	r.exit = v.ok() ? ok : math_failure;
	return r;
}

Report cmd_cohomology(const std::string& path, std::optional<int> degree)
{
	auto A = read_model(path);
	int top = A.max_cohomology_degree();
	if (degree && (*degree < 0 || *degree > top))
		throw InputError("degree must lie in 0.." + std::to_string(top) + " for truncation " +
		                 std::to_string(A.truncation()));
	Report r;
	json degrees = json::array();
	for (int k = degree.value_or(0); k <= degree.value_or(top); ++k) {
		json reps = json::array();
		for (const auto& x : A.cohomology_basis(k).representatives())
			reps.push_back(A.format(x));
		degrees.push_back({{"degree", k}, {"dimension", reps.size()}, {"representatives", reps}});
	}
	r.body = {{"truncation", A.truncation()}, {"cohomology", degrees}};
	return r;
}

Report cmd_massey(const std::string& path, const std::vector<std::string>& exprs)
{
	auto A = read_model(path);
	std::vector<CohomologyClass> classes;
	json inputs = json::array();
	for (const auto& e : exprs) {
		classes.push_back(parse_class(e, A));
		inputs.push_back(class_json(A, classes.back()));
	}
	auto m = massey_product(A, classes);
	Report r;
	r.body = {{"classes", inputs}, {"data", format_dgla(m.data)}, {"defined", m.value.has_value()}};
	if (m.value) {
		r.body["value"] = class_json(A, m.value->cls);
		r.body["indeterminacy_dimension"] = m.indeterminacy.dim();
		r.body["indeterminacy"] = subspace_json(m.indeterminacy);
		r.body["system"] = system_json(A, m.data.quotient, m.system);
	}
	else {
		const auto& o = *m.obstruction;
		r.body["obstruction"] = {{"window", {o.first, o.last}},
		                         {"residue", class_json(A, o.residue)},
		                         {"search_budget_exhausted", o.budget_exhausted}};
		r.body["partial_system"] = system_json(A, m.data.quotient, m.system);
		r.exit = math_failure;
	}
	r.body["attempts"] = m.attempts;
	return r;
}

Report cmd_mc_product(const std::string& path, const std::string& data_path, const std::string& system_path)
{
	auto A = read_model(path);
	auto lambda = read_dgla(data_path);
	auto sigma = read_system(system_path, A, lambda.quotient);
	auto p = mc_product(A, lambda, sigma);
	Report r;
	r.body = {{"q", lambda.q},
	          {"value", class_json(A, p.cls)},
	          {"curvature", A.format(p.curvature)},
	          {"lift", system_json(A, lambda.total, p.witness_lift)}};
	return r;
}

Report cmd_annihilate(const std::string& path, const std::string& cocycle, int max_degree)
{
	auto A = read_model(path);
	auto c = parse_class(cocycle, A);
	auto a = annihilates(A, c, max_degree);
	Report r;
	r.body = {{"class", class_json(A, c)}, {"max_degree", max_degree}, {"annihilated", a.annihilated}};
	if (a.annihilated) {
		r.body["witness"] = fibration_json(*a.witness);
		r.body["primitive"] = a.witness->total.format(*a.primitive);
	}
	else {
		r.exit = math_failure;
	}
	return r;
}

Report cmd_descend(const std::string& path, const std::string& euler, int x_degree, const std::string& data_path,
                   const std::string& system_path, const std::string& cls)
{
	auto A = read_model(path);
	if (x_degree < 1 || x_degree % 2 == 0)
		throw InputError("--x-degree must be odd and positive");
	auto fib = adjoin_odd(A, parse_element(euler, A), "x", x_degree + 1);
	auto lambda = read_dgla(data_path);
	auto sigma = read_system(system_path, fib.total, lambda.quotient);
	auto c = parse_element(cls, A);
	auto d = descend(fib, lambda, sigma, c);
	auto check = mc_product(A, d.zeta, d.system);
	auto expected = reduce_to_class(A, d.normalized_c, product_degree(d.zeta));
	Report r;
	r.body = {{"x", fib.total.format(fib.total.generator(spherical_step(fib).x.name))},
	          {"euler", A.format(spherical_step(fib).euler)},
	          {"normalized_c", A.format(d.normalized_c)},
	          {"l0", lie_json(lambda.total, d.l0)},
	          {"data", format_dgla(d.zeta)},
	          {"system", system_json(A, d.zeta.quotient, d.system)},
	          {"value", class_json(A, check.cls)},
	          {"matches_c", check.cls.coordinates == expected.coordinates}};
	r.exit = check.cls.coordinates == expected.coordinates ? ok : math_failure;
	return r;
}

Report cmd_selftest(const std::string& data_dir)
{
	Report r;
	json lines = json::array();
	std::size_t passed = 0;
	auto outcomes = acceptance::run_all(data_dir);
	for (const auto& o : outcomes) {
		passed += o.pass;
		lines.push_back({{"criterion", o.id}, {"title", o.title}, {"pass", o.pass}, {"detail", o.detail}});
	}
	r.body = {{"criteria", lines}, {"passed", passed}, {"total", outcomes.size()}};
	r.exit = passed == outcomes.size() ? ok : math_failure;
	return r;
}

// ---------------------------------------------------------------------------

std::string scalar(const json& v)
{
	return v.is_string() ? v.get<std::string>() : v.dump();
}

bool flat(const json& v)
{
	if (!v.is_array())
		return !v.is_object();
	for (const auto& x : v)
		if (x.is_structured())
			return false;
	return true;
}

void render(std::ostream& os, const json& v, int indent)
{
	const std::string pad(static_cast<std::size_t>(indent), ' ');
	auto inline_form = [](const json& x) {
		if (!x.is_array())
			return scalar(x);
		std::string s = "[";
		for (std::size_t i = 0; i < x.size(); ++i)
			s += (i ? ", " : "") + scalar(x[i]);
		return s + "]";
	};
	if (v.is_object()) {
		for (const auto& [k, x] : v.items()) {
			if (x.is_string() && x.get<std::string>().find('\n') != std::string::npos) {
				os << pad << k << ":\n";
				std::istringstream in(x.get<std::string>());
				for (std::string line; std::getline(in, line);)
					os << pad << "  " << line << "\n";
			}
			else if (flat(x)) {
				os << pad << k << ": " << inline_form(x) << "\n";
			}
			else {
				os << pad << k << ":\n";
				render(os, x, indent + 2);
			}
		}
	}
	else if (v.is_array()) {
		for (const auto& x : v) {
			if (flat(x)) {
				os << pad << "- " << inline_form(x) << "\n";
			}
			else {
				std::ostringstream item;
				render(item, x, indent + 2);
				auto text = item.str();
				os << pad << "- " << text.substr(pad.size() + 2);
			}
		}
	}
	else {
		os << pad << scalar(v) << "\n";
	}
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Maurer-Cartan higher products over truncated free CDGAs"};
	app.require_subcommand(1);
	app.fallthrough();
	bool as_json = false;
	app.add_flag("--json", as_json, "Print the machine-readable report");

	std::string file, data_path, system_path, expr, euler, cls;
	std::vector<std::string> exprs;
	int degree = 0, max_degree = 0, x_degree = 0;
	std::string data_dir = MCPROD_DATA_DIR;

	auto* validate = app.add_subcommand("validate", "Check a model or DGLA file");
	validate->add_option("FILE", file)->required()->check(CLI::ExistingFile);

	auto* cohomology = app.add_subcommand("cohomology", "Cohomology with representatives");
	cohomology->add_option("FILE", file)->required()->check(CLI::ExistingFile);
	auto* degree_opt = cohomology->add_option("--degree", degree, "Single degree (default: all trusted degrees)");

	auto* massey = app.add_subcommand("massey", "Massey product of cohomology classes");
	massey->add_option("FILE", file)->required()->check(CLI::ExistingFile);
	massey->add_option("EXPR", exprs, "Cocycle representatives")->required();

	auto* mcp = app.add_subcommand("mc-product", "MC higher product of a defining system");
	mcp->add_option("FILE", file)->required()->check(CLI::ExistingFile);
	mcp->add_option("--data", data_path)->required()->check(CLI::ExistingFile);
	mcp->add_option("--system", system_path)->required()->check(CLI::ExistingFile);

	auto* annihilate = app.add_subcommand("annihilate", "Does a class die in the truncated TA");
	annihilate->add_option("FILE", file)->required()->check(CLI::ExistingFile);
	annihilate->add_option("--cocycle", expr)->required();
	annihilate->add_option("--max-degree", max_degree)->required();

	auto* desc = app.add_subcommand("descend", "Descend a defining system from A[x] to A");
	desc->add_option("FILE", file)->required()->check(CLI::ExistingFile);
	desc->add_option("--euler", euler)->required();
	desc->add_option("--x-degree", x_degree)->required();
	desc->add_option("--data", data_path)->required()->check(CLI::ExistingFile);
	desc->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
	desc->add_option("--class", cls)->required();

	auto* selftest = app.add_subcommand("selftest", "Run the bundled acceptance suite");
	selftest->add_option("--data-dir", data_dir)->check(CLI::ExistingDirectory);

	try {
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError& e) {
		int code = app.exit(e);
		return code == 0 ? ok : input_error;
	}

	json command = json::array();
	for (int i = 1; i < argc; ++i)
		if (std::string(argv[i]) != "--json")
			command.push_back(argv[i]);

	json out = {{"command", command}};
	int exit = ok;
	try {
		Report r;
		if (*validate)
			r = cmd_validate(file);
		else if (*cohomology)
			r = cmd_cohomology(file, degree_opt->count() ? std::optional<int>(degree) : std::nullopt);
		else if (*massey)
			r = cmd_massey(file, exprs);
		else if (*mcp)
			r = cmd_mc_product(file, data_path, system_path);
		else if (*annihilate)
			r = cmd_annihilate(file, expr, max_degree);
		else if (*desc)
			r = cmd_descend(file, euler, x_degree, data_path, system_path, cls);
		else
			r = cmd_selftest(data_dir);
		exit = r.exit;
		out["status"] = exit == ok ? "ok" : "failure";
		out["result"] = std::move(r.body);
	}
	catch (const ParseError& e) {
		exit = input_error;
		out["status"] = "input-error";
		out["error"] = e.what();
		out["line"] = e.line();
		out["column"] = e.column();
	}
	catch (const InputError& e) {
		exit = input_error;
		out["status"] = "input-error";
		out["error"] = e.what();
	}
	catch (const MathError& e) {
		exit = math_failure;
		out["status"] = "math-error";
		out["error"] = e.what();
	}

	if (as_json)
		std::cout << out.dump(2) << "\n";
	else
		render(exit == input_error ? std::cerr : std::cout, out, 0);
	return exit;
}
