#include "criteria.hpp"
#include "gauge/analysis.hpp"
#include "gauge/banach_mazur.hpp"
#include "gauge/embound.hpp"
#include "gauge/error.hpp"
#include "gauge/structure.hpp"
#include "gauge/theories.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>

namespace {

using gauge::Rational;
using json = nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string q(const Rational& r) { return gauge::to_string(r); }

// Human output: one "key: value" line per scalar, nested objects indented, arrays itemized.
void print_human(const json& j, std::ostream& out, int indent = 0) {
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_structured() && !v.empty()) {
                out << pad << k << ":\n";
                print_human(v, out, indent + 2);
            } else {
                out << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_structured()) {
                out << pad << "-\n";
                print_human(v, out, indent + 2);
            } else {
                out << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else {
        out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

struct Output {
    std::string format = "human";
    void emit(const json& j) const {
        if (format == "json")
            std::cout << j.dump() << "\n";
        else
            print_human(j, std::cout);
    }
};

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) {
            Rational r = gauge::parse_rational(item);
            if (r <= 0) throw gauge::DomainError("eps values must be positive, got " + item);
            out.push_back(r);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw gauge::DomainError("empty eps list");
    return out;
}

struct FormulaSource {
    std::string file;
    std::string text;
    std::string signature_file;

    void add_to(CLI::App* app, bool with_signature) {
        app->add_option("--formula", file, "File holding one formula");
        app->add_option("--text", text, "Formula given inline");
        if (with_signature) app->add_option("--signature", signature_file, "File of (pred …) and (fun …) entries");
    }

    gauge::Signature signature() const {
        if (signature_file.empty()) return {};
        return gauge::parse_signature(gauge::read_file(signature_file));
    }

    gauge::Formula read(const gauge::Signature& sig) const {
        if (file.empty() == text.empty()) throw CLI::ValidationError("exactly one of --formula and --text is required");
        return gauge::parse_formula(file.empty() ? text : gauge::read_file(file), sig);
    }
};

gauge::Assignment parse_assignment(const std::string& text, const gauge::GaugedStructure& m) {
    gauge::Assignment sigma;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw gauge::DomainError("assignments look like x=a,y=b");
        auto p = m.find(item.substr(eq + 1));
        if (!p) throw gauge::DomainError("no point named '" + item.substr(eq + 1) + "'");
        sigma.emplace_back(item.substr(0, eq), *p);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return sigma;
}

std::vector<gauge::bm::Vector> read_vectors(const std::string& path) {
    gauge::SExpr e = gauge::read_one(gauge::read_file(path));
    if (!e.is_list) throw gauge::ParseError("expected a list of vectors", e.offset);
    std::vector<gauge::bm::Vector> out;
    for (const auto& row : e.items) {
        if (!row.is_list) throw gauge::ParseError("expected a vector", row.offset);
        gauge::bm::Vector v(row.items.size());
        for (std::size_t i = 0; i < row.items.size(); ++i) {
            if (!row.items[i].is_atom()) throw gauge::ParseError("expected a number", row.items[i].offset);
            v(static_cast<Eigen::Index>(i)) = gauge::parse_rational(row.items[i].atom).get_d();
        }
        out.push_back(v);
    }
    return out;
}

gauge::bm::RationalMatrix read_matrix(const std::string& path) {
    gauge::SExpr e = gauge::read_one(gauge::read_file(path));
    if (!e.is_list) throw gauge::ParseError("expected a list of rows", e.offset);
    gauge::bm::RationalMatrix out;
    for (const auto& row : e.items) {
        if (!row.is_list) throw gauge::ParseError("expected a row", row.offset);
        std::vector<Rational> r;
        for (const auto& x : row.items) {
            if (!x.is_atom()) throw gauge::ParseError("expected a number", x.offset);
            r.push_back(gauge::parse_rational(x.atom));
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw gauge::Error("cannot write '" + path + "'");
    out << text;
}

json validation_json(const gauge::ValidationReport& r) {
    json issues = json::array();
    for (const auto& i : r.issues) issues.push_back({{"kind", i.kind}, {"detail", i.detail}});
    return {{"pass", r.pass}, {"issues", issues}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unbounded continuous logic over gauged metric spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Output output;
    app.add_option("--format", output.format, "Output format")->check(CLI::IsMember({"human", "json"}));
    app.footer(
        "Exit status: 0 on success, 1 when a checked property fails, 2 on usage or parse errors.\n"
        "GAUGE_LOGIC_CAP=atoms=A,points=P overrides the size caps of generated structures "
        "(defaults: 4 measure-algebra atoms, 125 sampled points).");

    int status = 0;

    // analyze
    FormulaSource analyze_src;
    std::vector<std::string> analyze_vars;
    auto* analyze = app.add_subcommand("analyze", "Boundedness, eventual constancy and modulus of a formula");
    analyze_src.add_to(analyze, true);
    analyze->add_option("--vars", analyze_vars, "Extra variables to classify")->delimiter(',');
    analyze->callback([&] {
        gauge::Signature sig = analyze_src.signature();
        gauge::Formula phi = analyze_src.read(sig);
        gauge::WellFormedReport wf = gauge::well_formed(phi);
        json out{{"formula", gauge::to_string(phi)}, {"well_formed", wf.ok}};
        if (!wf.ok) {
            out["diagnostics"] = wf.diagnostics;
            output.emit(out);
            status = kExitFailure;
            return;
        }
        gauge::AnalysisResult r = gauge::classify(phi, sig, analyze_vars);
        out["bounded"] = r.bounded;
        out["bound"] = r.bound ? json(q(*r.bound)) : json(nullptr);
        json vars = json::object();
        for (const auto& [v, report] : r.variables)
            vars[v] = {{"eventually_constant", report.eventually_constant},
                       {"threshold", report.threshold ? json(q(*report.threshold)) : json(nullptr)}};
        out["variables"] = vars;
        out["modulus"] = gauge::to_string(r.modulus);
        output.emit(out);
    });

    // eval
    std::string eval_struct, eval_assign;
    FormulaSource eval_src;
    auto* eval = app.add_subcommand("eval", "Exact value of a formula in a structure");
    eval->add_option("structure", eval_struct, "Structure file")->required()->check(CLI::ExistingFile);
    eval_src.add_to(eval, false);
    eval->add_option("--assign", eval_assign, "Free variable assignment, e.g. x=a,y=b");
    eval->callback([&] {
        gauge::GaugedStructure m = gauge::parse_structure(gauge::read_file(eval_struct));
        gauge::Formula phi = eval_src.read(m.signature());
        gauge::Assignment sigma = parse_assignment(eval_assign, m);
        output.emit({{"formula", gauge::to_string(phi)}, {"value", q(gauge::eval_formula(m, phi, sigma))}});
    });

    // validate
    std::string validate_struct;
    std::size_t validate_max = 16;
    auto* validate = app.add_subcommand("validate", "Metric, gauge, totality and modulus checks");
    validate->add_option("structure", validate_struct, "Structure file")->required()->check(CLI::ExistingFile);
    validate->add_option("--max-issues", validate_max, "Stop after this many issues");
    validate->callback([&] {
        gauge::ValidationReport r = gauge::validate(gauge::parse_structure(gauge::read_file(validate_struct)), validate_max);
        output.emit(validation_json(r));
        if (!r.pass) status = kExitFailure;
    });

    // prenex
    FormulaSource prenex_src;
    auto* prenex = app.add_subcommand("prenex", "Equivalent formula with all quantifiers in front");
    prenex_src.add_to(prenex, true);
    prenex->callback([&] {
        gauge::Signature sig = prenex_src.signature();
        gauge::Formula phi = prenex_src.read(sig);
        output.emit({{"formula", gauge::to_string(phi)}, {"prenex", gauge::to_string(gauge::prenex(phi))}});
    });

    // expand-macro
    FormulaSource macro_src;
    std::string macro_var = "x", macro_kind = "sup", macro_r, macro_r2;
    auto* macro = app.add_subcommand("expand-macro", "Expand a restricted quantifier sup_x^{r,r'} or inf_x^{r,r'}");
    macro_src.add_to(macro, true);
    macro->add_option("--var", macro_var, "Bound variable");
    macro->add_option("--kind", macro_kind, "sup, inf, down or up")->check(CLI::IsMember({"sup", "inf", "down", "up"}));
    macro->add_option("--r,--inner", macro_r, "Inner radius r")->required();
    macro->add_option("--rp,--outer", macro_r2, "Outer radius r'")->required();
    macro->callback([&] {
        gauge::Signature sig = macro_src.signature();
        gauge::Formula phi = macro_src.read(sig);
        const Rational r = gauge::parse_rational(macro_r), r2 = gauge::parse_rational(macro_r2);
        auto [m, s] = gauge::dyadic_window(r, r2);
        gauge::Formula out = macro_kind == "sup"    ? gauge::sup_window(phi, macro_var, r, r2)
                             : macro_kind == "inf"  ? gauge::inf_window(phi, macro_var, r, r2)
                             : macro_kind == "down" ? gauge::build_down(phi, macro_var, r, r2)
                                                    : gauge::build_up(phi, macro_var, r, r2);
        output.emit({{"window_exponent", m},
                     {"window_point", q(s)},
                     {"multiplier", gauge::window_multiplier(phi).get_str()},
                     {"expansion", gauge::to_string(out)}});
    });

    // embound
    std::string embound_struct, embound_out, embound_name = "inf";
    auto* emb = app.add_subcommand("embound", "Bounded structure with a point at infinity");
    emb->add_option("structure", embound_struct, "Relational structure file")->required()->check(CLI::ExistingFile);
    emb->add_option("output,-o,--output", embound_out, "Write here instead of stdout");
    emb->add_option("--infinity-name", embound_name, "Name of the new point");
    emb->callback([&] {
        gauge::GaugedStructure m = gauge::parse_structure(gauge::read_file(embound_struct));
        if (!m.signature().relational()) m = gauge::graph_transform(m);
        write_text(embound_out, gauge::write_structure(gauge::embound(m, embound_name)));
    });

    // recover
    std::string recover_struct, recover_out, recover_name;
    auto* rec = app.add_subcommand("recover", "Invert embound");
    rec->add_option("structure", recover_struct, "Embounded structure file")->required()->check(CLI::ExistingFile);
    rec->add_option("output,-o,--output", recover_out, "Write here instead of stdout");
    rec->add_option("--infinity", recover_name, "Point at infinity when none is marked");
    rec->callback([&] {
        gauge::GaugedStructure n = gauge::parse_structure(gauge::read_file(recover_struct));
        std::optional<std::string> name;
        if (!recover_name.empty()) name = recover_name;
        write_text(recover_out, gauge::write_structure(gauge::recover(n, name)));
    });

    // check-embound
    std::string check_emb_struct;
    auto* check_emb = app.add_subcommand("check-embound", "Metric, comparison and round-trip checks for embound");
    check_emb->add_option("structure", check_emb_struct, "Structure file")->required()->check(CLI::ExistingFile);
    check_emb->callback([&] {
        gauge::GaugedStructure m = gauge::parse_structure(gauge::read_file(check_emb_struct));
        if (!m.signature().relational()) m = gauge::graph_transform(m);
        gauge::GaugedStructure e = gauge::embound(m);
        gauge::ValidationReport v = gauge::validate(e);
        gauge::ComparisonReport c = gauge::check_comparison(m);
        const bool round_trip = gauge::recover(e) == m;
        output.emit({{"pass", v.pass && c.pass && round_trip},
                     {"embounded_valid", validation_json(v)},
                     {"comparison", {{"pass", c.pass}, {"pairs", c.pairs}, {"containments", c.containments}, {"failures", c.failures}}},
                     {"round_trip", round_trip}});
        if (!(v.pass && c.pass && round_trip)) status = kExitFailure;
    });

    // check-theory
    std::string theory_struct, theory_file, theory_eps = "1,1/2,1/4";
    std::vector<std::string> theory_exclude;
    auto* check_theory = app.add_subcommand("check-theory", "Defects of a theory in a structure");
    check_theory->add_option("structure", theory_struct, "Structure file")->required()->check(CLI::ExistingFile);
    check_theory->add_option("theory", theory_file, "Theory file")->required()->check(CLI::ExistingFile);
    check_theory->add_option("--eps", theory_eps, "Comma-separated eps values for schemes");
    check_theory->add_option("--exclude", theory_exclude, "Labels of conditions, schemes or graph predicates to skip")
        ->delimiter(',');
    check_theory->callback([&] {
        gauge::GaugedStructure m = gauge::parse_structure(gauge::read_file(theory_struct));
        const std::string text = gauge::read_file(theory_file);
        // graph directives speak about G_f, so a structure with functions is read in graph form
        const auto top = gauge::read_all(text);
        const bool graph = std::any_of(top.begin(), top.end(), [](const gauge::SExpr& e) { return e.has_head("graph"); });
        if (graph && !m.signature().relational()) m = gauge::graph_transform(m);
        gauge::Theory t = gauge::load_theory(text, m.signature());
        auto excluded = [&](const std::string& label) {
            return std::find(theory_exclude.begin(), theory_exclude.end(), label) != theory_exclude.end();
        };
        std::erase_if(t.conditions, [&](const gauge::Condition& c) { return excluded(c.label); });
        std::erase_if(t.schemes, [&](const gauge::Scheme& sc) { return excluded(sc.label); });
        std::erase_if(t.graph_axioms, [&](const gauge::GraphAxiom& a) { return excluded(a.graph); });
        gauge::DefectReport r = gauge::check_theory(m, t, parse_rational_list(theory_eps));
        json entries = json::array();
        for (const auto& e : r.entries) {
            json params = json::object();
            for (const auto& [k, v] : e.params) params[k] = q(v);
            json row{{"label", e.label},
                     {"eps", e.eps ? json(q(*e.eps)) : json(nullptr)},
                     {"params", params},
                     {"value", q(e.value)},
                     {"defect", q(e.defect)}};
            if (e.skipped) row["skipped"] = e.note;
            entries.push_back(row);
        }
        if (output.format == "json") {
            for (const auto& row : entries) std::cout << row.dump() << "\n";
            std::cout << json{{"pass", r.pass}}.dump() << "\n";
        } else {
            for (const auto& row : entries) {
                std::cout << row["label"].get<std::string>();
                for (const auto& [k, v] : row["params"].items()) std::cout << " " << k << "=" << v.get<std::string>();
                if (!row["eps"].is_null()) std::cout << " eps=" << row["eps"].get<std::string>();
                if (row.contains("skipped"))
                    std::cout << "  skipped (" << row["skipped"].get<std::string>() << ")\n";
                else
                    std::cout << "  value " << row["value"].get<std::string>() << "  defect " << row["defect"].get<std::string>()
                              << "\n";
            }
            std::cout << (r.pass ? "PASS" : "FAIL") << "\n";
        }
        if (!r.pass) status = kExitFailure;
    });

    // ultraproduct-principal
    std::vector<std::string> ultra_structs;
    std::size_t ultra_index = 0;
    std::vector<std::string> ultra_formulas;
    std::string ultra_out;
    auto* ultra = app.add_subcommand("ultraproduct-principal", "Ultraproduct over a principal ultrafilter");
    ultra->add_option("structures", ultra_structs, "Factor structure files")->required()->check(CLI::ExistingFile);
    ultra->add_option("--index", ultra_index, "Index of the principal ultrafilter")->required();
    ultra->add_option("--formula", ultra_formulas, "Formula files to compare in the product and the factor");
    ultra->add_option("-o,--output", ultra_out, "Write the product here");
    ultra->callback([&] {
        std::vector<gauge::GaugedStructure> ms;
        for (const auto& f : ultra_structs) ms.push_back(gauge::parse_structure(gauge::read_file(f)));
        gauge::GaugedStructure u = gauge::principal_ultraproduct(ms, ultra_index);
        if (!ultra_out.empty()) write_text(ultra_out, gauge::write_structure(u));
        std::vector<gauge::Formula> formulas;
        for (const auto& f : ultra_formulas) formulas.push_back(gauge::parse_formula(gauge::read_file(f), u.signature()));
        gauge::LosReport r = gauge::los_check(ms, ultra_index, formulas);
        output.emit({{"factors", ms.size()},
                     {"index", ultra_index},
                     {"points", u.size()},
                     {"los", {{"pass", r.pass}, {"checked", r.checked}, {"mismatches", r.mismatches}}}});
        if (!r.pass) status = kExitFailure;
    });

    // bm-certify
    std::string certify_space, certify_basis, certify_eps;
    std::size_t certify_trials = 1000;
    std::uint64_t certify_seed = 1;
    auto* certify = app.add_subcommand("bm-certify", "Perturbation radius delta for a basis, with randomized certification");
    certify->add_option("--space", certify_space, "l1:n or linf:n")->required();
    certify->add_option("--basis", certify_basis, "File of vectors ((b11 b12 …) …)")->required()->check(CLI::ExistingFile);
    certify->add_option("--eps", certify_eps, "eps in (0, 1/2]")->required();
    certify->add_option("--trials", certify_trials, "Random perturbations to certify");
    certify->add_option("--seed", certify_seed, "Seed for the trials");
    certify->callback([&] {
        const gauge::bm::NormedSpace space = gauge::bm::parse_space(certify_space);
        const auto b = read_vectors(certify_basis);
        const Rational eps = gauge::parse_rational(certify_eps);
        const double s = gauge::bm::simplex_min_norm(b, space);
        const double delta = gauge::bm::certify_delta(b, eps, space);
        std::mt19937_64 rng(certify_seed);
        std::uniform_real_distribution<double> u(-1, 1), unit(0, 1);
        std::size_t passed = 0;
        double worst_s = 0, worst_margin = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < certify_trials; ++t) {
            std::vector<gauge::bm::Vector> c;
            for (const auto& bi : b) {
                gauge::bm::Vector dir(space.dimension);
                for (unsigned j = 0; j < space.dimension; ++j) dir(j) = u(rng);
                const double len = gauge::bm::norm(dir, space.norm);
                c.push_back(len > 0 ? gauge::bm::Vector(bi + dir * (delta * unit(rng) / len)) : bi);
            }
            auto p = gauge::bm::build_perturbation(b, c, space);
            auto r = gauge::bm::eps_iso_check(p.t, eps, space);
            worst_s = std::max(worst_s, gauge::bm::op_norm(p.s, space));
            worst_margin = std::min({worst_margin, r.upper_margin, r.lower_margin});
            if (r.pass && gauge::bm::op_norm(p.s, space) <= eps.get_d() / 2 + gauge::bm::kTolerance) ++passed;
        }
        output.emit({{"space", gauge::bm::to_string(space)},
                     {"eps", q(eps)},
                     {"simplex_min_norm", s},
                     {"delta", delta},
                     {"trials", certify_trials},
                     {"passed", passed},
                     {"largest_perturbation_norm", worst_s},
                     {"smallest_margin", certify_trials ? worst_margin : 0.0},
                     {"tolerance", gauge::bm::kTolerance},
                     {"pass", passed == certify_trials}});
        if (passed != certify_trials) status = kExitFailure;
    });

    // bm-check
    std::string check_matrix, check_eps = "0", check_norm = "l1";
    auto* bm_check = app.add_subcommand("bm-check", "Exact eps-isomorphism test of a rational matrix");
    bm_check->add_option("--matrix", check_matrix, "File of rows ((a11 a12 …) …)")->required()->check(CLI::ExistingFile);
    bm_check->add_option("--eps", check_eps, "eps >= 0");
    bm_check->add_option("--norm", check_norm, "l1 or linf")->check(CLI::IsMember({"l1", "linf"}));
    bm_check->callback([&] {
        const auto f = read_matrix(check_matrix);
        const gauge::bm::NormedSpace space{static_cast<unsigned>(f.size()), gauge::parse_norm_kind(check_norm)};
        const Rational eps = gauge::parse_rational(check_eps);
        auto r = gauge::bm::eps_iso_check(f, eps, space);
        output.emit({{"space", gauge::bm::to_string(space)},
                     {"eps", q(eps)},
                     {"norm", q(r.norm)},
                     {"inverse_norm", q(r.inverse_norm)},
                     {"exp_eps_upper", q(r.bound)},
                     {"exp_eps_upper_approx", gauge::bm::round_up(r.bound)},
                     {"pass", r.pass}});
        if (!r.pass) status = kExitFailure;
    });

    // selftest
    gauge::selftest::Options self_opts;
    auto* self = app.add_subcommand("selftest", "Run the embedded acceptance corpus");
    self->add_flag("--quick", self_opts.quick, "Reduced corpus sizes");
    self->add_option("--seed", self_opts.seed, "Corpus seed");
    self->callback([&] {
        json rows = json::array();
        bool ok = true;
        for (int id = 1; id <= gauge::selftest::kCriterionCount; ++id) {
            auto r = gauge::selftest::run_criterion(id, self_opts);
            ok = ok && r.pass;
            if (output.format == "json")
                std::cout << json{{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}}.dump() << "\n";
            else
                std::cout << gauge::selftest::format(r) << std::endl;
        }
        if (!ok) status = kExitFailure;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const gauge::IllFormed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const gauge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return status;
}
