#include "gauge/analysis.hpp"
#include "gauge/banach_mazur.hpp"
#include "gauge/embound.hpp"
#include "gauge/error.hpp"
#include "gauge/structure.hpp"
#include "gauge/theories.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using gauge::Rational;

namespace {

// Rationals cross the boundary as "p/q" strings; the Python package turns them into Fractions.
std::string q(const Rational& r) { return gauge::to_string(r); }

gauge::Signature signature_of(const std::string& text) {
    return text.empty() ? gauge::Signature{} : gauge::parse_signature(text);
}

py::dict analyze(const std::string& formula, const std::string& signature) {
    gauge::Signature sig = signature_of(signature);
    gauge::AnalysisResult r = gauge::classify(gauge::parse_formula(formula, sig), sig);
    py::dict vars;
    for (const auto& [v, report] : r.variables) {
        py::dict entry;
        entry["eventually_constant"] = report.eventually_constant;
        entry["threshold"] = report.threshold ? py::object(py::str(q(*report.threshold))) : py::none();
        vars[py::str(v)] = entry;
    }
    py::dict out;
    out["bounded"] = r.bounded;
    out["bound"] = r.bound ? py::object(py::str(q(*r.bound))) : py::none();
    out["variables"] = vars;
    out["modulus"] = gauge::to_string(r.modulus);
    return out;
}

std::string evaluate(const std::string& structure, const std::string& formula,
                     const std::map<std::string, std::string>& assignment) {
    gauge::GaugedStructure m = gauge::parse_structure(structure);
    gauge::Assignment sigma;
    for (const auto& [var, point] : assignment) {
        auto p = m.find(point);
        if (!p) throw gauge::DomainError("no point named '" + point + "'");
        sigma.emplace_back(var, *p);
    }
    return q(gauge::eval_formula(m, gauge::parse_formula(formula, m.signature()), sigma));
}

py::dict validate(const std::string& structure) {
    gauge::ValidationReport r = gauge::validate(gauge::parse_structure(structure));
    py::list issues;
    for (const auto& i : r.issues) issues.append(py::make_tuple(i.kind, i.detail));
    py::dict out;
    out["pass"] = r.pass;
    out["issues"] = issues;
    return out;
}

std::vector<py::dict> check_theory(const std::string& structure, const std::string& theory,
                                   const std::vector<std::string>& eps) {
    gauge::GaugedStructure m = gauge::parse_structure(structure);
    gauge::Theory t = gauge::load_theory(theory, m.signature());
    std::vector<Rational> es;
    for (const auto& e : eps) es.push_back(gauge::parse_rational(e));
    std::vector<py::dict> rows;
    for (const auto& e : gauge::check_theory(m, t, es).entries) {
        py::dict row;
        row["label"] = e.label;
        row["eps"] = e.eps ? py::object(py::str(q(*e.eps))) : py::none();
        py::dict params;
        for (const auto& [k, v] : e.params) params[py::str(k)] = q(v);
        row["params"] = params;
        row["value"] = q(e.value);
        row["defect"] = q(e.defect);
        row["skipped"] = e.skipped;
        rows.push_back(row);
    }
    return rows;
}

std::vector<gauge::bm::Vector> to_vectors(const std::vector<std::vector<double>>& rows) {
    std::vector<gauge::bm::Vector> out;
    for (const auto& r : rows) out.push_back(Eigen::Map<const gauge::bm::Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
    return out;
}

gauge::bm::RationalMatrix to_rational_matrix(const std::vector<std::vector<std::string>>& rows) {
    gauge::bm::RationalMatrix out;
    for (const auto& r : rows) {
        std::vector<Rational> row;
        for (const auto& x : r) row.push_back(gauge::parse_rational(x));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Unbounded continuous logic over gauged metric spaces";

    // translators registered later are tried first, so subclasses come after their base
    auto error = py::register_exception<gauge::Error>(m, "Error", PyExc_ValueError);
    py::register_exception<gauge::ParseError>(m, "ParseError", error.ptr());
    py::register_exception<gauge::IllFormed>(m, "IllFormed", error.ptr());

    m.def("analyze", &analyze, py::arg("formula"), py::arg("signature") = "");
    m.def("evaluate", &evaluate, py::arg("structure"), py::arg("formula"),
          py::arg("assignment") = std::map<std::string, std::string>{});
    m.def("validate", &validate, py::arg("structure"));
    m.def(
        "prenex",
        [](const std::string& formula, const std::string& signature) {
            return gauge::to_string(gauge::prenex(gauge::parse_formula(formula, signature_of(signature))));
        },
        py::arg("formula"), py::arg("signature") = "");
    m.def(
        "dyadic_window",
        [](const std::string& r, const std::string& rp) {
            auto [e, s] = gauge::dyadic_window(gauge::parse_rational(r), gauge::parse_rational(rp));
            return py::make_tuple(e, q(s));
        },
        py::arg("r"), py::arg("r_prime"));
    m.def(
        "embound",
        [](const std::string& structure, const std::string& name) {
            return gauge::write_structure(gauge::embound(gauge::parse_structure(structure), name));
        },
        py::arg("structure"), py::arg("infinity_name") = "inf");
    m.def(
        "recover", [](const std::string& structure) { return gauge::write_structure(gauge::recover(gauge::parse_structure(structure))); },
        py::arg("structure"));
    m.def("theta", [](const std::string& x) { return q(gauge::theta(gauge::parse_rational(x))); });
    m.def("check_theory", &check_theory, py::arg("structure"), py::arg("theory"), py::arg("eps"));
    m.def(
        "measure_algebra",
        [](const std::vector<std::string>& weights) {
            std::vector<Rational> w;
            for (const auto& x : weights) w.push_back(gauge::parse_rational(x));
            return gauge::write_structure(gauge::measure_algebra(w));
        },
        py::arg("weights"));

    m.def(
        "op_norm",
        [](const std::vector<std::vector<std::string>>& a, const std::string& norm) {
            auto f = to_rational_matrix(a);
            return q(gauge::bm::op_norm(f, {static_cast<unsigned>(f.size()), gauge::parse_norm_kind(norm)}));
        },
        py::arg("matrix"), py::arg("norm"));
    m.def(
        "eps_iso_check",
        [](const std::vector<std::vector<std::string>>& a, const std::string& eps, const std::string& norm) {
            auto f = to_rational_matrix(a);
            return gauge::bm::eps_iso_check(f, gauge::parse_rational(eps),
                                            {static_cast<unsigned>(f.size()), gauge::parse_norm_kind(norm)})
                .pass;
        },
        py::arg("matrix"), py::arg("eps"), py::arg("norm"));
    m.def(
        "simplex_min_norm",
        [](const std::vector<std::vector<double>>& basis, const std::string& space) {
            return gauge::bm::simplex_min_norm(to_vectors(basis), gauge::bm::parse_space(space));
        },
        py::arg("basis"), py::arg("space"));
    m.def(
        "certify_delta",
        [](const std::vector<std::vector<double>>& basis, const std::string& eps, const std::string& space) {
            return gauge::bm::certify_delta(to_vectors(basis), gauge::parse_rational(eps), gauge::bm::parse_space(space));
        },
        py::arg("basis"), py::arg("eps"), py::arg("space"));
}
