#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hadiff/arrangement.hpp"
#include "hadiff/jet.hpp"
#include "hadiff/resolution.hpp"
#include "hadiff/saito.hpp"
#include "hadiff/weyl.hpp"

namespace hadiff {

// Key order is fixed everywhere (ordered_json) so that reports serialized
// from identical inputs are byte-identical.
using Json = nlohmann::ordered_json;

inline Json polynomial_to_json(const Polynomial& p) {
    Json j;
    j["nvars"] = p.nvars();
    Json terms = Json::array();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        Json t;
        t["e"] = it->first;
        t["c"] = rat_to_string(it->second);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline Polynomial polynomial_from_json(const Json& j) {
    Polynomial p(j.at("nvars").get<int>());
    for (const auto& t : j.at("terms")) {
        const Monomial e = t.at("e").get<Monomial>();
        const auto& cj = t.at("c");
        const Rat c = cj.is_string() ? rat_from_string(cj.get<std::string>())
                                     : rat(cj.get<long>());
        p.add_term(e, c);
    }
    return p;
}

inline Json rat_vector_to_json(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const auto& c : v) {
        if (c.get_den() == 1 && c.get_num().fits_slong_p())
            a.push_back(c.get_num().get_si());
        else
            a.push_back(rat_to_string(c));
    }
    return a;
}

inline std::vector<Rat> rat_vector_from_json(const Json& a) {
    std::vector<Rat> v;
    for (const auto& c : a) {
        if (c.is_string()) v.push_back(rat_from_string(c.get<std::string>()));
        else v.push_back(rat(c.get<long>()));
    }
    return v;
}

inline Json arrangement_to_json(const Arrangement& arr) {
    Json j;
    j["n"] = arr.n();
    Json forms = Json::array();
    for (const auto& f : arr.forms()) forms.push_back(rat_vector_to_json(f));
    j["forms"] = std::move(forms);
    return j;
}

inline Arrangement arrangement_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    std::vector<std::vector<Rat>> forms;
    for (const auto& f : j.at("forms")) forms.push_back(rat_vector_from_json(f));
    return Arrangement(n, std::move(forms));
}

inline Json diffop_to_json(const DiffOp& op) {
    Json j;
    j["order"] = op.order();
    Json terms = Json::array();
    for (auto it = op.coeffs().rbegin(); it != op.coeffs().rend(); ++it) {
        Json t;
        t["dalpha"] = it->first;
        t["poly"] = polynomial_to_json(it->second);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline DiffOp diffop_from_json(const Json& j, int nvars) {
    DiffOp op(nvars, j.at("order").get<int>());
    for (const auto& t : j.at("terms"))
        op.add_term(t.at("dalpha").get<Monomial>(), polynomial_from_json(t.at("poly")));
    return op;
}

inline Json exp_multiset_to_json(const ExpMultiset& e) {
    Json j = Json::object();
    for (const auto& [k, mult] : e) j[std::to_string(k)] = mult;
    return j;
}

inline ExpMultiset exp_multiset_from_json(const Json& j) {
    ExpMultiset e;
    for (auto it = j.begin(); it != j.end(); ++it) e[std::stoi(it.key())] = it.value().get<long>();
    return e;
}

inline Json subset_to_json(const SubsetH& h) {
    Json a = Json::array();
    for (int i : h) a.push_back(i + 1);  // 1-based labels on the wire
    return a;
}

inline Json saito_result_to_json(const SaitoResult& r) {
    Json j;
    j["basis"] = r.basis;
    j["c"] = rat_to_string(r.c);
    j["det_degree"] = r.det_degree;
    j["method"] = r.method;
    j["members_ok"] = r.members_ok;
    if (!r.members_ok) j["failed_member"] = r.failed_member;
    return j;
}

inline Json polymatrix_to_json(const PolyMatrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["nvars"] = m.nvars();
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(polynomial_to_json(m.at(i, c)));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

inline Json free_module_to_json(const FreeModule& mod) {
    Json gens = Json::array();
    for (const auto& g : mod.gens) {
        Json gj;
        gj["degree"] = g.degree;
        gj["label"] = g.label;
        gens.push_back(std::move(gj));
    }
    Json j;
    j["rank"] = mod.rank();
    j["gens"] = std::move(gens);
    return j;
}

inline Json verify_report_to_json(const VerifyReport& rep) {
    Json j;
    j["passed"] = rep.passed();
    j["dd_zero"] = rep.dd_zero;
    j["ranks_ok"] = rep.ranks_ok;
    j["shifts_ok"] = rep.shifts_ok;
    j["generic_rank_ok"] = rep.generic_rank_ok;
    j["minimal_ok"] = rep.minimal_ok;
    j["truncated_exact_ok"] = rep.truncated_exact_ok;
    j["degree_bound"] = rep.degree_bound;
    j["regularity"] = rep.regularity;
    j["regularity_expected"] = rep.regularity_expected;
    j["projective_dimension"] = rep.projective_dimension;
    j["pd_expected"] = rep.pd_expected;
    j["observed_ranks"] = rep.observed_ranks;
    j["failures"] = rep.failures;
    return j;
}

inline Json free_complex_to_json(const FreeComplex& fc) {
    Json j;
    j["nvars"] = fc.nvars;
    j["names"] = fc.names;
    Json mods = Json::array();
    for (const auto& mod : fc.modules) mods.push_back(free_module_to_json(mod));
    j["modules"] = std::move(mods);
    Json maps = Json::array();
    for (const auto& mp : fc.maps) maps.push_back(polymatrix_to_json(mp));
    j["maps"] = std::move(maps);
    if (fc.has_augmentation) {
        j["ambient"] = free_module_to_json(fc.ambient);
        j["augmentation"] = polymatrix_to_json(fc.augmentation);
        j["augmentation_target"] = fc.augmentation_target;
    }
    return j;
}

inline Json presentation_to_json(const PresentationMatrix& pm) {
    Json j;
    Json rows = Json::array();
    for (const auto& g : pm.row_index) rows.push_back(g);
    Json cols = Json::array();
    for (const auto& g : pm.col_index) cols.push_back(g);
    j["row_index"] = std::move(rows);
    j["col_index"] = std::move(cols);
    j["matrix"] = polymatrix_to_json(pm.mat);
    return j;
}

inline Json ksubspace_to_json(const KSubspace& ks) {
    Json j;
    j["ambient_labels"] = ks.ambient_labels;
    Json basis = Json::array();
    for (const auto& v : ks.basis) basis.push_back(rat_vector_to_json(v));
    j["basis"] = std::move(basis);
    return j;
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace hadiff
