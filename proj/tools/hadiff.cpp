// hadiff: exact computations with the modules D^(m)(A) of homogeneous
// differential operators on generic central hyperplane arrangements.
//
// Exit codes: 0 success, 2 a mathematical check failed, 3 input error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hadiff/grid.hpp"
#include "hadiff/io.hpp"

using namespace hadiff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 2;
constexpr int kExitInputError = 3;

Arrangement load_arrangement(const std::string& path) {
    return arrangement_from_json(load_json(path));
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) std::cout << j.dump(2) << "\n";
    else save_json(out_path, j);
}

int cmd_gen(int n, int r, std::uint64_t seed, const std::string& out) {
    const Arrangement arr = grid_arrangement(n, r, seed);
    emit(arrangement_to_json(arr), out);
    return kExitOk;
}

int cmd_check_generic(const std::string& file) {
    const Arrangement arr = load_arrangement(file);
    const auto result = check_generic(arr);
    Json j;
    if (std::holds_alternative<bool>(result)) {
        j["generic"] = true;
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    j["generic"] = false;
    j["witness"] = subset_to_json(std::get<SubsetH>(result));
    std::cout << j.dump(2) << "\n";
    return kExitCheckFailed;
}

Json basis_to_json(const Arrangement& arr, int m, const BasisResult& basis) {
    Json j;
    j["n"] = arr.n();
    j["r"] = arr.r();
    j["m"] = m;
    j["case"] = freeness_case_name(basis.kind);
    j["exp"] = exp_multiset_to_json(observed_exponents(basis.ops));
    Json ext = Json::array();
    for (const auto& f : basis.extension_forms) ext.push_back(rat_vector_to_json(f));
    j["extension_forms"] = std::move(ext);
    Json ops = Json::array();
    for (const auto& op : basis.ops) ops.push_back(diffop_to_json(op));
    j["ops"] = std::move(ops);
    return j;
}

int cmd_basis(const std::string& file, int m, std::uint64_t seed, const std::string& out) {
    const Arrangement arr = load_arrangement(file);
    if (!is_generic(arr)) {
        std::cerr << "error: arrangement is not generic\n";
        return kExitCheckFailed;
    }
    if (classify(arr.n(), arr.r(), m) == FreenessCase::NonFree) {
        std::cerr << "error: D^(m) is not free for n=" << arr.n() << ", r=" << arr.r()
                  << ", m=" << m << "; use `hadiff resolve`\n";
        return kExitInputError;
    }
    const BasisResult basis = construct_basis(arr, m, seed);
    emit(basis_to_json(arr, m, basis), out);
    return kExitOk;
}

int cmd_saito_check(const std::string& arr_file, const std::string& ops_file) {
    const Arrangement arr = load_arrangement(arr_file);
    const Json oj = load_json(ops_file);
    std::vector<DiffOp> ops;
    for (const auto& item : oj.at("ops")) ops.push_back(diffop_from_json(item, arr.n()));
    const SaitoResult res = saito_holm_check(ops, arr);
    std::cout << saito_result_to_json(res).dump(2) << "\n";
    return res.basis ? kExitOk : kExitCheckFailed;
}

int cmd_resolve(const std::string& file, int m, int degree_bound, bool verify,
                std::uint64_t seed, const std::string& out) {
    const Arrangement arr = load_arrangement(file);
    if (!is_generic(arr)) {
        std::cerr << "error: arrangement is not generic\n";
        return kExitCheckFailed;
    }
    const FreeComplex fc = build_F_resolution(arr, m);
    Json j;
    j["n"] = arr.n();
    j["r"] = arr.r();
    j["m"] = m;
    j["complex"] = free_complex_to_json(fc);
    int code = kExitOk;
    if (verify) {
        VerifyOptions vo;
        vo.degree_bound = degree_bound;
        vo.seed = seed;
        const VerifyReport rep = verify_resolution(fc, arr, m, vo);
        j["verify"] = verify_report_to_json(rep);
        if (!rep.passed()) code = kExitCheckFailed;
    }
    emit(j, out);
    return code;
}

int cmd_jet(const std::string& file, int m, int degree_bound, bool verify, std::uint64_t seed,
            const std::string& out) {
    const Arrangement arr = load_arrangement(file);
    if (!is_generic(arr)) {
        std::cerr << "error: arrangement is not generic\n";
        return kExitCheckFailed;
    }
    const PresentationMatrix jp = jet_presentation(arr, m);
    const PresentationMatrix cp = coker_presentation(arr, m);
    Json j;
    j["n"] = arr.n();
    j["r"] = arr.r();
    j["m"] = m;
    j["jet_presentation"] = presentation_to_json(jp);
    j["coker_presentation"] = presentation_to_json(cp);
    const bool transpose_ok = jet_transpose_equal(jp, cp);
    j["transpose_ok"] = transpose_ok;
    int code = transpose_ok ? kExitOk : kExitCheckFailed;
    const FreeComplex fc = build_Jm_resolution(arr, m);
    j["resolution"] = free_complex_to_json(fc);
    if (verify) {
        VerifyOptions vo;
        vo.degree_bound = degree_bound;
        vo.seed = seed;
        const VerifyReport rep = verify_Jm_resolution(fc, arr, m, vo);
        j["verify"] = verify_report_to_json(rep);
        j["euler_witness_ok"] = euler_hits_Qe0(arr, m);
        if (!rep.passed() || !j["euler_witness_ok"].get<bool>()) code = kExitCheckFailed;
    }
    emit(j, out);
    return code;
}

GridConfig parse_grid_config(const Json& j) {
    GridConfig cfg;
    for (const auto& t : j.at("triples")) {
        GridPointSpec spec;
        if (t.is_array()) {
            spec.n = t.at(0).get<int>();
            spec.r = t.at(1).get<int>();
            spec.m = t.at(2).get<int>();
        } else {
            spec.n = t.at("n").get<int>();
            spec.r = t.at("r").get<int>();
            spec.m = t.at("m").get<int>();
            if (t.contains("forms"))
                for (const auto& f : t.at("forms")) spec.forms.push_back(rat_vector_from_json(f));
        }
        cfg.triples.push_back(std::move(spec));
    }
    if (j.contains("seed")) cfg.options.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("degree_bound")) cfg.options.degree_bound = j.at("degree_bound").get<int>();
    if (j.contains("sigma_samples")) cfg.options.sigma_samples = j.at("sigma_samples").get<int>();
    if (j.contains("calculus_instances"))
        cfg.options.calculus_instances = j.at("calculus_instances").get<int>();
    if (j.contains("checks")) {
        const auto& c = j.at("checks");
        auto get = [&c](const char* key, bool dflt) {
            return c.contains(key) ? c.at(key).get<bool>() : dflt;
        };
        cfg.options.with_saito = get("saito", true);
        cfg.options.with_resolution = get("resolution", true);
        cfg.options.with_jet = get("jet", true);
        cfg.options.with_dimension_lemmas = get("dimension_lemmas", true);
        cfg.options.with_complex_exactness = get("complex_exactness", true);
        cfg.options.with_calculus = get("calculus", true);
    }
    return cfg;
}

int cmd_grid(const std::string& config_file, std::uint64_t seed, bool seed_given,
             const std::string& out) {
    GridConfig cfg = config_file.empty() ? default_grid() : parse_grid_config(load_json(config_file));
    if (seed_given) cfg.options.seed = seed;
    const GridReport rep = run_grid(cfg);
    std::cout << grid_summary_table(rep);
    if (!out.empty()) save_json(out, grid_report_to_json(rep));
    return rep.all_pass ? kExitOk : kExitCheckFailed;
}

// Minimal deterministic SVG writers for the report command.
std::string svg_header(int w, int h) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  w, h, w, h);
    return buf;
}

void write_betti_svg(const Json& report, const std::string& path) {
    std::vector<std::pair<std::string, std::vector<long>>> rows;
    for (const auto& p : report.at("points")) {
        if (!p.contains("nonfree") || !p.at("nonfree").contains("resolution")) continue;
        std::vector<long> ranks;
        for (const auto& v : p.at("nonfree").at("resolution").at("observed_ranks"))
            ranks.push_back(v.get<long>());
        rows.emplace_back("(" + std::to_string(p.at("n").get<int>()) + "," +
                              std::to_string(p.at("r").get<int>()) + "," +
                              std::to_string(p.at("m").get<int>()) + ")",
                          ranks);
    }
    const int cell = 34, left = 90, top = 40;
    int maxw = 1;
    for (const auto& [_, ranks] : rows) maxw = std::max(maxw, static_cast<int>(ranks.size()));
    const int width = left + cell * maxw + 20;
    const int height = top + cell * static_cast<int>(rows.size()) + 20;
    std::ofstream svg(path);
    svg << svg_header(width, height);
    svg << "<text x=\"8\" y=\"20\" font-size=\"13\">Betti numbers w_j of the Xi resolutions"
           "</text>\n";
    for (int j = 0; j < maxw; ++j)
        svg << "<text x=\"" << left + j * cell + 10 << "\" y=\"" << top - 6
            << "\" font-size=\"11\">j=" << (j + 1) << "</text>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        svg << "<text x=\"8\" y=\"" << top + i * cell + 21 << "\" font-size=\"11\">"
            << rows[i].first << "</text>\n";
        for (std::size_t j = 0; j < rows[i].second.size(); ++j) {
            svg << "<rect x=\"" << left + j * cell << "\" y=\"" << top + i * cell
                << "\" width=\"" << cell - 2 << "\" height=\"" << cell - 2
                << "\" fill=\"#e8eef7\" stroke=\"#4a6b9a\"/>\n";
            svg << "<text x=\"" << left + j * cell + 10 << "\" y=\"" << top + i * cell + 21
                << "\" font-size=\"12\">" << rows[i].second[j] << "</text>\n";
        }
    }
    svg << "</svg>\n";
}

void write_hilbert_svg(const Json& report, const std::string& path) {
    std::vector<std::pair<std::string, std::vector<long>>> rows;
    long maxval = 1;
    std::size_t maxlen = 2;
    for (const auto& p : report.at("points")) {
        if (!p.contains("hilbert")) continue;
        std::vector<long> h;
        for (const auto& v : p.at("hilbert")) h.push_back(v.get<long>());
        for (long v : h) maxval = std::max(maxval, v);
        maxlen = std::max(maxlen, h.size());
        rows.emplace_back("(" + std::to_string(p.at("n").get<int>()) + "," +
                              std::to_string(p.at("r").get<int>()) + "," +
                              std::to_string(p.at("m").get<int>()) + ")",
                          h);
    }
    const int w = 560, h = 360, left = 50, bottom = 40;
    std::ofstream svg(path);
    svg << svg_header(w, h);
    svg << "<text x=\"8\" y=\"18\" font-size=\"13\">dim D^(m)(A)_p by pdeg</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"20\" x2=\"" << left << "\" y2=\"" << h - bottom
        << "\" stroke=\"#444\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - 10
        << "\" y2=\"" << h - bottom << "\" stroke=\"#444\"/>\n";
    const char* colors[] = {"#3465a4", "#cc0000", "#4e9a06", "#f57900", "#75507b", "#0bbbbb"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& hs = rows[i].second;
        std::ostringstream pts;
        for (std::size_t p = 0; p < hs.size(); ++p) {
            const double x = left + (w - left - 20.0) * p / std::max<std::size_t>(1, maxlen - 1);
            const double y = (h - bottom) - (h - bottom - 30.0) * hs[p] / maxval;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
            pts << buf;
        }
        svg << "<polyline fill=\"none\" stroke=\"" << colors[i % 6] << "\" points=\""
            << pts.str() << "\"/>\n";
        svg << "<text x=\"" << w - 120 << "\" y=\"" << 34 + 14 * i << "\" font-size=\"11\" fill=\""
            << colors[i % 6] << "\">" << rows[i].first << "</text>\n";
    }
    svg << "</svg>\n";
}

int cmd_report(const std::string& grid_file, const std::string& svg_dir) {
    const Json rep = load_json(grid_file);
    // plain-text table
    std::printf("  n  r  m  pass\n");
    bool all = true;
    for (const auto& p : rep.at("points")) {
        const bool pass = p.at("pass").get<bool>();
        all = all && pass;
        std::printf("  %d  %d  %d  %s\n", p.at("n").get<int>(), p.at("r").get<int>(),
                    p.at("m").get<int>(), pass ? "pass" : "FAIL");
        if (p.contains("failures"))
            for (const auto& f : p.at("failures"))
                std::printf("        ! %s\n", f.get<std::string>().c_str());
    }
    std::printf("%s\n", rep.at("all_pass").get<bool>() ? "all points pass" : "FAILURES present");
    if (!svg_dir.empty()) {
        write_betti_svg(rep, svg_dir + "/betti.svg");
        write_hilbert_svg(rep, svg_dir + "/hilbert.svg");
    }
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hadiff: modules of differential operators on generic hyperplane arrangements"};
    app.require_subcommand(1);

    int n = 3, r = 4, m = 1, degree_bound = -1;
    std::uint64_t seed = 20240801;
    std::string arr_file, ops_file, out_file, config_file, svg_dir;
    bool verify = false;

    auto* gen = app.add_subcommand("gen", "generate a generic arrangement");
    gen->add_option("--n", n, "ambient dimension")->required();
    gen->add_option("--r", r, "number of hyperplanes")->required();
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out", out_file, "output file (stdout if omitted)");

    auto* chk = app.add_subcommand("check-generic", "test genericity of an arrangement");
    chk->add_option("file", arr_file, "arrangement JSON")->required();

    auto* bas = app.add_subcommand("basis", "construct a free basis of D^(m)(A)");
    bas->add_option("file", arr_file, "arrangement JSON")->required();
    bas->add_option("--m", m, "operator order")->required();
    bas->add_option("--seed", seed, "seed for the generic extension");
    bas->add_option("--out", out_file, "output file");

    auto* sai = app.add_subcommand("saito-check", "Saito-Holm basis certification");
    sai->add_option("arrangement", arr_file, "arrangement JSON")->required();
    sai->add_option("operators", ops_file, "operator list JSON (as written by basis)")->required();

    auto* res = app.add_subcommand("resolve", "minimal free resolution of Xi^(m)(A)");
    res->add_option("file", arr_file, "arrangement JSON")->required();
    res->add_option("--m", m, "operator order")->required();
    res->add_option("--degree-bound", degree_bound, "graded exactness bound (default r+m+n)");
    res->add_flag("--verify", verify, "run the verification report");
    res->add_option("--seed", seed, "seed for random evaluation points");
    res->add_option("--out", out_file, "output file");

    auto* jet = app.add_subcommand("jet", "jet presentations and the Coker resolution");
    jet->add_option("file", arr_file, "arrangement JSON")->required();
    jet->add_option("--m", m, "jet order")->required();
    jet->add_option("--degree-bound", degree_bound, "graded exactness bound (default r+m+n)");
    jet->add_flag("--verify", verify, "run the verification report");
    jet->add_option("--seed", seed, "seed for random evaluation points");
    jet->add_option("--out", out_file, "output file");

    auto* grd = app.add_subcommand("grid", "run a verification sweep over (n, r, m) triples");
    grd->add_option("--config", config_file, "grid config JSON (default: built-in grid)");
    auto* seed_opt = grd->add_option("--seed", seed, "override the config seed");
    grd->add_option("--out", out_file, "write the JSON report here");

    auto* repc = app.add_subcommand("report", "render a grid report (table + SVG charts)");
    repc->add_option("file", arr_file, "grid report JSON")->required();
    repc->add_option("--svg-dir", svg_dir, "directory for betti.svg and hilbert.svg");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(n, r, seed, out_file);
        if (chk->parsed()) return cmd_check_generic(arr_file);
        if (bas->parsed()) return cmd_basis(arr_file, m, seed, out_file);
        if (sai->parsed()) return cmd_saito_check(arr_file, ops_file);
        if (res->parsed())
            return cmd_resolve(arr_file, m, degree_bound, verify, seed, out_file);
        if (jet->parsed()) return cmd_jet(arr_file, m, degree_bound, verify, seed, out_file);
        if (grd->parsed()) return cmd_grid(config_file, seed, seed_opt->count() > 0, out_file);
        if (repc->parsed()) return cmd_report(arr_file, svg_dir);
    } catch (const GenericityViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
