#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepk/error.hpp"
#include "sepk/formal_star.hpp"
#include "sepk/graph.hpp"
#include "sepk/graph_io.hpp"
#include "sepk/int_matrix.hpp"
#include "sepk/ktheory.hpp"
#include "sepk/transform.hpp"

namespace sepk::cli {

enum ExitCode : int {
    ok = 0,
    usage = 1,
    invalid_input = 2,
    budget_exceeded = 3,
    precondition = 4,
};

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::DanglingEndpoint:
    case ErrorKind::DuplicateId:
    case ErrorKind::Range:
    case ErrorKind::Invalid: return invalid_input;
    case ErrorKind::BudgetExceeded: return budget_exceeded;
    case ErrorKind::Precondition:
    case ErrorKind::NotBipartite:
    case ErrorKind::NotInKernel:
    case ErrorKind::MalformedExpression:
    case ErrorKind::Unsupported: return precondition;
    }
    return precondition;
}

namespace detail {

inline ordered_json integer_json(const Integer& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

inline ordered_json vector_json(const LabeledVector& v) {
    ordered_json j = ordered_json::object();
    for (std::size_t i = 0; i < v.labels.size(); ++i)
        if (v.coeffs[i] != 0) j[v.labels[i]] = integer_json(v.coeffs[i]);
    return j;
}

inline ordered_json group_json(const AbelianGroupInvariants& g) {
    ordered_json j;
    j["rank"] = g.rank;
    auto f = ordered_json::array();
    for (const auto& d : g.factors) f.push_back(integer_json(d));
    j["factors"] = std::move(f);
    j["group"] = g.to_string();
    return j;
}

inline ordered_json matrix_json(const StarContext& ctx, const FormalMatrix& m) {
    ordered_json j;
    j["rows"] = m.row_labels();
    j["cols"] = m.col_labels();
    auto entries = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = ordered_json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(ctx, m(i, k)));
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// {"v": [re, im], ...}
inline CharacterAssignment load_character(const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Parse, path + ": expected a map from vertex to [re, im]");
    CharacterAssignment out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = *it;
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw Error(ErrorKind::Parse, path + ": value of '" + it.key() + "' is not [re, im]");
        out[it.key()] = {v[0].get<double>(), v[1].get<double>()};
    }
    return out;
}

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x == 0.0 ? 0.0 : x);
    return buf;
}

} // namespace detail

struct Options {
    std::string input;
    std::string builtin;
    std::string format = "text";
    std::optional<std::size_t> budget;
    int depth = 1;
    std::string at;
    std::string element;
    std::string base_file;
    std::string free_file;
    std::optional<std::uint64_t> seed;
};

inline std::size_t effective_budget(const Options& o) {
    if (o.budget) return *o.budget;
    if (const char* env = std::getenv("SEPK_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "SEPK_BUDGET is not a non-negative integer");
        }
    }
    return default_vertex_budget;
}

inline SeparatedGraph load_input(const Options& o) {
    if (!o.builtin.empty()) return builtin(o.builtin);
    return load_graph(o.input);
}

inline std::vector<KernelElement> elements_or_basis(const SeparatedGraph& g, const Options& o) {
    if (!o.element.empty()) return {parse_element(g, o.element)};
    return k1_basis(g);
}

inline int cmd_validate(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto rep = validate(g);
    if (o.format == "json") {
        ordered_json j;
        j["ok"] = rep.ok();
        auto vs = ordered_json::array();
        for (const auto& v : rep.violations) vs.push_back({{"invariant", v.invariant}, {"subject", v.subject}});
        j["violations"] = std::move(vs);
        out << j.dump(2) << "\n";
    } else if (rep.ok()) {
        out << "ok\n";
    } else {
        for (const auto& v : rep.violations) out << "violation: " << v.invariant << " (" << v.subject << ")\n";
    }
    return rep.ok() ? ok : invalid_input;
}

inline std::string basis_text(const std::vector<KernelElement>& basis) {
    std::string s;
    for (std::size_t i = 0; i < basis.size(); ++i) s += (i ? "; " : "") + basis[i].to_string();
    return s;
}

inline int cmd_ktheory(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    require_valid(g);
    const auto k = k_groups_full(g);
    if (o.format == "json") {
        ordered_json j;
        j["K0"] = detail::group_json(k.k0);
        ordered_json k1 = detail::group_json(k.k1());
        auto basis = ordered_json::array();
        for (const auto& b : k.k1_basis) basis.push_back(detail::vector_json(b));
        k1["basis"] = std::move(basis);
        j["K1"] = std::move(k1);
        j["monoid_universal_group"] = detail::group_json(monoid_universal_group(g));
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "K0 = " << k.k0.to_string() << ", K1 = " << k.k1().to_string();
    if (!k.k1_basis.empty()) out << ", K1 basis: " << basis_text(k.k1_basis);
    out << "\n";
    return ok;
}

inline int cmd_k1_tame(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    require_valid(g);
    const auto basis = k1_tame(g);
    if (o.format == "json") {
        ordered_json j = detail::group_json({basis.size(), {}});
        auto b = ordered_json::array();
        for (const auto& x : basis) b.push_back(detail::vector_json(x));
        j["basis"] = std::move(b);
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "K1 = " << AbelianGroupInvariants{basis.size(), {}}.to_string();
    if (!basis.empty()) out << ", basis: " << basis_text(basis);
    out << "\n";
    return ok;
}

inline int cmd_k0_tame(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto r = k0_tame(g, o.depth, effective_budget(o));
    if (o.format == "json") {
        ordered_json j;
        j["base"] = detail::group_json(r.base);
        j["depth"] = r.depth;
        j["W"] = r.layer_ranks;
        j["W_formula"] = r.formula_ranks;
        j["truncated"] = r.truncated;
        j["via_companion"] = r.via_companion;
        j["truncated_group"] = detail::group_json(r.truncated_group());
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "K0 = " << r.to_string() << "\n";
    for (std::size_t i = 0; i < r.layer_ranks.size(); ++i)
        out << "|W_" << i + 2 << "| = " << r.layer_ranks[i] << " (formula " << r.formula_ranks[i] << ")\n";
    if (r.via_companion) out << "computed on the bipartite companion\n";
    return ok;
}

inline int cmd_multires(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto res = multiresolve(g, detail::split_list(o.at), effective_budget(o));
    if (o.format == "json") {
        ordered_json j;
        j["graph"] = to_json(res.graph);
        j["W"] = res.complement;
        j["W_formula"] = complement_rank_formula(g, detail::split_list(o.at));
        out << j.dump(2) << "\n";
        return ok;
    }
    out << serialize(res.graph);
    return ok;
}

inline int cmd_sequence(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto seq = canonical_sequence(g, o.depth, effective_budget(o));
    if (o.format == "json") {
        out << to_json(seq).dump(2) << "\n";
        return ok;
    }
    for (int n = 0; n <= seq.depth(); ++n) {
        const auto& h = seq.graphs[n];
        out << "n = " << n << ": " << h.vertices.size() << " vertices, " << h.edges.size() << " edges, |D_" << n
            << "| = " << seq.layers[n].size() << ", |D_" << n + 1 << "| = " << seq.layers[n + 1].size();
        if (n >= 1) out << ", |W_" << n + 1 << "| = " << seq.complements[n - 1].size();
        out << "\n";
    }
    return ok;
}

inline int cmd_companion(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto c = bipartite_companion(g);
    if (o.format == "json") out << to_json(c).dump(2) << "\n";
    else out << serialize(c);
    return ok;
}

inline int cmd_k1_generator(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto x = parse_element(g, o.element);
    const auto gm = build_generator_matrices(g, x, o.seed);
    if (o.format == "json") {
        ordered_json j;
        j["element"] = detail::vector_json(x);
        j["Z"] = detail::matrix_json(gm.ctx, gm.Z);
        j["T"] = detail::matrix_json(gm.ctx, gm.T);
        j["sigma_T"] = detail::matrix_json(gm.ctx, gm.sigma_T);
        j["U"] = detail::matrix_json(gm.ctx, gm.U);
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "x = " << x.to_string() << "\n";
    out << "Z\n" << gm.Z.to_string(gm.ctx);
    out << "T\n" << gm.T.to_string(gm.ctx);
    out << "σ(T)\n" << gm.sigma_T.to_string(gm.ctx);
    out << "U = Zσ(T)*\n" << gm.U.to_string(gm.ctx);
    return ok;
}

inline int cmd_verify_generator(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto elements = elements_or_basis(g, o);
    bool all = true;
    auto reports = ordered_json::array();
    for (const auto& x : elements) {
        const auto rep = verify_partial_unitary(build_generator_matrices(g, x, o.seed));
        all = all && rep.ok();
        if (o.format == "json") {
            ordered_json j;
            j["element"] = detail::vector_json(x);
            j["ok"] = rep.ok();
            auto checks = ordered_json::array();
            for (const auto& c : rep.checks) {
                ordered_json jc;
                jc["identity"] = c.name;
                jc["holds"] = c.holds;
                jc["mismatches"] = c.mismatches;
                if (!c.error.empty()) jc["error"] = c.error;
                checks.push_back(std::move(jc));
            }
            j["checks"] = std::move(checks);
            j["ZZ*"] = detail::vector_json(rep.zz_star_class);
            j["Z*Z"] = detail::vector_json(rep.z_star_z_class);
            reports.push_back(std::move(j));
        } else {
            out << "x = " << x.to_string() << "\n" << rep.to_string();
        }
    }
    if (o.format == "json") out << reports.dump(2) << "\n";
    else if (elements.empty()) out << "kernel is zero; nothing to verify\n";
    return all ? ok : invalid_input;
}

inline int cmd_phi(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto x = parse_element(g, o.element);
    const auto step = canonical_step_detail(g, effective_budget(o));
    const auto y = phi_transport(g, step, x);
    if (o.format == "json") {
        ordered_json j;
        j["element"] = detail::vector_json(x);
        j["phi"] = detail::vector_json(y);
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "Φ(x) = " << y.to_string() << "\n";
    return ok;
}

inline int cmd_delta(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    const auto x = parse_element(g, o.element);
    const auto d = connecting_map_image(g, x);
    if (o.format == "json") out << detail::vector_json(d).dump(2) << "\n";
    else out << "Δ(λ(x)) = " << d.to_string() << "\n";
    return ok;
}

inline int cmd_character(const Options& o, std::ostream& out) {
    const auto g = load_input(o);
    std::vector<std::string> at = detail::split_list(o.at);
    if (at.empty()) {
        if (!is_bipartite(g)) throw Error(ErrorKind::Precondition, "--at is required for a non-bipartite graph");
        at = bipartite_split(g)->layer0;
    }
    const auto base = detail::load_character(o.base_file);
    const auto free = o.free_file.empty() ? CharacterAssignment{} : detail::load_character(o.free_file);
    const auto lambda = extend_character(g, at, base, free);
    const auto h = multiresolution_at(g, at, effective_budget(o));
    const double residual = character_residual(h, lambda);
    if (o.format == "json") {
        ordered_json j;
        ordered_json vals = ordered_json::object();
        for (const auto& v : h.vertices) vals[v] = {lambda.at(v).real(), lambda.at(v).imag()};
        j["character"] = std::move(vals);
        j["max_residual"] = residual;
        out << j.dump(2) << "\n";
        return ok;
    }
    for (const auto& v : h.vertices)
        out << v << "  " << detail::format_double(lambda.at(v).real()) << "  "
            << detail::format_double(lambda.at(v).imag()) << "\n";
    out << "max relation residual: " << detail::format_double(residual) << "\n";
    return ok;
}

// Runs one command line; reports go to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact K-theory for separated graph C*-algebras", "sepk"};
    app.require_subcommand(1);
    Options o;

    auto add_input = [&](CLI::App* sub) {
        auto* file = sub->add_option("graph", o.input, "graph file");
        auto* b = sub->add_option("--builtin", o.builtin, "built-in example: E(m,n) or lamplighter(p)");
        file->excludes(b);
        b->excludes(file);
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--budget", o.budget, "generated-vertex budget (default SEPK_BUDGET or 1000000)");
        return sub;
    };
    auto add_element = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--element", o.element, "kernel element, e.g. \"X:+1,Y:-1\"");
        if (required) opt->required();
    };

    auto* validate_cmd = add_input(app.add_subcommand("validate", "check the separated-graph invariants"));
    auto* ktheory_cmd = add_input(app.add_subcommand("ktheory", "K0 and K1 of the full graph C*-algebra"));
    auto* k1_tame_cmd = add_input(app.add_subcommand("k1-tame", "K1 of the tame graph C*-algebra"));
    auto* k0_tame_cmd = add_input(app.add_subcommand("k0-tame", "truncated K0 of the tame graph C*-algebra"));
    k0_tame_cmd->add_option("--depth", o.depth, "number of canonical steps")->check(CLI::NonNegativeNumber);
    auto* multires_cmd = add_input(app.add_subcommand("multires", "multiresolution at a vertex set"));
    multires_cmd->add_option("--at", o.at, "comma-separated vertices")->required();
    auto* sequence_cmd = add_input(app.add_subcommand("sequence", "canonical bipartite sequence"));
    sequence_cmd->add_option("--depth", o.depth, "number of canonical steps")->check(CLI::NonNegativeNumber);
    auto* companion_cmd = add_input(app.add_subcommand("companion", "bipartite companion graph"));
    auto* generator_cmd = add_input(app.add_subcommand("k1-generator", "generator matrices Z, T, σ(T), U"));
    add_element(generator_cmd, true);
    generator_cmd->add_option("--seed", o.seed, "random choice of the bijections σ1, σ2");
    auto* verify_cmd = add_input(app.add_subcommand("verify-generator", "check the partial-unitary identities"));
    add_element(verify_cmd, false);
    verify_cmd->add_option("--seed", o.seed, "random choice of the bijections σ1, σ2");
    auto* phi_cmd = add_input(app.add_subcommand("phi", "transport a kernel element one canonical step"));
    add_element(phi_cmd, true);
    auto* delta_cmd = add_input(app.add_subcommand("delta", "connecting-map image of a kernel element"));
    add_element(delta_cmd, true);
    auto* character_cmd = add_input(app.add_subcommand("character", "extend a K0 character to a multiresolution"));
    character_cmd->add_option("--at", o.at, "comma-separated vertices (default: layer 0)");
    character_cmd->add_option("--base", o.base_file, "base character file")->required();
    character_cmd->add_option("--free", o.free_file, "values on the complement W");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return usage;
    }

    auto* sub = app.get_subcommands().front();
    if (o.input.empty() && o.builtin.empty()) {
        err << "error: give a graph file or --builtin\n" << sub->help();
        return usage;
    }
    try {
        if (sub == validate_cmd) return cmd_validate(o, out);
        if (sub == ktheory_cmd) return cmd_ktheory(o, out);
        if (sub == k1_tame_cmd) return cmd_k1_tame(o, out);
        if (sub == k0_tame_cmd) return cmd_k0_tame(o, out);
        if (sub == multires_cmd) return cmd_multires(o, out);
        if (sub == sequence_cmd) return cmd_sequence(o, out);
        if (sub == companion_cmd) return cmd_companion(o, out);
        if (sub == generator_cmd) return cmd_k1_generator(o, out);
        if (sub == verify_cmd) return cmd_verify_generator(o, out);
        if (sub == phi_cmd) return cmd_phi(o, out);
        if (sub == delta_cmd) return cmd_delta(o, out);
        if (sub == character_cmd) return cmd_character(o, out);
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << " (last completed layer " << e.last_completed_layer() << ")\n";
        return budget_exceeded;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    return usage;
}

} // namespace sepk::cli
