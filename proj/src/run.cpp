#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "projangles/eigen.hpp"
#include "projangles/formats.hpp"
#include "projangles/reports.hpp"

namespace pa {

namespace {

using nlohmann::json;

double config_number(const json& config, const std::string& key, double fallback) {
    if (!config.contains(key)) return fallback;
    const json& v = config.at(key);
    if (v.is_string()) return parse_p_value(v.get<std::string>(), "config." + key);
    if (!v.is_number()) raise_domain("config." + key + " must be a number");
    return v.get<double>();
}

std::string config_string(const json& config, const std::string& key) {
    if (!config.contains(key) || !config.at(key).is_string())
        raise_domain("config." + key + " (string) is required");
    return config.at(key).get<std::string>();
}

std::uint64_t effective_seed(const json& config) {
    if (const char* env = std::getenv("PROJANGLES_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        raise_domain("PROJANGLES_SEED must be an unsigned integer");
    }
    if (config.contains("seed")) {
        if (!config.at("seed").is_number_integer() && !config.at("seed").is_number_unsigned())
            raise_domain("config.seed must be an integer");
        return config.at("seed").get<std::uint64_t>();
    }
    return kDefaultSeed;
}

json certificate_json(const Certificate& c) {
    json j{{"n", c.n},
           {"beta", c.beta},
           {"gamma", c.gamma},
           {"gamma_measured", c.gamma_measured},
           {"in_regime", c.in_regime},
           {"iterations", c.iterations},
           {"final_residual", c.final_residual}};
    if (c.in_regime) {
        j["rate"] = c.rate;
        j["constant"] = c.constant;
        j["bound_held"] = c.bound_held;
    } else {
        j["rate"] = nullptr;
        j["constant"] = nullptr;
        j["bound_held"] = nullptr;
    }
    return j;
}

json envelope(const std::string& subcommand, const json& config, std::uint64_t seed,
              json tolerances, json results) {
    return json{{"schema", kSchemaVersion}, {"version", kToolVersion},
                {"subcommand", subcommand},  {"config", config},
                {"seed", seed},              {"tolerances", std::move(tolerances)},
                {"results", std::move(results)}};
}

SimplexFamily load_family(const json& config) {
    const std::string path = config_string(config, "family");
    return parse_family_text(read_file(path), path);
}

Face face_from_json(const json& v, std::size_t n, const std::string& what) {
    if (!v.is_array()) raise_domain(what + " must be an array of vertex ids");
    std::vector<int> verts;
    for (const auto& x : v) {
        if (!x.is_number_integer()) raise_domain(what + " must contain integers");
        verts.push_back(x.get<int>());
    }
    return face_from_vertices(verts, n);
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

std::string run_spectra(const json& config, std::uint64_t seed) {
    BipartiteGraph g = [&] {
        if (config.contains("plane"))
            return projective_plane_graph(config.at("plane").get<std::uint32_t>());
        if (config.contains("gq2") && config.at("gq2").get<bool>()) return gq2_graph();
        const std::string path = config_string(config, "graph");
        return parse_graph_text(read_file(path), path);
    }();
    const double r = config_number(config, "r", 2.0);
    SpectralReport rep = b_delta_r(g, r);
    json results{{"kappa", rep.kappa},
                 {"v_min", rep.v_min},
                 {"r", rep.r},
                 {"b_value", rep.b_value},
                 {"parts", json::array({g.n1, g.n2})},
                 {"edges", g.edges.size()}};
    return json_to_text(envelope("spectra", config, seed,
                                 json{{"kappa_eigen_floor", 1e-9}}, std::move(results))) +
           "\n";
}

std::string run_mgon_sweep(const json& config, std::uint64_t seed, std::string* plot_svg) {
    const int m = static_cast<int>(config_number(config, "m", 3.0));
    const double r = config_number(config, "r", 5.0);
    const double delta = config_number(config, "delta", 0.5);
    ThicknessSweep sweep = thickness_threshold(m, r, delta);

    json config_echo = config;
    std::string csv;
    csv += std::string("# ") + kToolName + " " + kToolVersion + "\n";
    csv += "# schema " + std::to_string(kSchemaVersion) + "\n";
    csv += "# config " + json_to_text(config_echo) + "\n";
    csv += "# seed " + std::to_string(seed) + "\n";
    csv += "# tolerances {\"kappa_eigen_floor\":1e-09}\n";
    csv += "# regime_warning " + std::string(sweep.regime_warning ? "1" : "0") + "\n";
    csv += "q,kappa,v_min,b_value,meets_delta,is_threshold\n";
    for (const SweepRow& row : sweep.rows) {
        const bool is_thr = sweep.threshold_q && *sweep.threshold_q == row.q;
        csv += std::to_string(row.q) + "," + format_double(row.kappa) + "," +
               std::to_string(row.v_min) + "," + format_double(row.b_value) + "," +
               (row.meets_delta ? "1" : "0") + "," + (is_thr ? "1" : "0") + "\n";
    }
    csv += "# threshold_q ";
    csv += sweep.threshold_q ? std::to_string(*sweep.threshold_q) : std::string("none");
    csv += "\n";

    if (plot_svg) {
        std::vector<std::pair<double, double>> series;
        for (const SweepRow& row : sweep.rows)
            series.emplace_back(static_cast<double>(row.q), row.b_value);
        *plot_svg = emit_plot(series, "q", "b_value");
    }
    return csv;
}

std::string run_angle(const json& config, std::uint64_t seed) {
    json results;
    if (config.contains("family")) {
        SimplexFamily family = load_family(config);
        std::vector<Face> sigmas;
        if (config.contains("sigmas")) {
            for (const auto& entry : config.at("sigmas"))
                sigmas.push_back(face_from_json(entry, family.n(), "config.sigmas[i]"));
        } else {
            sigmas = codim1_faces(family.n());
        }
        results["multi_angle"] = multi_angle(family, sigmas);
        json pairwise = json::array();
        for (std::size_t i = 0; i < sigmas.size(); ++i)
            for (std::size_t j = i + 1; j < sigmas.size(); ++j) {
                const double v = angle_no_consistency(family, sigmas[i], sigmas[j]);
                pairwise.push_back(json{{"sigma1", face_label(sigmas[i])},
                                        {"sigma2", face_label(sigmas[j])},
                                        {"angle", v}});
            }
        results["pairwise"] = std::move(pairwise);
    } else {
        const std::string p1 = config_string(config, "p1");
        const std::string p2 = config_string(config, "p2");
        const std::string p12 = config_string(config, "p12");
        Projection a = parse_projection_text(read_file(p1), p1);
        Projection b = parse_projection_text(read_file(p2), p2);
        Projection meet = parse_projection_text(read_file(p12), p12);
        results["pair_angle"] = pair_angle(a, b, meet);
    }
    return json_to_text(envelope("angle", config, seed,
                                 json{{"absorption_tol", 1e-8}}, std::move(results))) +
           "\n";
}

std::string run_average(const json& config, std::uint64_t seed) {
    SimplexFamily family = load_family(config);
    std::vector<Projection> members;
    for (const auto& [face, proj] : family.codim1()) members.push_back(proj);
    AveragedOptions opts;
    opts.tol = config_number(config, "tol", 1e-12);
    opts.max_iter = static_cast<std::size_t>(config_number(config, "max_iter", 20000.0));
    opts.seed = seed;
    AveragedResult avg = averaged_iteration(members, opts);
    if (!avg.converged) {
        std::ostringstream os;
        os << "averaged iteration did not converge in " << opts.max_iter
           << " iterations; residual history tail";
        for (std::size_t i = avg.step_residuals.size() > 5 ? avg.step_residuals.size() - 5 : 0;
             i < avg.step_residuals.size(); ++i)
            os << ' ' << format_double(avg.step_residuals[i]);
        throw Error(ErrorKind::nonconvergence, os.str());
    }
    json results{{"converged", avg.converged},
                 {"iterations", avg.iterations},
                 {"certificate", certificate_json(avg.certificate)},
                 {"limit_rank", avg.limit ? json(avg.limit->rank()) : json(nullptr)},
                 {"intersection_rank", avg.intersection_rank},
                 {"rank_matches", avg.rank_matches},
                 {"limit_idempotency_residual",
                  avg.limit ? json(avg.limit->idem_residual) : json(nullptr)}};
    return json_to_text(envelope("average", config, seed,
                                 json{{"averaged_tol", opts.tol}}, std::move(results))) +
           "\n";
}

std::string run_decompose(const json& config, std::uint64_t seed) {
    SimplexFamily family = load_family(config);
    const Face eta = config.contains("eta")
                         ? face_from_json(config.at("eta"), family.n(), "config.eta")
                         : full_face(family.n());
    const double tol = config_number(config, "tol", 1e-8);

    DecompositionResult oracle = decompose_oracle(family, eta);
    json oracle_json{{"failed", oracle.failed},
                     {"rank_additivity", oracle.rank_additivity},
                     {"direct_sum_ok", oracle.direct_sum_ok}};
    if (oracle.failed) oracle_json["failure_reason"] = oracle.failure_reason;
    json ranks;
    for (const auto& [face, basis] : oracle.summand_bases)
        ranks[face_label(face)] = basis.cols();
    oracle_json["summand_ranks"] = std::move(ranks);

    json tree_json;
    json agreement;
    try {
        DecompositionResult tree = decompose_tree(family, eta, tol);
        tree_json = json{{"failed", tree.failed},
                         {"rank_additivity", tree.rank_additivity},
                         {"direct_sum_ok", tree.direct_sum_ok},
                         {"truncation_depth", tree.truncation_depth}};
        if (tree.failed) tree_json["failure_reason"] = tree.failure_reason;
        json res;
        for (const auto& [k, v] : tree.residuals) res[k] = v;
        tree_json["residuals"] = std::move(res);
        if (!oracle.failed && !tree.failed) {
            const double diff = operator_norm(tree.r_ops.at(eta) - oracle.r_ops.at(eta),
                                              family.ctx(), seed)
                                    .value;
            agreement = json{{"r_eta_difference", diff}, {"within_1e-6", diff <= 1e-6}};
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::domain) throw;
        tree_json = json{{"inapplicable", true}, {"reason", e.what()}};
    }

    json results{{"eta", face_label(eta)},
                 {"oracle", std::move(oracle_json)},
                 {"tree", std::move(tree_json)}};
    if (!agreement.is_null()) results["agreement"] = std::move(agreement);
    return json_to_text(envelope("decompose", config, seed,
                                 json{{"tree_tol", tol}, {"rank_rel_tol", kRankRelTol}},
                                 std::move(results))) +
           "\n";
}

GroupModel load_model(const json& config) {
    if (config.contains("model")) return builtin_model(config.at("model").get<std::string>());
    const std::string gpath = config_string(config, "group");
    FiniteGroup g = parse_group_text(read_file(gpath), gpath);
    if (!config.contains("subgroups") || !config.at("subgroups").is_array())
        raise_domain("config.subgroups (array of paths, one per codimension-1 face) is required");
    SubgroupFamily fam;
    const auto& subs = config.at("subgroups");
    if (subs.size() < 2) raise_domain("config.subgroups needs at least two entries");
    fam.n = subs.size() - 1;
    const Face top = full_face(fam.n);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const std::string spath = subs.at(i).get<std::string>();
        fam.assigned[top & ~(Face{1} << i)] = parse_subgroup_text(read_file(spath), spath, g);
    }
    if (config.contains("top_subgroup")) {
        const std::string tpath = config.at("top_subgroup").get<std::string>();
        fam.assigned[top] = parse_subgroup_text(read_file(tpath), tpath, g);
    } else {
        fam.assigned[top] = Subgroup{0};
    }
    return GroupModel{"custom", std::move(g), std::move(fam)};
}

std::string run_group_model(const json& config, std::uint64_t seed) {
    GroupModel model = load_model(config);
    GroupRep reg = regular_representation(model.group, NormContext::lp(2.0));
    SimplexFamily family = build_simplex_family(reg, model.group, model.family);
    ConsistencyReport cons = consistency_check(family);

    json results{{"model", model.name},
                 {"group_order", model.group.order},
                 {"n", family.n()},
                 {"consistency", json{{"max_residual", cons.max_residual}, {"pass", cons.pass}}}};

    std::vector<double> ps{2.0};
    if (config.contains("p_list")) {
        ps.clear();
        for (const auto& v : config.at("p_list"))
            ps.push_back(v.is_string() ? parse_p_value(v.get<std::string>(), "config.p_list")
                                       : v.get<double>());
    }
    json sweep = json::array();
    for (const AngleSweepRow& row : lp_angle_sweep(model.group, model.family, ps)) {
        sweep.push_back(json{{"p", row.p == kInf ? json("inf") : json(row.p)},
                             {"sigma1", face_label(row.sigma1)},
                             {"sigma2", face_label(row.sigma2)},
                             {"angle", row.value},
                             {"kind", norm_kind_name(row.kind)},
                             {"slack", row.slack}});
    }
    results["angle_sweep"] = std::move(sweep);
    return json_to_text(envelope("group-model", config, seed,
                                 json{{"consistency_pass", 1e-7}}, std::move(results))) +
           "\n";
}

std::string run_bridge(const json& config, std::uint64_t seed) {
    GroupModel model = load_model(config);
    const double r = config_number(config, "r", 2.0);

    std::vector<Face> sigmas;
    for (const auto& [face, sub] : model.family.assigned)
        if (face_card(face) == model.family.n) sigmas.push_back(face);

    json pairs = json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        for (std::size_t j = i + 1; j < sigmas.size(); ++j) {
            const Subgroup k1 = model.family.assigned.at(sigmas[i]);
            const Subgroup k2 = model.family.assigned.at(sigmas[j]);
            Subgroup gens = k1;
            gens.insert(gens.end(), k2.begin(), k2.end());
            const Subgroup ambient = generated_subgroup(model.group, gens);
            SchattenLinkReport rep =
                schatten_link_bound_check(model.group, k1, k2, ambient, r);
            all_pass = all_pass && rep.pass;
            pairs.push_back(json{{"sigma1", face_label(sigmas[i])},
                                 {"sigma2", face_label(sigmas[j])},
                                 {"lhs_schatten", rep.lhs},
                                 {"rhs_b_value", rep.rhs},
                                 {"kappa", rep.kappa},
                                 {"v_min", rep.v_min},
                                 {"pass", rep.pass}});
        }

    // pi(f) bound spot checks on the conjugated regular representation.
    GroupRep reg = regular_representation(model.group, NormContext::lp(2.0));
    Matrix s = Matrix::identity(model.group.order);
    s(0, 0) = 2.0;
    GroupRep conj = conjugated_representation(model.group, reg, s);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int samples = static_cast<int>(config_number(config, "pi_f_samples", 10.0));
    bool pif_all = true;
    double pif_margin = kInf;
    for (int k = 0; k < samples; ++k) {
        std::vector<double> f(model.group.order);
        for (double& v : f) v = gauss(rng);
        PiFBoundReport rep = pi_f_bound_check(conj, model.group, f);
        pif_all = pif_all && rep.holds;
        pif_margin = std::min(pif_margin, rep.bound - rep.lhs);
    }
    json results{{"model", model.name},
                 {"r", r},
                 {"schatten_link", std::move(pairs)},
                 {"schatten_all_pass", all_pass},
                 {"pi_f", json{{"samples", samples},
                               {"all_hold", pif_all},
                               {"min_margin", pif_margin},
                               {"sup_norm_bound", conj.sup_norm_bound}}}};
    return json_to_text(envelope("bridge", config, seed, json{{"schatten_slack", 1e-9}},
                                 std::move(results))) +
           "\n";
}

}  // namespace

RunOutput run(const json& config) {
    if (!config.is_object() || !config.contains("subcommand"))
        raise_domain("config must be a JSON object with a 'subcommand' field");
    const std::string sub = config.at("subcommand").get<std::string>();
    const std::uint64_t seed = effective_seed(config);

    std::string report;
    std::string plot_svg;
    const bool wants_plot = config.contains("plot");
    if (sub == "spectra") {
        report = run_spectra(config, seed);
    } else if (sub == "mgon-sweep") {
        report = run_mgon_sweep(config, seed, wants_plot ? &plot_svg : nullptr);
    } else if (sub == "angle") {
        report = run_angle(config, seed);
    } else if (sub == "average") {
        report = run_average(config, seed);
    } else if (sub == "decompose") {
        report = run_decompose(config, seed);
    } else if (sub == "group-model") {
        report = run_group_model(config, seed);
    } else if (sub == "bridge") {
        report = run_bridge(config, seed);
    } else {
        raise_domain("unknown subcommand '" + sub +
                     "' (expected spectra, mgon-sweep, angle, average, decompose, group-model "
                     "or bridge)");
    }

    if (wants_plot && !plot_svg.empty())
        write_file_atomic(config.at("plot").get<std::string>(), plot_svg);
    if (config.contains("out"))
        write_file_atomic(config.at("out").get<std::string>(), report);
    return RunOutput{0, std::move(report)};
}

RunOutput run_config_text(const std::string& config_json_text) {
    json config;
    try {
        config = json::parse(config_json_text);
    } catch (const json::exception& e) {
        json err{{"schema", kSchemaVersion},
                 {"version", kToolVersion},
                 {"error", json{{"kind", "parse"}, {"message", e.what()}}}};
        return RunOutput{2, json_to_text(err) + "\n"};
    }
    try {
        return run(config);
    } catch (const Error& e) {
        const char* kind = "domain";
        int code = 2;
        switch (e.kind()) {
            case ErrorKind::parse: kind = "parse"; break;
            case ErrorKind::io: kind = "io"; break;
            case ErrorKind::internal: kind = "internal"; break;
            case ErrorKind::nonconvergence:
                kind = "nonconvergence";
                code = 3;
                break;
            case ErrorKind::domain: break;
        }
        json err{{"schema", kSchemaVersion},
                 {"version", kToolVersion},
                 {"config", config},
                 {"error", json{{"kind", kind}, {"message", e.what()}}}};
        return RunOutput{code, json_to_text(err) + "\n"};
    } catch (const std::exception& e) {
        json err{{"schema", kSchemaVersion},
                 {"version", kToolVersion},
                 {"config", config},
                 {"error", json{{"kind", "internal"}, {"message", e.what()}}}};
        return RunOutput{2, json_to_text(err) + "\n"};
    }
}

}  // namespace pa
