// projangles command line front door. Collects flags into a JSON run
// configuration and hands it to the shared library through the C API; the
// library writes report and plot files itself and returns the report text.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "projangles.h"

namespace {

using nlohmann::json;

int dispatch(const json& config, bool quiet) {
    char* report = nullptr;
    int exit_code = 0;
    const pa_status status = pa_run_json(config.dump().c_str(), &report, &exit_code);
    if (report) {
        if (status == PA_OK) {
            const bool has_out = config.contains("out");
            if (!has_out && !quiet) std::fwrite(report, 1, std::string(report).size(), stdout);
        } else {
            std::fwrite(report, 1, std::string(report).size(), stderr);
        }
        pa_string_free(report);
    }
    return exit_code;
}

json face_list(const std::vector<std::string>& specs) {
    json arr = json::array();
    for (const std::string& spec : specs) {
        json face = json::array();
        std::size_t pos = 0;
        while (pos < spec.size()) {
            while (pos < spec.size() && (spec[pos] == ' ' || spec[pos] == ',')) ++pos;
            std::size_t end = pos;
            while (end < spec.size() && spec[end] != ' ' && spec[end] != ',') ++end;
            if (end > pos) face.push_back(std::stoi(spec.substr(pos, end - pos)));
            pos = end;
        }
        arr.push_back(std::move(face));
    }
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projection angles, averaged projections and link spectra"};
    app.set_version_flag("--version", std::string("projangles ") + pa_version());
    app.require_subcommand(1);

    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress the report on stdout");

    std::string out, plot, family, graph, group, model, p1, p2, p12;
    std::vector<std::string> subgroups, sigmas, plist;
    std::string eta;
    double r = 2.0, delta = 0.5, tol = 0.0;
    int m = 3;
    unsigned plane = 0;
    bool use_gq2 = false;
    long long seed = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "write the report to this file (atomic)");
        sub->add_option("--seed", seed, "seed for randomized internals");
    };

    CLI::App* spectra = app.add_subcommand("spectra", "spectral gap report for a bipartite link");
    spectra->add_option("--graph", graph, "bipartite graph file");
    spectra->add_option("--plane", plane, "generate the projective plane of order q instead");
    spectra->add_flag("--gq2", use_gq2, "generate the generalized quadrangle GQ(2,2) instead");
    spectra->add_option("--r", r, "Schatten exponent r in the b-value")->capture_default_str();
    add_common(spectra);

    CLI::App* sweep = app.add_subcommand("mgon-sweep", "b-value sweep over generated m-gon links");
    sweep->add_option("--m", m, "generalized m-gon family (3 or 4)")->capture_default_str();
    sweep->add_option("--r", r, "exponent r")->capture_default_str();
    sweep->add_option("--delta", delta, "target delta")->capture_default_str();
    sweep->add_option("--plot", plot, "write an SVG line plot of (q, b_value)");
    add_common(sweep);

    CLI::App* angle = app.add_subcommand("angle", "projection angles");
    angle->add_option("--family", family, "simplex family file");
    angle->add_option("--sigma", sigmas, "codimension-1 face, e.g. \"0 1\" (repeatable)");
    angle->add_option("--p1", p1, "projection file (pair mode)");
    angle->add_option("--p2", p2, "projection file (pair mode)");
    angle->add_option("--p12", p12, "projection onto the image intersection (pair mode)");
    add_common(angle);

    CLI::App* average = app.add_subcommand("average", "averaged-projections iteration");
    average->add_option("--family", family, "simplex family file")->required();
    average->add_option("--tol", tol, "Cauchy stop tolerance");
    add_common(average);

    CLI::App* decompose = app.add_subcommand("decompose", "tree-series and oracle decomposition");
    decompose->add_option("--family", family, "simplex family file")->required();
    decompose->add_option("--eta", eta, "target face, e.g. \"0 1 2\" (default: whole simplex)");
    decompose->add_option("--tol", tol, "tree-series tolerance");
    add_common(decompose);

    CLI::App* gmodel = app.add_subcommand("group-model", "finite-group simplex family report");
    gmodel->add_option("--model", model, "builtin model: s3, d4 or s4");
    gmodel->add_option("--group", group, "group file (table or perm format)");
    gmodel->add_option("--subgroup", subgroups, "subgroup file per codimension-1 face (repeatable)");
    gmodel->add_option("--p", plist, "lp context for the angle sweep (repeatable)");
    add_common(gmodel);

    CLI::App* bridge = app.add_subcommand("bridge", "Schatten link bound and pi(f) bound checks");
    bridge->add_option("--model", model, "builtin model: s3, d4 or s4");
    bridge->add_option("--group", group, "group file");
    bridge->add_option("--subgroup", subgroups, "subgroup file per codimension-1 face (repeatable)");
    bridge->add_option("--r", r, "Schatten exponent")->capture_default_str();
    add_common(bridge);

    CLI11_PARSE(app, argc, argv);

    json config;
    auto put_common = [&] {
        if (!out.empty()) config["out"] = out;
        if (seed >= 0) config["seed"] = seed;
    };

    if (spectra->parsed()) {
        config["subcommand"] = "spectra";
        if (plane) config["plane"] = plane;
        if (use_gq2) config["gq2"] = true;
        if (!graph.empty()) config["graph"] = graph;
        config["r"] = r;
    } else if (sweep->parsed()) {
        config["subcommand"] = "mgon-sweep";
        config["m"] = m;
        config["r"] = r;
        config["delta"] = delta;
        if (!plot.empty()) config["plot"] = plot;
    } else if (angle->parsed()) {
        config["subcommand"] = "angle";
        if (!family.empty()) config["family"] = family;
        if (!sigmas.empty()) config["sigmas"] = face_list(sigmas);
        if (!p1.empty()) config["p1"] = p1;
        if (!p2.empty()) config["p2"] = p2;
        if (!p12.empty()) config["p12"] = p12;
    } else if (average->parsed()) {
        config["subcommand"] = "average";
        config["family"] = family;
        if (tol > 0) config["tol"] = tol;
    } else if (decompose->parsed()) {
        config["subcommand"] = "decompose";
        config["family"] = family;
        if (!eta.empty()) config["eta"] = face_list({eta}).at(0);
        if (tol > 0) config["tol"] = tol;
    } else if (gmodel->parsed() || bridge->parsed()) {
        config["subcommand"] = gmodel->parsed() ? "group-model" : "bridge";
        if (!model.empty()) config["model"] = model;
        if (!group.empty()) config["group"] = group;
        if (!subgroups.empty()) config["subgroups"] = subgroups;
        if (bridge->parsed()) config["r"] = r;
        if (gmodel->parsed() && !plist.empty()) {
            json arr = json::array();
            for (const std::string& p : plist)
                arr.push_back(p == "inf" ? json("inf") : json(std::stod(p)));
            config["p_list"] = std::move(arr);
        }
    }
    put_common();
    return dispatch(config, quiet);
}
