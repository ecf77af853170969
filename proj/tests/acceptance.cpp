// Acceptance suite: runs the numbered criteria and prints one PASS/FAIL line
// per criterion. `acceptance --criterion N` runs a single one; the exit code
// is nonzero when anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "projangles/eigen.hpp"
#include "projangles/groups.hpp"

using namespace pa;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

BipartiteGraph six_cycle() {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t i = 0; i < 3; ++i) {
        e.push_back({i, i});
        e.push_back({i, (i + 1) % 3});
    }
    return make_bipartite(3, 3, std::move(e));
}

BipartiteGraph complete_bipartite(std::uint32_t a, std::uint32_t b) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t i = 0; i < a; ++i)
        for (std::uint32_t j = 0; j < b; ++j) e.push_back({i, j});
    return make_bipartite(a, b, std::move(e));
}

Subgroup whole_group(const FiniteGroup& g) {
    Subgroup k(g.order);
    for (std::uint16_t i = 0; i < g.order; ++i) k[i] = i;
    return k;
}

// ---------------------------------------------------------------------------

// Spectral golden values at stated tolerances, each under one second.
Outcome criterion_1() {
    Outcome out;
    auto timed_kappa = [&](const BipartiteGraph& g, double want, double tol,
                           const std::string& name) {
        auto start = std::chrono::steady_clock::now();
        const double have = kappa(g);
        const double elapsed = seconds_since(start);
        out.require(std::abs(have - want) <= tol,
                    name + " kappa " + fmt(have) + " != " + fmt(want));
        out.require(elapsed < 1.0, name + " took " + fmt(elapsed) + " s");
    };
    timed_kappa(projective_plane_graph(2), 1.0 - std::sqrt(2.0) / 3.0, 1e-9, "heawood");
    timed_kappa(six_cycle(), 0.5, 1e-10, "C6");
    timed_kappa(gq2_graph(), 1.0 / 3.0, 1e-9, "GQ(2,2)");
    {
        auto start = std::chrono::steady_clock::now();
        const double have = kappa(complete_bipartite(3, 3));
        out.require(std::abs(1.0 - have) <= 1e-12, "K33 1-kappa " + fmt(1.0 - have) + " != 0");
        out.require(seconds_since(start) < 1.0, "K33 too slow");
    }
    return out;
}

// V_min formula conformance of the generated graphs (exact integers).
Outcome criterion_2() {
    Outcome out;
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        BipartiteGraph g = projective_plane_graph(q);
        const std::uint64_t want = static_cast<std::uint64_t>(q) * q + q + 1;
        out.require(g.n1 == want && g.n2 == want,
                    "plane q=" + std::to_string(q) + " parts " + std::to_string(g.n1));
        out.require(mgon_vmin(3, q, q).value == want, "mgon_vmin(3) mismatch");
    }
    BipartiteGraph gq = gq2_graph();
    out.require(gq.n1 == 15 && gq.n2 == 15, "GQ(2,2) parts");
    out.require(mgon_vmin(4, 2, 2).value == 15, "mgon_vmin(4,2,2)");
    return out;
}

// Sweep behavior: strict decrease over the supported q list for
// r in {4.5, 5, 6} plus the threshold probe, all under five seconds.
Outcome criterion_3() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    for (double r : {4.5, 5.0, 6.0}) {
        ThicknessSweep sweep = thickness_threshold(3, r, 0.7);
        std::string table;
        bool decreasing = true;
        for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
            if (i) {
                table += " ";
                if (sweep.rows[i].b_value >= sweep.rows[i - 1].b_value) decreasing = false;
            }
            table += std::to_string(sweep.rows[i].q) + ":" + fmt(sweep.rows[i].b_value);
        }
        out.require(decreasing,
                    "b-values not strictly decreasing at r=" + fmt(r) + " [" + table + "]");
    }
    ThicknessSweep probe = thickness_threshold(3, 5.0, 0.7);
    out.require(probe.threshold_q && *probe.threshold_q == 2,
                "thickness_threshold(3, 5, 0.7) != 2");
    const double elapsed = seconds_since(start);
    out.require(elapsed < 5.0, "sweeps took " + fmt(elapsed) + " s");
    return out;
}

// Certificate soundness on 200 seeded in-regime instances, under 30 s.
Outcome criterion_4() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const std::size_t nproj = 2 + seed % 2;  // pairs and triples
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(1e-4, 0.9 / (8.0 * nproj - 11.0));
        const double gamma = unif(rng);
        SimplexFamily fam = synthesized_family(nproj - 1, gamma, 10000 + seed);
        std::vector<Projection> ps;
        for (const auto& [face, proj] : fam.codim1()) ps.push_back(proj);

        AveragedResult res = averaged_iteration(ps);
        out.require(res.converged, "seed " + std::to_string(seed) + ": no convergence");
        if (!res.converged) continue;
        out.require(res.certificate.in_regime,
                    "seed " + std::to_string(seed) + ": not in regime");
        out.require(res.certificate.bound_held,
                    "seed " + std::to_string(seed) + ": C r^(i-1) bound violated");
        out.require(res.limit && res.limit->idem_residual <= 1e-8,
                    "seed " + std::to_string(seed) + ": limit not idempotent");
        out.require(res.rank_matches,
                    "seed " + std::to_string(seed) + ": rank != intersection oracle");
        if (!out.pass) break;
    }
    const double elapsed = seconds_since(start);
    out.require(elapsed < 30.0, "took " + fmt(elapsed) + " s");
    out.note("200 instances in " + fmt(elapsed) + " s");
    return out;
}

// Constants formula check and corollary feasibility.
Outcome criterion_5() {
    Outcome out;
    TheoremConstants tc = theorem_constants(2, 1.0, 0.1);
    out.require(std::abs(tc.rate - 13.0 / 18.0) <= 1e-12,
                "rate " + fmt(tc.rate) + " != 0.722222222222");
    out.require(std::abs(tc.constant - 3.6) <= 1e-12, "constant " + fmt(tc.constant) + " != 3.6");
    for (std::size_t n = 2; n <= 6; ++n) {
        CorollaryConstants cc = find_beta0_gamma0(n);
        bool ok = cc.beta0 > 1.0 && cc.gamma0 > 0.0;
        try {
            TheoremConstants t = theorem_constants(n, cc.beta0, cc.gamma0);
            ok = ok && t.rate <= (2.0 * n - 1.0) / (2.0 * n) + 1e-15 &&
                 t.constant <= 4.0 * n + 1e-12;
        } catch (const Error&) {
            ok = false;
        }
        out.require(ok, "find_beta0_gamma0 infeasible at N=" + std::to_string(n));
    }
    return out;
}

struct FamilyBattery {
    std::vector<SimplexFamily> families;
    std::vector<DecompositionResult> trees;
    std::vector<DecompositionResult> oracles;
    double build_seconds = 0.0;
};

FamilyBattery build_battery() {
    FamilyBattery out;
    auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const std::size_t n = 2 + seed % 2;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(1e-5, 1e-3);
        const double gamma = unif(rng);
        out.families.push_back(synthesized_family(n, gamma, 20000 + seed));
        SimplexFamily& fam = out.families.back();
        const Face eta = full_face(n);
        out.trees.push_back(decompose_tree(fam, eta, 1e-8));
        out.oracles.push_back(decompose_oracle(fam, eta));
    }
    out.build_seconds = seconds_since(start);
    return out;
}

// Decomposition equivalence across the two routes, under 60 s.
Outcome criterion_6(const FamilyBattery& battery) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < battery.families.size(); ++i) {
        const SimplexFamily& fam = battery.families[i];
        const Face eta = full_face(fam.n());
        const DecompositionResult& tree = battery.trees[i];
        const DecompositionResult& oracle = battery.oracles[i];
        out.require(!tree.failed && !oracle.failed,
                    "family " + std::to_string(i + 1) + ": decomposition failed");
        if (tree.failed || oracle.failed) break;
        const double diff =
            operator_norm(tree.r_ops.at(eta) - oracle.r_ops.at(eta), fam.ctx()).value;
        out.require(diff <= 1e-6,
                    "family " + std::to_string(i + 1) + ": R_eta differs by " + fmt(diff));
        out.require(tree.rank_additivity && oracle.rank_additivity,
                    "family " + std::to_string(i + 1) + ": rank additivity failed");
        std::size_t oracle_sum = 0;
        for (const auto& [tau, basis] : oracle.summand_bases) oracle_sum += basis.cols();
        out.require(oracle_sum == fam.p_tau(eta).proj.rank(),
                    "family " + std::to_string(i + 1) + ": oracle rank sum mismatch");
        if (!out.pass) break;
    }
    const double elapsed = seconds_since(start) + battery.build_seconds;
    out.require(elapsed < 60.0, "took " + fmt(elapsed) + " s");
    out.note("50 families decomposed and compared in " + fmt(elapsed) + " s");
    return out;
}

// The In-X^eta membership equivalence on the same families.
Outcome criterion_7(const FamilyBattery& battery) {
    Outcome out;
    for (std::size_t i = 0; i < battery.families.size(); ++i) {
        const SimplexFamily& fam = battery.families[i];
        const DecompositionResult& tree = battery.trees[i];
        const DecompositionResult& oracle = battery.oracles[i];
        for (Face eta : all_subfaces(full_face(fam.n()))) {
            const Matrix& image = fam.p_tau(eta).proj.image;
            const Matrix& xeta = oracle.summand_bases.at(eta);
            for (std::size_t col = 0; col < image.cols(); ++col) {
                Matrix v = image.column(col);
                const bool member = subspace_residual(xeta, v) <= 1e-6;
                double max_r = 0.0;
                for (Face tau : all_subfaces(eta)) {
                    if (tau == eta) continue;
                    max_r = std::max(max_r, (tree.r_ops.at(tau) * v).frobenius());
                }
                out.require(member == (max_r <= 1e-6),
                            "family " + std::to_string(i + 1) + " eta {" + face_label(eta) +
                                "} col " + std::to_string(col) + ": member=" +
                                (member ? "1" : "0") + " max_r=" + fmt(max_r));
                if (!out.pass) return out;
            }
        }
    }
    return out;
}

// Small-angle norm conclusion on the in-regime families.
Outcome criterion_8(const FamilyBattery& battery) {
    Outcome out;
    for (std::size_t i = 0; i < battery.families.size(); ++i) {
        const SimplexFamily& fam = battery.families[i];
        const double bound = 4.0 * (static_cast<double>(fam.n()) + 1.0) + 2.0 + 1e-6;
        for (Face tau : all_subfaces(full_face(fam.n()))) {
            const double norm = operator_norm(fam.p_tau(tau).proj.op, fam.ctx()).value;
            out.require(norm <= bound, "family " + std::to_string(i + 1) + " face {" +
                                           face_label(tau) + "}: ||P_tau|| = " + fmt(norm));
            if (!out.pass) return out;
        }
    }
    return out;
}

// Section-4 bridge: Schatten link bound on the shipped models.
Outcome criterion_9() {
    Outcome out;
    {
        GroupModel s3 = builtin_model("s3");
        std::vector<Face> sig = codim1_faces(1);
        SchattenLinkReport rep =
            schatten_link_bound_check(s3.group, s3.family.assigned.at(sig[0]),
                                      s3.family.assigned.at(sig[1]), whole_group(s3.group), 2.0);
        out.require(std::abs(rep.lhs - std::sqrt(2.0) / 2.0) <= 1e-9,
                    "S3 lhs " + fmt(rep.lhs) + " != sqrt(2)/2");
        out.require(std::abs(rep.rhs - std::sqrt(3.0) / 2.0) <= 1e-9,
                    "S3 rhs " + fmt(rep.rhs) + " != sqrt(3)/2");
        out.require(rep.pass, "S3 bound violated");
    }
    {
        GroupModel d4 = builtin_model("d4");
        std::vector<Face> sig = codim1_faces(1);
        for (double r : {2.0, 3.0}) {
            SchattenLinkReport rep = schatten_link_bound_check(
                d4.group, d4.family.assigned.at(sig[0]), d4.family.assigned.at(sig[1]),
                whole_group(d4.group), r);
            out.require(rep.pass, "D4 bound violated at r=" + fmt(r));
        }
    }
    {
        GroupModel s4 = builtin_model("s4");
        std::vector<Face> sig = codim1_faces(2);
        for (std::size_t i = 0; i < sig.size(); ++i)
            for (std::size_t j = i + 1; j < sig.size(); ++j) {
                const Subgroup& k1 = s4.family.assigned.at(sig[i]);
                const Subgroup& k2 = s4.family.assigned.at(sig[j]);
                Subgroup gens = k1;
                gens.insert(gens.end(), k2.begin(), k2.end());
                Subgroup ambient = generated_subgroup(s4.group, gens);
                SchattenLinkReport rep =
                    schatten_link_bound_check(s4.group, k1, k2, ambient, 2.0);
                out.require(rep.pass, "S4 pair " + face_label(sig[i]) + "/" + face_label(sig[j]) +
                                          ": lhs " + fmt(rep.lhs) + " > rhs " + fmt(rep.rhs));
            }
    }
    return out;
}

// pi(f) norm bound: 50 seeded f on the conjugated regular representations.
Outcome criterion_10() {
    Outcome out;
    for (const char* name : {"s3", "s4"}) {
        GroupModel model = builtin_model(name);
        GroupRep reg = regular_representation(model.group, NormContext::lp(2.0));
        Matrix s = Matrix::identity(model.group.order);
        s(0, 0) = 2.0;
        GroupRep conj = conjugated_representation(model.group, reg, s);
        out.require(conj.sup_norm_bound <= 2.0 + 1e-9,
                    std::string(name) + ": sup bound " + fmt(conj.sup_norm_bound) + " > 2");
        std::mt19937_64 rng(std::strcmp(name, "s3") == 0 ? 31ull : 41ull);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::size_t violations = 0;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> f(model.group.order);
            for (double& v : f) v = gauss(rng);
            PiFBoundReport rep = pi_f_bound_check(conj, model.group, f);
            if (!rep.holds) ++violations;
        }
        out.require(violations == 0,
                    std::string(name) + ": " + std::to_string(violations) + " violations");
    }
    return out;
}

// Interpolation inequality instances for the tensor block norm.
Outcome criterion_11() {
    Outcome out;
    std::mt19937_64 rng(55);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 1; trial <= 100; ++trial) {
        Matrix t(4, 4);
        for (double& v : t.data()) v = gauss(rng);
        const std::size_t m = 1 + static_cast<std::size_t>(trial) % 3;
        NormEstimate n2 = tensor_block_norm(t, m, NormContext::lp(2.0));
        NormEstimate n4 = tensor_block_norm(t, m, NormContext::lp(4.0));
        NormEstimate ninf = tensor_block_norm(t, m, NormContext::lp(kInf));
        const double u2 = n2.value + n2.slack;
        const double uinf = ninf.value + ninf.slack;
        // theta = 2/p: p = 4 -> 1/2; p in {2, inf} degenerate to one factor
        out.require(n4.value <= std::sqrt(uinf) * std::sqrt(u2) + 1e-9,
                    "trial " + std::to_string(trial) + " (p=4): " + fmt(n4.value) + " > " +
                        fmt(std::sqrt(uinf * u2)));
        out.require(n2.value <= u2 + 1e-9, "trial " + std::to_string(trial) + " (p=2)");
        out.require(ninf.value <= uinf + 1e-9, "trial " + std::to_string(trial) + " (p=inf)");
        if (!out.pass) break;
    }
    return out;
}

// Consistency exactness of the shipped group models.
Outcome criterion_12() {
    Outcome out;
    for (const std::string& name : builtin_model_names()) {
        GroupModel model = builtin_model(name);
        GroupRep reg = regular_representation(model.group, NormContext::lp(2.0));
        SimplexFamily fam = build_simplex_family(reg, model.group, model.family);
        ConsistencyReport rep = consistency_check(fam);
        out.require(rep.max_residual <= 1e-10,
                    name + ": consistency residual " + fmt(rep.max_residual));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    FamilyBattery battery;
    const bool needs_battery = only == 0 || (only >= 6 && only <= 8);
    if (needs_battery) battery = build_battery();

    int failures = 0;
    auto report = [&](int id, Outcome outcome) {
        std::printf("criterion-%d %s%s%s\n", id, outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.empty() ? "" : ": ", outcome.detail.c_str());
        if (!outcome.pass) ++failures;
    };

    for (int id = 1; id <= 12; ++id) {
        if (only != 0 && id != only) continue;
        switch (id) {
            case 1: report(1, criterion_1()); break;
            case 2: report(2, criterion_2()); break;
            case 3: report(3, criterion_3()); break;
            case 4: report(4, criterion_4()); break;
            case 5: report(5, criterion_5()); break;
            case 6: report(6, criterion_6(battery)); break;
            case 7: report(7, criterion_7(battery)); break;
            case 8: report(8, criterion_8(battery)); break;
            case 9: report(9, criterion_9()); break;
            case 10: report(10, criterion_10()); break;
            case 11: report(11, criterion_11()); break;
            case 12: report(12, criterion_12()); break;
        }
    }
    return failures == 0 ? 0 : 1;
}
