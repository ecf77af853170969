#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "projangles/matrix.hpp"

namespace pa {

// Finite bipartite graph; edges always cross parts, no duplicates, no
// isolated vertices.
struct BipartiteGraph {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (u in part1, v in part2)
};

BipartiteGraph make_bipartite(std::size_t n1, std::size_t n2,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

std::vector<std::size_t> degrees_part1(const BipartiteGraph& g);
std::vector<std::size_t> degrees_part2(const BipartiteGraph& g);
bool is_connected(const BipartiteGraph& g);
std::size_t component_count(const BipartiteGraph& g);
std::size_t girth(const BipartiteGraph& g);  // 0 when acyclic

// Normalized Laplacian I - D^{-1/2} A D^{-1/2} over all n1+n2 vertices.
Matrix normalized_laplacian(const BipartiteGraph& g);

// Smallest positive normalized-Laplacian eigenvalue (0 and the bipartite
// value 2 excluded). Computed through the singular values of the normalized
// biadjacency block. Disconnected graphs are a domain error.
double kappa(const BipartiteGraph& g);

struct MgonParams {
    int m = 0;
    std::uint64_t s = 0;
    std::uint64_t t = 0;
};

struct SpectralReport {
    double kappa = 0.0;
    std::uint64_t v_min = 0;
    double r = 0.0;
    double b_value = 0.0;  // (1 - kappa) * v_min^(1/r)
    std::optional<MgonParams> mgon;
};

SpectralReport b_delta_r(const BipartiteGraph& g, double r);

// Point-line incidence graph of the projective plane of order q,
// q in {2, 3, 4, 5, 7, 8, 9}; the incidence axioms are checked on every
// construction.
BipartiteGraph projective_plane_graph(std::uint32_t q);

// Generalized quadrangle of order (2,2): 15 + 15 vertices, 3-biregular,
// girth 8 (the duad/syntheme model).
BipartiteGraph gq2_graph();

struct VminResult {
    std::uint64_t value = 0;
    bool swapped = false;  // inputs arrived with s < t and were exchanged
};

// Smaller side of a generalized m-gon of order (s, t), m in {3, 4, 6, 8}.
VminResult mgon_vmin(int m, std::uint64_t s, std::uint64_t t);

struct SweepRow {
    std::uint32_t q = 0;
    double kappa = 0.0;
    std::uint64_t v_min = 0;
    double b_value = 0.0;
    bool meets_delta = false;
};

struct ThicknessSweep {
    int m_prime = 0;
    double r = 0.0;
    double delta = 0.0;
    bool regime_warning = false;  // r at or below the proposition's threshold
    std::vector<SweepRow> rows;
    std::optional<std::uint32_t> threshold_q;  // first q with b_value <= delta
};

// Scans the supported generators in ascending q and reports the first one
// whose link satisfies b_value <= delta (not-found keeps the full table).
ThicknessSweep thickness_threshold(int m_prime, double r, double delta);

}  // namespace pa
