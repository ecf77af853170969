#include "projangles/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "projangles/eigen.hpp"

namespace pa {

BipartiteGraph make_bipartite(std::size_t n1, std::size_t n2,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    if (n1 == 0 || n2 == 0) raise_domain("bipartite graph: both parts must be nonempty");
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& [u, v] : edges) {
        if (u >= n1 || v >= n2) raise_domain("bipartite graph: edge endpoint out of range");
        if (!seen.insert({u, v}).second) raise_domain("bipartite graph: duplicate edge");
    }
    BipartiteGraph g{n1, n2, std::move(edges)};
    for (std::size_t d : degrees_part1(g))
        if (d == 0) raise_domain("bipartite graph: isolated vertex in part 1");
    for (std::size_t d : degrees_part2(g))
        if (d == 0) raise_domain("bipartite graph: isolated vertex in part 2");
    return g;
}

std::vector<std::size_t> degrees_part1(const BipartiteGraph& g) {
    std::vector<std::size_t> d(g.n1, 0);
    for (const auto& [u, v] : g.edges) ++d[u];
    return d;
}

std::vector<std::size_t> degrees_part2(const BipartiteGraph& g) {
    std::vector<std::size_t> d(g.n2, 0);
    for (const auto& [u, v] : g.edges) ++d[v];
    return d;
}

namespace {

std::vector<std::vector<std::uint32_t>> adjacency_lists(const BipartiteGraph& g) {
    // part2 vertex v lives at index n1 + v
    std::vector<std::vector<std::uint32_t>> adj(g.n1 + g.n2);
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(static_cast<std::uint32_t>(g.n1 + v));
        adj[g.n1 + v].push_back(u);
    }
    return adj;
}

}  // namespace

std::size_t component_count(const BipartiteGraph& g) {
    const auto adj = adjacency_lists(g);
    std::vector<char> seen(adj.size(), 0);
    std::size_t comps = 0;
    for (std::uint32_t s = 0; s < adj.size(); ++s) {
        if (seen[s]) continue;
        ++comps;
        std::deque<std::uint32_t> q{s};
        seen[s] = 1;
        while (!q.empty()) {
            const std::uint32_t x = q.front();
            q.pop_front();
            for (std::uint32_t y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    q.push_back(y);
                }
        }
    }
    return comps;
}

bool is_connected(const BipartiteGraph& g) { return component_count(g) == 1; }

std::size_t girth(const BipartiteGraph& g) {
    const auto adj = adjacency_lists(g);
    std::size_t best = 0;
    std::vector<int> dist(adj.size());
    std::vector<int> parent(adj.size());
    for (std::uint32_t s = 0; s < adj.size(); ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::deque<std::uint32_t> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            const std::uint32_t x = q.front();
            q.pop_front();
            for (std::uint32_t y : adj[x]) {
                if (dist[y] < 0) {
                    dist[y] = dist[x] + 1;
                    parent[y] = static_cast<int>(x);
                    q.push_back(y);
                } else if (static_cast<int>(y) != parent[x]) {
                    const std::size_t cyc = static_cast<std::size_t>(dist[x] + dist[y] + 1);
                    if (best == 0 || cyc < best) best = cyc;
                }
            }
        }
    }
    return best;
}

Matrix normalized_laplacian(const BipartiteGraph& g) {
    const std::size_t n = g.n1 + g.n2;
    const auto d1 = degrees_part1(g);
    const auto d2 = degrees_part2(g);
    Matrix lap = Matrix::identity(n);
    for (const auto& [u, v] : g.edges) {
        const double w = 1.0 / std::sqrt(static_cast<double>(d1[u]) * static_cast<double>(d2[v]));
        lap(u, g.n1 + v) = -w;
        lap(g.n1 + v, u) = -w;
    }
    return lap;
}

double kappa(const BipartiteGraph& g) {
    if (!is_connected(g)) {
        std::ostringstream os;
        os << "kappa: graph is disconnected (" << component_count(g) << " components)";
        raise_domain(os.str());
    }
    // For a bipartite graph the normalized-Laplacian spectrum is
    // {1 - s_i} u {1 + s_i} u {1 x (n1+n2-2k)} with s_i the singular values
    // of the degree-normalized biadjacency block.
    const auto d1 = degrees_part1(g);
    const auto d2 = degrees_part2(g);
    Matrix b(g.n1, g.n2, 0.0);
    for (const auto& [u, v] : g.edges)
        b(u, v) = 1.0 / std::sqrt(static_cast<double>(d1[u]) * static_cast<double>(d2[v]));
    Svd s = svd(b);
    const std::size_t k = s.sigma.size();
    std::vector<double> lams;
    lams.reserve(g.n1 + g.n2);
    for (double si : s.sigma) {
        lams.push_back(1.0 - si);
        lams.push_back(1.0 + si);
    }
    for (std::size_t i = 0; i < g.n1 + g.n2 - 2 * k; ++i) lams.push_back(1.0);
    std::sort(lams.begin(), lams.end());
    for (double lam : lams)
        if (lam > 1e-9 && lam < 2.0 - 1e-9) return lam;
    raise_domain("kappa: no eigenvalue strictly between 0 and 2 (trivial spectrum)");
}

SpectralReport b_delta_r(const BipartiteGraph& g, double r) {
    if (std::isnan(r) || r < 1.0) raise_domain("b_delta_r requires r >= 1");
    SpectralReport rep;
    rep.kappa = kappa(g);
    rep.v_min = static_cast<std::uint64_t>(std::min(g.n1, g.n2));
    rep.r = r;
    rep.b_value = (1.0 - rep.kappa) * std::pow(static_cast<double>(rep.v_min), 1.0 / r);
    return rep;
}

// ---------------------------------------------------------------------------
// Finite fields GF(q) for q in {2, 3, 4, 5, 7, 8, 9}
// ---------------------------------------------------------------------------

namespace {

// Elements are encoded base p as coefficient vectors of polynomials over
// GF(p); q in {4, 8, 9} uses a hardcoded irreducible reduction polynomial
// (x^2+x+1 over GF(2), x^3+x+1 over GF(2), x^2+1 over GF(3)).
class Gf {
public:
    explicit Gf(std::uint32_t q) : q_(q) {
        switch (q) {
            case 2: case 3: case 5: case 7:
                p_ = q;
                deg_ = 1;
                break;
            case 4:
                p_ = 2;
                deg_ = 2;
                red_ = {1, 1};  // x^2 = x + 1
                break;
            case 8:
                p_ = 2;
                deg_ = 3;
                red_ = {1, 1, 0};  // x^3 = x + 1
                break;
            case 9:
                p_ = 3;
                deg_ = 2;
                red_ = {2, 0};  // x^2 = -1 = 2
                break;
            default:
                raise_domain("unsupported field order (q must be one of 2,3,4,5,7,8,9)");
        }
        build_tables();
    }

    std::uint32_t order() const { return q_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }

private:
    std::vector<std::uint32_t> digits(std::uint32_t e) const {
        std::vector<std::uint32_t> d(deg_);
        for (std::size_t i = 0; i < deg_; ++i) {
            d[i] = e % p_;
            e /= p_;
        }
        return d;
    }
    std::uint32_t encode(const std::vector<std::uint32_t>& d) const {
        std::uint32_t e = 0;
        for (std::size_t i = deg_; i-- > 0;) e = e * p_ + d[i];
        return e;
    }

    void build_tables() {
        add_.resize(q_ * q_);
        mul_.resize(q_ * q_);
        for (std::uint32_t a = 0; a < q_; ++a) {
            for (std::uint32_t b = 0; b < q_; ++b) {
                auto da = digits(a), db = digits(b);
                std::vector<std::uint32_t> ds(deg_);
                for (std::size_t i = 0; i < deg_; ++i) ds[i] = (da[i] + db[i]) % p_;
                add_[a * q_ + b] = encode(ds);

                // schoolbook polynomial product, reduced degree by degree
                std::vector<std::uint32_t> prod(2 * deg_ - 1, 0);
                for (std::size_t i = 0; i < deg_; ++i)
                    for (std::size_t j = 0; j < deg_; ++j)
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
                for (std::size_t k = prod.size(); k-- > deg_;) {
                    const std::uint32_t c = prod[k];
                    if (c == 0) continue;
                    prod[k] = 0;
                    for (std::size_t i = 0; i < deg_; ++i)
                        prod[k - deg_ + i] = (prod[k - deg_ + i] + c * red_[i]) % p_;
                }
                prod.resize(deg_);
                mul_[a * q_ + b] = encode(prod);
            }
        }
    }

    std::uint32_t q_ = 0;
    std::uint32_t p_ = 0;
    std::size_t deg_ = 1;
    std::vector<std::uint32_t> red_;  // x^deg as lower-degree coefficients
    std::vector<std::uint32_t> add_;
    std::vector<std::uint32_t> mul_;
};

using Triple = std::array<std::uint32_t, 3>;

// Canonical representatives of the projective points/lines over GF(q):
// first nonzero coordinate equals 1.
std::vector<Triple> projective_points(const Gf& f) {
    const std::uint32_t q = f.order();
    std::vector<Triple> pts;
    for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b) pts.push_back({1, a, b});
    for (std::uint32_t a = 0; a < q; ++a) pts.push_back({0, 1, a});
    pts.push_back({0, 0, 1});
    return pts;
}

}  // namespace

BipartiteGraph projective_plane_graph(std::uint32_t q) {
    static const std::array<std::uint32_t, 7> supported{2, 3, 4, 5, 7, 8, 9};
    if (std::find(supported.begin(), supported.end(), q) == supported.end())
        raise_domain("projective_plane_graph: q must be one of 2,3,4,5,7,8,9");
    const Gf f(q);
    const std::vector<Triple> pts = projective_points(f);
    const std::vector<Triple>& lines = pts;  // self-dual index set
    const std::size_t count = pts.size();

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < count; ++i) {
        for (std::uint32_t j = 0; j < count; ++j) {
            std::uint32_t dotv = 0;
            for (int k = 0; k < 3; ++k) dotv = f.add(dotv, f.mul(pts[i][k], lines[j][k]));
            if (dotv == 0) edges.emplace_back(i, j);
        }
    }
    BipartiteGraph g = make_bipartite(count, count, std::move(edges));

    // Incidence axioms: (q+1)-biregular and any two distinct points share
    // exactly one line.
    const std::size_t expected = static_cast<std::size_t>(q) * q + q + 1;
    if (count != expected) throw Error(ErrorKind::internal, "projective plane: wrong point count");
    for (std::size_t d : degrees_part1(g))
        if (d != q + 1) throw Error(ErrorKind::internal, "projective plane: not (q+1)-regular");
    for (std::size_t d : degrees_part2(g))
        if (d != q + 1) throw Error(ErrorKind::internal, "projective plane: not (q+1)-regular");
    std::vector<std::vector<std::uint32_t>> lines_of(count);
    for (const auto& [u, v] : g.edges) lines_of[u].push_back(v);
    for (std::uint32_t i = 0; i < count; ++i)
        for (std::uint32_t j = i + 1; j < count; ++j) {
            std::size_t common = 0;
            for (std::uint32_t l1 : lines_of[i])
                for (std::uint32_t l2 : lines_of[j])
                    if (l1 == l2) ++common;
            if (common != 1)
                throw Error(ErrorKind::internal,
                            "projective plane: two points not on exactly one common line");
        }
    return g;
}

BipartiteGraph gq2_graph() {
    // Points: 2-subsets (duads) of {0..5}. Lines: perfect matchings
    // (synthemes) of the 6-set. A duad lies on a syntheme containing it.
    std::vector<std::pair<int, int>> duads;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) duads.emplace_back(a, b);

    std::vector<std::array<int, 6>> synthemes;  // three pairs flattened
    for (int b1 = 1; b1 < 6; ++b1) {
        std::vector<int> rest1;
        for (int x = 1; x < 6; ++x)
            if (x != b1) rest1.push_back(x);
        // pair (0, b1); then match the remaining four elements
        for (int k = 1; k < 4; ++k) {
            const int c0 = rest1[0];
            const int c1 = rest1[k];
            std::vector<int> rest2;
            for (int x : rest1)
                if (x != c0 && x != c1) rest2.push_back(x);
            synthemes.push_back({0, b1, c0, c1, rest2[0], rest2[1]});
        }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t d = 0; d < duads.size(); ++d)
        for (std::uint32_t s = 0; s < synthemes.size(); ++s) {
            const auto& syn = synthemes[s];
            for (int pair = 0; pair < 3; ++pair) {
                const int a = std::min(syn[2 * pair], syn[2 * pair + 1]);
                const int b = std::max(syn[2 * pair], syn[2 * pair + 1]);
                if (a == duads[d].first && b == duads[d].second) {
                    edges.emplace_back(d, s);
                    break;
                }
            }
        }
    BipartiteGraph g = make_bipartite(15, 15, std::move(edges));
    if (girth(g) != 8) throw Error(ErrorKind::internal, "gq2: girth is not 8");
    return g;
}

VminResult mgon_vmin(int m, std::uint64_t s, std::uint64_t t) {
    if (m != 3 && m != 4 && m != 6 && m != 8)
        raise_domain("mgon_vmin: m must be one of 3, 4, 6, 8");
    if (s < 1 || t < 1) raise_domain("mgon_vmin: s >= t >= 1 required");
    if (s > 10000 || t > 10000) raise_domain("mgon_vmin: parameters too large");
    VminResult out;
    if (s < t) {
        std::swap(s, t);  // the convention assumes s >= t
        out.swapped = true;
    }
    const std::uint64_t st = s * t;
    switch (m) {
        case 3: out.value = t * t + t + 1; break;
        case 4: out.value = (st + 1) * (t + 1); break;
        case 6: out.value = (st * st + st + 1) * (t + 1); break;
        case 8: out.value = (st * st + 1) * (st + 1) * (t + 1); break;
    }
    return out;
}

ThicknessSweep thickness_threshold(int m_prime, double r, double delta) {
    if (m_prime != 3 && m_prime != 4)
        raise_domain("thickness_threshold: generators exist only for m' in {3, 4}");
    if (std::isnan(r) || r < 1.0) raise_domain("thickness_threshold requires r >= 1");
    if (!(delta > 0.0)) raise_domain("thickness_threshold requires delta > 0");

    ThicknessSweep sweep;
    sweep.m_prime = m_prime;
    sweep.r = r;
    sweep.delta = delta;
    sweep.regime_warning = r <= (m_prime == 3 ? 4.0 : 8.0);

    const std::vector<std::uint32_t> qs =
        m_prime == 3 ? std::vector<std::uint32_t>{2, 3, 4, 5, 7, 8, 9}
                     : std::vector<std::uint32_t>{2};
    for (std::uint32_t q : qs) {
        BipartiteGraph g = m_prime == 3 ? projective_plane_graph(q) : gq2_graph();
        SpectralReport rep = b_delta_r(g, r);
        SweepRow row{q, rep.kappa, rep.v_min, rep.b_value, rep.b_value <= delta};
        if (row.meets_delta && !sweep.threshold_q) sweep.threshold_q = q;
        sweep.rows.push_back(row);
    }
    return sweep;
}

}  // namespace pa
