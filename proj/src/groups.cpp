#include "projangles/groups.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "projangles/eigen.hpp"

namespace pa {

namespace {

constexpr std::size_t kOrderCap = 120;

void spot_check_group(const FiniteGroup& g) {
    const std::size_t n = g.order;
    if (n == 0 || n > kOrderCap) raise_domain("group order must be in [1, 120]");
    if (g.mul.size() != n * n) raise_domain("group table size mismatch");
    for (std::uint16_t v : g.mul)
        if (v >= n) raise_domain("group table entry out of range");
    for (std::uint16_t a = 0; a < n; ++a) {
        if (g.product(0, a) != a || g.product(a, 0) != a)
            raise_domain("group identity must sit at index 0");
        if (g.product(a, g.inv[a]) != 0 || g.product(g.inv[a], a) != 0)
            raise_domain("group inverse table inconsistent with multiplication");
    }
    std::mt19937_64 rng(0x5eedu);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (int i = 0; i < 1000; ++i) {
        const std::uint16_t a = static_cast<std::uint16_t>(pick(rng));
        const std::uint16_t b = static_cast<std::uint16_t>(pick(rng));
        const std::uint16_t c = static_cast<std::uint16_t>(pick(rng));
        if (g.product(g.product(a, b), c) != g.product(a, g.product(b, c)))
            raise_domain("group table is not associative");
    }
}

std::vector<std::uint16_t> inverses_from_table(std::size_t order,
                                               const std::vector<std::uint16_t>& mul) {
    std::vector<std::uint16_t> inv(order, 0);
    for (std::size_t a = 0; a < order; ++a) {
        bool found = false;
        for (std::size_t b = 0; b < order; ++b)
            if (mul[a * order + b] == 0) {
                inv[a] = static_cast<std::uint16_t>(b);
                found = true;
                break;
            }
        if (!found) raise_domain("group element without inverse");
    }
    return inv;
}

using Perm = std::vector<int>;  // 0-based images

Perm perm_from_cycles(std::size_t degree, const PermCycles& cycles) {
    Perm p(degree);
    for (std::size_t i = 0; i < degree; ++i) p[i] = static_cast<int>(i);
    for (const auto& cyc : cycles) {
        if (cyc.size() < 2) raise_domain("permutation cycle must have length >= 2");
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            const int from = cyc[i] - 1;
            const int to = cyc[(i + 1) % cyc.size()] - 1;
            if (from < 0 || to < 0 || from >= static_cast<int>(degree) ||
                to >= static_cast<int>(degree))
                raise_domain("permutation cycle entry out of range");
            p[from] = to;
        }
    }
    return p;
}

Perm perm_compose(const Perm& a, const Perm& b) {
    // (a b)(x) = a(b(x))
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

std::string perm_label(const Perm& p) {
    std::ostringstream os;
    std::vector<char> seen(p.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i] || p[i] == static_cast<int>(i)) continue;
        any = true;
        os << '(';
        std::size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = 1;
            if (!first) os << ' ';
            os << (j + 1);
            first = false;
            j = static_cast<std::size_t>(p[j]);
        }
        os << ')';
    }
    return any ? os.str() : "e";
}

}  // namespace

FiniteGroup group_from_table(std::size_t order, std::vector<std::uint16_t> mul,
                             std::vector<std::string> labels) {
    FiniteGroup g;
    g.order = order;
    g.mul = std::move(mul);
    if (order > 0 && g.mul.size() == order * order) g.inv = inverses_from_table(order, g.mul);
    g.labels = std::move(labels);
    if (g.labels.empty())
        for (std::size_t i = 0; i < order; ++i) g.labels.push_back("g" + std::to_string(i));
    spot_check_group(g);
    return g;
}

FiniteGroup group_from_permutations(std::size_t degree, const std::vector<PermCycles>& generators) {
    if (degree == 0 || degree > 16) raise_domain("permutation degree must be in [1, 16]");
    std::vector<Perm> gens;
    for (const auto& c : generators) gens.push_back(perm_from_cycles(degree, c));

    Perm id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<int>(i);
    std::vector<Perm> elems{id};
    std::map<Perm, std::uint16_t> index{{id, 0}};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        const Perm cur = elems[head];
        for (const Perm& gperm : gens) {
            Perm nxt = perm_compose(gperm, cur);
            if (index.count(nxt)) continue;
            if (elems.size() >= kOrderCap)
                raise_domain("generated group exceeds the order cap of 120");
            index[nxt] = static_cast<std::uint16_t>(elems.size());
            elems.push_back(std::move(nxt));
        }
    }

    const std::size_t order = elems.size();
    std::vector<std::uint16_t> mul(order * order);
    for (std::size_t a = 0; a < order; ++a)
        for (std::size_t b = 0; b < order; ++b)
            mul[a * order + b] = index.at(perm_compose(elems[a], elems[b]));
    std::vector<std::string> labels;
    for (const Perm& p : elems) labels.push_back(perm_label(p));
    return group_from_table(order, std::move(mul), std::move(labels));
}

bool is_subgroup(const FiniteGroup& g, const Subgroup& k) {
    if (k.empty()) return false;
    std::set<std::uint16_t> set(k.begin(), k.end());
    if (set.size() != k.size()) return false;
    if (!set.count(0)) return false;
    for (std::uint16_t a : k) {
        if (a >= g.order) return false;
        if (!set.count(g.inv[a])) return false;
        for (std::uint16_t b : k)
            if (!set.count(g.product(a, b))) return false;
    }
    return true;
}

Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<std::uint16_t>& generators) {
    std::set<std::uint16_t> set{0};
    std::vector<std::uint16_t> queue{0};
    for (std::uint16_t x : generators) {
        if (x >= g.order) raise_domain("subgroup generator out of range");
        if (set.insert(x).second) queue.push_back(x);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint16_t a = queue[head];
        for (std::uint16_t b : std::vector<std::uint16_t>(queue.begin(), queue.end())) {
            for (std::uint16_t c : {g.product(a, b), g.product(b, a), g.inv[a]})
                if (set.insert(c).second) queue.push_back(c);
        }
    }
    return Subgroup(set.begin(), set.end());
}

FiniteGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& k,
                              std::vector<std::uint16_t>* to_parent) {
    if (!is_subgroup(g, k)) raise_domain("subgroup_as_group: not a subgroup");
    Subgroup sorted = k;
    std::sort(sorted.begin(), sorted.end());  // identity (index 0) stays first
    std::map<std::uint16_t, std::uint16_t> reindex;
    for (std::size_t i = 0; i < sorted.size(); ++i) reindex[sorted[i]] = static_cast<std::uint16_t>(i);
    const std::size_t order = sorted.size();
    std::vector<std::uint16_t> mul(order * order);
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < order; ++a) {
        labels.push_back(g.labels[sorted[a]]);
        for (std::size_t b = 0; b < order; ++b)
            mul[a * order + b] = reindex.at(g.product(sorted[a], sorted[b]));
    }
    if (to_parent) *to_parent = sorted;
    return group_from_table(order, std::move(mul), std::move(labels));
}

Subgroup SubgroupFamily::subgroup_for_face(const FiniteGroup& g, Face tau) const {
    auto it = assigned.find(tau);
    if (it != assigned.end()) return it->second;
    // Smaller faces: the subgroup generated by the stabilizers of the
    // codimension-1 faces containing tau.
    std::vector<std::uint16_t> gens;
    for (const auto& [face, sub] : assigned) {
        if (face_card(face) != n) continue;
        if (!face_subset(tau, face)) continue;
        gens.insert(gens.end(), sub.begin(), sub.end());
    }
    if (gens.empty()) raise_domain("subgroup_for_face: no codimension-1 face contains this face");
    return generated_subgroup(g, gens);
}

void validate_subgroup_family(const FiniteGroup& g, const SubgroupFamily& fam) {
    const Face top = full_face(fam.n);
    if (!fam.assigned.count(top)) raise_domain("subgroup family: missing the top subgroup");
    std::size_t codim1 = 0;
    for (const auto& [face, sub] : fam.assigned) {
        if (!face_subset(face, top)) raise_domain("subgroup family: face outside the simplex");
        if (face_card(face) != fam.n && face != top)
            raise_domain("subgroup family: only codimension-1 faces and the top face are assigned");
        if (!is_subgroup(g, sub)) raise_domain("subgroup family: listed set is not a subgroup");
        if (face_card(face) == fam.n) ++codim1;
    }
    if (codim1 != fam.n + 1)
        raise_domain("subgroup family: expected one subgroup per codimension-1 face");
    // G_sigma must contain G_tau whenever sigma is a face of tau; with only
    // codimension-1 faces and the top assigned this reduces to the top check.
    const Subgroup& gtop = fam.assigned.at(top);
    for (const auto& [face, sub] : fam.assigned) {
        if (face == top) continue;
        std::set<std::uint16_t> set(sub.begin(), sub.end());
        for (std::uint16_t x : gtop)
            if (!set.count(x))
                raise_domain("subgroup family: top subgroup not contained in a face subgroup");
    }
}

GroupRep make_rep(const FiniteGroup& g, std::vector<Matrix> mats, NormContext ctx) {
    if (mats.size() != g.order) raise_domain("representation: one matrix per element required");
    const std::size_t dim = mats.empty() ? 0 : mats[0].rows();
    for (const Matrix& m : mats) {
        m.validate("representation matrix");
        if (!m.square() || m.rows() != dim) raise_domain("representation: matrices must be square of equal size");
    }
    if ((mats[0] - Matrix::identity(dim)).frobenius() > 1e-10)
        raise_domain("representation: pi(identity) != I");
    std::mt19937_64 rng(0x9e37u);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(g.order - 1));
    for (int i = 0; i < 1000; ++i) {
        const std::uint16_t a = static_cast<std::uint16_t>(pick(rng));
        const std::uint16_t b = static_cast<std::uint16_t>(pick(rng));
        const Matrix lhs = mats[a] * mats[b];
        const Matrix& rhs = mats[g.product(a, b)];
        if ((lhs - rhs).frobenius() > 1e-8 * (1.0 + rhs.frobenius()))
            raise_domain("representation: homomorphism law fails on a sampled pair");
    }
    GroupRep rep;
    rep.dim = dim;
    rep.ctx = ctx;
    rep.mats = std::move(mats);
    double sup = 0.0;
    for (const Matrix& m : rep.mats) sup = std::max(sup, operator_norm(m, ctx).value);
    rep.sup_norm_bound = sup;
    return rep;
}

GroupRep regular_representation(const FiniteGroup& g, NormContext ctx) {
    // Left regular representation: pi(g) e_h = e_{gh}.
    std::vector<Matrix> mats;
    mats.reserve(g.order);
    for (std::uint16_t a = 0; a < g.order; ++a) {
        Matrix m(g.order, g.order, 0.0);
        for (std::uint16_t h = 0; h < g.order; ++h) m(g.product(a, h), h) = 1.0;
        mats.push_back(std::move(m));
    }
    return make_rep(g, std::move(mats), ctx);
}

GroupRep conjugated_representation(const FiniteGroup& g, const GroupRep& rep, const Matrix& s) {
    if (!s.square() || s.rows() != rep.dim) raise_domain("conjugation: shape mismatch");
    Matrix sinv = inverse(s);
    std::vector<Matrix> mats;
    mats.reserve(rep.mats.size());
    for (const Matrix& m : rep.mats) mats.push_back(s * m * sinv);
    return make_rep(g, std::move(mats), rep.ctx);
}

Projection averaging_operator(const GroupRep& rep, const FiniteGroup& g, const Subgroup& k) {
    if (!is_subgroup(g, k)) raise_domain("averaging_operator: input is not a subgroup");
    Matrix sum(rep.dim, rep.dim, 0.0);
    for (std::uint16_t x : k) sum += rep.mats[x];
    sum *= 1.0 / static_cast<double>(k.size());
    Projection p = projection_from_op(std::move(sum), rep.ctx);
    if (p.idem_residual > 1e-9 * (1.0 + p.op.frobenius()))
        throw Error(ErrorKind::internal, "averaging operator drifted from idempotency");

    // Image must be the fixed space of K: the null space of the stacked pi(g) - I.
    Matrix stacked(0, 0);
    for (std::uint16_t x : k) {
        if (x == 0) continue;
        stacked = stack_rows(stacked, rep.mats[x] - Matrix::identity(rep.dim));
    }
    const std::size_t fixed_dim =
        stacked.empty() ? rep.dim : kernel_basis(stacked).cols();
    if (p.rank() != fixed_dim)
        throw Error(ErrorKind::internal, "averaging operator rank differs from the fixed space");
    return p;
}

SimplexFamily build_simplex_family(const GroupRep& rep, const FiniteGroup& g,
                                   const SubgroupFamily& fam) {
    validate_subgroup_family(g, fam);
    const Face top = full_face(fam.n);
    FaceMap<Projection> codim1;
    for (const auto& [face, sub] : fam.assigned) {
        if (face == top) continue;
        codim1[face] = averaging_operator(rep, g, sub);
    }
    Projection ptop = averaging_operator(rep, g, fam.assigned.at(top));
    return SimplexFamily(fam.n, rep.ctx, std::move(ptop), std::move(codim1));
}

BipartiteGraph coset_link_graph(const FiniteGroup& g, const Subgroup& k1, const Subgroup& k2,
                                const Subgroup& ambient) {
    if (!is_subgroup(g, k1) || !is_subgroup(g, k2) || !is_subgroup(g, ambient))
        raise_domain("coset_link_graph: inputs must be subgroups");
    std::set<std::uint16_t> amb(ambient.begin(), ambient.end());
    for (std::uint16_t x : k1)
        if (!amb.count(x)) raise_domain("coset_link_graph: K1 not inside the ambient subgroup");
    for (std::uint16_t x : k2)
        if (!amb.count(x)) raise_domain("coset_link_graph: K2 not inside the ambient subgroup");

    auto cosets = [&](const Subgroup& k) {
        std::map<std::uint16_t, std::uint32_t> owner;  // element -> coset id
        std::uint32_t count = 0;
        for (std::uint16_t x : ambient) {
            if (owner.count(x)) continue;
            for (std::uint16_t h : k) owner[g.product(x, h)] = count;
            ++count;
        }
        return std::pair(owner, count);
    };
    auto [own1, c1] = cosets(k1);
    auto [own2, c2] = cosets(k2);

    std::set<std::pair<std::uint32_t, std::uint32_t>> edgeset;
    for (std::uint16_t x : ambient) edgeset.insert({own1.at(x), own2.at(x)});
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges(edgeset.begin(), edgeset.end());
    return make_bipartite(c1, c2, std::move(edges));
}

SchattenLinkReport schatten_link_bound_check(const FiniteGroup& g, const Subgroup& k1,
                                             const Subgroup& k2, const Subgroup& ambient,
                                             double r) {
    std::vector<std::uint16_t> to_parent;
    FiniteGroup amb = subgroup_as_group(g, ambient, &to_parent);
    std::map<std::uint16_t, std::uint16_t> reindex;
    for (std::uint16_t i = 0; i < to_parent.size(); ++i) reindex[to_parent[i]] = i;
    auto lift = [&](const Subgroup& k) {
        Subgroup out;
        for (std::uint16_t x : k) {
            auto it = reindex.find(x);
            if (it == reindex.end())
                raise_domain("schatten_link_bound_check: subgroup not inside the ambient group");
            out.push_back(it->second);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    const Subgroup lk1 = lift(k1);
    const Subgroup lk2 = lift(k2);
    Subgroup whole(amb.order);
    for (std::uint16_t i = 0; i < amb.order; ++i) whole[i] = i;

    GroupRep reg = regular_representation(amb, NormContext::lp(2.0));
    Projection p1 = averaging_operator(reg, amb, lk1);
    Projection p2 = averaging_operator(reg, amb, lk2);
    Projection p12 = averaging_operator(reg, amb, whole);

    SchattenLinkReport rep;
    rep.r = r;
    rep.lhs = schatten_norm(p1.op * p2.op - p12.op, r);
    BipartiteGraph link = coset_link_graph(g, k1, k2, ambient);
    SpectralReport spectral = b_delta_r(link, r);
    rep.rhs = spectral.b_value;
    rep.kappa = spectral.kappa;
    rep.v_min = spectral.v_min;
    rep.pass = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

PiFBoundReport pi_f_bound_check(const GroupRep& rep, const FiniteGroup& g,
                                const std::vector<double>& f) {
    if (f.size() != g.order) raise_domain("pi_f_bound_check: f must assign a value per element");
    for (double v : f)
        if (!std::isfinite(v)) raise_domain("pi_f_bound_check: f has a non-finite entry");

    // Counting Haar measure: pi(f) = sum_g f(g) pi(g).
    Matrix pif(rep.dim, rep.dim, 0.0);
    for (std::size_t x = 0; x < g.order; ++x) {
        if (f[x] == 0.0) continue;
        pif += rep.mats[x] * f[x];
    }
    Matrix lamf(g.order, g.order, 0.0);
    for (std::uint16_t a = 0; a < g.order; ++a) {
        if (f[a] == 0.0) continue;
        for (std::uint16_t h = 0; h < g.order; ++h) lamf(g.product(a, h), h) += f[a];
    }

    PiFBoundReport out;
    out.lhs = operator_norm(pif, rep.ctx).value;
    out.sup_norm = rep.sup_norm_bound;
    out.block_norm = tensor_block_norm(lamf, rep.dim, rep.ctx);
    out.bound = out.sup_norm * out.sup_norm * (out.block_norm.value + out.block_norm.slack);
    out.holds = out.lhs <= out.bound + 1e-9;
    return out;
}

std::vector<AngleSweepRow> lp_angle_sweep(const FiniteGroup& g, const SubgroupFamily& fam,
                                          const std::vector<double>& ps) {
    validate_subgroup_family(g, fam);
    std::vector<AngleSweepRow> rows;
    std::vector<Face> sigmas;
    for (const auto& [face, sub] : fam.assigned)
        if (face_card(face) == fam.n) sigmas.push_back(face);

    for (double p : ps) {
        const NormContext ctx = NormContext::lp(p);
        GroupRep reg = regular_representation(g, ctx);
        FaceMap<Projection> projs;
        for (Face s : sigmas) projs[s] = averaging_operator(reg, g, fam.subgroup_for_face(g, s));
        for (std::size_t i = 0; i < sigmas.size(); ++i) {
            for (std::size_t j = i + 1; j < sigmas.size(); ++j) {
                const Subgroup meet = fam.subgroup_for_face(g, sigmas[i] & sigmas[j]);
                Projection pmeet = averaging_operator(reg, g, meet);
                const Matrix& a = projs.at(sigmas[i]).op;
                const Matrix& b = projs.at(sigmas[j]).op;
                NormEstimate e1 = operator_norm(a * b - pmeet.op, ctx);
                NormEstimate e2 = operator_norm(b * a - pmeet.op, ctx);
                const NormEstimate& best = e1.value >= e2.value ? e1 : e2;
                rows.push_back({p, sigmas[i], sigmas[j], best.value, best.kind, best.slack});
            }
        }
    }
    return rows;
}

namespace {

SubgroupFamily reflection_family(const FiniteGroup& g,
                                 const std::vector<std::vector<std::uint16_t>>& gens_per_face) {
    // Face full \ {i} gets the i-th listed generator set; the top face gets
    // the trivial subgroup.
    SubgroupFamily fam;
    fam.n = gens_per_face.size() - 1;
    const Face top = full_face(fam.n);
    for (std::size_t i = 0; i < gens_per_face.size(); ++i) {
        const Face sigma = top & ~(Face{1} << i);
        fam.assigned[sigma] = generated_subgroup(g, gens_per_face[i]);
    }
    fam.assigned[top] = Subgroup{0};
    return fam;
}

std::uint16_t element_by_label(const FiniteGroup& g, const std::string& label) {
    for (std::uint16_t i = 0; i < g.order; ++i)
        if (g.labels[i] == label) return i;
    throw Error(ErrorKind::internal, "builtin model: element label not found: " + label);
}

}  // namespace

GroupModel builtin_model(std::string_view name) {
    if (name == "s3") {
        FiniteGroup g = group_from_permutations(3, {{{1, 2}}, {{2, 3}}});
        SubgroupFamily fam = reflection_family(
            g, {{element_by_label(g, "(1 2)")}, {element_by_label(g, "(2 3)")}});
        return GroupModel{"s3", std::move(g), std::move(fam)};
    }
    if (name == "d4") {
        FiniteGroup g = group_from_permutations(4, {{{2, 4}}, {{1, 2}, {3, 4}}});
        SubgroupFamily fam = reflection_family(
            g, {{element_by_label(g, "(2 4)")}, {element_by_label(g, "(1 2)(3 4)")}});
        return GroupModel{"d4", std::move(g), std::move(fam)};
    }
    if (name == "s4") {
        FiniteGroup g = group_from_permutations(4, {{{1, 2}}, {{2, 3}}, {{3, 4}}});
        SubgroupFamily fam = reflection_family(g, {{element_by_label(g, "(1 2)")},
                                                   {element_by_label(g, "(2 3)")},
                                                   {element_by_label(g, "(3 4)")}});
        return GroupModel{"s4", std::move(g), std::move(fam)};
    }
    raise_domain("unknown builtin model (available: s3, d4, s4)");
}

std::vector<std::string> builtin_model_names() { return {"s3", "d4", "s4"}; }

}  // namespace pa
