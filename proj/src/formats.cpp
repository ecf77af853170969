#include "projangles/formats.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace pa {

namespace {

// Line-oriented scanner that keeps enough position state for useful parse
// errors ("file.txt:3: expected ...").
class Scanner {
public:
    Scanner(std::string_view text, std::string source)
        : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& expectation) const {
        std::ostringstream os;
        os << source_ << ":" << line_ << ": expected " << expectation;
        raise_parse(os.str());
    }

    bool next_token(std::string_view& out) {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ >= text_.size()) return false;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' &&
               text_[pos_] != '\r' && text_[pos_] != '\n')
            ++pos_;
        out = text_.substr(start, pos_ - start);
        return true;
    }

    std::string_view require_token(const std::string& expectation) {
        std::string_view tok;
        if (!next_token(tok)) fail(expectation + " (unexpected end of input)");
        return tok;
    }

    double require_double(const std::string& expectation) {
        const std::string_view tok = require_token(expectation);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            fail(expectation + ", got '" + std::string(tok) + "'");
        return v;
    }

    long long require_integer(const std::string& expectation) {
        const std::string_view tok = require_token(expectation);
        long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            fail(expectation + ", got '" + std::string(tok) + "'");
        return v;
    }

    bool at_end() {
        const std::size_t save_pos = pos_;
        const std::size_t save_line = line_;
        std::string_view tok;
        const bool more = next_token(tok);
        pos_ = save_pos;
        line_ = save_line;
        return !more;
    }

private:
    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

Matrix parse_matrix_body(Scanner& sc) {
    const long long rows = sc.require_integer("row count");
    const long long cols = sc.require_integer("column count");
    if (rows < 1 || cols < 1 || rows > 4096 || cols > 4096)
        sc.fail("matrix dimensions in [1, 4096]");
    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (long long i = 0; i < rows; ++i)
        for (long long j = 0; j < cols; ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                sc.require_double("matrix entry");
    if (!m.all_finite()) sc.fail("finite matrix entries");
    return m;
}

void append_matrix(std::ostringstream& os, const Matrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            os << buf << (j + 1 < m.cols() ? ' ' : '\n');
        }
    }
}

}  // namespace

double parse_p_value(std::string_view token, const std::string& where) {
    if (token == "inf" || token == "Inf" || token == "INF") return kInf;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || std::isnan(v) || v < 1.0)
        raise_parse(where + ": expected p >= 1 or 'inf', got '" + std::string(token) + "'");
    return v;
}

std::string p_value_to_text(double p) {
    if (p == kInf) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

Matrix parse_matrix_text(std::string_view text, const std::string& source) {
    Scanner sc(text, source);
    Matrix m = parse_matrix_body(sc);
    if (!sc.at_end()) sc.fail("end of file after the matrix entries");
    return m;
}

std::string matrix_to_text(const Matrix& m) {
    m.validate("matrix_to_text");
    std::ostringstream os;
    append_matrix(os, m);
    return os.str();
}

Projection parse_projection_text(std::string_view text, const std::string& source) {
    Scanner sc(text, source);
    const std::string_view head = sc.require_token("projection header 'p=<value>'");
    if (head.size() < 3 || head.substr(0, 2) != "p=")
        sc.fail("projection header 'p=<value>'");
    const double p = parse_p_value(head.substr(2), source);
    Matrix op = parse_matrix_body(sc);
    if (!sc.at_end()) sc.fail("end of file after the matrix entries");
    return projection_from_op(std::move(op), NormContext::lp(p));
}

std::string projection_to_text(const Projection& p) {
    std::ostringstream os;
    os << "p=" << p_value_to_text(p.ctx.p) << '\n';
    append_matrix(os, p.op);
    return os.str();
}

SimplexFamily parse_family_text(std::string_view text, const std::string& source) {
    Scanner sc(text, source);
    const long long n = sc.require_integer("simplex dimension n");
    if (n < 1 || n > 8) sc.fail("simplex dimension n in [1, 8]");
    const double p = parse_p_value(sc.require_token("norm exponent p"), source);
    const NormContext ctx = NormContext::lp(p);

    FaceMap<Projection> codim1;
    Projection top;
    bool have_top = false;
    std::string_view tok;
    while (sc.next_token(tok)) {
        if (tok == "TOP") {
            if (have_top) sc.fail("a single TOP block");
            top = projection_from_op(parse_matrix_body(sc), ctx);
            have_top = true;
            continue;
        }
        // a codimension-1 face: n vertex ids, the first already scanned
        std::vector<int> verts;
        {
            int v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                sc.fail("face label 'TOP' or a vertex id");
            verts.push_back(v);
        }
        for (long long k = 1; k < n; ++k)
            verts.push_back(static_cast<int>(sc.require_integer("vertex id")));
        const Face face = face_from_vertices(verts, static_cast<std::size_t>(n));
        if (face_card(face) != static_cast<std::size_t>(n)) sc.fail("distinct face vertices");
        if (codim1.count(face)) sc.fail("each face to appear once");
        codim1[face] = projection_from_op(parse_matrix_body(sc), ctx);
    }
    if (!have_top) raise_parse(source + ": expected a TOP block");
    if (codim1.size() != static_cast<std::size_t>(n) + 1)
        raise_parse(source + ": expected one block per codimension-1 face (" +
                    std::to_string(n + 1) + " blocks)");
    return SimplexFamily(static_cast<std::size_t>(n), ctx, std::move(top), std::move(codim1));
}

std::string family_to_text(const SimplexFamily& f) {
    std::ostringstream os;
    os << f.n() << ' ' << p_value_to_text(f.ctx().p) << '\n';
    for (const auto& [face, proj] : f.codim1()) {
        os << face_label(face) << '\n';
        append_matrix(os, proj.op);
    }
    os << "TOP\n";
    append_matrix(os, f.p_top().op);
    return os.str();
}

BipartiteGraph parse_graph_text(std::string_view text, const std::string& source) {
    Scanner sc(text, source);
    const std::string_view head = sc.require_token("header 'parts a b'");
    if (head != "parts") sc.fail("header 'parts a b'");
    const long long a = sc.require_integer("part 1 size");
    const long long b = sc.require_integer("part 2 size");
    if (a < 1 || b < 1 || a > 100000 || b > 100000) sc.fail("positive part sizes");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    while (!sc.at_end()) {
        const long long u = sc.require_integer("edge endpoint u");
        const long long v = sc.require_integer("edge endpoint v");
        if (u < 0 || u >= a) sc.fail("u in [0, " + std::to_string(a - 1) + "]");
        if (v < 0 || v >= b) sc.fail("v in [0, " + std::to_string(b - 1) + "]");
        edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    }
    return make_bipartite(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                          std::move(edges));
}

std::string graph_to_text(const BipartiteGraph& g) {
    std::ostringstream os;
    os << "parts " << g.n1 << ' ' << g.n2 << '\n';
    for (const auto& [u, v] : g.edges) os << u << ' ' << v << '\n';
    return os.str();
}

FiniteGroup parse_group_text(std::string_view text, const std::string& source) {
    Scanner sc(text, source);
    const std::string_view kind = sc.require_token("group format 'table' or 'perm'");
    if (kind == "table") {
        const long long order = sc.require_integer("group order");
        if (order < 1 || order > 120) sc.fail("group order in [1, 120]");
        std::vector<std::uint16_t> mul;
        mul.reserve(static_cast<std::size_t>(order * order));
        for (long long i = 0; i < order * order; ++i) {
            const long long v = sc.require_integer("multiplication table index");
            if (v < 0 || v >= order) sc.fail("table index in [0, order)");
            mul.push_back(static_cast<std::uint16_t>(v));
        }
        if (!sc.at_end()) sc.fail("end of file after the table");
        return group_from_table(static_cast<std::size_t>(order), std::move(mul));
    }
    if (kind == "perm") {
        const long long degree = sc.require_integer("permutation degree");
        if (degree < 1 || degree > 16) sc.fail("permutation degree in [1, 16]");
        std::vector<PermCycles> gens;
        std::string_view tok;
        // Generators use cycle notation; tokens were split on whitespace, so a
        // generator like (1 2)(3 4) arrives as several tokens which we rejoin
        // until the parentheses balance.
        std::string current;
        int depth = 0;
        while (sc.next_token(tok)) {
            for (char c : tok) {
                if (c == '(') ++depth;
                if (c == ')') --depth;
            }
            current += std::string(tok) + " ";
            if (depth < 0) sc.fail("balanced parentheses in cycle notation");
            if (depth == 0) {
                PermCycles cycles;
                std::vector<int> cyc;
                std::string num;
                bool inside = false;
                for (char c : current) {
                    if (c == '(') {
                        inside = true;
                        cyc.clear();
                    } else if (c == ')' || (inside && (c == ' ' || c == ','))) {
                        if (!num.empty()) {
                            cyc.push_back(std::stoi(num));
                            num.clear();
                        }
                        if (c == ')') {
                            if (cyc.size() < 2) sc.fail("cycles of length >= 2");
                            cycles.push_back(cyc);
                            inside = false;
                        }
                    } else if (c >= '0' && c <= '9') {
                        num += c;
                    } else if (c != ' ') {
                        sc.fail("cycle notation like (1 2)(3 4)");
                    }
                }
                if (!cycles.empty()) gens.push_back(std::move(cycles));
                current.clear();
            }
        }
        if (depth != 0) sc.fail("balanced parentheses in cycle notation");
        if (gens.empty()) sc.fail("at least one generator");
        return group_from_permutations(static_cast<std::size_t>(degree), gens);
    }
    sc.fail("group format 'table' or 'perm'");
}

std::string group_to_table_text(const FiniteGroup& g) {
    std::ostringstream os;
    os << "table\n" << g.order << '\n';
    for (std::size_t i = 0; i < g.order; ++i) {
        for (std::size_t j = 0; j < g.order; ++j)
            os << g.mul[i * g.order + j] << (j + 1 < g.order ? ' ' : '\n');
    }
    return os.str();
}

Subgroup parse_subgroup_text(std::string_view text, const std::string& source,
                             const FiniteGroup& g) {
    Scanner sc(text, source);
    Subgroup k;
    while (!sc.at_end()) {
        const long long v = sc.require_integer("element index");
        if (v < 0 || v >= static_cast<long long>(g.order))
            sc.fail("element index in [0, " + std::to_string(g.order - 1) + "]");
        k.push_back(static_cast<std::uint16_t>(v));
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (!is_subgroup(g, k)) raise_parse(source + ": listed elements do not form a subgroup");
    return k;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::io, "read failure: " + path);
    return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot open file for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::io, "write failure: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(ErrorKind::io, "rename failure: " + tmp + " -> " + path);
}

}  // namespace pa
