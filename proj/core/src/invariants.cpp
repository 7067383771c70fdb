#include "cubeknot/invariants.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <sstream>
#include <vector>

#include "cubeknot/parallel.hpp"

namespace cubeknot {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Two-coloring of the faces (opposite colors across every arc). Color 0 is
// the class of face 0; either class works as the shaded one, the determinant
// is insensitive to the choice.
std::vector<int> face_colors(const KnotDiagram& d, const DiagramFaces& faces) {
    std::vector<int> color(faces.count(), -1);
    std::vector<int> stack;
    color[0] = 0;
    stack.push_back(0);
    std::vector<std::vector<int>> adjacency(faces.count());
    for (std::size_t a = 0; a < d.arcs.size(); ++a) {
        adjacency[faces.of_arc[a][0]].push_back(faces.of_arc[a][1]);
        adjacency[faces.of_arc[a][1]].push_back(faces.of_arc[a][0]);
    }
    while (!stack.empty()) {
        const int f = stack.back();
        stack.pop_back();
        for (int g : adjacency[f]) {
            if (color[g] < 0) {
                color[g] = 1 - color[f];
                stack.push_back(g);
            } else if (color[g] == color[f]) {
                throw InvariantError("knot_determinant: face graph is not checkerboard-colorable");
            }
        }
    }
    for (int c : color)
        if (c < 0) throw InvariantError("knot_determinant: disconnected face graph");
    return color;
}

// Fraction-free Bareiss determinant over the integers.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    if (n == 0) return BigInt(1);
    BigInt prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && m[pivot][k] == 0) ++pivot;
            if (pivot == n) return BigInt(0);
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

} // namespace

std::uint64_t knot_determinant(const KnotDiagram& d) {
    if (d.n() == 0) return 1;

    const DiagramFaces faces = diagram_faces(d);
    const std::vector<int> color = face_colors(d, faces);

    // White regions: one checkerboard class, reindexed.
    std::vector<int> region_of(faces.count(), -1);
    int nregions = 0;
    for (int f = 0; f < faces.count(); ++f)
        if (color[f] == 0) region_of[f] = nregions++;
    if (nregions <= 1) return 1;

    std::vector<std::vector<BigInt>> g(nregions, std::vector<BigInt>(nregions, BigInt(0)));
    for (int c = 0; c < d.n(); ++c) {
        // eta = +1 when the sector counterclockwise-after the over-out ray
        // is white. The sectors after the two over rays share a color, so
        // this is orientation-free; a global flip only negates the matrix.
        int over_out = -1;
        for (int k = 0; k < 4; ++k)
            if (d.crossings[c].role[k] == PortRole::OverOut) over_out = k;
        const int eta = color[faces.sector[c][over_out]] == 0 ? +1 : -1;

        // The white corners are a diagonal sector pair.
        const int k0 = color[faces.sector[c][over_out]] == 0 ? over_out : (over_out + 1) % 4;
        const int ra = region_of[faces.sector[c][k0]];
        const int rb = region_of[faces.sector[c][(k0 + 2) % 4]];
        if (ra < 0 || rb < 0) throw InvariantError("knot_determinant: non-white corner selected");
        if (ra == rb) continue;  // both corners in one region
        g[ra][rb] -= eta;
        g[rb][ra] -= eta;
    }
    for (int i = 0; i < nregions; ++i) {
        BigInt diag(0);
        for (int j = 0; j < nregions; ++j)
            if (j != i) diag -= g[i][j];
        g[i][i] = diag;
    }

    // Any principal minor of size n-1 presents the double branched cover.
    std::vector<std::vector<BigInt>> minor(nregions - 1, std::vector<BigInt>(nregions - 1));
    for (int i = 0; i + 1 < nregions; ++i)
        for (int j = 0; j + 1 < nregions; ++j) minor[i][j] = g[i][j];

    BigInt det = bareiss_determinant(std::move(minor));
    if (det < 0) det = -det;
    if (det > BigInt(std::numeric_limits<std::int64_t>::max()))
        throw InvariantError("knot_determinant: value exceeds 64 bits");
    return static_cast<std::uint64_t>(det);
}

namespace {

struct SmallDsu {
    std::vector<std::int32_t> parent;

    explicit SmallDsu(int n) : parent(n) {}
    void reset() { std::iota(parent.begin(), parent.end(), 0); }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

} // namespace

LaurentPoly kauffman_bracket(const KnotDiagram& d, int cap, int threads) {
    const int n = d.n();
    if (n == 0) return LaurentPoly::one();
    if (n > cap)
        throw BracketCapExceeded("kauffman_bracket: " + std::to_string(n) + " crossings exceed the cap of " +
                                 std::to_string(cap));

    // Per crossing, the port pairs joined by the A-smoothing: each over port
    // with its clockwise neighbor. The B-smoothing takes the complementary
    // (counterclockwise) pairing.
    std::vector<std::array<std::int32_t, 4>> a_pair(n), b_pair(n);
    for (int c = 0; c < n; ++c) {
        int idx = 0;
        for (int k = 0; k < 4; ++k) {
            if (!is_over(d.crossings[c].role[k])) continue;
            a_pair[c][idx * 2] = k;
            a_pair[c][idx * 2 + 1] = (k + 3) % 4;
            b_pair[c][idx * 2] = k;
            b_pair[c][idx * 2 + 1] = (k + 1) % 4;
            ++idx;
        }
        if (idx != 2) throw InvariantError("kauffman_bracket: crossing without two over ports");
    }

    std::vector<std::pair<std::int32_t, std::int32_t>> arc_links;
    arc_links.reserve(d.arcs.size());
    for (const auto& arc : d.arcs)
        arc_links.push_back({static_cast<std::int32_t>(arc.c_from * 4 + arc.p_from),
                             static_cast<std::int32_t>(arc.c_to * 4 + arc.p_to)});

    // Count states by (number of A-smoothings, loop count); the polynomial
    // is assembled from the counts.
    const std::uint64_t nstates = std::uint64_t{1} << n;
    const int rows = n + 1, cols = n + 2;
    const int nchunks = resolve_threads(threads);
    std::vector<std::vector<std::int64_t>> tables(nchunks, std::vector<std::int64_t>(rows * cols, 0));

    parallel_chunks(nstates, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        auto& table = tables[chunk];
        SmallDsu dsu(4 * n);
        for (std::uint64_t state = begin; state < end; ++state) {
            dsu.reset();
            int loops = 4 * n;
            for (const auto& [u, v] : arc_links) loops -= dsu.unite(u, v) ? 1 : 0;
            int a_count = 0;
            for (int c = 0; c < n; ++c) {
                const bool use_a = (state >> c) & 1;
                const auto& pair = use_a ? a_pair[c] : b_pair[c];
                a_count += use_a ? 1 : 0;
                loops -= dsu.unite(c * 4 + pair[0], c * 4 + pair[1]) ? 1 : 0;
                loops -= dsu.unite(c * 4 + pair[2], c * 4 + pair[3]) ? 1 : 0;
            }
            if (loops < 1 || loops > n + 1)
                throw InvariantError("kauffman_bracket: impossible loop count");
            table[a_count * cols + loops] += 1;
        }
    });

    for (int c = 1; c < nchunks; ++c)
        for (int i = 0; i < rows * cols; ++i) tables[0][i] += tables[c][i];

    // delta = -A^2 - A^{-2}; bracket = sum over states A^(a-b) delta^(|s|-1).
    const LaurentPoly delta = LaurentPoly::monomial(-1, 2) + LaurentPoly::monomial(-1, -2);
    std::vector<LaurentPoly> delta_pow(n + 1);
    delta_pow[0] = LaurentPoly::one();
    for (int i = 1; i <= n; ++i) delta_pow[i] = delta_pow[i - 1] * delta;

    LaurentPoly bracket;
    for (int a = 0; a <= n; ++a)
        for (int loops = 1; loops <= n + 1; ++loops) {
            const std::int64_t count = tables[0][a * cols + loops];
            if (count == 0) continue;
            LaurentPoly term = delta_pow[loops - 1];
            term.scale_monomial(count, a - (n - a));
            bracket += term;
        }

    // f = (-A^3)^(-w) * bracket.
    const int w = d.writhe();
    bracket.scale_monomial((w % 2 == 0) ? 1 : -1, -3 * w);
    return bracket;
}

namespace {

InvariantSummary summarize_points(const std::vector<Eigen::Vector3d>& pts, const VerifyOptions& opts) {
    KnotDiagram best;
    bool have = false;
    int best_raw = 0;
    for (int attempt = 0; attempt < std::max(1, opts.directions); ++attempt) {
        KnotDiagram d = extract_diagram(pts, std::nullopt, opts.seed + 7919 * attempt);
        const int raw = d.n();
        simplify_reidemeister(d);
        if (!have || d.n() < best.n()) {
            best = std::move(d);
            best_raw = raw;
            have = true;
        }
    }
    InvariantSummary s;
    s.raw_crossings = best_raw;
    s.crossings = best.n();
    s.writhe = best.writhe();
    s.gauss = best.gauss_string();
    s.determinant = knot_determinant(best);
    try {
        s.jones = kauffman_bracket(best, opts.cap, opts.threads);
    } catch (const BracketCapExceeded&) {
        s.jones = std::nullopt;  // caller falls back to determinant-only
    }
    return s;
}

} // namespace

InvariantSummary summarize_invariants(const std::vector<Eigen::Vector3d>& curve,
                                      const VerifyOptions& opts) {
    return summarize_points(curve, opts);
}

InvariantSummary summarize_invariants(const LatticeCycle& cycle, const VerifyOptions& opts) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(cycle.vertices.size());
    for (const auto& v : cycle.vertices) pts.emplace_back(v[0], v[1], v[2]);
    return summarize_points(pts, opts);
}

std::string VerifyReport::text() const {
    std::ostringstream out;
    auto line = [&](const char* name, const InvariantSummary& s) {
        out << "  " << name << ": det=" << s.determinant << " crossings=" << s.raw_crossings << "->"
            << s.crossings;
        if (s.jones) out << " jones=" << s.jones->to_string();
        out << "\n";
    };
    out << "invariant comparison\n";
    line("input ", input);
    line("output", output);
    out << "  determinant: " << (determinant_match ? "match" : "MISMATCH") << "\n";
    if (jones_match)
        out << "  jones (up to mirror): " << (*jones_match ? "match" : "MISMATCH") << "\n";
    else
        out << "  jones: skipped (crossing cap)\n";
    out << "  verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

VerifyReport verify_pair(const std::vector<Eigen::Vector3d>& input_curve, const LatticeCycle& output,
                         const VerifyOptions& opts) {
    VerifyReport report;
    report.input = summarize_invariants(input_curve, opts);
    report.output = summarize_invariants(output, opts);
    report.determinant_match = report.input.determinant == report.output.determinant;
    if (report.input.jones && report.output.jones)
        report.jones_match = equal_up_to_mirror(*report.input.jones, *report.output.jones);
    report.pass = report.determinant_match && report.jones_match.value_or(true);
    return report;
}

} // namespace cubeknot
