#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fgl/rational.hpp"

namespace fgl {

// Lattice point of Z^d, d <= kMaxDim. Dimension is a runtime parameter;
// everything shipped uses d = 1 or 2.
struct Vec {
    static constexpr int kMaxDim = 4;

    std::array<std::int64_t, kMaxDim> c{};
    std::uint8_t dim = 2;

    Vec() = default;
    Vec(std::int64_t x, std::int64_t y) : c{x, y, 0, 0}, dim(2) {}
    explicit Vec(std::int64_t x) : c{x, 0, 0, 0}, dim(1) {}
    static Vec zero(int d) {
        Vec v;
        v.dim = static_cast<std::uint8_t>(d);
        return v;
    }
    static Vec unit(int d, int axis, std::int64_t sign = 1) {
        Vec v = zero(d);
        v.c[axis] = sign;
        return v;
    }

    std::int64_t operator[](int i) const { return c[i]; }
    std::int64_t& operator[](int i) { return c[i]; }

    friend Vec operator+(const Vec& a, const Vec& b) {
        Vec r = a;
        for (int i = 0; i < a.dim; ++i) r.c[i] += b.c[i];
        return r;
    }
    friend Vec operator-(const Vec& a, const Vec& b) {
        Vec r = a;
        for (int i = 0; i < a.dim; ++i) r.c[i] -= b.c[i];
        return r;
    }
    friend Vec operator-(const Vec& a) {
        Vec r = a;
        for (int i = 0; i < a.dim; ++i) r.c[i] = -a.c[i];
        return r;
    }
    friend Vec operator*(std::int64_t k, const Vec& a) {
        Vec r = a;
        for (int i = 0; i < a.dim; ++i) r.c[i] = k * a.c[i];
        return r;
    }
    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a.c[i] != b.c[i]) return false;
        return true;
    }
    friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }
    // Lexicographic: first coordinate is most significant (row-major scan).
    friend bool operator<(const Vec& a, const Vec& b) {
        for (int i = 0; i < a.dim; ++i)
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        return false;
    }

    std::int64_t norm1() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim; ++i) s += c[i] < 0 ? -c[i] : c[i];
        return s;
    }
    std::int64_t norm_inf() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim; ++i) {
            std::int64_t a = c[i] < 0 ? -c[i] : c[i];
            if (a > s) s = a;
        }
        return s;
    }
    bool is_zero() const {
        for (int i = 0; i < dim; ++i)
            if (c[i] != 0) return false;
        return true;
    }
};

struct VecHash {
    std::size_t operator()(const Vec& v) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.dim;
        for (int i = 0; i < v.dim; ++i) {
            std::uint64_t x = static_cast<std::uint64_t>(v.c[i]);
            x *= 0xbf58476d1ce4e5b9ull;
            x ^= x >> 27;
            h = (h ^ x) * 0x94d049bb133111ebull;
        }
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

// Finite subset of Z^d, stored sorted and deduplicated.
class FiniteRegion {
  public:
    FiniteRegion() = default;
    explicit FiniteRegion(std::vector<Vec> pts) : pts_(std::move(pts)) {
        std::sort(pts_.begin(), pts_.end());
        pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    }

    static FiniteRegion single(const Vec& v) { return FiniteRegion({v}); }

    // Half-open rectangle lo + [0,dims_1) x ... x [0,dims_d).
    static FiniteRegion box(const Vec& lo, const std::vector<std::int64_t>& dims) {
        int d = static_cast<int>(dims.size());
        std::vector<Vec> pts;
        std::int64_t total = 1;
        for (auto x : dims) {
            if (x <= 0) throw std::invalid_argument("box dims must be positive");
            total *= x;
        }
        pts.reserve(static_cast<std::size_t>(total));
        Vec cur = Vec::zero(d);
        std::function<void(int)> rec = [&](int axis) {
            if (axis == d) {
                pts.push_back(cur + lo);
                return;
            }
            for (std::int64_t i = 0; i < dims[axis]; ++i) {
                cur.c[axis] = i;
                rec(axis + 1);
            }
            cur.c[axis] = 0;
        };
        rec(0);
        FiniteRegion r;
        r.pts_ = std::move(pts);
        std::sort(r.pts_.begin(), r.pts_.end());
        return r;
    }

    static FiniteRegion square(std::int64_t lo, std::int64_t n, int d) {
        std::vector<std::int64_t> dims(d, n);
        return box(Vec::zero(d) + offset_all(lo, d), dims);
    }

    const std::vector<Vec>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    int dim() const { return pts_.empty() ? 0 : pts_.front().dim; }

    bool contains(const Vec& v) const {
        return std::binary_search(pts_.begin(), pts_.end(), v);
    }

    FiniteRegion translated(const Vec& v) const {
        std::vector<Vec> out;
        out.reserve(pts_.size());
        for (const auto& p : pts_) out.push_back(p + v);
        FiniteRegion r;
        r.pts_ = std::move(out);  // order preserved under translation
        return r;
    }

    FiniteRegion intersect(const FiniteRegion& o) const {
        std::vector<Vec> out;
        std::set_intersection(pts_.begin(), pts_.end(), o.pts_.begin(), o.pts_.end(),
                              std::back_inserter(out));
        FiniteRegion r;
        r.pts_ = std::move(out);
        return r;
    }

    FiniteRegion unite(const FiniteRegion& o) const {
        std::vector<Vec> out;
        std::set_union(pts_.begin(), pts_.end(), o.pts_.begin(), o.pts_.end(),
                       std::back_inserter(out));
        FiniteRegion r;
        r.pts_ = std::move(out);
        return r;
    }

    FiniteRegion subtract(const FiniteRegion& o) const {
        std::vector<Vec> out;
        std::set_difference(pts_.begin(), pts_.end(), o.pts_.begin(), o.pts_.end(),
                            std::back_inserter(out));
        FiniteRegion r;
        r.pts_ = std::move(out);
        return r;
    }

    FiniteRegion minkowski(const FiniteRegion& o) const {
        std::unordered_set<Vec, VecHash> seen;
        seen.reserve(pts_.size() * o.pts_.size());
        for (const auto& a : pts_)
            for (const auto& b : o.pts_) seen.insert(a + b);
        std::vector<Vec> out(seen.begin(), seen.end());
        return FiniteRegion(std::move(out));
    }

    std::pair<Vec, Vec> bounding_box() const {
        if (pts_.empty()) throw std::invalid_argument("bounding_box of empty region");
        Vec lo = pts_.front(), hi = pts_.front();
        for (const auto& p : pts_)
            for (int i = 0; i < p.dim; ++i) {
                lo.c[i] = std::min(lo.c[i], p.c[i]);
                hi.c[i] = std::max(hi.c[i], p.c[i]);
            }
        return {lo, hi};
    }

    friend bool operator==(const FiniteRegion& a, const FiniteRegion& b) {
        return a.pts_ == b.pts_;
    }

  private:
    static Vec offset_all(std::int64_t x, int d) {
        Vec v = Vec::zero(d);
        for (int i = 0; i < d; ++i) v.c[i] = x;
        return v;
    }
    std::vector<Vec> pts_;
};

// Word metric data: a finite symmetric generating set of Z^d.
struct MetricContext {
    int dim = 2;
    std::vector<Vec> generators;  // symmetric, generates Z^d

    static MetricContext standard(int d) {
        MetricContext m;
        m.dim = d;
        for (int i = 0; i < d; ++i) {
            m.generators.push_back(Vec::unit(d, i, 1));
            m.generators.push_back(Vec::unit(d, i, -1));
        }
        return m;
    }

    void validate() const {
        for (const auto& g : generators) {
            bool has_inverse = false;
            for (const auto& h : generators)
                if (h == -g) has_inverse = true;
            if (!has_inverse) throw std::invalid_argument("generator set not symmetric");
        }
        // generation check: every unit vector reachable within |generators| steps
        FiniteRegion b = ball_of(*this, static_cast<int>(generators.size()) + 1);
        for (int i = 0; i < dim; ++i)
            if (!b.contains(Vec::unit(dim, i)))
                throw std::invalid_argument("generators do not reach unit vectors");
    }

    static FiniteRegion ball_of(const MetricContext& ctx, int r);
};

namespace lattice {

// S^r: all sums of at most r generators, including the origin.
inline FiniteRegion ball(const MetricContext& ctx, int r) {
    if (r < 0) throw std::invalid_argument("ball radius must be >= 0");
    std::unordered_set<Vec, VecHash> cur;
    cur.insert(Vec::zero(ctx.dim));
    std::vector<Vec> frontier{Vec::zero(ctx.dim)};
    for (int step = 0; step < r; ++step) {
        std::vector<Vec> next;
        for (const auto& p : frontier)
            for (const auto& g : ctx.generators) {
                Vec q = p + g;
                if (cur.insert(q).second) next.push_back(q);
            }
        frontier = std::move(next);
    }
    std::vector<Vec> out(cur.begin(), cur.end());
    return FiniteRegion(std::move(out));
}

struct InvarianceResult {
    bool invariant = false;
    Rat ratio{0};          // |core| / |E|, exact
    std::size_t core_size = 0;
};

// (K, delta)-invariance of E: |E ∩ ⋂_{s∈K}(E - s)| >= (1-delta)|E|.
inline InvarianceResult is_invariant(const FiniteRegion& E, const FiniteRegion& K,
                                     const Rat& delta) {
    if (E.empty()) throw std::invalid_argument("is_invariant: empty region");
    if (delta < Rat(0) || delta > Rat(1))
        throw std::invalid_argument("is_invariant: delta outside [0,1]");
    std::size_t core = 0;
    for (const auto& p : E.points()) {
        bool in_core = true;
        for (const auto& s : K.points())
            if (!E.contains(p + s)) {
                in_core = false;
                break;
            }
        if (in_core) ++core;
    }
    InvarianceResult res;
    res.core_size = core;
    res.ratio = Rat(Int(core), Int(E.size()));
    res.invariant = res.ratio >= Rat(1) - delta;
    return res;
}

// Exact core E ∩ ⋂_{s∈K}(E - s) as a region.
inline FiniteRegion invariance_core(const FiniteRegion& E, const FiniteRegion& K) {
    std::vector<Vec> out;
    for (const auto& p : E.points()) {
        bool in_core = true;
        for (const auto& s : K.points())
            if (!E.contains(p + s)) {
                in_core = false;
                break;
            }
        if (in_core) out.push_back(p);
    }
    FiniteRegion r(std::move(out));
    return r;
}

// Graph connectivity on V joining points at word distance <= r (flood fill).
inline bool is_r_connected(const FiniteRegion& V, int r, const MetricContext& ctx) {
    if (V.empty()) throw std::invalid_argument("is_r_connected: empty region");
    FiniteRegion b = ball(ctx, r);
    std::unordered_set<Vec, VecHash> todo(V.points().begin(), V.points().end());
    std::deque<Vec> queue;
    queue.push_back(V.points().front());
    todo.erase(V.points().front());
    while (!queue.empty()) {
        Vec p = queue.front();
        queue.pop_front();
        for (const auto& d : b.points()) {
            if (d.is_zero()) continue;
            Vec q = p + d;
            auto it = todo.find(q);
            if (it != todo.end()) {
                todo.erase(it);
                queue.push_back(q);
            }
        }
    }
    return todo.empty();
}

// Greedy separated subset, lexicographic scan order. Separation is enforced
// on the box envelope of S^r (coordinatewise distance > r): this keeps the
// translated balls S^r c pairwise disjoint, which is what the vertex-count
// certificate |V||S^r| <= 2|F| of the tree construction counts. The output
// is r-separated in the word metric and, by envelope-maximality, 2r-spanning
// for V in dimensions <= 2. Both properties are asserted downstream.
inline FiniteRegion maximal_r_separated(const FiniteRegion& V, int r,
                                        const MetricContext& ctx) {
    if (V.empty()) throw std::invalid_argument("maximal_r_separated: empty region");
    auto box_close = [&](const Vec& a, const Vec& b) {
        return (a - b).norm_inf() <= r;
    };
    std::vector<Vec> chosen;
    for (const auto& p : V.points()) {  // points() is sorted lex
        bool ok = true;
        for (const auto& q : chosen)
            if (box_close(p, q)) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(p);
    }
    (void)ctx;
    return FiniteRegion(std::move(chosen));
}

struct SpanningTree {
    std::vector<Vec> vertices;
    // edges as (i, j, path) with path a lattice walk from vertices[i] to
    // vertices[j] staying in F, consecutive steps being generators
    struct Edge {
        std::size_t i, j;
        std::vector<Vec> path;  // includes both endpoints
    };
    std::vector<Edge> edges;
    std::size_t total_path_edges = 0;
};

// 2r-spanning tree of F with vertex set a maximal r-separated set and edges
// realized by in-F paths of length <= 4r+1. Certifies |V|*|S^r| <= 2|F| and
// total path-edge count <= 5r(|V|-1).
inline SpanningTree spanning_tree_2r(const FiniteRegion& F, int r,
                                     const MetricContext& ctx) {
    if (r < 1) throw std::invalid_argument("spanning_tree_2r: r must be >= 1");
    if (F.empty()) throw std::invalid_argument("spanning_tree_2r: empty region");
    if (F.size() == 1) {
        SpanningTree t;
        t.vertices = F.points();
        return t;
    }
    if (!is_r_connected(F, 1, ctx))
        throw std::invalid_argument("spanning_tree_2r: F is not connected");
    FiniteRegion sr = ball(ctx, r);
    FiniteRegion dilated = F.minkowski(sr);
    if (dilated.size() > 2 * F.size())
        throw std::invalid_argument("spanning_tree_2r: |S^r F| > 2|F|");

    FiniteRegion V = maximal_r_separated(F, r, ctx);
    if (V.size() * sr.size() > 2 * F.size())
        throw std::invalid_argument("spanning_tree_2r: vertex bound |V||S^r| <= 2|F| failed");

    // BFS inside F from each vertex up to depth 4r+1; record paths to other
    // vertices. Graph on V from these reachabilities, then a BFS spanning tree.
    const int maxlen = 4 * r + 1;
    std::unordered_set<Vec, VecHash> vset(V.points().begin(), V.points().end());
    std::vector<std::vector<std::pair<std::size_t, std::vector<Vec>>>> adj(V.size());

    auto index_of = [&](const Vec& v) -> std::size_t {
        auto it = std::lower_bound(V.points().begin(), V.points().end(), v);
        return static_cast<std::size_t>(it - V.points().begin());
    };

    for (std::size_t vi = 0; vi < V.size(); ++vi) {
        const Vec start = V.points()[vi];
        std::unordered_map<Vec, Vec, VecHash> parent;
        parent[start] = start;
        std::deque<std::pair<Vec, int>> queue{{start, 0}};
        while (!queue.empty()) {
            auto [p, d] = queue.front();
            queue.pop_front();
            if (d == maxlen) continue;
            for (const auto& g : ctx.generators) {
                Vec q = p + g;
                if (!F.contains(q) || parent.count(q)) continue;
                parent[q] = p;
                queue.emplace_back(q, d + 1);
                if (vset.count(q)) {
                    std::vector<Vec> path{q};
                    Vec cur = q;
                    while (cur != start) {
                        cur = parent[cur];
                        path.push_back(cur);
                    }
                    std::reverse(path.begin(), path.end());
                    std::size_t vj = index_of(q);
                    if (vj > vi) adj[vi].emplace_back(vj, path);
                }
            }
        }
    }

    SpanningTree tree;
    tree.vertices = V.points();
    if (V.size() == 1) return tree;

    // undirected adjacency
    std::vector<std::vector<std::pair<std::size_t, const std::vector<Vec>*>>> und(V.size());
    for (std::size_t i = 0; i < adj.size(); ++i)
        for (const auto& [j, path] : adj[i]) {
            und[i].emplace_back(j, &path);
            und[j].emplace_back(i, &path);
        }
    std::vector<bool> seen(V.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (const auto& [j, path] : und[i]) {
            if (seen[j]) continue;
            seen[j] = true;
            ++reached;
            SpanningTree::Edge e;
            e.i = i;
            e.j = j;
            e.path = *path;
            tree.total_path_edges += e.path.size() - 1;
            tree.edges.push_back(std::move(e));
            queue.push_back(j);
        }
    }
    if (reached != V.size())
        throw std::runtime_error("spanning_tree_2r: derived vertex graph disconnected");
    if (tree.total_path_edges > static_cast<std::size_t>(5 * r) * (V.size() - 1))
        throw std::runtime_error("spanning_tree_2r: path-edge bound failed");
    return tree;
}

// Smallest square [0,n)^d with n a power of two that is (K,delta)-invariant.
inline FiniteRegion connected_invariant_set(const FiniteRegion& K, const Rat& delta,
                                            const MetricContext& ctx) {
    if (delta <= Rat(0) || delta > Rat(1))
        throw std::invalid_argument("connected_invariant_set: need 0 < delta <= 1");
    for (std::int64_t n = 1;; n *= 2) {
        FiniteRegion E = FiniteRegion::box(Vec::zero(ctx.dim),
                                           std::vector<std::int64_t>(ctx.dim, n));
        if (is_invariant(E, K, delta).invariant) return E;
        if (n > (std::int64_t(1) << 30))
            throw std::runtime_error("connected_invariant_set: no square found");
    }
}

// Largest integer c with |S^r| >= c r^2 for all r <= max_r (Z^2 only).
inline std::int64_t tree_constant_c(const MetricContext& ctx, int max_r = 64) {
    std::int64_t best = -1;
    for (int r = 1; r <= max_r; ++r) {
        std::int64_t size = static_cast<std::int64_t>(ball(ctx, r).size());
        std::int64_t c = size / (static_cast<std::int64_t>(r) * r);
        if (best < 0 || c < best) best = c;
    }
    return best;
}

}  // namespace lattice

inline FiniteRegion MetricContext::ball_of(const MetricContext& ctx, int r) {
    return lattice::ball(ctx, r);
}

}  // namespace fgl
