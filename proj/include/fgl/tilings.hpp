#pragma once

#include <numeric>
#include <optional>
#include <string>

#include "fgl/lattice.hpp"
#include "fgl/subshift.hpp"

namespace fgl {

// Coset offset + diag(moduli) Z^d. Every shipped construction uses diagonal
// center lattices; general transversals are out of scope.
struct CenterLattice {
    Vec offset{};
    std::vector<std::int64_t> moduli;

    int dim() const { return static_cast<int>(moduli.size()); }

    bool contains(const Vec& p) const {
        for (int i = 0; i < dim(); ++i) {
            std::int64_t r = (p.c[i] - offset.c[i]) % moduli[i];
            if (r != 0) return false;
        }
        return true;
    }

    // Centers c with lo <= c <= hi componentwise.
    std::vector<Vec> centers_in(const Vec& lo, const Vec& hi) const {
        std::vector<Vec> out;
        int d = dim();
        Vec cur = Vec::zero(d);
        std::function<void(int)> rec = [&](int axis) {
            if (axis == d) {
                out.push_back(cur);
                return;
            }
            std::int64_t m = moduli[axis];
            std::int64_t first = offset.c[axis] +
                m * ((lo.c[axis] - offset.c[axis]) / m);
            while (first < lo.c[axis]) first += m;
            for (std::int64_t c = first; c <= hi.c[axis]; c += m) {
                cur.c[axis] = c;
                rec(axis + 1);
            }
        };
        rec(0);
        return out;
    }
};

struct Tiling {
    struct Component {
        FiniteRegion shape;
        CenterLattice centers;
    };
    std::vector<Component> components;

    int dim() const { return components.empty() ? 0 : components.front().shape.dim(); }
};

struct Refinement {
    // partition of a level-n shape into level-(n-1) shapes: (component j, offset g)
    std::vector<std::pair<std::size_t, Vec>> parts;
};

struct NestedTilingSequence {
    std::vector<Tiling> levels;
    // refinements[n-1][comp] refines component comp of levels[n] (n >= 1)
    std::vector<std::vector<Refinement>> refinements;
};

namespace tilings {

inline Tiling rectangle_monotiling(const std::vector<std::int64_t>& dims) {
    for (auto d : dims)
        if (d < 1) throw std::invalid_argument("rectangle_monotiling: dims must be >= 1");
    Tiling t;
    Tiling::Component c;
    c.shape = FiniteRegion::box(Vec::zero(static_cast<int>(dims.size())), dims);
    c.centers.offset = Vec::zero(static_cast<int>(dims.size()));
    c.centers.moduli = dims;
    t.components.push_back(std::move(c));
    return t;
}

struct TilingDefect {
    Vec witness;
    bool overlap = false;  // false: gap
};

struct TilingVerification {
    bool ok = false;
    std::vector<TilingDefect> defects;
    std::size_t tiles_checked = 0;
};

// Every window point must lie in exactly one translate S_i c; translates
// meeting the window are enumerated exhaustively.
inline TilingVerification verify_tiling(const Tiling& t, const FiniteRegion& window,
                                        std::size_t max_defects = 8) {
    if (window.empty()) throw std::invalid_argument("verify_tiling: empty window");
    auto [wlo, whi] = window.bounding_box();
    std::unordered_map<Vec, int, VecHash> cover;
    TilingVerification res;
    for (const auto& comp : t.components) {
        auto [slo, shi] = comp.shape.bounding_box();
        Vec clo = wlo - shi, chi = whi - slo;
        for (const auto& c : comp.centers.centers_in(clo, chi)) {
            bool meets = false;
            for (const auto& s : comp.shape.points()) {
                Vec p = s + c;
                if (window.contains(p)) {
                    meets = true;
                    ++cover[p];
                }
            }
            if (meets) ++res.tiles_checked;
        }
    }
    res.ok = true;
    for (const auto& p : window.points()) {
        auto it = cover.find(p);
        int n = it == cover.end() ? 0 : it->second;
        if (n != 1) {
            res.ok = false;
            if (res.defects.size() < max_defects)
                res.defects.push_back(TilingDefect{p, n > 1});
        }
    }
    return res;
}

struct NestedDefect {
    std::size_t part_index;
    Vec center;
    std::string reason;
};

struct NestedVerification {
    bool ok = false;
    std::vector<NestedDefect> defects;
};

// Checks that the declared refinements of level levelIdx land on genuine
// level-(levelIdx-1) tiles, for all tiles meeting the window.
inline NestedVerification verify_tightly_nested(const NestedTilingSequence& seq,
                                                std::size_t levelIdx,
                                                const FiniteRegion& window) {
    if (levelIdx < 1 || levelIdx >= seq.levels.size())
        throw std::invalid_argument("verify_tightly_nested: levelIdx out of range");
    const Tiling& fine = seq.levels[levelIdx];
    const Tiling& coarse = seq.levels[levelIdx - 1];
    const auto& refs = seq.refinements.at(levelIdx - 1);
    NestedVerification res;
    res.ok = true;
    auto [wlo, whi] = window.bounding_box();
    for (std::size_t ci = 0; ci < fine.components.size(); ++ci) {
        const auto& comp = fine.components[ci];
        const Refinement& ref = refs.at(ci);
        // partition check on the shape itself
        FiniteRegion acc;
        std::size_t total = 0;
        bool disjoint = true;
        for (const auto& [j, g] : ref.parts) {
            FiniteRegion piece = coarse.components.at(j).shape.translated(g);
            total += piece.size();
            if (!acc.intersect(piece).empty()) disjoint = false;
            acc = acc.unite(piece);
        }
        if (!disjoint || !(acc == comp.shape) || total != comp.shape.size()) {
            res.ok = false;
            res.defects.push_back(NestedDefect{0, Vec::zero(window.dim()),
                                               "refinement does not partition the shape"});
            continue;
        }
        // offsets must land on genuine centers for every visible tile
        auto [slo, shi] = comp.shape.bounding_box();
        for (const auto& c : comp.centers.centers_in(wlo - shi, whi - slo)) {
            for (std::size_t pi = 0; pi < ref.parts.size(); ++pi) {
                const auto& [j, g] = ref.parts[pi];
                if (!coarse.components.at(j).centers.contains(g + c)) {
                    res.ok = false;
                    if (res.defects.size() < 8)
                        res.defects.push_back(
                            NestedDefect{pi, c, "offset is not a center of the child shape"});
                }
            }
        }
    }
    return res;
}

// Point x with x_t = (component index + 1) on centers and 0 elsewhere; its
// pattern counts give the tiling-entropy estimate.
inline PointOracle tiling_point(const Tiling& t) {
    auto comps = std::make_shared<std::vector<Tiling::Component>>(t.components);
    std::vector<std::int64_t> periods(static_cast<std::size_t>(t.dim()), 1);
    for (const auto& comp : t.components)
        for (int i = 0; i < t.dim(); ++i)
            periods[static_cast<std::size_t>(i)] =
                std::lcm(periods[static_cast<std::size_t>(i)], comp.centers.moduli[i]);
    return make_point(
        [comps](const Vec& p) -> Sym {
            for (std::size_t i = 0; i < comps->size(); ++i)
                if ((*comps)[i].centers.contains(p)) return static_cast<Sym>(i + 1);
            return 0;
        },
        "tiling-point", periods);
}

inline std::vector<subshift::EntropyValue> tiling_entropy_estimate(
    const Tiling& t, const std::vector<FiniteRegion>& windows, const FiniteRegion& scan) {
    return subshift::entropy_estimate(tiling_point(t), windows, scan);
}

// Smallest rectangle F = prod [-(a_i - 1), 0] with F + (centers within the
// dilated window) covering the window. Axes decouple for diagonal lattices.
inline FiniteRegion syndeticity_bound(const CenterLattice& centers,
                                      const FiniteRegion& window) {
    if (window.empty()) throw std::invalid_argument("syndeticity_bound: empty window");
    auto [wlo, whi] = window.bounding_box();
    int d = centers.dim();
    Vec dlo = wlo, dhi = whi;
    for (int i = 0; i < d; ++i) {
        dlo.c[i] -= centers.moduli[i];
        dhi.c[i] += centers.moduli[i];
    }
    auto cs = centers.centers_in(dlo, dhi);
    if (cs.empty()) throw std::invalid_argument("syndeticity_bound: no centers near window");

    std::vector<std::int64_t> dims(static_cast<std::size_t>(d), 0);
    for (int axis = 0; axis < d; ++axis) {
        std::vector<std::int64_t> coords;
        for (const auto& c : cs) coords.push_back(c.c[axis]);
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        for (std::int64_t a = 1;; ++a) {
            bool covers = true;
            for (std::int64_t x = wlo.c[axis]; x <= whi.c[axis] && covers; ++x) {
                bool hit = false;
                for (auto c : coords)
                    if (c >= x && c <= x + a - 1) {
                        hit = true;
                        break;
                    }
                covers = hit;
            }
            if (covers) {
                dims[static_cast<std::size_t>(axis)] = a;
                break;
            }
            if (a > centers.moduli[axis] + 1)
                throw std::runtime_error("syndeticity_bound: no covering rectangle");
        }
    }
    Vec lo = Vec::zero(d);
    for (int i = 0; i < d; ++i) lo.c[i] = -(dims[static_cast<std::size_t>(i)] - 1);
    return FiniteRegion::box(lo, dims);
}

inline bool on_cyclic_line(const Vec& p, const Vec& h) {
    // p = j*h for some integer j
    int pivot = -1;
    for (int i = 0; i < p.dim; ++i)
        if (h.c[i] != 0) pivot = i;
    if (pivot < 0) return p.is_zero();
    if (p.c[pivot] % h.c[pivot] != 0) return false;
    std::int64_t j = p.c[pivot] / h.c[pivot];
    return p == j * h;
}

struct PropertyIDParams {
    std::vector<FiniteRegion> test_sets;
    std::vector<Rat> deltas;
    FiniteRegion window;
    std::vector<FiniteRegion> entropy_windows;
    FiniteRegion entropy_scan;
};

struct PropertyIDReport {
    Vec direction;

    struct Containment {
        bool found = false;
        std::size_t level = 0;
    };
    std::vector<Containment> containments;

    std::vector<Rat> level_max_ratios;  // max_T |H ∩ T| / |T| over visible tiles

    struct DeltaRow {
        Rat delta{0};
        bool conclusive = false;
        std::size_t min_level = 0;
    };
    std::vector<DeltaRow> delta_rows;

    struct Cond3Row {
        bool verified = false;
        std::size_t component = 0;
        std::int64_t step = 0;
    };
    std::vector<Cond3Row> cond3;

    std::vector<std::vector<subshift::EntropyValue>> entropy_trend;
};

inline PropertyIDReport check_property_id(const NestedTilingSequence& seq, const Vec& H,
                                          const PropertyIDParams& params) {
    if (seq.levels.empty()) throw std::invalid_argument("check_property_id: empty sequence");
    if (H.is_zero()) throw std::invalid_argument("check_property_id: H must be nonzero");
    PropertyIDReport rep;
    rep.direction = H;
    auto [wlo, whi] = params.window.bounding_box();

    // (1) minimal level whose tile contains each test set
    for (const auto& F : params.test_sets) {
        PropertyIDReport::Containment row;
        auto [flo, fhi] = F.bounding_box();
        for (std::size_t lvl = 0; lvl < seq.levels.size() && !row.found; ++lvl) {
            for (std::size_t ci = 0; ci < seq.levels[lvl].components.size(); ++ci) {
                const auto& comp = seq.levels[lvl].components[ci];
                auto [slo, shi] = comp.shape.bounding_box();
                for (const auto& c : comp.centers.centers_in(flo - shi, fhi - slo)) {
                    bool inside = true;
                    for (const auto& p : F.points())
                        if (!comp.shape.contains(p - c)) {
                            inside = false;
                            break;
                        }
                    if (inside) {
                        row.found = true;
                        row.level = lvl;
                        break;
                    }
                }
                if (row.found) break;
            }
        }
        rep.containments.push_back(row);
    }

    // (2) exact H-density per level over window-visible tiles
    for (const auto& level : seq.levels) {
        Rat worst(0);
        for (const auto& comp : level.components) {
            auto [slo, shi] = comp.shape.bounding_box();
            for (const auto& c : comp.centers.centers_in(wlo - shi, whi - slo)) {
                std::size_t on_line = 0;
                for (const auto& s : comp.shape.points())
                    if (on_cyclic_line(s + c, H)) ++on_line;
                Rat ratio(Int(on_line), Int(comp.shape.size()));
                if (ratio > worst) worst = ratio;
            }
        }
        rep.level_max_ratios.push_back(worst);
    }
    for (const auto& delta : params.deltas) {
        PropertyIDReport::DeltaRow row;
        row.delta = delta;
        for (std::size_t n0 = 0; n0 < rep.level_max_ratios.size(); ++n0) {
            bool all_ok = true;
            for (std::size_t n = n0; n < rep.level_max_ratios.size(); ++n)
                if (rep.level_max_ratios[n] > delta) all_ok = false;
            if (all_ok) {
                row.conclusive = true;
                row.min_level = n0;
                break;
            }
        }
        rep.delta_rows.push_back(row);
    }

    // (3) tiles along H covering H within the window
    for (const auto& level : seq.levels) {
        PropertyIDReport::Cond3Row row;
        for (std::size_t ci = 0; ci < level.components.size() && !row.verified; ++ci) {
            const auto& comp = level.components[ci];
            // smallest m > 0 with m*H in the center lattice
            std::int64_t bound = 1;
            for (int i = 0; i < H.dim; ++i) bound *= comp.centers.moduli[i];
            std::int64_t m = 0;
            for (std::int64_t cand = 1; cand <= bound; ++cand)
                if (comp.centers.contains(cand * H)) {
                    m = cand;
                    break;
                }
            if (m == 0) continue;
            // verify the tiles S*(j m H) cover H within the window
            auto [shlo, shhi] = comp.shape.bounding_box();
            std::int64_t wspan = 0, sspan = 0;
            for (int i = 0; i < H.dim; ++i) {
                wspan = std::max({wspan, std::abs(wlo.c[i]), std::abs(whi.c[i])});
                sspan = std::max({sspan, std::abs(shlo.c[i]), std::abs(shhi.c[i])});
            }
            std::int64_t jspan = (wspan + sspan) / m + 2;
            bool covered = true;
            for (const auto& p : params.window.points()) {
                if (!on_cyclic_line(p, H)) continue;
                bool hit = false;
                for (std::int64_t j = -jspan; j <= jspan && !hit; ++j) {
                    Vec c = (j * m) * H;
                    if (comp.shape.contains(p - c)) hit = true;
                }
                if (!hit) {
                    covered = false;
                    break;
                }
            }
            if (covered) {
                row.verified = true;
                row.component = ci;
                row.step = m;
            }
        }
        rep.cond3.push_back(row);
    }

    if (!params.entropy_windows.empty())
        for (const auto& level : seq.levels)
            rep.entropy_trend.push_back(
                tiling_entropy_estimate(level, params.entropy_windows, params.entropy_scan));
    return rep;
}

// One level of the residually finite monotiling recursion over Z^2 with
// N_k = (m_k Z)^2.
struct ResFiniteLevel {
    std::int64_t m = 1;
    Vec anchor{};  // shape = anchor + [0,m)^2
    bool contains_E = false;
    lattice::InvarianceResult invariance;
    Rat h_density{0};       // max_c |H ∩ S_k c| / |S_k|
    Rat shape2_ratio{0};    // |S_k ∩ F| / |F| for the transversal F used
    bool lattice_avoids_E = false;
    bool h_monotiling = false;
    bool ok = false;
};

struct ResFiniteResult {
    NestedTilingSequence seq;
    std::vector<ResFiniteLevel> levels;
    bool ok = false;
};

// Recursion from the residual-finiteness argument: S_k = S_{k-1}(F ∩ N_{k-1})
// with F a square transversal of N_k containing E_k. H = {0} x Z throughout.
inline ResFiniteResult resfinite_monotiling_recursion(const std::vector<FiniteRegion>& E,
                                                      const std::vector<Rat>& eps,
                                                      std::size_t depth,
                                                      std::int64_t m_budget = (1 << 20)) {
    if (depth < 1 || E.size() < depth || eps.size() < depth)
        throw std::invalid_argument("resfinite recursion: need E, eps per level");
    if (!(E[0] == FiniteRegion({Vec(0, 0)})))
        throw std::invalid_argument("resfinite recursion: E_1 must be {0}");
    if (eps[0] != Rat(1))
        throw std::invalid_argument("resfinite recursion: eps_1 must be 1");
    for (std::size_t k = 1; k < depth; ++k) {
        if (eps[k] >= eps[k - 1])
            throw std::invalid_argument("resfinite recursion: eps must strictly decrease");
        for (const auto& p : E[k - 1].points())
            if (!E[k].contains(p))
                throw std::invalid_argument("resfinite recursion: E must increase");
    }
    const Vec H(0, 1);

    ResFiniteResult res;
    std::int64_t prev_m = 1;
    std::int64_t prev_anchor = 0;

    for (std::size_t k = 0; k < depth; ++k) {
        ResFiniteLevel lvl;
        if (k == 0) {
            lvl.m = 1;
            lvl.anchor = Vec(0, 0);
            lvl.contains_E = true;
            lvl.invariance.invariant = true;
            lvl.invariance.ratio = Rat(1);
            lvl.invariance.core_size = 1;
            lvl.h_density = Rat(1);  // <= eps_1 = 1
            lvl.shape2_ratio = Rat(1);
            lvl.lattice_avoids_E = true;
            lvl.h_monotiling = true;
            lvl.ok = true;
        } else {
            auto [elo, ehi] = E[k].bounding_box();
            std::int64_t need_lo = std::min<std::int64_t>(
                0, std::min(elo.c[0], elo.c[1]));
            std::int64_t need_hi = std::max<std::int64_t>(
                0, std::max(ehi.c[0], ehi.c[1]));
            Rat best_ratio(0);
            bool done = false;
            for (std::int64_t m = 2 * prev_m; m <= m_budget && !done; m *= 2) {
                // anchor: largest value <= need_lo congruent to prev_anchor mod prev_m
                std::int64_t t = prev_anchor -
                    prev_m * ((prev_anchor - need_lo + prev_m - 1) / prev_m);
                while (t > need_lo) t -= prev_m;
                if (t + m <= need_hi) continue;  // square too small
                FiniteRegion F = FiniteRegion::box(Vec(t, t), {m, m});
                // S_k = S_{k-1} + (F ∩ N_{k-1})
                CenterLattice Nprev{Vec(0, 0), {prev_m, prev_m}};
                std::vector<Vec> cs;
                for (const auto& c : Nprev.centers_in(Vec(t, t), Vec(t + m - 1, t + m - 1)))
                    cs.push_back(c);
                FiniteRegion prev_shape =
                    FiniteRegion::box(Vec(prev_anchor, prev_anchor), {prev_m, prev_m});
                std::vector<Vec> pts;
                pts.reserve(cs.size() * prev_shape.size());
                for (const auto& c : cs)
                    for (const auto& s : prev_shape.points()) pts.push_back(s + c);
                FiniteRegion S(std::move(pts));
                if (S.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m))
                    continue;  // translates overlapped; not a transversal

                lvl.m = m;
                lvl.anchor = S.bounding_box().first;
                lvl.contains_E = true;
                for (const auto& p : E[k].points())
                    if (!S.contains(p)) lvl.contains_E = false;
                lvl.invariance = lattice::is_invariant(S, E[k], eps[k]);
                // H-density: worst tile over centers near the column
                std::size_t worst = 0;
                CenterLattice Nk{Vec(0, 0), {m, m}};
                auto [sl, sh] = S.bounding_box();
                for (const auto& c : Nk.centers_in(Vec(sl.c[0] - m, sl.c[1] - m),
                                                   Vec(sh.c[0] + m, sh.c[1] + m))) {
                    std::size_t cnt = 0;
                    for (const auto& s : S.points())
                        if (on_cyclic_line(s + c, H)) ++cnt;
                    worst = std::max(worst, cnt);
                }
                lvl.h_density = Rat(Int(worst), Int(S.size()));
                lvl.shape2_ratio = Rat(Int(S.intersect(F).size()), Int(F.size()));
                lvl.lattice_avoids_E = true;
                for (const auto& p : E[k].points())
                    if (!p.is_zero() && Nk.contains(p)) lvl.lattice_avoids_E = false;
                // H-monotiling: S ∩ H is a contiguous segment of length m
                std::vector<std::int64_t> seg;
                for (const auto& s : S.points())
                    if (on_cyclic_line(s, H)) seg.push_back(s.c[1]);
                std::sort(seg.begin(), seg.end());
                lvl.h_monotiling = seg.size() == static_cast<std::size_t>(m) &&
                                   seg.back() - seg.front() + 1 == m;

                bool pass = lvl.contains_E && lvl.invariance.invariant &&
                            lvl.h_density <= eps[k] && lvl.lattice_avoids_E &&
                            lvl.h_monotiling;
                if (lvl.invariance.ratio > best_ratio) best_ratio = lvl.invariance.ratio;
                if (pass) {
                    lvl.ok = true;
                    done = true;
                }
            }
            if (!done)
                throw std::runtime_error(
                    "resfinite recursion: no m within budget at level " + std::to_string(k + 1) +
                    "; best invariance ratio " + rat_to_string(best_ratio));
        }

        // record tiling level
        Tiling t;
        Tiling::Component comp;
        comp.shape = FiniteRegion::box(lvl.anchor, {lvl.m, lvl.m});
        comp.centers.offset = Vec(0, 0);
        comp.centers.moduli = {lvl.m, lvl.m};
        t.components.push_back(comp);
        res.seq.levels.push_back(t);
        if (k >= 1) {
            Refinement ref;
            CenterLattice Nprev{Vec(0, 0), {prev_m, prev_m}};
            Vec lo = lvl.anchor - Vec(prev_anchor, prev_anchor);
            for (const auto& c : Nprev.centers_in(
                     Vec(lo.c[0], lo.c[1]),
                     Vec(lo.c[0] + lvl.m - 1, lo.c[1] + lvl.m - 1)))
                ref.parts.emplace_back(0, c);
            res.seq.refinements.push_back({ref});
        }
        prev_m = lvl.m;
        prev_anchor = lvl.anchor.c[0];
        res.levels.push_back(std::move(lvl));
    }
    res.ok = true;
    for (const auto& l : res.levels) res.ok = res.ok && l.ok;
    return res;
}

}  // namespace tilings
}  // namespace fgl
