#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "fgl/lattice.hpp"

namespace fgl {

// Symbols are dense indices 0..size-1; display names are optional.
struct Alphabet {
    int size = 2;
    std::vector<std::string> names;

    static Alphabet indexed(int q) {
        Alphabet a;
        a.size = q;
        for (int i = 0; i < q; ++i) a.names.push_back(std::to_string(i));
        return a;
    }
};

using Sym = std::uint16_t;

// Values listed in the window's canonical (sorted / row-major) point order.
struct Pattern {
    FiniteRegion window;
    std::vector<Sym> values;

    Sym at(const Vec& t) const {
        const auto& pts = window.points();
        auto it = std::lower_bound(pts.begin(), pts.end(), t);
        if (it == pts.end() || !(*it == t))
            throw std::invalid_argument("Pattern::at: coordinate outside window");
        return values[static_cast<std::size_t>(it - pts.begin())];
    }

    Pattern restricted(const FiniteRegion& sub) const {
        Pattern p;
        p.window = sub;
        p.values.reserve(sub.size());
        for (const auto& t : sub.points()) p.values.push_back(at(t));
        return p;
    }

    friend bool operator==(const Pattern& a, const Pattern& b) {
        return a.window == b.window && a.values == b.values;
    }
};

// A point of a subshift given by a closed-form rule; windows are materialized
// on demand. translate() composes offsets additively, so
// at(t) == rule(t + offset).
class PointRule {
  public:
    virtual ~PointRule() = default;
    virtual Sym eval(const Vec& t) const = 0;
    virtual std::string id() const = 0;
    // Per-axis periods when the construction grants them (enables
    // completeness certificates for finite language samples).
    virtual std::optional<std::vector<std::int64_t>> periods() const { return std::nullopt; }
};

class FnRule final : public PointRule {
  public:
    FnRule(std::function<Sym(const Vec&)> fn, std::string id,
           std::optional<std::vector<std::int64_t>> periods = std::nullopt)
        : fn_(std::move(fn)), id_(std::move(id)), periods_(std::move(periods)) {}
    Sym eval(const Vec& t) const override { return fn_(t); }
    std::string id() const override { return id_; }
    std::optional<std::vector<std::int64_t>> periods() const override { return periods_; }

  private:
    std::function<Sym(const Vec&)> fn_;
    std::string id_;
    std::optional<std::vector<std::int64_t>> periods_;
};

struct PointOracle {
    std::shared_ptr<const PointRule> rule;
    Vec offset{};

    Sym at(const Vec& t) const { return rule->eval(t + offset); }
    PointOracle translated(const Vec& v) const { return {rule, offset + v}; }
    std::string describe() const {
        std::string s = rule->id();
        if (!offset.is_zero()) {
            s += "@(";
            for (int i = 0; i < offset.dim; ++i)
                s += (i ? "," : "") + std::to_string(offset.c[i]);
            s += ")";
        }
        return s;
    }
};

inline PointOracle make_point(std::function<Sym(const Vec&)> fn, std::string id,
                              std::optional<std::vector<std::int64_t>> periods = std::nullopt) {
    return PointOracle{std::make_shared<FnRule>(std::move(fn), std::move(id), std::move(periods)),
                       Vec{}};
}

struct LanguageSample {
    FiniteRegion window;
    std::vector<std::vector<Sym>> patterns;  // sorted, deduplicated
    FiniteRegion scan;
    bool complete = false;
    std::string source;

    bool contains(const std::vector<Sym>& v) const {
        return std::binary_search(patterns.begin(), patterns.end(), v);
    }
};

namespace subshift {

inline Pattern restrict_point(const PointOracle& x, const FiniteRegion& F) {
    Pattern p;
    p.window = F;
    p.values.reserve(F.size());
    for (const auto& t : F.points()) p.values.push_back(x.at(t));
    return p;
}

// All translate offsets v with window + v contained in scan.
inline std::vector<Vec> admissible_translates(const FiniteRegion& window,
                                              const FiniteRegion& scan) {
    if (window.empty() || scan.empty()) return {};
    auto [wlo, whi] = window.bounding_box();
    auto [slo, shi] = scan.bounding_box();
    int d = window.dim();
    bool scan_is_box = true;
    {
        std::int64_t vol = 1;
        for (int i = 0; i < d; ++i) vol *= shi.c[i] - slo.c[i] + 1;
        scan_is_box = vol == static_cast<std::int64_t>(scan.size());
    }
    std::vector<Vec> out;
    Vec v = Vec::zero(d);
    std::function<void(int)> rec = [&](int axis) {
        if (axis == d) {
            if (!scan_is_box) {
                for (const auto& t : window.points())
                    if (!scan.contains(t + v)) return;
            }
            out.push_back(v);
            return;
        }
        for (std::int64_t c = slo.c[axis] - wlo.c[axis]; c <= shi.c[axis] - whi.c[axis]; ++c) {
            v.c[axis] = c;
            rec(axis + 1);
        }
    };
    rec(0);
    return out;
}

inline LanguageSample sample_language(const PointOracle& x, const FiniteRegion& window,
                                      const FiniteRegion& scan) {
    auto vs = admissible_translates(window, scan);
    if (vs.empty()) throw std::invalid_argument("sample_language: scan smaller than window");
    std::set<std::vector<Sym>> seen;
    std::vector<Sym> buf(window.size());
    for (const auto& v : vs) {
        std::size_t i = 0;
        for (const auto& t : window.points()) buf[i++] = x.at(t + v);
        seen.insert(buf);
    }
    LanguageSample lang;
    lang.window = window;
    lang.scan = scan;
    lang.patterns.assign(seen.begin(), seen.end());
    lang.source = x.describe();

    // completeness certificate: declared periods, verified over the scan, with
    // the translate range covering a full period box
    auto periods = x.rule->periods();
    if (periods && static_cast<int>(periods->size()) == window.dim()) {
        auto [vlo, vhi] = FiniteRegion(vs).bounding_box();
        bool covered = true;
        for (int i = 0; i < window.dim(); ++i)
            if (vhi.c[i] - vlo.c[i] + 1 < (*periods)[i]) covered = false;
        if (covered) {
            bool verified = true;
            for (int axis = 0; axis < window.dim() && verified; ++axis) {
                Vec shift = Vec::zero(window.dim());
                shift.c[axis] = (*periods)[axis];
                for (const auto& t : scan.points())
                    if (scan.contains(t + shift) && x.at(t) != x.at(t + shift)) {
                        verified = false;
                        break;
                    }
            }
            lang.complete = verified;
        }
    }
    return lang;
}

struct EntropyValue {
    std::size_t pattern_count = 0;
    std::size_t window_size = 0;
    double nats() const {
        return std::log(static_cast<double>(pattern_count)) /
               static_cast<double>(window_size);
    }
};

inline std::vector<EntropyValue> entropy_estimate(const PointOracle& x,
                                                  const std::vector<FiniteRegion>& windows,
                                                  const FiniteRegion& scan) {
    std::vector<EntropyValue> out;
    for (const auto& w : windows) {
        auto lang = sample_language(x, w, scan);
        out.push_back(EntropyValue{lang.patterns.size(), w.size()});
    }
    return out;
}

// Pattern-counting estimate over a set of sample points (used when one orbit
// segment cannot exhibit the whole language, e.g. box systems with many free
// coordinates).
inline EntropyValue entropy_estimate_multi(const std::vector<PointOracle>& points,
                                           const FiniteRegion& window,
                                           const FiniteRegion& scan) {
    std::set<std::vector<Sym>> seen;
    for (const auto& x : points) {
        auto lang = sample_language(x, window, scan);
        seen.insert(lang.patterns.begin(), lang.patterns.end());
    }
    return EntropyValue{seen.size(), window.size()};
}

// Greedy maximal subset of the sample whose members pairwise disagree
// somewhere on F + [-R,R]^d (the epsilon-window for eps = 2^-R).
inline std::size_t separated_set_estimate(const std::vector<PointOracle>& points,
                                          const FiniteRegion& F, int epsR) {
    if (points.empty()) throw std::invalid_argument("separated_set_estimate: empty sample");
    int d = F.dim();
    FiniteRegion eps_window = FiniteRegion::box(
        [&] {
            Vec lo = Vec::zero(d);
            for (int i = 0; i < d; ++i) lo.c[i] = -epsR;
            return lo;
        }(),
        std::vector<std::int64_t>(d, 2 * epsR + 1));
    FiniteRegion probe = F.minkowski(eps_window);
    std::vector<std::vector<Sym>> kept;
    for (const auto& x : points) {
        auto pat = restrict_point(x, probe).values;
        bool fresh = true;
        for (const auto& k : kept)
            if (k == pat) {
                fresh = false;
                break;
            }
        if (fresh) kept.push_back(std::move(pat));
    }
    return kept.size();
}

struct MinimalityCertificate {
    bool conclusive = false;
    std::int64_t gap = 0;  // minimal g: every g x g (resp. length-g) position box
                           // inside the probed region contains every pattern
    bool via_periodicity = false;
    std::size_t pattern_count = 0;
};

inline MinimalityCertificate minimality_certificate(const PointOracle& x,
                                                    const FiniteRegion& window,
                                                    const FiniteRegion& scan) {
    auto [wlo, whi] = window.bounding_box();
    auto [slo, shi] = scan.bounding_box();
    int d = window.dim();
    for (int i = 0; i < d; ++i) {
        std::int64_t wext = whi.c[i] - wlo.c[i] + 1;
        std::int64_t sext = shi.c[i] - slo.c[i] + 1;
        if (sext < 8 * wext)
            throw std::invalid_argument("minimality_certificate: scan must be >= 8x window");
    }

    // periodic shortcut: verified periods make every pattern recur on a
    // full coset of the period lattice
    auto periods = x.rule->periods();
    if (periods && static_cast<int>(periods->size()) == d) {
        bool verified = true;
        for (int axis = 0; axis < d && verified; ++axis) {
            Vec shift = Vec::zero(d);
            shift.c[axis] = (*periods)[axis];
            for (const auto& t : scan.points())
                if (scan.contains(t + shift) && x.at(t) != x.at(t + shift)) {
                    verified = false;
                    break;
                }
        }
        if (verified) {
            MinimalityCertificate c;
            c.conclusive = true;
            c.via_periodicity = true;
            c.gap = 0;
            for (auto p : *periods) c.gap = std::max(c.gap, p);
            auto lang = sample_language(x, window, scan);
            c.pattern_count = lang.patterns.size();
            return c;
        }
    }

    auto vs = admissible_translates(window, scan);
    auto [vlo, vhi] = FiniteRegion(vs).bounding_box();
    std::vector<std::int64_t> ext(d), margin(d);
    for (int i = 0; i < d; ++i) {
        ext[i] = vhi.c[i] - vlo.c[i] + 1;
        margin[i] = ext[i] / 4;
    }

    // pattern id per position
    std::map<std::vector<Sym>, int> ids;
    std::vector<int> grid;
    grid.reserve(vs.size());
    std::vector<Sym> buf(window.size());
    for (const auto& v : vs) {
        std::size_t i = 0;
        for (const auto& t : window.points()) buf[i++] = x.at(t + v);
        auto [it, fresh] = ids.emplace(buf, static_cast<int>(ids.size()));
        grid.push_back(it->second);
    }
    const int npat = static_cast<int>(ids.size());

    // 2D / 1D max empty box per pattern via prefix counts
    auto index_of = [&](const std::vector<std::int64_t>& coord) {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * ext[i] + static_cast<std::size_t>(coord[i]);
        return idx;
    };
    std::int64_t worst_gap = 1;
    bool conclusive = true;
    for (int p = 0; p < npat; ++p) {
        // prefix sums of occupancy
        std::vector<std::int64_t> pre;
        if (d == 2) {
            pre.assign(static_cast<std::size_t>((ext[0] + 1) * (ext[1] + 1)), 0);
            for (std::int64_t a = 0; a < ext[0]; ++a)
                for (std::int64_t b = 0; b < ext[1]; ++b) {
                    std::int64_t occ = grid[index_of({a, b})] == p ? 1 : 0;
                    pre[(a + 1) * (ext[1] + 1) + (b + 1)] =
                        occ + pre[a * (ext[1] + 1) + b + 1] +
                        pre[(a + 1) * (ext[1] + 1) + b] - pre[a * (ext[1] + 1) + b];
                }
        } else {
            pre.assign(static_cast<std::size_t>(ext[0] + 1), 0);
            for (std::int64_t a = 0; a < ext[0]; ++a)
                pre[a + 1] = pre[a] + (grid[static_cast<std::size_t>(a)] == p ? 1 : 0);
        }
        auto box_has = [&](std::int64_t a, std::int64_t b, std::int64_t g) {
            if (d == 2) {
                std::int64_t a2 = a + g, b2 = b + g;
                return pre[a2 * (ext[1] + 1) + b2] - pre[a * (ext[1] + 1) + b2] -
                           pre[a2 * (ext[1] + 1) + b] + pre[a * (ext[1] + 1) + b] >
                       0;
            }
            return pre[a + g] - pre[a] > 0;
        };
        // minimal g such that every g-box anchored in the inner region hits p
        std::int64_t lo = 1, hi = *std::max_element(ext.begin(), ext.end());
        auto all_boxes_hit = [&](std::int64_t g) {
            std::int64_t a0 = margin[0], a1 = std::min(ext[0] - g, ext[0] - margin[0]);
            if (d == 2) {
                std::int64_t b0 = margin[1], b1 = std::min(ext[1] - g, ext[1] - margin[1]);
                for (std::int64_t a = a0; a <= a1; ++a)
                    for (std::int64_t b = b0; b <= b1; ++b)
                        if (!box_has(a, b, g)) return false;
                return true;
            }
            for (std::int64_t a = a0; a <= a1; ++a)
                if (!box_has(a, 0, g)) return false;
            return true;
        };
        while (lo < hi) {
            std::int64_t mid = (lo + hi) / 2;
            if (all_boxes_hit(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        worst_gap = std::max(worst_gap, lo);
        if (lo > *std::min_element(margin.begin(), margin.end())) conclusive = false;
    }

    MinimalityCertificate c;
    c.gap = worst_gap;
    c.conclusive = conclusive;
    c.pattern_count = static_cast<std::size_t>(npat);
    return c;
}

struct ToeplitzCoordinate {
    Vec coordinate;
    bool certified = false;
    std::vector<std::int64_t> moduli;  // lattice diag(moduli) Z^d
};

struct ToeplitzCertificate {
    bool all_certified = false;
    std::vector<ToeplitzCoordinate> coords;
};

// Searches diagonal sublattices for per-coordinate periods. The first axis is
// searched among powers of two 2^a, a <= maxPeriodExp (the profinite
// structure of the shipped constructions); remaining axes among all moduli
// up to 2^maxPeriodExp. Constancy is verified on reps translates per axis;
// the verdict is scan-relative.
inline ToeplitzCertificate toeplitz_certificate(const PointOracle& x,
                                                const FiniteRegion& coords,
                                                int maxPeriodExp, int reps = 4) {
    int d = coords.dim();
    std::int64_t maxmod = std::int64_t(1) << maxPeriodExp;

    std::vector<std::vector<std::int64_t>> candidates;
    if (d == 1) {
        for (int a = 0; a <= maxPeriodExp; ++a) candidates.push_back({std::int64_t(1) << a});
    } else {
        for (int a = 0; a <= maxPeriodExp; ++a)
            for (std::int64_t v = 1; v <= maxmod; ++v)
                candidates.push_back({std::int64_t(1) << a, v});
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& p, const auto& q) {
                      __int128 ap = static_cast<__int128>(p[0]) * p[1];
                      __int128 aq = static_cast<__int128>(q[0]) * q[1];
                      if (ap != aq) return ap < aq;
                      return p < q;
                  });
    }

    ToeplitzCertificate cert;
    cert.all_certified = true;
    for (const auto& t : coords.points()) {
        Sym base = x.at(t);
        ToeplitzCoordinate res;
        res.coordinate = t;
        for (const auto& mod : candidates) {
            bool ok = true;
            if (d == 1) {
                for (int i = -reps; i <= reps && ok; ++i)
                    if (x.at(t + Vec(i * mod[0])) != base) ok = false;
            } else {
                for (int i = -reps; i <= reps && ok; ++i)
                    for (int j = -reps; j <= reps && ok; ++j)
                        if (x.at(t + Vec(i * mod[0], j * mod[1])) != base) ok = false;
            }
            if (ok) {
                res.certified = true;
                res.moduli = mod;
                break;
            }
        }
        if (!res.certified) cert.all_certified = false;
        cert.coords.push_back(std::move(res));
    }
    return cert;
}

}  // namespace subshift
}  // namespace fgl
