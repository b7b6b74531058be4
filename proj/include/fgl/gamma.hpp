#pragma once

#include <map>
#include <optional>

#include "fgl/lattice.hpp"

namespace fgl {

// Finitely supported law on rational points of [-1,1], centered at 0.
struct FiniteDistribution {
    std::vector<std::pair<Rat, Rat>> atoms;  // (value, mass), sorted by value

    void validate() const {
        if (atoms.empty()) throw std::invalid_argument("distribution: no atoms");
        Rat total(0), mean(0);
        bool off_zero = false;
        for (const auto& [v, m] : atoms) {
            if (v < Rat(-1) || v > Rat(1))
                throw std::invalid_argument("distribution: value outside [-1,1]");
            if (m <= Rat(0)) throw std::invalid_argument("distribution: nonpositive mass");
            if (v != Rat(0)) off_zero = true;
            total += m;
            mean += v * m;
        }
        if (total != Rat(1)) throw std::invalid_argument("distribution: masses must sum to 1");
        if (mean != Rat(0)) throw std::invalid_argument("distribution: mean must be 0");
        if (!off_zero) throw std::invalid_argument("distribution: concentrated at 0");
    }

    static FiniteDistribution uniform(const std::vector<Rat>& values) {
        FiniteDistribution d;
        Rat m(Int(1), Int(values.size()));
        for (const auto& v : values) d.atoms.emplace_back(v, m);
        std::sort(d.atoms.begin(), d.atoms.end());
        d.validate();
        return d;
    }
    static FiniteDistribution uniform_pm1() { return uniform({Rat(-1), Rat(1)}); }
    static FiniteDistribution uniform_halves() {
        return uniform({Rat(-1), make_rat(-1, 2), make_rat(1, 2), Rat(1)});
    }
};

// Exact law of a sum of i.i.d. copies.
struct SumLaw {
    std::vector<std::pair<Rat, Rat>> table;  // (value, mass), sorted by value

    Rat mass_sum() const {
        Rat s(0);
        for (const auto& [v, m] : table) s += m;
        return s;
    }
    Rat mean() const {
        Rat s(0);
        for (const auto& [v, m] : table) s += v * m;
        return s;
    }
    Rat prob_le(const Rat& t) const {  // P(X <= t)
        Rat s(0);
        for (const auto& [v, m] : table) {
            if (v > t) break;
            s += m;
        }
        return s;
    }
    Rat prob_gt(const Rat& t) const { return Rat(1) - prob_le(t); }
    Rat prob_gt_zero() const { return prob_gt(Rat(0)); }
};

namespace gamma {

inline SumLaw iid_sum_law(const FiniteDistribution& nu, int n) {
    if (n < 0) throw std::invalid_argument("iid_sum_law: n must be >= 0");
    nu.validate();
    std::map<Rat, Rat> cur;
    cur[Rat(0)] = Rat(1);
    for (int i = 0; i < n; ++i) {
        std::map<Rat, Rat> next;
        for (const auto& [v, m] : cur)
            for (const auto& [av, am] : nu.atoms) next[v + av] += m * am;
        cur = std::move(next);
    }
    SumLaw law;
    law.table.assign(cur.begin(), cur.end());
    return law;
}

// P(W <= -U < V) for independent sums over disjoint index sets of sizes
// (sizeJ, sizeK, sizeL): U over J, V over K, W over L.
inline Rat prob_event(const FiniteDistribution& nu, int sizeJ, int sizeK, int sizeL) {
    SumLaw U = iid_sum_law(nu, sizeJ);
    SumLaw V = iid_sum_law(nu, sizeK);
    SumLaw W = iid_sum_law(nu, sizeL);
    Rat total(0);
    for (const auto& [u, mu] : U.table) {
        Rat w_le = W.prob_le(-u);
        if (w_le == Rat(0)) continue;
        Rat v_gt = V.prob_gt(-u);
        if (v_gt == Rat(0)) continue;
        total += mu * w_le * v_gt;
    }
    return total;
}

struct HalfSetResult {
    Rat measureA{0};     // nu^F(A) with A = { sum over E > 0 }
    Rat discrepancy{0};  // nu^F(sigma A Delta A)
};

// The sigma-dependence reduces to the overlap |sigma E ∩ E|; the symmetric
// difference mass is 2 P(W <= -U < V) with sizes (overlap, |E \ sigma E|,
// |sigma E \ E|), and the two difference sets have equal size.
inline HalfSetResult half_set_discrepancy(const FiniteDistribution& nu, int sizeF,
                                          int sizeE, int overlap) {
    if (!(0 <= overlap && overlap <= sizeE && sizeE <= sizeF))
        throw std::invalid_argument("half_set_discrepancy: need overlap <= E <= F");
    if (sizeE - overlap > sizeF - sizeE)
        throw std::invalid_argument(
            "half_set_discrepancy: sigma E \\ E cannot fit inside F \\ E");
    HalfSetResult res;
    res.measureA = iid_sum_law(nu, sizeE).prob_gt_zero();
    res.discrepancy =
        Rat(2) * prob_event(nu, overlap, sizeE - overlap, sizeE - overlap);
    return res;
}

struct DeltaCurveRow {
    int sizeF = 0;
    std::optional<Rat> best_delta;  // largest grid delta certified, if any
};

// For each sizeF <= maxSize, the largest delta on the grid {j/sizeF} such
// that every E with |E| >= (1-delta)|F| and every overlap realizable by a
// permutation keeps the discrepancy and |measureA - 1/2| below eps. The
// worst-case overlap is |F| - 2|F \ E|.
inline std::vector<DeltaCurveRow> delta_curve(const FiniteDistribution& nu, const Rat& eps,
                                              int maxSize) {
    if (eps <= Rat(0)) throw std::invalid_argument("delta_curve: eps must be positive");
    std::vector<DeltaCurveRow> rows;
    for (int F = 1; F <= maxSize; ++F) {
        DeltaCurveRow row;
        row.sizeF = F;
        for (int j = F; j >= 0; --j) {
            Rat delta = make_rat(j, F);
            bool ok = true;
            for (int d = 0; d <= j && ok; ++d) {  // d = |F \ E|
                int E = F - d;
                int overlap = std::max(0, E - d);  // |F| - 2|F\E|, clamped
                auto r = half_set_discrepancy(nu, F, E, overlap);
                Rat half_gap = r.measureA - make_rat(1, 2);
                if (half_gap < Rat(0)) half_gap = -half_gap;
                if (!(half_gap < eps && r.discrepancy < eps)) ok = false;
            }
            if (ok) {
                row.best_delta = delta;
                break;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

struct TranslatePacking {
    FiniteRegion C;
    Rat invariance_ratio{0};
    bool bound_ok = false;       // |C| * 2|T|^2 >= |F|
    bool containment_ok = false; // T + C inside F
};

// Greedy (lex) maximal C inside the invariance core with the translates
// T + c pairwise disjoint. Certifies |C| >= |F| / (2|T|^2).
inline TranslatePacking greedy_disjoint_translates(const FiniteRegion& T,
                                                   const FiniteRegion& F) {
    if (!T.contains(Vec::zero(T.dim())))
        throw std::invalid_argument("greedy_disjoint_translates: T must contain 0");
    auto inv = lattice::is_invariant(F, T, make_rat(1, 2));
    if (!inv.invariant)
        throw std::invalid_argument(
            "greedy_disjoint_translates: F is not (T,1/2)-invariant, ratio " +
            rat_to_string(inv.ratio));
    FiniteRegion core = lattice::invariance_core(F, T);
    std::unordered_set<Vec, VecHash> occupied;
    std::vector<Vec> chosen;
    for (const auto& c : core.points()) {
        bool free_spot = true;
        for (const auto& t : T.points())
            if (occupied.count(t + c)) {
                free_spot = false;
                break;
            }
        if (!free_spot) continue;
        for (const auto& t : T.points()) occupied.insert(t + c);
        chosen.push_back(c);
    }
    TranslatePacking res;
    res.C = FiniteRegion(chosen);
    res.invariance_ratio = inv.ratio;
    res.bound_ok = Int(res.C.size()) * 2 * Int(T.size()) * Int(T.size()) >= Int(F.size());
    res.containment_ok = true;
    for (const auto& c : res.C.points())
        for (const auto& t : T.points())
            if (!F.contains(t + c)) res.containment_ok = false;
    if (!res.bound_ok)
        throw std::runtime_error("greedy_disjoint_translates: packing bound failed");
    return res;
}

}  // namespace gamma
}  // namespace fgl
