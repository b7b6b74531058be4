#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fgl/gamma.hpp"

using namespace fgl;
using namespace fgl::gamma;

namespace {

// Independent oracle #1: literal product-space enumeration (two-atom laws),
// O(|atoms|^(J+K+L)) with the indicator evaluated per tuple.
Rat oracle_product_enum(const FiniteDistribution& nu, int J, int K, int L) {
    int n = J + K + L;
    std::size_t a = nu.atoms.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    Rat total(0);
    while (true) {
        Rat u(0), v(0), w(0), mass(1);
        for (int i = 0; i < n; ++i) {
            const auto& [val, m] = nu.atoms[idx[static_cast<std::size_t>(i)]];
            mass *= m;
            if (i < J)
                u += val;
            else if (i < J + K)
                v += val;
            else
                w += val;
        }
        if (w <= -u && -u < v) total += mass;
        int pos = 0;
        while (pos < n) {
            if (++idx[static_cast<std::size_t>(pos)] < a) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return total;
}

// Independent oracle #2: multinomial composition enumeration. Laws are built
// by counting atom multiplicities (no convolution merges), and the event is
// an exhaustive triple sum with the raw indicator (no prefix sums).
std::vector<std::pair<Rat, Rat>> law_by_compositions(const FiniteDistribution& nu, int n) {
    std::vector<std::pair<Rat, Rat>> out;
    std::size_t a = nu.atoms.size();
    std::vector<int> counts(a, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t slot, int left) {
        if (slot + 1 == a) {
            counts[slot] = left;
            Int multinom = 1;
            int placed = 0;
            for (std::size_t i = 0; i < a; ++i)
                for (int c = 1; c <= counts[i]; ++c) {
                    ++placed;
                    multinom = multinom * placed / c;  // running binomial product
                }
            Rat value(0), mass(Int(multinom), Int(1));
            for (std::size_t i = 0; i < a; ++i) {
                value += Rat(Int(counts[i]), Int(1)) * nu.atoms[i].first;
                for (int c = 0; c < counts[i]; ++c) mass *= nu.atoms[i].second;
            }
            out.emplace_back(value, mass);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            counts[slot] = c;
            rec(slot + 1, left - c);
        }
    };
    rec(0, n);
    return out;
}

Rat oracle_compositions(const FiniteDistribution& nu, int J, int K, int L) {
    auto U = law_by_compositions(nu, J);
    auto V = law_by_compositions(nu, K);
    auto W = law_by_compositions(nu, L);
    Rat total(0);
    for (const auto& [u, mu] : U)
        for (const auto& [w, mw] : W)
            for (const auto& [v, mv] : V)
                if (w <= -u && -u < v) total += mu * mw * mv;
    return total;
}

}  // namespace

TEST_CASE("distribution validation") {
    CHECK_NOTHROW(FiniteDistribution::uniform_pm1().validate());
    CHECK_NOTHROW(FiniteDistribution::uniform_halves().validate());

    FiniteDistribution bad;
    bad.atoms = {{Rat(0), Rat(1)}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // concentrated at 0

    FiniteDistribution off;
    off.atoms = {{Rat(-1), make_rat(1, 4)}, {Rat(1), make_rat(3, 4)}};
    CHECK_THROWS_AS(off.validate(), std::invalid_argument);  // mean != 0

    FiniteDistribution big;
    big.atoms = {{Rat(-2), make_rat(1, 2)}, {Rat(2), make_rat(1, 2)}};
    CHECK_THROWS_AS(big.validate(), std::invalid_argument);  // outside [-1,1]
}

TEST_CASE("iid_sum_law basics") {
    auto nu = FiniteDistribution::uniform_pm1();
    auto l0 = iid_sum_law(nu, 0);
    REQUIRE(l0.table.size() == 1);
    CHECK(l0.table[0].first == Rat(0));
    CHECK(l0.table[0].second == Rat(1));

    auto l2 = iid_sum_law(nu, 2);
    REQUIRE(l2.table.size() == 3);
    CHECK(l2.prob_le(Rat(-2)) == make_rat(1, 4));
    CHECK(l2.prob_le(Rat(0)) == make_rat(3, 4));
    CHECK(l2.table[1].second == make_rat(1, 2));

    for (int n : {0, 1, 3, 6}) {
        auto l = iid_sum_law(FiniteDistribution::uniform_halves(), n);
        CHECK(l.mass_sum() == Rat(1));
        CHECK(l.mean() == Rat(0));
    }
}

TEST_CASE("prob_event pinned values") {
    auto nu = FiniteDistribution::uniform_pm1();
    CHECK(prob_event(nu, 1, 1, 1) == make_rat(1, 8));
    CHECK(prob_event(nu, 5, 0, 0) == Rat(0));  // 0 <= -U < 0 impossible
    CHECK(prob_event(nu, 0, 1, 1) == make_rat(1, 4));  // W<=0<V: W=-1 and V=1
}

TEST_CASE("prob_event equals product enumeration (uniform pm1)") {
    auto nu = FiniteDistribution::uniform_pm1();
    for (int J = 0; J <= 6; ++J)
        for (int K = 0; K <= 3; ++K)
            for (int L = 0; L <= 3; ++L)
                CHECK(prob_event(nu, J, K, L) == oracle_product_enum(nu, J, K, L));
}

TEST_CASE("prob_event equals composition oracle (uniform halves)") {
    auto nu = FiniteDistribution::uniform_halves();
    for (int J = 0; J <= 5; ++J)
        for (int K = 0; K <= 3; ++K)
            for (int L = 0; L <= 3; ++L)
                CHECK(prob_event(nu, J, K, L) == oracle_compositions(nu, J, K, L));
    // and the two oracles agree with each other on a small grid
    for (int J = 0; J <= 3; ++J)
        CHECK(oracle_product_enum(nu, J, 2, 2) == oracle_compositions(nu, J, 2, 2));
}

TEST_CASE("prob_event decreasing in J for fixed K=L over computed rows") {
    auto nu = FiniteDistribution::uniform_pm1();
    Rat prev = prob_event(nu, 1, 2, 2);
    for (int J = 3; J <= 12; J += 2) {  // same-parity rows to avoid parity wiggle
        Rat cur = prob_event(nu, J, 2, 2);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("half_set_discrepancy pinned values and dual route") {
    auto nu = FiniteDistribution::uniform_pm1();
    auto r = half_set_discrepancy(nu, 3, 2, 1);
    CHECK(r.measureA == make_rat(1, 4));
    CHECK(r.discrepancy == make_rat(1, 4));

    // sigma = identity: overlap = |E|, discrepancy 0
    auto rid = half_set_discrepancy(nu, 5, 4, 4);
    CHECK(rid.discrepancy == Rat(0));

    CHECK_THROWS_AS(half_set_discrepancy(nu, 3, 4, 0), std::invalid_argument);

    // dual route: direct enumeration of nu^F(sigma A  Delta A) over sign
    // vectors, explicit permutation with the given overlap
    for (int F = 2; F <= 8; ++F)
        for (int E = 1; E <= F; ++E)
            for (int overlap = std::max(0, 2 * E - F); overlap <= E; ++overlap) {
                // sigma E = [0,overlap) ∪ [E, E + (E-overlap))
                Rat diff(0);
                for (std::uint32_t mask = 0; mask < (1u << F); ++mask) {
                    auto bit = [&](int i) { return (mask >> i) & 1u; };
                    int sumE = 0, sumS = 0;
                    for (int i = 0; i < E; ++i) sumE += bit(i) ? 1 : -1;
                    for (int i = 0; i < overlap; ++i) sumS += bit(i) ? 1 : -1;
                    for (int i = E; i < E + (E - overlap); ++i) sumS += bit(i) ? 1 : -1;
                    bool inA = sumE > 0, inSA = sumS > 0;
                    if (inA != inSA) diff += Rat(Int(1), Int(1) << F);
                }
                auto rr = half_set_discrepancy(nu, F, E, overlap);
                CHECK(rr.discrepancy == diff);
            }
}

TEST_CASE("measureA tends to 1/2 through odd sizes") {
    auto nu = FiniteDistribution::uniform({Rat(-1), make_rat(-1, 3), make_rat(1, 3), Rat(1)});
    Rat prev_gap(1);
    for (int E = 1; E <= 9; E += 2) {
        Rat mA = iid_sum_law(nu, E).prob_gt_zero();
        Rat gap = mA - make_rat(1, 2);
        if (gap < Rat(0)) gap = -gap;
        CHECK(gap <= prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("delta_curve") {
    auto nu = FiniteDistribution::uniform_pm1();
    auto rows1 = delta_curve(nu, make_rat(1001, 1000), 4);
    for (const auto& row : rows1) {
        REQUIRE(row.best_delta.has_value());
        CHECK(*row.best_delta == Rat(1));  // eps > 1 certifies everything
    }

    auto rows = delta_curve(nu, make_rat(1, 10), 12);
    REQUIRE(rows.size() == 12);
    // cross-check one row against the definition by brute force
    const auto& row12 = rows[11];
    if (row12.best_delta) {
        int j = static_cast<int>(rat_floor(*row12.best_delta * Rat(12)).convert_to<long long>());
        for (int d = 0; d <= j; ++d) {
            int E = 12 - d;
            int overlap = std::max(0, E - d);
            auto r = half_set_discrepancy(nu, 12, E, overlap);
            Rat gap = r.measureA - make_rat(1, 2);
            if (gap < Rat(0)) gap = -gap;
            CHECK(gap < make_rat(1, 10));
            CHECK(r.discrepancy < make_rat(1, 10));
        }
    }
}

TEST_CASE("greedy_disjoint_translates") {
    // T = {0}: C = core = F
    auto F = FiniteRegion::box(Vec(0, 0), {10, 10});
    FiniteRegion T0({Vec(0, 0)});
    auto pack0 = greedy_disjoint_translates(T0, F);
    CHECK(pack0.C.size() == 100);
    CHECK(pack0.bound_ok);
    CHECK(pack0.containment_ok);

    FiniteRegion T({Vec(0, 0), Vec(1, 0)});
    auto pack = greedy_disjoint_translates(T, F);
    CHECK(pack.bound_ok);
    CHECK(pack.containment_ok);
    CHECK(pack.C.size() >= 100 / 8);
    CHECK(pack.C.size() >= 45);  // lex greedy fills densely
    // translates pairwise disjoint
    std::unordered_set<Vec, VecHash> seen;
    for (const auto& c : pack.C.points())
        for (const auto& t : T.points()) CHECK(seen.insert(t + c).second);

    CHECK_THROWS_AS(greedy_disjoint_translates(FiniteRegion({Vec(1, 0)}), F),
                    std::invalid_argument);

    // randomized instances satisfying the invariance precondition
    std::mt19937_64 rng(20260809);
    int done = 0;
    while (done < 25) {
        std::int64_t a = 6 + static_cast<std::int64_t>(rng() % 10);
        std::int64_t b = 6 + static_cast<std::int64_t>(rng() % 10);
        std::vector<Vec> tpts{Vec(0, 0)};
        int extra = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < extra; ++i)
            tpts.emplace_back(static_cast<std::int64_t>(rng() % 2),
                              static_cast<std::int64_t>(rng() % 2));
        FiniteRegion Tr(tpts);
        auto Fr = FiniteRegion::box(Vec(0, 0), {a, b});
        if (!lattice::is_invariant(Fr, Tr, make_rat(1, 2)).invariant) continue;
        auto p = greedy_disjoint_translates(Tr, Fr);
        CHECK(p.bound_ok);
        CHECK(p.containment_ok);
        ++done;
    }
}
