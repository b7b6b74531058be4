#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fgl/lattice.hpp"

using namespace fgl;
using namespace fgl::lattice;

namespace {
const MetricContext kZ2 = MetricContext::standard(2);
}

TEST_CASE("ball sizes in Z^2") {
    CHECK(ball(kZ2, 0).size() == 1);
    CHECK(ball(kZ2, 1).size() == 5);
    CHECK(ball(kZ2, 3).size() == 25);  // 2*9 + 2*3 + 1
    CHECK(ball(kZ2, 0).contains(Vec::zero(2)));
}

TEST_CASE("ball Minkowski additivity") {
    for (int r1 : {1, 2}) {
        for (int r2 : {1, 3}) {
            CHECK(ball(kZ2, r1).minkowski(ball(kZ2, r2)) == ball(kZ2, r1 + r2));
        }
    }
}

TEST_CASE("is_invariant exact ratios") {
    auto E = FiniteRegion::box(Vec(0, 0), {10, 10});
    FiniteRegion K({Vec(1, 0), Vec(0, 1)});
    auto res = is_invariant(E, K, make_rat(19, 100));
    CHECK(res.core_size == 81);
    CHECK(res.ratio == make_rat(81, 100));
    CHECK(res.invariant);
    CHECK_FALSE(is_invariant(E, K, make_rat(18, 100)).invariant);

    // identity shift: ratio 1
    auto res0 = is_invariant(E, FiniteRegion({Vec(0, 0)}), make_rat(0));
    CHECK(res0.ratio == Rat(1));
    CHECK(res0.invariant);

    auto E2 = FiniteRegion::box(Vec(0, 0), {4, 4});
    auto res2 = is_invariant(E2, FiniteRegion({Vec(2, 0)}), make_rat(1, 2));
    CHECK(res2.core_size == 8);
    CHECK(res2.ratio == make_rat(1, 2));

    CHECK_THROWS_AS(is_invariant(FiniteRegion(), K, make_rat(1, 2)),
                    std::invalid_argument);
}

TEST_CASE("is_invariant monotone in delta") {
    auto E = FiniteRegion::box(Vec(0, 0), {6, 6});
    FiniteRegion K({Vec(1, 0), Vec(0, 1), Vec(-1, 0), Vec(0, -1)});
    bool prev = false;
    for (int i = 0; i <= 10; ++i) {
        bool cur = is_invariant(E, K, make_rat(i, 10)).invariant;
        if (prev) CHECK(cur);  // once invariant, stays invariant
        prev = cur;
    }
}

TEST_CASE("r-connectivity") {
    CHECK(is_r_connected(FiniteRegion({Vec(5, -3)}), 1, kZ2));
    FiniteRegion gap({Vec(0, 0), Vec(3, 0)});
    CHECK_FALSE(is_r_connected(gap, 1, kZ2));
    CHECK_FALSE(is_r_connected(gap, 2, kZ2));
    CHECK(is_r_connected(gap, 3, kZ2));
    CHECK(is_r_connected(FiniteRegion::box(Vec(0, 0), {8, 8}), 1, kZ2));
}

TEST_CASE("maximal_r_separated greedy grid") {
    auto V = FiniteRegion::box(Vec(0, 0), {16, 16});
    auto sep = maximal_r_separated(V, 3, kZ2);
    CHECK(sep.size() == 16);  // spacing-4 grid under lex greedy
    auto b3 = ball(kZ2, 3);
    auto b6 = ball(kZ2, 6);
    // r-separated
    for (const auto& p : sep.points())
        for (const auto& q : sep.points())
            if (p != q) CHECK_FALSE(b3.contains(p - q));
    // 2r-spanning
    for (const auto& v : V.points()) {
        bool near = false;
        for (const auto& c : sep.points())
            if (b6.contains(v - c)) near = true;
        CHECK(near);
    }

    CHECK(maximal_r_separated(FiniteRegion({Vec(0, 0), Vec(1, 0)}), 1, kZ2) ==
          FiniteRegion({Vec(0, 0)}));
    // r >= diameter gives a singleton
    CHECK(maximal_r_separated(FiniteRegion::box(Vec(0, 0), {3, 3}), 10, kZ2).size() == 1);
}

TEST_CASE("spanning_tree_2r on the 16x16 square") {
    auto F = FiniteRegion::box(Vec(0, 0), {16, 16});
    CHECK(F.minkowski(ball(kZ2, 3)).size() == 460);
    auto tree = spanning_tree_2r(F, 3, kZ2);
    CHECK(tree.vertices.size() == 16);
    CHECK(tree.vertices.size() * ball(kZ2, 3).size() <= 2 * F.size());
    CHECK(tree.edges.size() == tree.vertices.size() - 1);
    CHECK(tree.total_path_edges <= 5 * 3 * (tree.vertices.size() - 1));
    // every path stays in F and is a generator walk
    for (const auto& e : tree.edges) {
        CHECK(e.path.size() <= 4 * 3 + 2);  // <= 4r+1 edges
        for (const auto& p : e.path) CHECK(F.contains(p));
        for (std::size_t i = 1; i < e.path.size(); ++i)
            CHECK((e.path[i] - e.path[i - 1]).norm1() == 1);
        CHECK(e.path.front() == tree.vertices[e.i]);
        CHECK(e.path.back() == tree.vertices[e.j]);
    }

    // singleton tree
    auto t1 = spanning_tree_2r(FiniteRegion({Vec(4, 4)}), 1, kZ2);
    CHECK(t1.vertices.size() == 1);
    CHECK(t1.edges.empty());

    // r = 4 violates the dilation precondition: |S^4 F| = 536 > 512
    CHECK(F.minkowski(ball(kZ2, 4)).size() == 536);
    CHECK_THROWS_AS(spanning_tree_2r(F, 4, kZ2), std::invalid_argument);
}

TEST_CASE("connected_invariant_set smallest power-of-two square") {
    FiniteRegion K({Vec(1, 0), Vec(0, 1)});
    auto E = connected_invariant_set(K, make_rat(1, 5), kZ2);
    CHECK(E == FiniteRegion::box(Vec(0, 0), {16, 16}));

    auto E0 = connected_invariant_set(FiniteRegion({Vec(0, 0)}), make_rat(1, 2), kZ2);
    CHECK(E0.size() == 1);

    auto E1 = connected_invariant_set(ball(kZ2, 1), make_rat(1, 2), kZ2);
    CHECK(E1 == FiniteRegion::box(Vec(0, 0), {8, 8}));
}

TEST_CASE("tree constant for Z^2 is 2") {
    CHECK(tree_constant_c(kZ2, 64) == 2);
}

TEST_CASE("region set algebra sanity") {
    auto A = FiniteRegion::box(Vec(0, 0), {3, 3});
    auto B = FiniteRegion::box(Vec(1, 1), {3, 3});
    CHECK(A.intersect(B).size() == 4);
    CHECK(A.unite(B).size() == 14);
    CHECK(A.subtract(B).size() == 5);
    CHECK(A.translated(Vec(1, 1)) == B);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        std::vector<Vec> pts;
        for (int i = 0; i < 30; ++i)
            pts.emplace_back(static_cast<std::int64_t>(rng() % 10),
                             static_cast<std::int64_t>(rng() % 10));
        FiniteRegion R(pts);
        CHECK(R.unite(R) == R);
        CHECK(R.intersect(R) == R);
        CHECK(R.subtract(R).empty());
        for (const auto& p : R.points()) CHECK(R.contains(p));
    }
}
