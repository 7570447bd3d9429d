#include "doctest.h"

#include <random>

#include "bfh/grading.hpp"

using namespace bfh;

namespace {

GrElem random_elem(const GradingGroup& G, std::mt19937& rng) {
    GrElem g = gr_identity(G);
    for (auto& x : g.alpha) x = static_cast<int>(rng() % 5) - 2;
    g.J = 2 * (static_cast<int>(rng() % 7) - 3) + G.eps2(g.alpha);
    return g;
}

int min_intervals(const std::vector<int>& v) {
    int k = 0, prev = 0;
    for (int x : v) k += std::max(0, x - prev), prev = x;
    return k;
}

}  // namespace

TEST_CASE("group laws") {
    GradingGroup G({8, 4});
    std::mt19937 rng(1);
    for (int it = 0; it < 500; ++it) {
        auto a = random_elem(G, rng), b = random_elem(G, rng), c = random_elem(G, rng);
        CHECK(gr_mul(G, gr_mul(G, a, b), c) == gr_mul(G, a, gr_mul(G, b, c)));
        CHECK(gr_mul(G, gr_lambda(G), a) == gr_mul(G, a, gr_lambda(G)));
        CHECK(gr_mul(G, a, gr_inv(a)) == gr_identity(G));
        CHECK(gr_congruent(G, gr_mul(G, a, b)));
        CHECK(G.twisted(a.alpha, a.alpha) == 0);
        CHECK(gr_pow(a, 3) == gr_mul(G, a, gr_mul(G, a, a)));
    }
}

TEST_CASE("chord gradings and non-commutativity") {
    auto z = split_pmc(1);
    Algebra A(z, 0);
    GradingGroup G({4});
    Strands r1, r2;
    r1.moving = {{0, 1}};
    r2.moving = {{1, 2}};
    const int i1 = A.id_of(r1), i2 = A.id_of(r2);
    auto g1 = gr_prime(G, 0, A, i1), g2 = gr_prime(G, 0, A, i2);
    CHECK(g1.J == -1);
    CHECK(g2.J == -1);
    auto ab = gr_mul(G, g1, g2), ba = gr_mul(G, g2, g1);
    CHECK(ab.alpha == ba.alpha);
    CHECK(std::llabs(ab.J - ba.J) == 2);
    CHECK(ab == gr_prime(G, 0, A, A.mult(i1, i2)));
}

TEST_CASE("gr' is multiplicative and d lowers it by lambda") {
    for (const auto& z : {split_pmc(1), split_pmc(2), antipodal_pmc(2)}) {
        Algebra A(z);
        GradingGroup G({z.n_points()});
        for (int a = 0; a < A.size(); ++a) {
            auto ga = gr_prime(G, 0, A, a);
            CHECK(gr_congruent(G, ga));
            if (A.is_idempotent(a)) CHECK(ga == gr_identity(G));
            else CHECK(A.iota2(a) <= -min_intervals(A.supp(a)));
            for (int d : A.diff(a)) CHECK(gr_mul(G, gr_lambda(G), gr_prime(G, 0, A, d)) == ga);
            for (int b : A.starting_at(A.right_idem(a))) {
                const int r = A.mult(a, b);
                if (r >= 0) CHECK(gr_prime(G, 0, A, r) == gr_mul(G, ga, gr_prime(G, 0, A, b)));
            }
        }
    }
}

TEST_CASE("echelon, kernel, intersection") {
    std::mt19937 rng(3);
    for (int it = 0; it < 200; ++it) {
        const int m = 1 + rng() % 5, w = 1 + rng() % 5;
        std::vector<IVec> rows(m, IVec(w));
        for (auto& r : rows)
            for (auto& x : r) x = static_cast<int>(rng() % 7) - 3;
        Echelon e(rows, w);
        for (auto& k : e.kernel()) {
            IVec s(w, 0);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < w; ++j) s[j] += k[i] * rows[i][j];
            CHECK(s == IVec(w, 0));
        }
        CHECK(static_cast<int>(e.kernel().size()) == m - e.rank());
        // every integer combination is solvable and reduces to zero
        IVec c(m), v(w, 0);
        for (auto& x : c) x = static_cast<int>(rng() % 5) - 2;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < w; ++j) v[j] += c[i] * rows[i][j];
        auto sol = e.solve(v);
        REQUIRE(sol);
        IVec back(w, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < w; ++j) back[j] += (*sol)[i] * rows[i][j];
        CHECK(back == v);
        CHECK(e.reduce(v) == IVec(w, 0));
    }
    // 2Z cap 3Z = 6Z
    auto in = intersect_lattices({{2}}, {{3}}, 1);
    REQUIRE(in.size() == 1);
    CHECK(std::llabs(in[0][0]) == 6);
    CHECK_FALSE(Echelon({{2, 0}}, 2).solve({1, 0}));
}

TEST_CASE("subgroup membership") {
    GradingGroup G({4});
    // h = (J, (1,1,0)) and its powers
    GrElem h{-1, {1, 1, 0}};
    Subgroup H(G, {h});
    CHECK(H.lambda_free());
    CHECK(H.contains(gr_pow(h, 3)));
    CHECK_FALSE(H.contains(gr_mul(G, gr_lambda(G), h)));
    Subgroup H2(G, {h, gr_mul(G, gr_lambda(G), h)});
    CHECK(H2.central_period() == 2);
    CHECK(H2.contains(gr_lambda(G, 5)));
    // two non-commuting generators force a central period from their commutator
    GrElem a{-1, {1, 0, 0}}, b{-1, {0, 1, 0}};
    Subgroup H3(G, {a, b});
    const auto comm = gr_mul(G, gr_mul(G, a, b), gr_mul(G, gr_inv(a), gr_inv(b)));
    CHECK(comm.alpha == IVec{0, 0, 0});
    CHECK(H3.contains(comm));
    CHECK(H3.central_period() == std::llabs(comm.J));
}

TEST_CASE("double cosets with trivial subgroups") {
    GradingGroup G({4});
    DoubleCosets D(Subgroup(G, {}), Subgroup(G, {}));
    GrElem g{-1, {1, 0, 0}};
    CHECK(D.classify(g).orbit == 0);
    auto c = D.classify(gr_mul(G, gr_lambda(G, 3), g));
    CHECK(c.orbit == 0);
    CHECK(c.degree == 3);
    CHECK(D.classify(GrElem{0, {0, 0, 0}}).orbit == 1);
    CHECK(D.period(0) == 0);
}
