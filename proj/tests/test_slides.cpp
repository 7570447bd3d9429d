#include "doctest.h"

#include <random>
#include <set>

#include "bfh/manifolds.hpp"
#include "bfh/slides.hpp"

using namespace bfh;

namespace {

struct Case {
    ArcSlide s;
    AlgebraPtr L, R;
    int w;
};

// Every slide of the split and antipodal circles of genus <= 2, every weight.
std::vector<Case> catalog(int max_genus = 2) {
    std::vector<Case> out;
    for (int g = 1; g <= max_genus; ++g)
        for (const auto& z : {split_pmc(g), antipodal_pmc(g)}) {
            const int n = z.n_points();
            for (int b = 0; b < n; ++b)
                for (int c : {b - 1, b + 1}) {
                    if (c < 0 || c >= n || z.partner(b) == c) continue;
                    auto s = apply_arcslide(z, b, c);
                    for (int w = -g + 1; w <= g - 1; ++w)
                        out.push_back({s, std::make_shared<const Algebra>(z, w),
                                       std::make_shared<const Algebra>(reverse(s.target), -w), w});
                }
        }
    return out;
}

using Key = std::tuple<int, int, int, int>;

std::set<Key> keys(const std::vector<NearChord>& v) {
    std::set<Key> s;
    for (const auto& c : v) s.insert({c.from, c.to, c.a, c.b});
    return s;
}

// Intersection number of two matched pairs on the circle (test-side).
int omega(const Pmc& z, int P, int Q) {
    auto p = z.points_of(P), q = z.points_of(Q);
    const int p1 = std::min(p[0], p[1]), p2 = std::max(p[0], p[1]);
    const int q1 = std::min(q[0], q[1]), q2 = std::max(q[0], q[1]);
    if (p1 < q1 && q1 < p2 && p2 < q2) return 1;
    if (q1 < p1 && p1 < q2 && q2 < p2) return -1;
    return 0;
}

std::vector<ArcSlide> random_word(const Pmc& z0, int len, std::mt19937& rng) {
    std::vector<ArcSlide> w;
    Pmc z = z0;
    for (int i = 0; i < len; ++i) {
        std::vector<std::pair<int, int>> moves;
        for (int b = 0; b < z.n_points(); ++b)
            for (int c : {b - 1, b + 1})
                if (c >= 0 && c < z.n_points() && z.partner(b) != c) moves.push_back({b, c});
        auto [b, c] = moves[std::uniform_int_distribution<int>(0, int(moves.size()) - 1)(rng)];
        w.push_back(apply_arcslide(z, b, c));
        z = w.back().target;
    }
    return w;
}

}  // namespace

TEST_CASE("identity bimodule: d^2 = 0 in every weight") {
    for (int g = 1; g <= 2; ++g)
        for (const auto& z : {split_pmc(g), antipodal_pmc(g)})
            for (int w = -g; w <= g; ++w) {
                auto dd = dd_identity(std::make_shared<const Algebra>(z, w),
                                      std::make_shared<const Algebra>(reverse(z), -w));
                CHECK(verify_d_squared(dd));
            }
    // genus 1, weight 0: two generators, the chords pair up as r(xi)
    auto dd = dd_identity(std::make_shared<const Algebra>(split_pmc(1), 0),
                          std::make_shared<const Algebra>(split_pmc(1), 0));
    CHECK(dd.size() == 2);
    CHECK(dd.arrow_count() == 4);
}

TEST_CASE("slide bimodules: d^2 = 0 and every coefficient is a near-chord of grading -1") {
    int checked = 0;
    for (const auto& c : catalog()) {
        auto sb = arcslide_dd(c.s, c.L, c.R);
        INFO(c.s.source.str() << " " << c.s.str() << " w=" << c.w);
        CHECK(verify_d_squared(sb.dd));
        auto scan = scan_near_diagonal(c.s, c.L, c.R);
        CHECK(scan.consistent);
        CHECK(scan.positive == 0);
        const auto allowed = keys(scan.grading_minus_one);
        for (int x = 0; x < sb.dd.size(); ++x)
            for (const auto& t : sb.dd.delta(x)) {
                CHECK(allowed.count({x, t.to, t.a, t.b}) == 1);
                ++checked;
            }
    }
    CHECK(checked > 0);
}

TEST_CASE("syntactic near-chords coincide with the grading -1 scan") {
    for (const auto& c : catalog()) {
        INFO(c.s.source.str() << " " << c.s.str() << " w=" << c.w);
        auto scan = scan_near_diagonal(c.s, c.L, c.R);
        auto en = enumerate_near_chords(c.s, c.L, c.R);
        CHECK(keys(en) == keys(scan.grading_minus_one));
        for (const auto& nc : en) CHECK(nc.kind != NearChordKind::Unknown);
        // under-slides never need a choice
        if (!c.s.over)
            for (const auto& nc : en) CHECK_FALSE(nc.indeterminate);
    }
}

TEST_CASE("closed-form near-diagonal grading agrees with propagation") {
    for (const auto& c : catalog()) {
        NearDiagonal nd(c.s, c.L, c.R);
        INFO(c.s.source.str() << " " << c.s.str() << " w=" << c.w);
        CHECK(nd.formula_mismatches == 0);
        CHECK(nd.lambda_period == 0);
        for (const auto& e : nd.elems)
            if (e.is_short) CHECK(e.degree == -1);
    }
}

TEST_CASE("over-slide basic choice does not change downstream ranks") {
    // Each over-slide on the boundary of the genus-2 handlebody, both choices.
    const Pmc z = split_pmc(2);
    int overs = 0;
    for (int b = 0; b < z.n_points(); ++b)
        for (int c : {b - 1, b + 1}) {
            if (c < 0 || c >= z.n_points() || z.partner(b) == c) continue;
            auto s = apply_arcslide(z, b, c);
            if (!mirror_slide(s).over) continue;
            ++overs;
            std::vector<int> sizes, ranks;
            for (bool alt : {false, true}) {
                PipelineOptions opt;
                opt.slide.alternate_basic_choice = alt;
                // close the word up again, then twist so the rank is not trivial
                std::vector<ArcSlide> word{s, s.inverse()};
                for (const auto& t : dehn_twist_expand(z, 1, 2)) word.push_back(t);
                std::vector<StageCount> st;
                auto N = apply_slides(cfd_zero_framed_handlebody(2), word, opt, &st);
                CHECK(verify_d_squared(N));
                sizes.push_back(st.front().after);
                auto cap = cfd_zero_framed_handlebody(2);
                ranks.push_back(homology_rank(mor_complex(cap, N).complex));
            }
            INFO(s.str());
            CHECK(sizes[0] == sizes[1]);
            CHECK(ranks[0] == ranks[1]);
        }
    CHECK(overs > 0);
}

TEST_CASE("homology action preserves the intersection form") {
    for (int g = 1; g <= 2; ++g)
        for (const auto& z : {split_pmc(g), antipodal_pmc(g)})
            for (int b = 0; b < z.n_points(); ++b)
                for (int c : {b - 1, b + 1}) {
                    if (c < 0 || c >= z.n_points() || z.partner(b) == c) continue;
                    auto s = apply_arcslide(z, b, c);
                    auto M = slide_homology_action(s);
                    const int k = z.n_pairs();
                    for (int i = 0; i < k; ++i)
                        for (int j = 0; j < k; ++j) {
                            long v = 0;
                            for (int a = 0; a < k; ++a)
                                for (int bb = 0; bb < k; ++bb) v += M[a][i] * omega(s.target, a, bb) * M[bb][j];
                            CHECK(v == omega(z, i, j));
                        }
                }
}

TEST_CASE("xi_psi is functorial on random words") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 100; ++trial) {
        const int g = 1 + trial % 2;
        const Pmc z = trial % 4 < 2 ? split_pmc(g) : antipodal_pmc(g);
        auto w1 = random_word(z, 1 + int(rng() % 5), rng);
        auto w2 = random_word(w1.back().target, 1 + int(rng() % 5), rng);
        auto w12 = w1;
        w12.insert(w12.end(), w2.begin(), w2.end());

        Mod2Small x;
        x.m = int(rng() % 2);
        for (int i = 0; i < z.n_pairs(); ++i) x.a.push_back(int(rng() % 7) - 3);

        // composition
        CHECK(xi_psi(w12, x) == xi_psi(w2, xi_psi(w1, x)));
        // a word followed by its inverse acts trivially
        auto back = w12;
        for (auto it = w12.rbegin(); it != w12.rend(); ++it) back.push_back(it->inverse());
        CHECK(xi_psi(back, x) == x);
        // empty word
        CHECK(xi_psi({}, x) == x);
    }
}

TEST_CASE("xi_psi rejects bad input") {
    auto z = split_pmc(1);
    auto s = apply_arcslide(z, 1, 0);
    Mod2Small x{0, {1, 0, 0}};
    CHECK_THROWS_AS(xi_psi({s}, x), InputError);
    auto t = apply_arcslide(split_pmc(2), 1, 0);
    CHECK_THROWS_AS(xi_psi({s, t}, Mod2Small{0, {1, 0}}), InputError);
}
