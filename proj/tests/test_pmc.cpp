#include "doctest.h"

#include "bfh/pmc.hpp"

using namespace bfh;

namespace {

// Adjacent (b1, c1) candidates that name a legal slide.
std::vector<ArcSlide> all_slides(const Pmc& z) {
    std::vector<ArcSlide> out;
    for (int b = 0; b < z.n_points(); ++b)
        for (int c : {b - 1, b + 1})
            if (c >= 0 && c < z.n_points() && z.pair_of(b) != z.pair_of(c)) out.push_back(apply_arcslide(z, b, c));
    return out;
}

}  // namespace

TEST_CASE("validate") {
    CHECK(Pmc(4, {{0, 2}, {1, 3}}).valid());
    CHECK_FALSE(Pmc(4, {{0, 1}, {2, 3}}).valid());
    CHECK(Pmc(0, {}).valid());
    CHECK_THROWS_AS(Pmc(4, {{0, 2}, {0, 3}}), InputError);
    CHECK_THROWS_AS(Pmc(4, {{0, 2}}), InputError);
}

TEST_CASE("split and antipodal") {
    CHECK(split_pmc(1).str() == "{1,3}{2,4}");
    CHECK(split_pmc(2).str() == "{1,3}{2,4}{5,7}{6,8}");
    auto z3 = split_pmc(3);
    CHECK(z3.n_points() == 12);
    CHECK(z3.n_pairs() == 6);
    CHECK(z3.valid());
    CHECK(antipodal_pmc(2).valid());
    CHECK(split_pmc(0).n_points() == 0);
}

TEST_CASE("reverse") {
    auto z = split_pmc(2);
    CHECK(reverse(reverse(z)) == z);
    CHECK(reverse_point(z, 0) == 7);
    for (int i = 0; i < z.n_points(); ++i) CHECK(reverse_point(z, reverse_point(z, i)) == i);
    CHECK(reverse(split_pmc(1)).valid());
    CHECK(reverse(split_pmc(1)) == split_pmc(1));
}

TEST_CASE("connected sum") {
    CHECK(connected_sum(split_pmc(1), split_pmc(1)) == split_pmc(2));
    CHECK(connected_sum(split_pmc(1), split_pmc(1), SumSide::right) == split_pmc(2));
    CHECK(connected_sum(split_pmc(2), Pmc(0, {})) == split_pmc(2));
    auto s = connected_sum(antipodal_pmc(2), split_pmc(1));
    CHECK(s.str() == "{1,5}{2,6}{3,7}{4,8}{9,11}{10,12}");
    CHECK(s.valid());
}

TEST_CASE("chords") {
    CHECK(all_chords(split_pmc(1)).size() == 6);
    CHECK(all_chords(split_pmc(2)).size() == 28);
    auto s = apply_arcslide(split_pmc(2), 4, 3);
    for (auto c : restricted_chords(s)) {
        CHECK(c.start != s.b1);
        CHECK(c.end != s.b1);
        CHECK(s.source.pair_of(c.start) != s.source.pair_of(c.end));
    }
    // 28 chords, 7 touch b1, plus matched chords avoiding b1 ({1,3},{2,4},{6,8}).
    CHECK(restricted_chords(s).size() == 28 - 7 - 3);
}

TEST_CASE("arc-slides") {
    auto s = apply_arcslide(split_pmc(1), 1, 0);
    CHECK(s.target == split_pmc(1));
    CHECK_FALSE(s.over);
    CHECK(apply_arcslide(split_pmc(1), 0, 1).over);
    auto t = apply_arcslide(split_pmc(2), 4, 3);
    CHECK(t.over);
    CHECK(t.target.valid());
    CHECK_THROWS_AS(apply_arcslide(split_pmc(1), 0, 2), InputError);
    CHECK_THROWS_AS(apply_arcslide(Pmc(8, {{0, 1}, {2, 4}, {3, 6}, {5, 7}}), 0, 1), InputError);
}

TEST_CASE("slides round-trip and preserve kind") {
    for (const auto& z : {split_pmc(1), split_pmc(2), antipodal_pmc(2), antipodal_pmc(1)}) {
        for (const auto& s : all_slides(z)) {
            CHECK(s.target.valid());
            auto inv = s.inverse();
            CHECK(inv.target == z);
            CHECK(inv.over == s.over);
            for (int p = 0; p < z.n_points(); ++p) CHECK(inv.point_map[s.point_map[p]] == p);
            for (int i = 0; i < z.n_pairs(); ++i) CHECK(inv.pair_map[s.pair_map[i]] == i);
        }
    }
}
