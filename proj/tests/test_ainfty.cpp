#include "doctest.h"

#include <random>

#include "bfh/ainfty.hpp"

using namespace bfh;
using Side = AInftyModule::Side;

namespace {

struct Genus1 {
    CaaIdentity caa = caa_identity(split_pmc(1), 0);
    const Algebra& A = *caa.module->algebra(Side::rho);
    const Algebra& Ap = *caa.module->algebra(Side::lambda);
    int rho(const std::string& s) const { return chord_generator(A, s); }
    int lam(const std::string& s) const { return chord_generator(Ap, s); }
};

// X0: the class whose rho-idempotent is the pair through point 0.
int x0_of(const MinimalModel& m) {
    for (int h = 0; h < m.size(); ++h)
        if (m.idem(h, Side::rho) == 1u << m.algebra(Side::rho)->pmc().pair_of(0)) return h;
    return -1;
}

WordStep twist(int point, int power) {
    WordStep s;
    s.kind = WordStep::Kind::twist;
    s.point = point;
    s.power = power;
    return s;
}

}  // namespace

TEST_CASE("Hom(DD(Id), A) at genus 1") {
    Genus1 g;
    const DgModule& M = *g.caa.module;
    CHECK(M.size() == 30);
    CHECK(M.defects().empty());
    auto C = M.complex();
    CHECK(C.d_squared_zero());
    CHECK(C.nnz() == 15);
    CHECK(homology_rank(C) == 2);
    // exactly two generators with no arrows in or out
    std::vector<int> touched(M.size(), 0);
    for (int x = 0; x < M.size(); ++x)
        for (int y : M.d(x)) touched[x] = touched[y] = 1;
    CHECK(std::count(touched.begin(), touched.end(), 0) == 2);
}

TEST_CASE("Hom(DD(Id), A) at genus 2 is a dg bimodule") {
    auto caa = caa_identity(split_pmc(2), 0);
    CHECK(caa.module->defects(1).empty());
    CHECK(homology_rank(caa.module->complex()) > 0);
}

TEST_CASE("retract identities for two pivot orders") {
    Genus1 g;
    for (auto order : {PivotOrder::forward, PivotOrder::reverse}) {
        auto p = homology_retract(*g.caa.module, order);
        CHECK(p.n == 2);
        CHECK(retract_defects(*g.caa.module, p).empty());
    }
    // a broken retract is refused
    auto p = homology_retract(*g.caa.module);
    p.T.assign(p.T.size(), {});
    CHECK_THROWS_AS(MinimalModel(g.caa.module, p), InvariantError);
}

TEST_CASE("genus-1 minimal model operations") {
    Genus1 g;
    for (auto order : {PivotOrder::forward, PivotOrder::reverse}) {
        MinimalModel m(g.caa.module, homology_retract(*g.caa.module, order));
        const int X = x0_of(m), Y = 1 - X;
        REQUIRE(X >= 0);
        // two-input operations joining X0 and Y0 (the DD(Id) partners)
        CHECK(m.m(X, {g.lam("1")}, {g.rho("3")}) == Elem{Y});
        CHECK(m.m(X, {g.lam("3")}, {g.rho("1")}) == Elem{Y});
        CHECK(m.m(Y, {g.lam("2")}, {g.rho("2")}) == Elem{X});
        // the loop family
        for (int n = 0; n <= 3; ++n) {
            std::vector<int> r{g.rho("3")}, l;
            for (int i = 0; i < n; ++i) r.push_back(g.rho("23")), l.push_back(g.lam("12"));
            l.push_back(g.lam("1"));
            CHECK(m.m(X, l, r) == Elem{Y});
        }
        // lambda_12 then lambda_2 is not composable, so that input vanishes
        CHECK(m.m(X, {g.lam("12"), g.lam("2")}, {g.rho("3"), g.rho("23")}).empty());
        // no one-sided operations of length one; m_1 = 0
        for (int a = 0; a < g.A.size(); ++a) CHECK(m.m(X, {}, {a}) == (g.A.is_idempotent(a) && g.A.left_idem(a) == m.idem(X, Side::rho) ? Elem{X} : Elem{}));
        CHECK(m.m(X, {}, {}).empty());
    }
}

TEST_CASE("strict unitality") {
    Genus1 g;
    MinimalModel m(g.caa.module, homology_retract(*g.caa.module));
    const int X = x0_of(m);
    const int iX = g.A.idempotent(m.idem(X, Side::rho));
    CHECK(m.m(X, {}, {iX}) == Elem{X});
    CHECK(m.m(X, {g.lam("1")}, {iX, g.rho("3")}).empty());
    CHECK(m.m(X, {g.lam("1")}, {g.rho("3"), g.A.idempotent(g.A.right_idem(g.rho("3")))}).empty());
}

TEST_CASE("operations do not depend on the retract") {
    Genus1 g;
    MinimalModel a(g.caa.module, homology_retract(*g.caa.module, PivotOrder::forward));
    MinimalModel b(g.caa.module, homology_retract(*g.caa.module, PivotOrder::reverse));
    // identify the two homology bases through their idempotents
    auto match = [&](int x) {
        for (int y = 0; y < b.size(); ++y)
            if (b.idem(y, Side::rho) == a.idem(x, Side::rho)) return y;
        return -1;
    };
    std::vector<int> rs, ls;
    for (int i = 0; i < g.A.size(); ++i)
        if (!g.A.is_idempotent(i)) rs.push_back(i);
    for (int i = 0; i < g.Ap.size(); ++i)
        if (!g.Ap.is_idempotent(i)) ls.push_back(i);
    int nonzero = 0;
    for (int x = 0; x < a.size(); ++x)
        for (int r1 : rs)
            for (int r2 : rs)
                for (int l1 : ls)
                    for (int l2 : ls) {
                        auto oa = a.m(x, {l1, l2}, {r1, r2});
                        auto ob = b.m(match(x), {l1, l2}, {r1, r2});
                        Elem mapped;
                        for (int y : oa) mapped.push_back(match(y));
                        std::sort(mapped.begin(), mapped.end());
                        CHECK(mapped == ob);
                        nonzero += !oa.empty();
                    }
    CHECK(nonzero > 0);
}

TEST_CASE("A-infinity relations, exhaustive up to four inputs") {
    Genus1 g;
    MinimalModel m(g.caa.module, homology_retract(*g.caa.module));
    auto rep = check_ainfty_relations(m, 4);
    CHECK(rep.checked > 0);
    CHECK(rep.failed == 0);
    // the dg model satisfies them too
    auto rep2 = check_ainfty_relations(*g.caa.module, 3);
    CHECK(rep2.failed == 0);
}

TEST_CASE("box tensor with delta = 0 is the m_1 complex") {
    Genus1 g;
    const DgModule& M = *g.caa.module;
    DStructure L(M.algebra(Side::lambda)), N(M.algebra(Side::rho));
    for (int e : g.Ap.idempotents()) L.add_generator(g.Ap.left_idem(e));
    for (int e : g.A.idempotents()) N.add_generator(g.A.left_idem(e));
    auto C = box_tensor(M, L, N);
    CHECK(C.n == M.size());
    CHECK(C.nnz() == 15);
    CHECK(homology_rank(C) == 2);
    MinimalModel m(g.caa.module, homology_retract(M));
    auto Cm = box_tensor(m, L, N);
    CHECK(Cm.n == 2);
    CHECK(Cm.nnz() == 0);
}

TEST_CASE("box tensor path agrees with Mor on genus-1 words") {
    std::vector<std::vector<WordStep>> words = {
        {}, {twist(1, 1)}, {twist(1, -3)}, {twist(0, 1), twist(1, 1)}, {twist(1, 2), twist(0, -1), twist(1, 1)}};
    for (const auto& w : words) {
        ClosedInput in;
        in.word = {1, w};
        auto mor = hf_hat_closed(in);
        auto box = hf_hat_box(in);
        CHECK_FALSE(box.used_minimal_model);
        CHECK(box.rank == mor.total_rank);
        // the minimal model is only allowed when a side is bounded
        auto boxm = hf_hat_box(in, {}, true);
        CHECK(boxm.rank == mor.total_rank);
    }
}

TEST_CASE("unbounded box tensor is refused") {
    Genus1 g;
    MinimalModel m(g.caa.module, homology_retract(*g.caa.module));
    auto L = cfd_handlebody(m.algebra(Side::lambda), DiskPair::first);
    auto N = cfd_handlebody(m.algebra(Side::rho), DiskPair::second);
    CHECK_FALSE(is_bounded(L));
    CHECK_THROWS_AS(box_tensor(m, L, N), BoundednessError);
    CHECK_NOTHROW(box_tensor(*g.caa.module, L, N));
}

TEST_CASE("operation graph") {
    Genus1 g;
    MinimalModel m(g.caa.module, homology_retract(*g.caa.module));
    auto edges = operation_graph(m);
    int t = 0;
    for (const auto& e : edges) t += e.kind == "T";
    CHECK(t >= 15);
    CHECK_THROWS_AS(chord_generator(g.A, "13"), InputError);
    CHECK_THROWS_AS(chord_generator(g.A, "x"), InputError);
}
