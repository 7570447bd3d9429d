#include "doctest.h"

#include "bfh/manifolds.hpp"

using namespace bfh;

TEST_CASE("S1xS2 at genus 1 via Mor of handlebodies") {
    auto z = split_pmc(1);
    auto A = std::make_shared<const Algebra>(z, 0);
    for (auto w : {DiskPair::first, DiskPair::second}) {
        auto H = cfd_handlebody(A, w);
        CHECK(verify_d_squared(H));
        auto P = grade(H);
        MorOptions o;
        o.grading_m = o.grading_n = &P;
        auto R = mor_complex(H, H, o);
        CHECK(R.complex.d_squared_zero());
        auto hb = homology_basis(R.complex);
        CHECK(hb.size() == 2);
        MESSAGE("basis " << R.complex.n);
        for (int i : hb) MESSAGE(R.complex.labels[i] << " orbit " << R.complex.orbit[i] << " deg " << R.complex.degree[i]);
    }
}
