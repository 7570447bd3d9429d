#include <algorithm>
#include <bit>

#include "bfh/slides.hpp"

namespace bfh {

namespace {

// Pair mask on -Z of the pairs of Z in `mask`.
std::uint32_t reverse_pairs(const Pmc& z, const Pmc& rz, std::uint32_t mask) {
    std::uint32_t out = 0;
    for (std::uint32_t h = mask; h; h &= h - 1) {
        const int p = z.points_of(std::countr_zero(h))[0];
        out |= 1u << rz.pair_of(reverse_point(z, p));
    }
    return out;
}

// I(S) a(xi): the basic term of the chord element starting at idempotent S.
std::optional<Strands> chord_from(const Pmc& z, std::uint32_t S, Chord c) {
    const std::uint32_t ps = 1u << z.pair_of(c.start), pe = 1u << z.pair_of(c.end);
    if (!(S & ps)) return std::nullopt;
    Strands s;
    s.moving = {{c.start, c.end}};
    s.horiz = S & ~ps;
    if (s.horiz & pe) return std::nullopt;
    return s;
}

}  // namespace

DDStructure dd_identity(AlgebraPtr left, AlgebraPtr right) {
    const Pmc& z = left->pmc();
    const Pmc& rz = right->pmc();
    if (!(rz == reverse(z))) throw InputError("dd_identity: right algebra must be over -Z");
    DDStructure M(left, right);
    const std::uint32_t all = (1u << z.n_pairs()) - 1;
    std::vector<int> gen_of(all + 1, -1);
    for (int e : left->idempotents()) {
        const std::uint32_t S = left->left_idem(e);
        const std::uint32_t T = reverse_pairs(z, rz, all & ~S);
        if (right->idempotent(T) < 0) continue;
        gen_of[S] = M.add_generator(S, T);
    }
    for (int x = 0; x < M.size(); ++x) {
        const std::uint32_t S = M.idem_left(x), T = M.idem_right(x);
        for (const Chord& c : all_chords(z)) {
            auto a = chord_from(z, S, c);
            if (!a) continue;
            const Chord rc{reverse_point(z, c.end), reverse_point(z, c.start)};
            auto b = chord_from(rz, T, rc);
            if (!b) continue;
            const int ia = left->id_of(*a), ib = right->id_of(*b);
            if (ia < 0 || ib < 0) continue;
            const int y = gen_of[left->right_idem(ia)];
            if (y < 0) continue;
            M.add_arrow(x, ia, ib, y);
        }
    }
    return M;
}

}  // namespace bfh
