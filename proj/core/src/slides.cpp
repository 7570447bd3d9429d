#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <unordered_map>

#include "bfh/slides.hpp"

namespace bfh {

namespace {

std::uint32_t bit(int i) { return 1u << i; }

// Moving strand of a single-strand diagram.
std::optional<Chord> lone_strand(const Strands& s) {
    if (s.moving.size() != 1) return std::nullopt;
    return Chord{s.moving[0].first, s.moving[0].second};
}

std::uint64_t term_key(int from, int a, int b, int to) {
    return (std::uint64_t(from) << 56) | (std::uint64_t(to) << 48) | (std::uint64_t(a) << 24) | std::uint64_t(b);
}

}  // namespace

std::string to_string(NearChordKind k) {
    static const char* names[] = {"U-1", "U-2", "U-3", "U-4", "U-5", "U-6", "O-1", "O-2",
                                  "O-3", "O-4", "O-5", "O-6", "O-7", "O-8", "?"};
    return names[static_cast<int>(k)];
}

// ---- geometry ---------------------------------------------------------------

SlideGeometry::SlideGeometry(const ArcSlide& s) : slide(s), n(s.source.n_points()) {
    const int c2p = s.point_map[s.c2];
    auto build = [&](int b, int c, std::vector<int>& gap, int& sig) {
        gap.assign(std::max(n - 1, 0), -1);
        for (int i = 0; i + 1 < n; ++i) {
            if (i == b || i + 1 == b) {
                const int other = i == b ? i + 1 : i;
                if (other == c) sig = i;
                else gap[i] = b - 1;
                continue;
            }
            gap[i] = i > b ? i - 1 : i;
        }
    };
    build(s.b1, s.c1, gap_left, sigma);
    build(s.b1p, c2p, gap_right, sigmap);
    sigma_chord = {std::min(s.b1, s.c1), std::max(s.b1, s.c1)};
    sigmap_chord = {std::min(s.b1p, c2p), std::max(s.b1p, c2p)};
    for (int i = std::min(s.c1, s.c2); i < std::max(s.c1, s.c2); ++i)
        if (gap_left[i] >= 0) c_gaps.push_back(gap_left[i]);
}

std::vector<int> SlideGeometry::restricted_left(const Pmc& z, const Strands& a) const {
    std::vector<int> r(std::max(n_gaps(), 0), 0);
    const auto sp = support(z, a);
    for (int i = 0; i + 1 < n; ++i)
        if (gap_left[i] >= 0) r[gap_left[i]] += sp[i];
    return r;
}

std::vector<int> SlideGeometry::restricted_right(const Pmc& rzp, const Strands& b) const {
    std::vector<int> r(std::max(n_gaps(), 0), 0);
    const auto sp = support(rzp, b);
    for (int j = 0; j + 1 < n; ++j) {
        const int i = n - 2 - j;
        if (gap_right[i] >= 0) r[gap_right[i]] += sp[j];
    }
    return r;
}

int SlideGeometry::sigma_left(const Pmc& z, const Strands& a) const {
    return sigma < 0 ? 0 : support(z, a)[sigma];
}

int SlideGeometry::sigma_right(const Pmc& rzp, const Strands& b) const {
    return sigmap < 0 ? 0 : support(rzp, b)[n - 2 - sigmap];
}

Chord SlideGeometry::to_right(Chord xi) const {
    const int p = slide.point_map[xi.start], q = slide.point_map[xi.end];
    return {n - 1 - q, n - 1 - p};
}

// ---- near-diagonal subalgebra -------------------------------------------------

NearDiagonal::NearDiagonal(const ArcSlide& s, AlgebraPtr l, AlgebraPtr r)
    : slide(s), left(std::move(l)), right(std::move(r)), geo(s) {
    const Pmc& z = s.source;
    const Pmc rzp = reverse(s.target);
    if (!(left->pmc() == z)) throw InputError("arc-slide bimodule: left algebra must be over the source circle");
    if (!(right->pmc() == rzp)) throw InputError("arc-slide bimodule: right algebra must be over -target");
    const int n = z.n_points();
    const std::uint32_t all = (1u << z.n_pairs()) - 1;
    // Z pairs -> -Z' pairs
    auto to_r = [&](std::uint32_t m) {
        std::uint32_t out = 0;
        for (std::uint32_t h = m; h; h &= h - 1) {
            const int tp = s.pair_map[std::countr_zero(h)];
            out |= bit(rzp.pair_of(n - 1 - s.target.points_of(tp)[0]));
        }
        return out;
    };
    const std::uint32_t B = bit(s.pair_b()), C = bit(s.pair_c());
    auto add_gen = [&](std::uint32_t S, std::uint32_t T, bool y) {
        if (right->idempotent(T) < 0) return;
        gen_s.push_back(S), gen_t.push_back(T), is_y.push_back(y);
    };
    for (int e : left->idempotents()) {
        const std::uint32_t S = left->left_idem(e);
        add_gen(S, to_r(all & ~S), false);
        if ((S & C) && !(S & B)) add_gen(S, to_r((all & ~S & ~B) | C), true);
    }
    std::unordered_map<std::uint64_t, int> gen_index;
    for (std::size_t i = 0; i < gen_s.size(); ++i) gen_index[(std::uint64_t(gen_s[i]) << 32) | gen_t[i]] = int(i);
    auto gen_of = [&](std::uint32_t S, std::uint32_t T) {
        auto it = gen_index.find((std::uint64_t(S) << 32) | T);
        return it == gen_index.end() ? -1 : it->second;
    };

    // right elements grouped by (left idempotent, restricted support)
    std::map<std::pair<std::uint32_t, std::vector<int>>, std::vector<int>> by_key;
    std::vector<char> wanted_t(std::size_t(1) << rzp.n_pairs(), 0);
    for (auto T : gen_t) wanted_t[T] = 1;
    for (int b = 0; b < right->size(); ++b) {
        const std::uint32_t T = right->left_idem(b);
        if (!wanted_t[T]) continue;
        by_key[{T, geo.restricted_right(rzp, right->gen(b))}].push_back(b);
    }

    const Chord sig_r{n - 1 - geo.sigmap_chord.end, n - 1 - geo.sigmap_chord.start};
    for (int x = 0; x < int(gen_s.size()); ++x) {
        for (int a : left->starting_at(gen_s[x])) {
            auto R = geo.restricted_left(z, left->gen(a));
            auto it = by_key.find({gen_t[x], R});
            if (it == by_key.end()) continue;
            int level = 0;
            for (int v : R) level += v;
            for (int b : it->second) {
                const int y = gen_of(left->right_idem(a), right->right_idem(b));
                if (y < 0) continue;
                NdElement e;
                e.from = x, e.to = y, e.a = a, e.b = b, e.level = level;
                const Strands& sa = left->gen(a);
                const Strands& sb = right->gen(b);
                e.sig_l = geo.sigma_left(z, sa), e.sig_r = geo.sigma_right(rzp, sb);
                e.strands_l = int(sa.moving.size()), e.strands_r = int(sb.moving.size());
                auto cl = lone_strand(sa), cr = lone_strand(sb);
                if (cl && cr && level == 1 && cl->start != s.b1 && cl->end != s.b1 &&
                    z.pair_of(cl->start) != z.pair_of(cl->end) && *cr == geo.to_right(*cl))
                    e.is_short = true;
                if (cl && !e.strands_r && *cl == geo.sigma_chord) e.is_short = true;
                if (cr && !e.strands_l && *cr == sig_r) e.is_short = true;
                elems.push_back(e);
            }
        }
    }

    GradingGroup G({n, n});
    std::vector<GradedArrow> arrows;
    for (const auto& e : elems)
        if (e.is_short) arrows.push_back({e.from, e.to, gr_prime2(G, *left, e.a, *right, e.b)});
    const Propagation P = propagate(G, int(gen_s.size()), arrows);
    grading_components = int(P.subgroups.size());
    for (const auto& H : P.subgroups) lambda_period = gcd64(lambda_period, H.central_period());
    for (auto& e : elems) {
        auto t = P.arrow_defect({e.from, e.to, gr_prime2(G, *left, e.a, *right, e.b)});
        if (t) e.prop_degree = int(-1 - *t);
        e.degree = closed_form_degree(e);
        if (e.prop_degree && *e.prop_degree != e.degree) ++formula_mismatches;
    }
}

// iota(a) + c(I, supp a) + c(J, supp a), with the correction terms read off
// the multiplicities next to sigma and sigma'.
int NearDiagonal::closed_form_degree(const NdElement& e) const {
    const int n = geo.n;
    const auto& sl = left->supp(e.a);
    const auto& sr = right->supp(e.b);
    auto at_l = [&](int i) { return i >= 0 && i + 1 < n ? sl[i] : 0; };
    auto at_r = [&](int i) { return i >= 0 && i + 1 < n ? sr[n - 2 - i] : 0; };  // Z' interval i
    const bool below = slide.b1 < slide.c1;
    const int lo = std::min(slide.b1, slide.c1), hi = std::max(slide.b1, slide.c1);
    const int n_s = at_l(lo), n_sp = at_l(hi), n_sm = at_l(lo - 1);
    const int c2p = slide.point_map[slide.c2];
    const int lo2 = std::min(slide.b1p, c2p), hi2 = std::max(slide.b1p, c2p);
    const int n_t = at_r(lo2), n_tp = at_r(hi2), n_tm = at_r(lo2 - 1);
    const std::uint32_t C = bit(slide.pair_c());
    auto corr4 = [&](int x) {
        if (is_y[x]) return below ? n_sp - n_s - n_t + n_tm : -n_s + n_sm + n_tp - n_t;
        if (gen_s[x] & C) return below ? n_tp - n_t : -n_t + n_tm;
        return below ? -n_s + n_sm : n_sp - n_s;
    };
    const int total4 = 2 * (left->iota2(e.a) + right->iota2(e.b)) + corr4(e.from) + corr4(e.to);
    if (total4 % 4) throw InvariantError("near-diagonal grading is not an integer");
    return total4 / 4;
}

int NearDiagonal::generator(std::uint32_t S, std::uint32_t T) const {
    for (std::size_t i = 0; i < gen_s.size(); ++i)
        if (gen_s[i] == S && gen_t[i] == T) return int(i);
    return -1;
}

bool NearDiagonal::c_interval_pair(const NdElement& e) const {
    if (e.strands_l != 1 || e.strands_r != 1) return false;
    auto R = geo.restricted_left(left->pmc(), left->gen(e.a));
    std::vector<int> want(R.size(), 0);
    for (int g : geo.c_gaps) want[g] = 1;
    return R == want;
}

NearDiagonalScan scan_near_diagonal(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right) {
    NearDiagonal nd(s, std::move(left), std::move(right));
    NearDiagonalScan out;
    out.elements_scanned = int(nd.elems.size());
    out.consistent = nd.lambda_period == 0;
    if (nd.formula_mismatches) out.consistent = false;
    for (const auto& e : nd.elems) {
        if (e.degree > 0) ++out.positive;
        if (e.degree == 0 && (e.strands_l || e.strands_r)) ++out.zero_non_idem;
        if (e.degree == -1) out.grading_minus_one.push_back(nd.as_chord(e));
    }
    std::sort(out.grading_minus_one.begin(), out.grading_minus_one.end());
    return out;
}

// ---- syntactic near-chords ------------------------------------------------------

namespace {

// Chords on one circle, as strand lists (sorted, endpoints distinct).
using ChordSet = std::vector<Chord>;

ChordSet sorted(ChordSet c) {
    std::sort(c.begin(), c.end());
    return c;
}

bool endpoints_distinct(const ChordSet& c) {
    std::vector<int> pts;
    for (auto x : c) pts.push_back(x.start), pts.push_back(x.end);
    std::sort(pts.begin(), pts.end());
    return std::adjacent_find(pts.begin(), pts.end()) == pts.end();
}

bool inside(Chord small, Chord big) { return big.start <= small.start && small.end <= big.end; }
bool interiors_disjoint(Chord a, Chord b) { return a.end <= b.start || b.end <= a.start; }

// xi u sig as a strand set: concatenated when they abut, two strands when
// they are disjoint or nested with distinct endpoints.
std::optional<ChordSet> join(Chord xi, Chord sig) {
    if (xi.end == sig.start) return ChordSet{{xi.start, sig.end}};
    if (sig.end == xi.start) return ChordSet{{sig.start, xi.end}};
    ChordSet two = sorted({xi, sig});
    if (!endpoints_distinct(two)) return std::nullopt;
    if (interiors_disjoint(xi, sig) || inside(sig, xi)) return two;
    return std::nullopt;
}

// xi \ sig for sig inside xi.
ChordSet remove(Chord xi, Chord sig) {
    ChordSet out;
    if (xi.start < sig.start) out.push_back({xi.start, sig.start});
    if (sig.end < xi.end) out.push_back({sig.end, xi.end});
    return out;
}

struct Classifier {
    const NearDiagonal& nd;
    const ArcSlide& s;
    int n;
    Chord sig, sigp, cc, ccp;  // sigma, sigma', [c2,c1] in Z and in Z'
    int c2p, c1p;

    explicit Classifier(const NearDiagonal& d) : nd(d), s(d.slide), n(d.geo.n) {
        sig = d.geo.sigma_chord, sigp = d.geo.sigmap_chord;
        c1p = s.point_map[s.c1], c2p = s.point_map[s.c2];
        // [c2,c1] on each side, without sigma (resp. sigma') when it lies inside
        cc = {std::min(s.c1, s.c2), std::max(s.c1, s.c2)};
        ccp = {std::min(c1p, c2p), std::max(c1p, c2p)};
        if (inside(sig, cc)) cc = remove(cc, sig)[0];
        if (inside(sigp, ccp)) ccp = remove(ccp, sigp)[0];
    }

    std::optional<Chord> phi(Chord x) const {
        if (x.start == s.b1 || x.end == s.b1) return std::nullopt;
        return Chord{s.point_map[x.start], s.point_map[x.end]};
    }
    std::optional<Chord> phi_inv(Chord x) const {
        if (x.start == s.b1p || x.end == s.b1p) return std::nullopt;
        int p = -1, q = -1;
        for (int i = 0; i < n; ++i) {
            if (s.point_map[i] == x.start) p = i;
            if (s.point_map[i] == x.end) q = i;
        }
        return Chord{p, q};
    }
    std::optional<ChordSet> phi(const ChordSet& c) const {
        ChordSet out;
        for (auto x : c) {
            auto y = phi(x);
            if (!y) return std::nullopt;
            out.push_back(*y);
        }
        return sorted(out);
    }
    bool restricted(Chord x) const {
        return x.start != s.b1 && x.end != s.b1 && s.source.pair_of(x.start) != s.source.pair_of(x.end);
    }

    // Restricted support as a function on the points of Z \ {b1}: does its
    // boundary contain the point p of Z?
    bool restricted_boundary(const std::vector<int>& R, int p) const {
        const int k = p - (p > s.b1);
        const int before = k > 0 ? R[k - 1] : 0;
        const int after = k < int(R.size()) ? R[k] : 0;
        return before != after;
    }

    std::optional<std::pair<NearChordKind, bool>> operator()(const NdElement& e) const {
        const Pmc& z = s.source;
        ChordSet A, Bp;
        for (auto [p, q] : nd.left->gen(e.a).moving) A.push_back({p, q});
        for (auto [p, q] : nd.right->gen(e.b).moving) Bp.push_back({n - 1 - q, n - 1 - p});
        A = sorted(A), Bp = sorted(Bp);
        const bool over = s.over;
        auto K = [&](int u) { return static_cast<NearChordKind>((over ? 6 : 0) + u - 1); };

        // candidate chords xi of Z
        std::vector<Chord> cand;
        for (auto x : A) {
            cand.push_back(x);
            if (auto j = join(x, sig); j && j->size() == 1) cand.push_back((*j)[0]);
        }
        for (auto y : Bp) {
            if (auto x = phi_inv(y)) cand.push_back(*x);
            if (auto j = join(y, sigp); j && j->size() == 1)
                if (auto x = phi_inv((*j)[0])) cand.push_back(*x);
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

        // (1)
        if (A.size() == 1 && restricted(A[0]) && phi(A) == Bp) return std::pair{K(1), false};
        // (2)
        if ((A == ChordSet{sig} && Bp.empty()) || (A.empty() && Bp == ChordSet{sigp})) return std::pair{K(2), false};

        const auto R = nd.geo.restricted_left(z, nd.left->gen(e.a));
        std::vector<int> cind(R.size(), 0);
        for (int g : nd.geo.c_gaps) cind[g] = 1;
        bool covers = true;
        for (std::size_t i = 0; i < R.size(); ++i) covers = covers && R[i] >= cind[i];

        for (auto xi : cand) {
            auto pxi = phi(xi);
            if (!pxi) continue;
            // (3)
            auto connected = [&](Chord x, Chord sg) {
                return x.end == sg.start || sg.end == x.start;
            };
            if (connected(xi, sig) && join(xi, sig) == A && Bp == ChordSet{*pxi})
                return std::pair{K(3), over && R == cind};
            if (connected(*pxi, sigp) && join(*pxi, sigp) == Bp && A == ChordSet{xi})
                return std::pair{K(3), over && R == cind};
            // (4)
            const bool indet4 = over && covers && (restricted_boundary(R, s.c1) || restricted_boundary(R, s.c2));
            if (inside(sig, xi) && A == remove(xi, sig) && Bp == ChordSet{*pxi}) return std::pair{K(4), indet4};
            if (inside(sigp, *pxi) && A == ChordSet{xi} && Bp == remove(*pxi, sigp)) return std::pair{K(4), indet4};
            // (6)
            if (restricted(xi)) {
                const bool c2_end = pxi->start == c2p || pxi->end == c2p;
                if (inside(sigp, *pxi) && c2_end && join(xi, sig) == A && Bp == remove(*pxi, sigp) &&
                    (!over || interiors_disjoint(xi, sig)))
                    return std::pair{K(6), false};
                const bool c1_end = xi.start == s.c1 || xi.end == s.c1;
                if (inside(sig, xi) && c1_end && A == remove(xi, sig) && join(*pxi, sigp) == Bp &&
                    (!over || interiors_disjoint(*pxi, sigp)))
                    return std::pair{K(6), false};
            }
        }
        // (5)
        if (A.size() == 2) {
            for (int k = 0; k < 2; ++k) {
                const Chord xi = A[k], eta = A[1 - k];
                auto pxi = phi(xi), peta = phi(eta);
                if (!pxi || !peta || sorted({*pxi, *peta}) != Bp) continue;
                auto on = [](Chord c, int p) { return c.start == p || c.end == p; };
                if (on(xi, s.b1) || on(xi, s.b2) || !on(xi, s.c1)) continue;
                const bool opposite = (xi.start == s.c1 && eta.end == s.c2) || (xi.end == s.c1 && eta.start == s.c2);
                if (!opposite) continue;
                auto strictly = [](Chord c, int p) { return c.start < p && p < c.end; };
                if (strictly(xi, s.b1) || (!over && strictly(*pxi, s.b1p))) continue;
                if (over && !(interiors_disjoint(xi, eta) || inside(xi, eta) || inside(eta, xi))) continue;
                return std::pair{K(5), false};
            }
        }
        if (over) {
            // (7)
            auto indicator = [&](Chord c) {
                std::vector<int> v(n - 1, 0);
                for (int i = c.start; i < c.end; ++i) v[i] = 1;
                return v;
            };
            const auto& sl = nd.left->supp(e.a);
            const auto& sr = nd.right->supp(e.b);
            std::vector<int> srz(sr.rbegin(), sr.rend());  // support on Z'
            if (A.size() + Bp.size() == 3 && sl == indicator(cc) && srz == indicator(ccp)) return std::pair{K(7), true};
            // (8)
            if (A.size() == 2 && Bp.size() == 2) {
                for (int k = 0; k < 2; ++k) {
                    if (A[k] != cc) continue;
                    const Chord xi = A[1 - k];
                    auto pxi = phi(xi);
                    if (!pxi || sorted({ccp, *pxi}) != Bp) continue;
                    // nested either way round (see the ledger), or disjoint
                    if (xi != cc && (interiors_disjoint(xi, cc) || inside(xi, cc) || inside(cc, xi)))
                        return std::pair{K(8), true};
                }
            }
        }
        return std::nullopt;
    }
};

}  // namespace

std::vector<NearChord> enumerate_near_chords(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right) {
    NearDiagonal nd(s, std::move(left), std::move(right));
    Classifier classify(nd);
    std::vector<NearChord> out;
    for (const auto& e : nd.elems) {
        auto k = classify(e);
        if (!k) continue;
        NearChord c = nd.as_chord(e);
        c.kind = k->first, c.indeterminate = k->second;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- the differential -----------------------------------------------------------

namespace {

// Dense F2 row: coefficient bits plus a constant.
struct Row {
    std::vector<std::uint64_t> w;
    bool c = false;
    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void flip(int i) { w[i >> 6] ^= std::uint64_t(1) << (i & 63); }
    void add(const Row& o) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] ^= o.w[k];
        c ^= o.c;
    }
    bool zero() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
};

// Solves d(A) + A*A = 0 for the grading -1 candidates, one restricted-support
// level at a time: on a fixed level every equation is linear in that level's
// unknowns, since the only elements of level 0 are the (known) sigma chords.
SlideBimodule solve_bimodule(const NearDiagonal& nd, const SlideOptions& opt) {
    const Algebra& A = *nd.left;
    const Algebra& B = *nd.right;
    std::vector<int> cand;
    for (int i = 0; i < int(nd.elems.size()); ++i)
        if (nd.elems[i].degree == -1) cand.push_back(i);
    const int nc = int(cand.size());
    std::vector<int> value(nc, -1);
    std::vector<std::vector<int>> out_of(nd.gen_s.size());
    int max_level = 0, unknowns = 0;
    for (int k = 0; k < nc; ++k) {
        const auto& e = nd.elems[cand[k]];
        out_of[e.from].push_back(k);
        max_level = std::max(max_level, e.level);
        if (e.is_short) value[k] = 1;
    }
    // Under-slides use every near-chord. For over-slides only near-chords whose
    // restricted support covers [c2,c1] can be indeterminate; the basic choice
    // fixes the single-strand ones on exactly [c2,c1] and d^2 = 0 the rest.
    std::vector<int> cind(std::max(nd.geo.n_gaps(), 0), 0);
    for (int g : nd.geo.c_gaps) cind[g] = 1;
    // Indeterminate [c2,c1] elements come in pairs sharing the idempotent
    // written on the left of I.x.J, i.e. the target generator of the arrow.
    std::vector<int> pair_count(nd.gen_s.size(), 0);
    for (int k = 0; k < nc; ++k)
        if (nd.slide.over && nd.c_interval_pair(nd.elems[cand[k]])) ++pair_count[nd.elems[cand[k]].to];
    for (int k = 0; k < nc; ++k) {
        if (value[k] >= 0) continue;
        const auto& e = nd.elems[cand[k]];
        if (!nd.slide.over) {
            value[k] = 1;
            continue;
        }
        const auto R = nd.geo.restricted_left(A.pmc(), A.gen(e.a));
        bool covers = true;
        for (std::size_t i = 0; i < R.size(); ++i) covers &= R[i] >= cind[i];
        if (!covers) value[k] = 1;
        else if (nd.c_interval_pair(e) && pair_count[e.to] == 2)
            value[k] = (e.sig_l > 0) != opt.alternate_basic_choice;
        else ++unknowns;
    }

    // term -> monomials (k, l) meaning c_k c_l, or (k, -1) meaning c_k
    std::unordered_map<std::uint64_t, std::vector<std::pair<int, int>>> eqs;
    std::unordered_map<std::uint64_t, int> eq_level;
    for (int k = 0; k < nc; ++k) {
        const auto& x = nd.elems[cand[k]];
        for (int l : out_of[x.to]) {
            const auto& y = nd.elems[cand[l]];
            const int ra = A.mult(x.a, y.a);
            if (ra < 0) continue;
            const int rb = B.mult(x.b, y.b);
            if (rb < 0) continue;
            const auto key = term_key(x.from, ra, rb, y.to);
            eqs[key].push_back({k, l});
            eq_level[key] = x.level + y.level;
        }
        for (int t : A.diff(x.a)) {
            const auto key = term_key(x.from, t, x.b, x.to);
            eqs[key].push_back({k, -1});
            eq_level[key] = x.level;
        }
        for (int t : B.diff(x.b)) {
            const auto key = term_key(x.from, x.a, t, x.to);
            eqs[key].push_back({k, -1});
            eq_level[key] = x.level;
        }
    }
    for (auto& [key, lv] : eq_level) max_level = std::max(max_level, lv);
    std::vector<std::vector<std::uint64_t>> by_level(max_level + 1);
    for (auto& [key, lv] : eq_level) by_level[lv].push_back(key);

    SlideBimodule out;
    out.solver_unknowns = unknowns;
    std::vector<int> level_of(nc);
    for (int k = 0; k < nc; ++k) level_of[k] = nd.elems[cand[k]].level;

    // Depth-first over levels; free variables of a level are only pinned down
    // by later levels in degenerate cases, so allow backtracking.
    struct Frame {
        int free = 0, other_free = 0;
    };
    std::vector<Frame> frames(max_level + 1);
    long budget = 1 << 16;
    std::function<bool(int)> solve_from = [&](int L) -> bool {
        if (L > max_level) return true;
        if (--budget < 0) throw InvariantError("arc-slide solver: search budget exhausted for " + nd.slide.str());
        std::vector<int> cols, col_of(nc, -1), pref;
        for (int k = 0; k < nc; ++k) {
            if (value[k] >= 0 || level_of[k] != L) continue;
            (nd.c_interval_pair(nd.elems[cand[k]]) ? pref : cols).push_back(k);
        }
        cols.insert(cols.end(), pref.begin(), pref.end());
        for (int i = 0; i < int(cols.size()); ++i) col_of[cols[i]] = i;
        const int nw = (int(cols.size()) + 63) / 64;
        std::vector<Row> rows;
        for (auto key : by_level[L]) {
            Row r{std::vector<std::uint64_t>(nw, 0), false};
            for (auto [k, l] : eqs[key]) {
                if (l < 0) {
                    if (value[k] >= 0) r.c ^= value[k] != 0;
                    else r.flip(col_of[k]);
                    continue;
                }
                const bool uk = value[k] < 0, ul = value[l] < 0;
                if (uk && ul) throw InvariantError("arc-slide solver: quadratic term on one level");
                if (!uk && !ul) r.c ^= (value[k] & value[l]) != 0;
                else if (uk && value[l]) r.flip(col_of[k]);
                else if (ul && value[k]) r.flip(col_of[l]);
            }
            if (!r.zero() || r.c) rows.push_back(std::move(r));
        }
        std::vector<int> pivot_col;
        int rank = 0;
        for (int c = 0; c < int(cols.size()) && rank < int(rows.size()); ++c) {
            int p = -1;
            for (int i = rank; i < int(rows.size()); ++i)
                if (rows[i].get(c)) {
                    p = i;
                    break;
                }
            if (p < 0) continue;
            std::swap(rows[p], rows[rank]);
            for (int i = 0; i < int(rows.size()); ++i)
                if (i != rank && rows[i].get(c)) rows[i].add(rows[rank]);
            pivot_col.push_back(c);
            ++rank;
        }
        for (int i = rank; i < int(rows.size()); ++i)
            if (rows[i].c) return false;
        std::vector<char> is_pivot(cols.size(), 0);
        for (int c : pivot_col) is_pivot[c] = 1;
        std::vector<int> free_cols;
        std::vector<int> preferred;
        int other = 0;
        for (int c = 0; c < int(cols.size()); ++c) {
            if (is_pivot[c]) continue;
            const auto& e = nd.elems[cand[cols[c]]];
            free_cols.push_back(c);
            if (nd.c_interval_pair(e)) preferred.push_back((e.sig_l > 0) != opt.alternate_basic_choice);
            else preferred.push_back(1), ++other;
        }
        if (free_cols.size() > 16) throw InvariantError("arc-slide solver: too many free variables");
        frames[L] = {int(free_cols.size()), other};
        for (std::uint32_t flip = 0; flip < (1u << free_cols.size()); ++flip) {
            for (std::size_t f = 0; f < free_cols.size(); ++f)
                value[cols[free_cols[f]]] = preferred[f] ^ ((flip >> f) & 1);
            for (int i = 0; i < rank; ++i) {
                bool v = rows[i].c;
                for (int c : free_cols)
                    if (rows[i].get(c)) v ^= value[cols[c]] != 0;
                value[cols[pivot_col[i]]] = v;
            }
            if (solve_from(L + 1)) return true;
        }
        for (int k : cols) value[k] = -1;
        return false;
    };
    if (!solve_from(0)) throw InvariantError("arc-slide solver: inconsistent d^2 = 0 system for " + nd.slide.str());
    for (const auto& f : frames) out.solver_free += f.free, out.solver_other_free += f.other_free;

    out.dd = DDStructure(nd.left, nd.right);
    for (std::size_t x = 0; x < nd.gen_s.size(); ++x) {
        const std::string nm = std::string(nd.is_y[x] ? "Y" : "X") + std::to_string(x);
        out.dd.add_generator(nd.gen_s[x], nd.gen_t[x], nm);
    }
    out.is_y = nd.is_y;
    const Classifier classify(nd);
    for (int k = 0; k < nc; ++k) {
        const auto& e = nd.elems[cand[k]];
        NearChord c = nd.as_chord(e);
        if (auto t = classify(e)) c.kind = t->first, c.indeterminate = t->second;
        out.near_chords.push_back(c);
        out.used.push_back(value[k] == 1);
        if (value[k] == 1) out.dd.add_arrow(e.from, e.a, e.b, e.to);
    }
    auto bad = d_squared_defects(out.dd, 1);
    if (!bad.empty()) throw InvariantError("arc-slide bimodule " + nd.slide.str() + ": d^2 != 0 at " + bad[0]);
    return out;
}

// q_* from Z # split(h) to Z, keeping the base idempotent on the stabilizing
// summand.
SlideBimodule quotient_bimodule(const SlideBimodule& big, const ArcSlide& s, int h, AlgebraPtr left,
                                AlgebraPtr right) {
    const int n = s.source.n_points(), N = n + 4 * h;
    const Pmc& bz = big.dd.left().pmc();
    const Pmc& brz = big.dd.right().pmc();
    const Pmc rzp = reverse(s.target);
    std::uint32_t S0 = 0, T0 = 0;
    for (int i = 0; i < h; ++i) {
        S0 |= bit(bz.pair_of(n + 4 * i));
        T0 |= bit(brz.pair_of(N - 1 - (n + 4 * i + 1)));
    }
    auto ql = [&](const Strands& st) { return quotient_strands(bz, st, 0, n, S0, s.source); };
    auto qr = [&](const Strands& st) { return quotient_strands(brz, st, 4 * h, n, T0, rzp); };

    SlideBimodule out;
    out.dd = DDStructure(left, right);
    out.solver_unknowns = big.solver_unknowns, out.solver_free = big.solver_free;
    out.solver_other_free = big.solver_other_free;
    out.stabilized_genus = big.stabilized_genus;
    std::vector<int> gmap(big.dd.size(), -1);
    for (int x = 0; x < big.dd.size(); ++x) {
        auto S = ql({{}, big.dd.idem_left(x)});
        auto T = qr({{}, big.dd.idem_right(x)});
        if (!S || !T) continue;
        if (left->idempotent(S->horiz) < 0 || right->idempotent(T->horiz) < 0) continue;
        gmap[x] = out.dd.add_generator(S->horiz, T->horiz, big.dd.name(x));
        out.is_y.push_back(big.is_y[x]);
    }
    for (std::size_t k = 0; k < big.near_chords.size(); ++k) {
        const auto& c = big.near_chords[k];
        if (gmap[c.from] < 0 || gmap[c.to] < 0) continue;
        auto a = ql(big.dd.left().gen(c.a));
        auto b = qr(big.dd.right().gen(c.b));
        if (!a || !b) continue;
        const int ia = left->id_of(*a), ib = right->id_of(*b);
        if (ia < 0 || ib < 0) continue;
        out.near_chords.push_back({gmap[c.from], gmap[c.to], ia, ib, c.kind, c.indeterminate});
        out.used.push_back(big.used[k]);
        if (big.used[k]) out.dd.add_arrow(gmap[c.from], ia, ib, gmap[c.to]);
    }
    return out;
}

SlideBimodule arcslide_dd_weight(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right, int w,
                                 const SlideOptions& opt) {
    const int g = s.source.genus();
    const int h = std::max(0, std::abs(w) + 2 - g) + opt.extra_genus;
    if (opt.no_stabilize || h == 0 || (std::abs(w) == g && !opt.extra_genus)) {
        NearDiagonal nd(s, left, right);
        SlideBimodule r = solve_bimodule(nd, opt);
        r.stabilized_genus = g;
        return r;
    }
    const Pmc big = connected_sum(s.source, split_pmc(h));
    const ArcSlide bs = apply_arcslide(big, s.b1, s.c1);
    auto bl = std::make_shared<const Algebra>(big, w, left->truncated());
    auto br = std::make_shared<const Algebra>(reverse(bs.target), -w, right->truncated());
    NearDiagonal nd(bs, bl, br);
    SlideBimodule r = solve_bimodule(nd, opt);
    r.stabilized_genus = g + h;
    return quotient_bimodule(r, s, h, std::move(left), std::move(right));
}

}  // namespace

SlideBimodule arcslide_dd(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right, const SlideOptions& opt) {
    if (left->weight()) {
        if (!right->weight() || *right->weight() != -*left->weight())
            throw InputError("arcslide_dd: weights of the two algebras must be opposite");
        return arcslide_dd_weight(s, left, right, *left->weight(), opt);
    }
    // full algebra: direct sum over the weights
    const int g = s.source.genus();
    SlideBimodule out;
    out.dd = DDStructure(left, right);
    for (int w = -g; w <= g; ++w) {
        auto l = std::make_shared<const Algebra>(left->pmc(), w, left->truncated());
        auto r = std::make_shared<const Algebra>(right->pmc(), -w, right->truncated());
        SlideBimodule part = arcslide_dd_weight(s, l, r, w, opt);
        const int off = out.dd.size();
        for (int x = 0; x < part.dd.size(); ++x) {
            out.dd.add_generator(part.dd.idem_left(x), part.dd.idem_right(x), part.dd.name(x));
            out.is_y.push_back(part.is_y[x]);
        }
        for (std::size_t k = 0; k < part.near_chords.size(); ++k) {
            auto c = part.near_chords[k];
            c.from += off, c.to += off;
            c.a = left->id_of(l->gen(c.a)), c.b = right->id_of(r->gen(c.b));
            if (c.a < 0 || c.b < 0) continue;
            out.near_chords.push_back(c);
            out.used.push_back(part.used[k]);
            if (part.used[k]) out.dd.add_arrow(c.from, c.a, c.b, c.to);
        }
        out.solver_unknowns += part.solver_unknowns, out.solver_free += part.solver_free;
        out.solver_other_free += part.solver_other_free;
        out.stabilized_genus = std::max(out.stabilized_genus, part.stabilized_genus);
    }
    return out;
}

// ---- mod-2 grading of mapping classes -------------------------------------------

// h(P) is the core of the handle of P, traversed from its upper foot to its
// lower one. Sliding the foot b1 across C drags the curve once through C.
std::vector<IVec> slide_homology_action(const ArcSlide& s) {
    const int k = s.source.n_pairs();
    std::vector<IVec> M(k, IVec(k, 0));
    auto sgn = [](int v) { return v > 0 ? 1 : -1; };
    for (int i = 0; i < k; ++i) {
        if (i == s.pair_b()) continue;
        M[s.pair_map[i]][i] = 1;
    }
    const int from = sgn(s.b2 - s.b1);
    const int b2p = s.point_map[s.b2];
    M[s.pair_map[s.pair_b()]][s.pair_b()] += from * sgn(b2p - s.b1p);
    M[s.pair_map[s.pair_c()]][s.pair_b()] += from * sgn(s.c2 - s.c1);
    return M;
}

Mod2Small xi_psi(const std::vector<ArcSlide>& word, const Mod2Small& x) {
    Mod2Small cur = x;
    auto l1 = [](const IVec& v) {
        std::int64_t t = 0;
        for (auto c : v) t += c < 0 ? -c : c;
        return t;
    };
    for (std::size_t i = 0; i < word.size(); ++i) {
        const ArcSlide& s = word[i];
        if (i && !(word[i - 1].target == s.source)) throw InputError("xi_psi: word is not composable");
        if (int(cur.a.size()) != s.source.n_pairs()) throw InputError("xi_psi: vector length differs from the pair count");
        const auto M = slide_homology_action(s);
        IVec b(M.size(), 0);
        for (std::size_t r = 0; r < M.size(); ++r)
            for (std::size_t c = 0; c < M.size(); ++c) b[r] += M[r][c] * cur.a[c];
        cur.m = int((cur.m + l1(cur.a) + l1(b)) & 1);
        cur.a = std::move(b);
    }
    return cur;
}

}  // namespace bfh
