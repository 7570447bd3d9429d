#include "bfh/manifolds.hpp"

#include <algorithm>
#include <bit>

namespace bfh {

namespace {

std::uint32_t bit(int i) { return 1u << i; }

// Pair mask of `small` pairs (points shifted by `offset`) inside `big`.
std::uint32_t embed_pairs(const Pmc& small, const Pmc& big, int offset, std::uint32_t mask) {
    std::uint32_t out = 0;
    for (std::uint32_t h = mask; h; h &= h - 1)
        out |= bit(big.pair_of(small.points_of(std::countr_zero(h))[0] + offset));
    return out;
}

Strands embed(const Pmc& small, const Pmc& big, int offset, const Strands& s, std::uint32_t extra) {
    Strands r;
    for (auto [a, b] : s.moving) r.moving.emplace_back(a + offset, b + offset);
    r.horiz = embed_pairs(small, big, offset, s.horiz) | extra;
    return r;
}

// I(S) a, for a moving-strand pattern: nullopt when the starts are not all
// occupied or an end lands on an occupied pair.
std::optional<Strands> from_idempotent(const Pmc& z, std::uint32_t S, std::vector<std::pair<int, int>> mv) {
    std::uint32_t starts = 0, ends = 0;
    for (auto [a, b] : mv) {
        if (starts & bit(z.pair_of(a))) return std::nullopt;
        starts |= bit(z.pair_of(a));
        if (ends & bit(z.pair_of(b))) return std::nullopt;
        ends |= bit(z.pair_of(b));
    }
    if ((S & starts) != starts) return std::nullopt;
    const std::uint32_t h = S & ~starts;
    if (h & ends) return std::nullopt;
    std::sort(mv.begin(), mv.end());
    return Strands{std::move(mv), h};
}

std::string slide_label(const ArcSlide& s) { return s.str(); }

}  // namespace

DStructure cfd_handlebody(AlgebraPtr A, DiskPair which) {
    const Pmc& z = A->pmc();
    if (!(z == split_pmc(z.genus()))) throw InputError("handlebody module needs the split circle");
    const int off = which == DiskPair::first ? 0 : 1;
    std::uint32_t I = 0;
    for (int i = 0; i < z.genus(); ++i) I |= bit(z.pair_of(4 * i + off));
    DStructure M(A);
    const int x = M.add_generator(I, "I");
    for (int i = 0; i < z.genus(); ++i) {
        Strands s;
        s.moving = {{4 * i + off, 4 * i + off + 2}};
        s.horiz = I & ~bit(z.pair_of(4 * i + off));
        const int id = A->id_of(s);
        if (id < 0) throw InputError("handlebody chord missing from the algebra");
        M.add_arrow(x, id, x);
    }
    return M;
}

DStructure cfd_zero_framed_handlebody(int genus) {
    if (genus < 1) throw InputError("handlebody genus must be positive");
    return cfd_handlebody(std::make_shared<const Algebra>(split_pmc(genus), 0), DiskPair::second);
}

// ---- words ----------------------------------------------------------------------

std::vector<ArcSlide> dehn_twist_expand(const Pmc& z, int point, int power, TwistHandedness hand) {
    if (point < 0 || point >= z.n_points()) throw InputError("Dehn twist: point out of range");
    if (hand == TwistHandedness::reversed) power = -power;
    const int lo = std::min(point, z.partner(point)), hi = std::max(point, z.partner(point));
    std::vector<ArcSlide> one;
    Pmc cur = z;
    for (int k = lo + 1; k < hi; ++k) {
        one.push_back(apply_arcslide(cur, lo + 1, lo));
        cur = one.back().target;
    }
    if (!(cur == z)) throw InvariantError("Dehn twist expansion does not close up");
    std::vector<ArcSlide> out;
    for (int p = 0; p < std::abs(power); ++p) {
        if (power > 0) {
            out.insert(out.end(), one.begin(), one.end());
        } else {
            for (auto it = one.rbegin(); it != one.rend(); ++it) out.push_back(it->inverse());
        }
    }
    return out;
}

std::vector<ArcSlide> expand_word(const MappingWord& w, TwistHandedness hand) {
    Pmc cur = split_pmc(w.genus);
    std::vector<ArcSlide> out;
    for (const auto& st : w.steps) {
        if (st.kind == WordStep::Kind::slide) {
            out.push_back(apply_arcslide(cur, st.b1, st.c1));
        } else {
            auto seq = dehn_twist_expand(cur, st.point, st.power, hand);
            out.insert(out.end(), seq.begin(), seq.end());
        }
        if (!out.empty()) cur = out.back().target;
    }
    return out;
}

ArcSlide mirror_slide(const ArcSlide& s) {
    const int n = s.source.n_points();
    ArcSlide m = apply_arcslide(reverse(s.source), n - 1 - s.b1, n - 1 - s.c1);
    if (!(m.target == reverse(s.target))) throw InvariantError("mirrored slide lands on the wrong circle");
    return m;
}

std::vector<WordStep> self_gluing_steps() {
    static const int seq[8][2] = {{5, 4}, {2, 1}, {3, 2}, {4, 3}, {2, 1}, {6, 5}, {7, 6}, {2, 3}};
    std::vector<WordStep> out;
    for (auto& p : seq) out.push_back({WordStep::Kind::slide, p[0] - 1, p[1] - 1});
    return out;
}

// ---- pipeline ---------------------------------------------------------------------

DStructure reduce(const DStructure& M, const PipelineOptions& opt, CancelStats* stats) {
    if (opt.reduction == Reduction::partial)
        return cancel(M, stats, CancelOrder::first, nullptr, CancelRule::exact_idempotent);
    return cancel(M, stats, opt.order, nullptr, CancelRule::full);
}

DStructure apply_slides(DStructure N, const std::vector<ArcSlide>& slides, const PipelineOptions& opt,
                        std::vector<StageCount>* stages) {
    for (const auto& s : slides) {
        const ArcSlide m = mirror_slide(s);
        if (!(N.algebra().pmc() == m.source)) throw InputError("slide " + s.str() + " is not composable here");
        const auto& L = N.algebra_ptr();
        const int w = L->weight() ? *L->weight() : 0;
        auto R = std::make_shared<const Algebra>(reverse(m.target), -w, L->truncated());
        auto T = std::make_shared<const Algebra>(m.target, w, L->truncated());
        const SlideBimodule dd = arcslide_dd(m, L, R, opt.slide);
        DStructure M = mor_dd(dd.dd, N, T, opt.jobs);
        if (opt.verify) {
            auto bad = d_squared_defects(M, 1);
            if (!bad.empty()) throw InvariantError("Mor with " + s.str() + ": d^2 != 0 at " + bad[0]);
        }
        CancelStats st;
        N = reduce(M, opt, &st);
        if (stages) stages->push_back({slide_label(s), st.before, st.after});
    }
    return N;
}

DStructure cfd_self_gluing(const Pmc& z) {
    const int n = z.n_points();
    const Pmc rz = reverse(z);
    const Pmc B = connected_sum(rz, z);  // -Z on points [0, n), Z on [n, 2n)
    auto A = std::make_shared<const Algebra>(B, 0);
    const std::uint32_t all = (1u << z.n_pairs()) - 1;
    DStructure M(A);
    std::vector<int> gen_of(std::size_t(1) << B.n_pairs(), -1);
    for (std::uint32_t S = 0; S <= all; ++S) {
        // S on the Z side, its complement (reflected) on the -Z side
        std::uint32_t rS = 0;
        for (std::uint32_t h = all & ~S; h; h &= h - 1)
            rS |= bit(rz.pair_of(n - 1 - z.points_of(std::countr_zero(h))[0]));
        const std::uint32_t I = embed_pairs(rz, B, 0, rS) | embed_pairs(z, B, n, S);
        gen_of[I] = M.add_generator(I, "S" + std::to_string(S));
    }
    std::vector<std::vector<std::pair<int, int>>> sym;
    for (const Chord& c : all_chords(z))  // type I: xi on Z with its reflection on -Z
        sym.push_back({{n - 1 - c.end, n - 1 - c.start}, {c.start + n, c.end + n}});
    for (int j = 0; j < n; ++j) sym.push_back({{n - 1 - j, n + j}});  // type II: across the middle
    for (int x = 0; x < M.size(); ++x)
        for (const auto& mv : sym) {
            auto s = from_idempotent(B, M.idem(x), mv);
            if (!s) continue;
            const int id = A->id_of(*s);
            if (id < 0) continue;
            const int y = gen_of[A->right_idem(id)];
            if (y >= 0) M.add_arrow(x, id, y);
        }
    return M;
}

DDStructure dd_elementary_cobordism(const Pmc& z, SumSide side) {
    const Pmc T = split_pmc(1);
    const Pmc big = connected_sum(z, T, side);
    const Pmc rbig = reverse(big);
    const Pmc rz = reverse(z);
    const int n = z.n_points();
    // offsets of -Z and of the reversed torus block inside -(big)
    const int off_rz = side == SumSide::left ? 4 : 0;
    const int off_t = side == SumSide::left ? 0 : n;
    auto L = std::make_shared<const Algebra>(z, 0);
    auto Lr = std::make_shared<const Algebra>(rz, 0);
    auto R = std::make_shared<const Algebra>(rbig, 0);
    const DDStructure id = dd_identity(L, Lr);
    const std::uint32_t K = bit(rbig.pair_of(off_t));
    DDStructure out(L, R);
    for (int x = 0; x < id.size(); ++x)
        out.add_generator(id.idem_left(x), embed_pairs(rz, rbig, off_rz, id.idem_right(x)) | K, id.name(x));
    for (int x = 0; x < id.size(); ++x) {
        for (auto [a, b, y] : id.delta(x)) {
            const int rb = R->id_of(embed(rz, rbig, off_rz, Lr->gen(b), K));
            if (rb < 0) throw InvariantError("elementary cobordism: coefficient outside the algebra");
            out.add_arrow(x, a, rb, y);
        }
        Strands ch;
        ch.moving = {{off_t, off_t + 2}};
        ch.horiz = out.idem_right(x) & ~K;
        const int rb = R->id_of(ch);
        const int la = L->idempotent(id.idem_left(x));
        if (rb < 0 || la < 0) throw InvariantError("elementary cobordism: handlebody chord missing");
        out.add_arrow(x, la, rb, x);
    }
    return out;
}

DStructure cfd_of(const HandlebodySpec& h, const PipelineOptions& opt, std::vector<StageCount>* stages) {
    if (h.kind == HandlebodyKind::zero_framed) return cfd_zero_framed_handlebody(h.genus);
    if (h.genus != 2) throw InputError("self-gluing handlebody is only provided for genus 2");
    MappingWord w{2, self_gluing_steps()};
    return apply_slides(cfd_zero_framed_handlebody(2), expand_word(w, opt.handedness), opt, stages);
}

DStructure cfd_bordered(const HandlebodySpec& start, const std::vector<BorderedBlock>& blocks,
                        const PipelineOptions& opt, std::vector<StageCount>* stages) {
    DStructure N = cfd_of(start, opt, stages);
    for (const auto& blk : blocks) {
        // boundary circle = reverse of the circle N lives over
        const Pmc boundary = reverse(N.algebra().pmc());
        std::vector<ArcSlide> slides;
        Pmc cur = boundary;
        for (const auto& st : blk.steps) {
            if (st.kind == WordStep::Kind::slide) {
                slides.push_back(apply_arcslide(cur, st.b1, st.c1));
            } else {
                auto seq = dehn_twist_expand(cur, st.point, st.power, opt.handedness);
                slides.insert(slides.end(), seq.begin(), seq.end());
            }
            if (!slides.empty()) cur = slides.back().target;
        }
        N = apply_slides(std::move(N), slides, opt, stages);
        for (int r = 0; r < blk.raises; ++r) {
            // torus attached at the far end of the boundary = the start of -dH
            const Pmc& z = N.algebra().pmc();
            const DDStructure dd = dd_elementary_cobordism(z, SumSide::left);
            auto T = std::make_shared<const Algebra>(connected_sum(z, split_pmc(1), SumSide::left), 0);
            DStructure M = mor_dd(dd, N, T, opt.jobs);
            if (opt.verify && !verify_d_squared(M)) throw InvariantError("elementary cobordism: d^2 != 0");
            CancelStats st;
            N = reduce(M, opt, &st);
            if (stages) stages->push_back({"raise genus", st.before, st.after});
        }
    }
    return N;
}

std::vector<SpincSummary> spinc_maslov(const F2Complex& C) {
    std::vector<SpincSummary> out;
    std::map<int, int> slot;
    for (int i : homology_basis(C)) {
        const int o = C.orbit.empty() ? 0 : C.orbit[i];
        auto [it, fresh] = slot.emplace(o, int(out.size()));
        if (fresh) out.push_back({C.orbit.empty() ? 0 : C.period[o], 0, {}});
        auto& s = out[it->second];
        ++s.rank;
        if (!C.degree.empty()) ++s.maslov[C.degree[i]];
    }
    // shift each orbit so its lowest degree is 0 (degrees are relative)
    for (auto& s : out) {
        if (s.maslov.empty() || s.period) continue;
        const auto lo = s.maslov.begin()->first;
        std::map<std::int64_t, int> m;
        for (auto [d, r] : s.maslov) m[d - lo] = r;
        s.maslov = std::move(m);
    }
    return out;
}

ClosedResult hf_hat_closed(const ClosedInput& in, const PipelineOptions& opt) {
    const int g = in.word.genus;
    if (in.start.genus != g || in.cap.genus != g) throw InputError("handlebody genera differ from the word's");
    ClosedResult res;
    DStructure start = cfd_of(in.start, opt, &res.start_stages);
    const auto slides = expand_word(in.word, opt.handedness);
    if (!slides.empty() && !(slides.back().target == split_pmc(g)))
        throw InputError("word does not return to the split circle");
    DStructure N = apply_slides(std::move(start), slides, opt, &res.word_stages);
    DStructure cap = cfd_of(in.cap, opt, &res.cap_stages);
    const Propagation pc = grade(cap), pn = grade(N);
    MorOptions mo;
    mo.jobs = opt.jobs;
    mo.grading_m = &pc;
    mo.grading_n = &pn;
    const MorResult R = mor_complex(cap, N, mo);
    if (opt.verify && !R.complex.d_squared_zero()) throw InvariantError("closed Mor complex: d^2 != 0");
    res.complex_size = R.complex.n;
    res.orbits = spinc_maslov(R.complex);
    for (auto& o : res.orbits) res.total_rank += o.rank;
    return res;
}

std::optional<ClosedInput> preset(const std::string& name) {
    ClosedInput in;
    if (name == "s1xs2-g1" || name == "s1xs2-g2") {
        const int g = name.back() - '0';
        in.start = in.cap = {HandlebodyKind::zero_framed, g};
        in.word.genus = g;
        return in;
    }
    if (name == "self-gluing-g1") {
        in.start = {HandlebodyKind::self_gluing, 2};
        in.cap = {HandlebodyKind::zero_framed, 2};
        in.word.genus = 2;
        return in;
    }
    if (name == "poincare") {
        in.start = in.cap = {HandlebodyKind::self_gluing, 2};
        in.word.genus = 2;
        for (int i = 0; i < 5; ++i) {
            in.word.steps.push_back({WordStep::Kind::twist, 0, 0, 0, 1});  // pair {1,3}: 2 over 1
            in.word.steps.push_back({WordStep::Kind::twist, 0, 0, 1, 1});  // pair {2,4}: 3 over 2
        }
        return in;
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() { return {"poincare", "self-gluing-g1", "s1xs2-g1", "s1xs2-g2"}; }

}  // namespace bfh
