// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "bfh/ainfty.hpp"
#include "bfh/grading.hpp"
#include "bfh/manifolds.hpp"
#include "bfh/slides.hpp"

using namespace bfh;
using Side = AInftyModule::Side;

namespace {

// Tolerances and expected values.
constexpr double kPoincareSeconds = 300.0;
constexpr int kPoincareMor = 405;
const std::vector<int> kSelfGluing{2, 2, 1, 3, 1, 2, 4, 4};
const std::vector<int> kTwistA{7, 6, 9, 11, 14}, kTwistB{5, 7, 10, 13, 15};
constexpr int kXiWords = 100;
constexpr int kBoxWords = 3, kBoxMaxLen = 6;
constexpr unsigned kSeed = 20240611;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
    failures += !ok;
}

std::string list(const std::vector<int>& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

WordStep twist(int point, int power) {
    WordStep s;
    s.kind = WordStep::Kind::twist;
    s.point = point;
    s.power = power;
    return s;
}

ClosedInput zero_framed(int genus, std::vector<WordStep> steps) {
    ClosedInput in;
    in.start.genus = in.cap.genus = genus;
    in.word = {genus, std::move(steps)};
    return in;
}

std::vector<std::pair<int, int>> moves(const Pmc& z) {
    std::vector<std::pair<int, int>> m;
    for (int b = 0; b < z.n_points(); ++b)
        for (int c : {b - 1, b + 1})
            if (c >= 0 && c < z.n_points() && z.partner(b) != c) m.push_back({b, c});
    return m;
}

// ---- 1 ----------------------------------------------------------------------

void poincare() {
    auto t0 = std::chrono::steady_clock::now();
    auto r = hf_hat_closed(*preset("poincare"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "rank " << r.total_rank << ", orbits " << r.orbits.size() << ", Mor elements " << r.complex_size
       << " (expect " << kPoincareMor << "), " << secs << " s";
    report(1, r.total_rank == 1 && r.orbits.size() == 1 && secs < kPoincareSeconds, os.str());
}

// ---- 2 ----------------------------------------------------------------------

void reduced_counts() {
    auto run = [](Reduction red) {
        PipelineOptions opt;
        opt.reduction = red;
        auto r = hf_hat_closed(*preset("poincare"), opt);
        std::vector<int> sg, a, b;
        for (const auto& s : r.start_stages) sg.push_back(s.after);
        for (std::size_t i = 0; i < r.word_stages.size(); ++i)
            (i % 2 ? b : a).push_back(r.word_stages[i].after);
        return std::tuple{sg, a, b};
    };
    auto [sg, a, b] = run(Reduction::partial);
    auto [fsg, fa, fb] = run(Reduction::full);
    std::ostringstream os;
    os << "partial reduction: self-gluing " << list(sg) << " twists " << list(a) << " " << list(b)
       << "; full reduction: " << list(fsg) << " " << list(fa) << " " << list(fb);
    report(2, sg == kSelfGluing && a == kTwistA && b == kTwistB, os.str());
}

// ---- 3 ----------------------------------------------------------------------

void s1xs2() {
    auto r1 = hf_hat_closed(zero_framed(1, {}));
    auto r2 = hf_hat_closed(zero_framed(2, {}));
    bool adjacent = false;
    if (r1.orbits.size() == 1 && r1.orbits[0].maslov.size() == 2) {
        const auto& m = r1.orbits[0].maslov;
        adjacent = std::next(m.begin())->first == m.begin()->first + 1;
    }
    std::ostringstream os;
    os << "genus 1 rank " << r1.total_rank << (adjacent ? " in two adjacent degrees" : " (degrees not adjacent)")
       << ", genus 2 rank " << r2.total_rank;
    report(3, r1.total_rank == 2 && adjacent && r2.total_rank == 4, os.str());
}

// ---- 4 ----------------------------------------------------------------------

bool same_module(const DStructure& a, const DStructure& b) {
    if (a.size() != b.size() || !(a.algebra().pmc() == b.algebra().pmc())) return false;
    std::map<std::uint32_t, int> of_b;
    for (int y = 0; y < b.size(); ++y)
        if (!of_b.emplace(b.idem(y), y).second) return false;
    std::vector<int> to(a.size());
    for (int x = 0; x < a.size(); ++x) {
        auto it = of_b.find(a.idem(x));
        if (it == of_b.end()) return false;
        to[x] = it->second;
    }
    for (int x = 0; x < a.size(); ++x) {
        std::set<std::pair<Strands, int>> da, db;
        for (const auto& t : a.delta(x)) da.insert({a.algebra().gen(t.coef), to[t.to]});
        for (const auto& t : b.delta(to[x])) db.insert({b.algebra().gen(t.coef), t.to});
        if (da != db) return false;
    }
    return true;
}

void self_gluing_formula() {
    PipelineOptions opt;
    auto N = cfd_of({HandlebodyKind::self_gluing, 2}, opt);
    auto F = cfd_self_gluing(split_pmc(1));
    const bool ok = verify_d_squared(F) && same_module(F, N);
    report(4, ok, "formula " + std::to_string(F.size()) + " generators, slide sequence " + std::to_string(N.size()) +
                      (ok ? ", identical" : ", different"));
}

// ---- 5 ----------------------------------------------------------------------

void aa_identity() {
    auto caa = caa_identity(split_pmc(1), 0);
    const auto& M = *caa.module;
    const int rank = homology_rank(M.complex());
    MinimalModel m(caa.module, homology_retract(M));
    const Algebra& A = *M.algebra(Side::rho);
    const Algebra& Ap = *M.algebra(Side::lambda);
    int X = -1;
    for (int h = 0; h < m.size(); ++h)
        if (m.idem(h, Side::rho) == 1u << A.pmc().pair_of(0)) X = h;
    const Elem Y{1 - X};
    auto r = [&](const char* s) { return chord_generator(A, s); };
    auto l = [&](const char* s) { return chord_generator(Ap, s); };
    const bool op1 = m.m(X, {l("2")}, {r("3")}) == Y;
    const bool op2 = m.m(X, {l("12"), l("2")}, {r("3"), r("23")}) == Y;
    // what the model does produce, for the record
    const bool seen1 = m.m(X, {l("1")}, {r("3")}) == Y;
    const bool seen2 = m.m(X, {l("12"), l("1")}, {r("3"), r("23")}) == Y;
    std::ostringstream os;
    os << M.size() << " generators, rank " << rank << "; m(X0,r3,l2)=Y0 " << (op1 ? "yes" : "no")
       << ", m(X0,r3,r23,l12,l2)=Y0 " << (op2 ? "yes" : "no") << " [computed: m(X0,r3,l1)=Y0 "
       << (seen1 ? "yes" : "no") << ", m(X0,r3,r23,l12,l1)=Y0 " << (seen2 ? "yes" : "no") << "]";
    report(5, M.size() == 30 && rank == 2 && op1 && op2, os.str());
}

// ---- 6 ----------------------------------------------------------------------

int min_intervals(const std::vector<int>& v) {
    int k = 0, prev = 0;
    for (int x : v) k += std::max(0, x - prev), prev = x;
    return k;
}

std::vector<std::string> properties() {
    std::vector<std::string> bad;
    const std::vector<Pmc> circles{split_pmc(1), split_pmc(2), antipodal_pmc(2)};

    // algebra
    for (const auto& z : circles) {
        Algebra A(z);
        for (int a = 0; a < A.size(); ++a) {
            if (!A.diff(A.diff(a)).empty()) bad.push_back("d^2 on " + z.str());
            for (int b : A.starting_at(A.right_idem(a))) {
                const int ab = A.mult(a, b);
                if ((ab >= 0 ? A.diff(ab) : Elem{}) != add(A.mult(A.diff(a), Elem{b}), A.mult(Elem{a}, A.diff(b))))
                    bad.push_back("Leibniz on " + z.str());
                if (ab < 0) continue;
                for (int c : A.starting_at(A.right_idem(b))) {
                    const int bc = A.mult(b, c);
                    if (A.mult(ab, c) != (bc >= 0 ? A.mult(a, bc) : -1)) bad.push_back("associativity on " + z.str());
                }
            }
        }
    }

    // gradings
    for (const auto& z : circles) {
        Algebra A(z);
        GradingGroup G({z.n_points()});
        for (int a = 0; a < A.size(); ++a) {
            const auto ga = gr_prime(G, 0, A, a);
            if (!A.is_idempotent(a) && A.iota2(a) > -min_intervals(A.supp(a))) bad.push_back("iota bound");
            for (int d : A.diff(a))
                if (gr_mul(G, gr_lambda(G), gr_prime(G, 0, A, d)) != ga) bad.push_back("lambda drop");
            for (int b : A.starting_at(A.right_idem(a))) {
                const int r = A.mult(a, b);
                if (r >= 0 && gr_prime(G, 0, A, r) != gr_mul(G, ga, gr_prime(G, 0, A, b)))
                    bad.push_back("gr' multiplicativity");
            }
        }
    }

    // slide bimodules: d^2 = 0, coefficients in the grading -1 scan, enumeration = scan
    using Key = std::tuple<int, int, int, int>;
    for (int g = 1; g <= 2; ++g)
        for (const auto& z : {split_pmc(g), antipodal_pmc(g)})
            for (auto [b, c] : moves(z)) {
                auto s = apply_arcslide(z, b, c);
                for (int w = -g + 1; w <= g - 1; ++w) {
                    auto L = std::make_shared<const Algebra>(z, w);
                    auto R = std::make_shared<const Algebra>(reverse(s.target), -w);
                    auto sb = arcslide_dd(s, L, R);
                    if (!verify_d_squared(sb.dd)) bad.push_back("slide d^2 " + s.str());
                    auto scan = scan_near_diagonal(s, L, R);
                    std::set<Key> allowed, en;
                    for (const auto& k : scan.grading_minus_one) allowed.insert({k.from, k.to, k.a, k.b});
                    for (const auto& k : enumerate_near_chords(s, L, R)) en.insert({k.from, k.to, k.a, k.b});
                    if (en != allowed) bad.push_back("enumeration != scan " + s.str());
                    for (int x = 0; x < sb.dd.size(); ++x)
                        for (const auto& t : sb.dd.delta(x))
                            if (!allowed.count({x, t.to, t.a, t.b})) bad.push_back("coefficient off scan " + s.str());
                }
            }

    // over-slide basic choice (gauge)
    {
        const Pmc z = split_pmc(2);
        auto cap = cfd_zero_framed_handlebody(2);
        for (auto [b, c] : moves(z)) {
            auto s = apply_arcslide(z, b, c);
            if (!mirror_slide(s).over) continue;
            std::vector<int> out;
            for (bool alt : {false, true}) {
                PipelineOptions opt;
                opt.slide.alternate_basic_choice = alt;
                std::vector<ArcSlide> word{s, s.inverse()};
                for (const auto& t : dehn_twist_expand(z, 1, 2)) word.push_back(t);
                std::vector<StageCount> st;
                auto N = apply_slides(cfd_zero_framed_handlebody(2), word, opt, &st);
                out.push_back(st.front().after);
                out.push_back(homology_rank(mor_complex(cap, N).complex));
            }
            if (out[0] != out[2] || out[1] != out[3]) bad.push_back("basic choice changes " + s.str());
        }
    }

    // slide . slide^-1
    {
        std::mt19937 rng(kSeed);
        for (int genus : {1, 2}) {
            auto cap = cfd_zero_framed_handlebody(genus);
            for (int trial = 0; trial < 4; ++trial) {
                MappingWord w{genus, {twist(int(rng() % (4 * genus)), int(rng() % 3) - 1)}};
                auto slides = expand_word(w);
                const std::size_t pos = rng() % (slides.size() + 1);
                const Pmc here = pos == 0 ? split_pmc(genus) : slides[pos - 1].target;
                auto mv = moves(here);
                auto [b, c] = mv[rng() % mv.size()];
                auto s = apply_arcslide(here, b, c);
                auto longer = slides;
                longer.insert(longer.begin() + pos, {s, s.inverse()});
                PipelineOptions opt;
                auto N1 = apply_slides(cfd_zero_framed_handlebody(genus), slides, opt);
                auto N2 = apply_slides(cfd_zero_framed_handlebody(genus), longer, opt);
                if (N1.size() != N2.size() ||
                    homology_rank(mor_complex(cap, N1).complex) != homology_rank(mor_complex(cap, N2).complex))
                    bad.push_back("slide.slide^-1 " + s.str());
            }
        }
    }

    // cancellation order
    {
        auto slides = expand_word({2, {twist(1, 1), twist(5, -1), twist(2, 1)}});
        PipelineOptions a, b;
        a.order = CancelOrder::min_fill;
        b.order = CancelOrder::first;
        std::vector<StageCount> sa, sb;
        auto Na = apply_slides(cfd_zero_framed_handlebody(2), slides, a, &sa);
        auto Nb = apply_slides(cfd_zero_framed_handlebody(2), slides, b, &sb);
        for (std::size_t i = 0; i < sa.size(); ++i)
            if (sa[i].after != sb[i].after) bad.push_back("cancel order at stage " + std::to_string(i + 1));
        auto cap = cfd_zero_framed_handlebody(2);
        if (homology_rank(mor_complex(cap, Na).complex) != homology_rank(mor_complex(cap, Nb).complex))
            bad.push_back("cancel order changes the rank");
    }

    // xi_psi functoriality
    {
        std::mt19937 rng(kSeed);
        auto word = [&](const Pmc& z0, int len) {
            std::vector<ArcSlide> w;
            Pmc z = z0;
            for (int i = 0; i < len; ++i) {
                auto mv = moves(z);
                auto [b, c] = mv[rng() % mv.size()];
                w.push_back(apply_arcslide(z, b, c));
                z = w.back().target;
            }
            return w;
        };
        for (int trial = 0; trial < kXiWords; ++trial) {
            const int g = 1 + trial % 2;
            const Pmc z = trial % 4 < 2 ? split_pmc(g) : antipodal_pmc(g);
            auto w1 = word(z, 1 + int(rng() % 5));
            auto w2 = word(w1.back().target, 1 + int(rng() % 5));
            auto w12 = w1;
            w12.insert(w12.end(), w2.begin(), w2.end());
            Mod2Small x;
            x.m = int(rng() % 2);
            for (int i = 0; i < z.n_pairs(); ++i) x.a.push_back(int(rng() % 7) - 3);
            auto back = w12;
            for (auto it = w12.rbegin(); it != w12.rend(); ++it) back.push_back(it->inverse());
            if (!(xi_psi(w12, x) == xi_psi(w2, xi_psi(w1, x))) || !(xi_psi(back, x) == x))
                bad.push_back("xi_psi on word " + std::to_string(trial));
        }
    }
    return bad;
}

void property_suites() {
    auto bad = properties();
    std::string detail = bad.empty() ? "all property suites hold" : std::to_string(bad.size()) + " violations, first: " + bad[0];
    report(6, bad.empty(), detail);
}

// ---- 7 ----------------------------------------------------------------------

void box_vs_mor() {
    std::mt19937 rng(kSeed);
    std::ostringstream os;
    bool ok = true;
    for (int i = 0; i < kBoxWords; ++i) {
        std::vector<WordStep> steps;
        const int len = 1 + int(rng() % kBoxMaxLen);
        for (int k = 0; k < len; ++k) {
            int p = int(rng() % 5) - 2;
            steps.push_back(twist(int(rng() % 2), p == 0 ? 1 : p));
        }
        auto in = zero_framed(1, steps);
        // a twist at genus 1 is |power| slides; keep the word within the length bound
        while (static_cast<int>(expand_word(in.word).size()) > kBoxMaxLen) in.word.steps.pop_back();
        const int mor = hf_hat_closed(in).total_rank;
        const int box = hf_hat_box(in).rank;
        ok &= mor == box;
        os << (i ? "; " : "") << "word " << i + 1 << " (" << expand_word(in.word).size() << " slides): box " << box
           << ", Mor " << mor;
    }
    report(7, ok, os.str());
}

}  // namespace

int main() {
    std::vector<std::pair<int, void (*)()>> all{{1, poincare},           {2, reduced_counts},  {3, s1xs2},
                                                 {4, self_gluing_formula}, {5, aa_identity},      {6, property_suites},
                                                 {7, box_vs_mor}};
    for (auto [id, f] : all) {
        try {
            f();
        } catch (const std::exception& e) {
            report(id, false, std::string("exception: ") + e.what());
        }
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
