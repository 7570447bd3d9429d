#include "bfh/grading.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>

namespace bfh {

GradingGroup::GradingGroup(std::vector<int> point_counts) : npts_(std::move(point_counts)) {
    for (int n : npts_) {
        off_.push_back(width_);
        width_ += std::max(n - 1, 0);
    }
}

std::int64_t GradingGroup::twisted(const IVec& a, const IVec& b) const {
    // sum_p (a[p-1] - a[p]) * (b[p-1] + b[p]) over every point p of every circle
    std::int64_t s = 0;
    for (int c = 0; c < components(); ++c) {
        const int o = off_[c], len = std::max(npts_[c] - 1, 0);
        for (int p = 0; p < npts_[c]; ++p) {
            const std::int64_t al = p > 0 ? a[o + p - 1] : 0, ar = p < len ? a[o + p] : 0;
            const std::int64_t bl = p > 0 ? b[o + p - 1] : 0, br = p < len ? b[o + p] : 0;
            s += (al - ar) * (bl + br);
        }
    }
    return s;
}

int GradingGroup::eps2(const IVec& a) const {
    int changes = 0;
    for (int c = 0; c < components(); ++c) {
        const int o = off_[c], len = std::max(npts_[c] - 1, 0);
        for (int p = 0; p < npts_[c]; ++p) {
            const std::int64_t l = p > 0 ? a[o + p - 1] : 0, r = p < len ? a[o + p] : 0;
            changes += ((l - r) & 1) != 0;
        }
    }
    return (changes / 2) & 1;
}

GrElem gr_identity(const GradingGroup& G) { return {0, IVec(G.width(), 0)}; }

GrElem gr_lambda(const GradingGroup& G, std::int64_t power) { return {2 * power, IVec(G.width(), 0)}; }

GrElem gr_mul(const GradingGroup& G, const GrElem& a, const GrElem& b) {
    GrElem r{a.J + b.J + G.twisted(a.alpha, b.alpha), a.alpha};
    for (std::size_t i = 0; i < r.alpha.size(); ++i) r.alpha[i] += b.alpha[i];
    return r;
}

// The twisting form is alternating, so inverses and powers need no correction.
GrElem gr_inv(const GrElem& a) { return gr_pow(a, -1); }

GrElem gr_pow(const GrElem& a, std::int64_t n) {
    GrElem r{a.J * n, a.alpha};
    for (auto& x : r.alpha) x *= n;
    return r;
}

bool gr_congruent(const GradingGroup& G, const GrElem& a) { return mod_floor(a.J, 2) == G.eps2(a.alpha); }

std::string to_string(const GrElem& g) {
    std::ostringstream os;
    os << '(';
    if (g.J % 2) os << g.J << "/2";
    else os << g.J / 2;
    os << ';';
    for (std::size_t i = 0; i < g.alpha.size(); ++i) os << (i ? "," : "") << g.alpha[i];
    os << ')';
    return os.str();
}

GrElem gr_prime(const GradingGroup& G, int comp, const Algebra& A, int id) {
    GrElem g = gr_identity(G);
    g.J = A.iota2(id);
    const auto& s = A.supp(id);
    for (std::size_t i = 0; i < s.size(); ++i) g.alpha[G.offset(comp) + i] = s[i];
    return g;
}

GrElem gr_prime2(const GradingGroup& G, const Algebra& A, int a, const Algebra& B, int b) {
    GrElem g = gr_identity(G);
    g.J = A.iota2(a) + B.iota2(b);
    const auto& sa = A.supp(a);
    const auto& sb = B.supp(b);
    for (std::size_t i = 0; i < sa.size(); ++i) g.alpha[G.offset(0) + i] = sa[i];
    for (std::size_t i = 0; i < sb.size(); ++i) g.alpha[G.offset(1) + i] = sb[i];
    return g;
}

Subgroup::Subgroup(const GradingGroup& G, std::vector<GrElem> gens) : G_(G), gens_(std::move(gens)) {
    std::vector<IVec> rows;
    for (auto& g : gens_) rows.push_back(g.alpha);
    ech_.emplace(rows, G_.width());
    const auto& u = ech_->transform();
    auto word_of = [&](const IVec& c) {
        GrElem w = gr_identity(G_);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i]) w = gr_mul(G_, w, gr_pow(gens_[i], c[i]));
        return w;
    };
    std::int64_t lam = 0;
    for (int i = 0; i < ech_->rank(); ++i) basis_.push_back(word_of(u[i]));
    for (std::size_t i = ech_->rank(); i < u.size(); ++i) lam = gcd64(lam, word_of(u[i]).J);
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = i + 1; j < basis_.size(); ++j)
            lam = gcd64(lam, 2 * G_.twisted(basis_[i].alpha, basis_[j].alpha));
    lam_ = lam;
}

std::vector<IVec> Subgroup::lattice_basis() const {
    if (!ech_) return {};
    return {ech_->rows().begin(), ech_->rows().begin() + ech_->rank()};
}

GrElem Subgroup::word(const IVec& y) const {
    GrElem w = gr_identity(G_);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i]) w = gr_mul(G_, w, gr_pow(basis_[i], y[i]));
    return w;
}

std::optional<GrElem> Subgroup::element_with(const IVec& alpha) const {
    if (!ech_) {
        for (auto x : alpha)
            if (x) return std::nullopt;
        return gr_identity(G_);
    }
    auto y = ech_->solve_basis(alpha);
    if (!y) return std::nullopt;
    return word(*y);
}

bool Subgroup::contains(const GrElem& g) const {
    auto w = element_with(g.alpha);
    if (!w) return false;
    const std::int64_t d = g.J - w->J;
    return lam_ == 0 ? d == 0 : d % lam_ == 0;
}

bool Subgroup::same_coset(const GrElem& a, const GrElem& b) const { return contains(gr_mul(G_, gr_inv(a), b)); }

std::optional<std::int64_t> Propagation::arrow_defect(const GradedArrow& a) const {
    if (component[a.from] != component[a.to]) return std::nullopt;
    // g_from = lambda^(1+t) coef g_to  (mod H)  <=>  t-shift below
    const auto& H = subgroups[component[a.from]];
    GrElem rhs = gr_mul(G, gr_lambda(G), gr_mul(G, a.coef, gr[a.to]));
    GrElem r = gr_mul(G, gr_inv(rhs), gr[a.from]);
    auto w = H.element_with(r.alpha);
    if (!w) return std::nullopt;
    const std::int64_t d = r.J - w->J;
    if (d % 2) return std::nullopt;
    if (H.central_period() == 0) return d / 2;
    return mod_floor(d, H.central_period()) / 2;
}

Propagation propagate(const GradingGroup& G, int n, const std::vector<GradedArrow>& arrows, std::uint64_t seed) {
    Propagation P;
    P.G = G;
    P.gr.assign(n, gr_identity(G));
    P.component.assign(n, -1);
    std::vector<std::vector<int>> inc(n);
    for (int i = 0; i < static_cast<int>(arrows.size()); ++i) {
        inc[arrows[i].from].push_back(i);
        if (arrows[i].to != arrows[i].from) inc[arrows[i].to].push_back(i);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (seed) {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        for (auto& v : inc) std::shuffle(v.begin(), v.end(), rng);
    }
    std::vector<char> tree(arrows.size(), 0);
    int comps = 0;
    for (int root : order) {
        if (P.component[root] >= 0) continue;
        P.component[root] = comps;
        std::deque<int> q{root};
        while (!q.empty()) {
            const int x = q.front();
            q.pop_front();
            for (int ai : inc[x]) {
                const auto& a = arrows[ai];
                if (a.from == x && P.component[a.to] < 0) {
                    // g_to = coef^-1 lambda^-1 g_from
                    P.gr[a.to] = gr_mul(G, gr_inv(a.coef), gr_mul(G, gr_lambda(G, -1), P.gr[x]));
                    P.component[a.to] = comps, tree[ai] = 1;
                    q.push_back(a.to);
                } else if (a.to == x && P.component[a.from] < 0) {
                    P.gr[a.from] = gr_mul(G, gr_lambda(G), gr_mul(G, a.coef, P.gr[x]));
                    P.component[a.from] = comps, tree[ai] = 1;
                    q.push_back(a.from);
                }
            }
        }
        ++comps;
    }
    std::vector<std::vector<GrElem>> rel(comps);
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        if (tree[i]) continue;
        const auto& a = arrows[i];
        GrElem rhs = gr_mul(G, gr_lambda(G), gr_mul(G, a.coef, P.gr[a.to]));
        GrElem r = gr_mul(G, gr_inv(rhs), P.gr[a.from]);
        if (r != gr_identity(G)) rel[P.component[a.from]].push_back(r);
    }
    for (int c = 0; c < comps; ++c) P.subgroups.emplace_back(G, rel[c]);
    return P;
}

DoubleCosets::DoubleCosets(Subgroup left, Subgroup right) : L_(std::move(left)), R_(std::move(right)), G_(L_.group()) {
    auto lb = L_.lattice_basis(), rb = R_.lattice_basis();
    nl_ = static_cast<int>(lb.size());
    std::vector<IVec> rows = lb;
    rows.insert(rows.end(), rb.begin(), rb.end());
    sum_.emplace(rows, G_.width());
    inter_ = intersect_lattices(lb, rb, G_.width());
}

std::int64_t DoubleCosets::period_for(const GrElem& g0) const {
    std::int64_t n = gcd64(L_.central_period(), R_.central_period());
    for (const auto& b : inter_) {
        IVec nb = b;
        for (auto& x : nb) x = -x;
        auto h = L_.element_with(b);
        auto h2 = R_.element_with(nb);
        if (!h || !h2) throw InvariantError("intersection vector outside a lattice");
        const GrElem t = gr_mul(G_, *h, gr_mul(G_, g0, *h2));
        n = gcd64(n, t.J - g0.J);
    }
    return n / 2;
}

DoubleCosets::Class DoubleCosets::classify(const GrElem& g) {
    IVec key = sum_->reduce(g.alpha);
    int o = -1;
    for (int i = 0; i < n_orbits(); ++i)
        if (orbits_[i].key == key) o = i;
    if (o < 0) {
        orbits_.push_back({key, g, period_for(g)});
        return {n_orbits() - 1, 0};
    }
    const Orbit& orb = orbits_[o];
    IVec beta = g.alpha;
    for (std::size_t i = 0; i < beta.size(); ++i) beta[i] -= orb.base.alpha[i];
    auto c = sum_->solve(beta);
    if (!c) throw InvariantError("double coset bookkeeping failed");
    IVec bl(G_.width(), 0), br(G_.width(), 0);
    auto lb = L_.lattice_basis(), rb = R_.lattice_basis();
    for (int i = 0; i < nl_; ++i)
        for (int k = 0; k < G_.width(); ++k) bl[k] += (*c)[i] * lb[i][k];
    for (std::size_t i = 0; i < rb.size(); ++i)
        for (int k = 0; k < G_.width(); ++k) br[k] += (*c)[nl_ + i] * rb[i][k];
    auto h = L_.element_with(bl);
    auto h2 = R_.element_with(br);
    if (!h || !h2) throw InvariantError("double coset decomposition failed");
    const GrElem ref = gr_mul(G_, *h, gr_mul(G_, orb.base, *h2));
    const std::int64_t d = g.J - ref.J;
    if (d % 2) throw InvariantError("odd Maslov difference within an orbit");
    std::int64_t t = d / 2;
    if (orb.period) t = mod_floor(t, orb.period);
    return {o, t};
}

}  // namespace bfh
