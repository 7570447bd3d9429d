#include "bfh/homalg.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace bfh {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, std::max(n, 1));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    for (auto& th : pool) th.join();
}

namespace {

template <class T>
void toggle_sorted(std::vector<T>& v, const T& t) {
    auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it != v.end() && *it == t) v.erase(it);
    else v.insert(it, t);
}

template <class T>
void cancel_pairs(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) & 1) out.push_back(v[i]);
        i = j;
    }
    v.swap(out);
}

}  // namespace

int DStructure::add_generator(std::uint32_t idem, std::string name) {
    idem_.push_back(idem);
    delta_.emplace_back();
    names_.push_back(name.empty() ? "g" + std::to_string(idem_.size() - 1) : std::move(name));
    return size() - 1;
}

void DStructure::add_arrow(int from, int coef, int to) {
    if (alg_->left_idem(coef) != idem_[from] || alg_->right_idem(coef) != idem_[to])
        throw InvariantError("type D arrow violates idempotents");
    toggle_sorted(delta_[from], Term{coef, to});
}

void DStructure::add_arrows(int from, const Elem& coef, int to) {
    for (int c : coef) add_arrow(from, c, to);
}

int DStructure::arrow_count() const {
    int n = 0;
    for (auto& d : delta_) n += static_cast<int>(d.size());
    return n;
}

int DDStructure::add_generator(std::uint32_t ia, std::uint32_t ib, std::string name) {
    ia_.push_back(ia);
    ib_.push_back(ib);
    delta_.emplace_back();
    names_.push_back(name.empty() ? "g" + std::to_string(ia_.size() - 1) : std::move(name));
    return size() - 1;
}

void DDStructure::add_arrow(int from, int a, int b, int to) {
    if (a_->left_idem(a) != ia_[from] || a_->right_idem(a) != ia_[to] || b_->left_idem(b) != ib_[from] ||
        b_->right_idem(b) != ib_[to])
        throw InvariantError("type DD arrow violates idempotents");
    toggle_sorted(delta_[from], Term{a, b, to});
}

void DDStructure::remove_arrow(int from, int a, int b, int to) {
    auto& v = delta_[from];
    auto it = std::lower_bound(v.begin(), v.end(), Term{a, b, to});
    if (it != v.end() && *it == Term{a, b, to}) v.erase(it);
}

bool DDStructure::has_arrow(int from, int a, int b, int to) const {
    const auto& v = delta_[from];
    return std::binary_search(v.begin(), v.end(), Term{a, b, to});
}

int DDStructure::arrow_count() const {
    int n = 0;
    for (auto& d : delta_) n += static_cast<int>(d.size());
    return n;
}

std::vector<std::string> d_squared_defects(const DStructure& M, std::size_t limit) {
    const Algebra& A = M.algebra();
    std::vector<std::string> out;
    for (int x = 0; x < M.size() && out.size() < limit; ++x) {
        std::vector<DStructure::Term> acc;
        for (auto [a, y] : M.delta(x)) {
            for (int d : A.diff(a)) acc.push_back({d, y});
            for (auto [b, w] : M.delta(y)) {
                const int r = A.mult(a, b);
                if (r >= 0) acc.push_back({r, w});
            }
        }
        cancel_pairs(acc);
        if (!acc.empty()) {
            std::ostringstream os;
            os << M.name(x) << ": " << to_string(A.pmc(), A.gen(acc[0].coef)) << " -> " << M.name(acc[0].to)
               << " (+" << acc.size() - 1 << ")";
            out.push_back(os.str());
        }
    }
    return out;
}

std::vector<std::string> d_squared_defects(const DDStructure& M, std::size_t limit) {
    const Algebra &A = M.left(), &B = M.right();
    std::vector<std::string> out;
    for (int x = 0; x < M.size() && out.size() < limit; ++x) {
        std::vector<DDStructure::Term> acc;
        for (auto [a, b, y] : M.delta(x)) {
            for (int d : A.diff(a)) acc.push_back({d, b, y});
            for (int d : B.diff(b)) acc.push_back({a, d, y});
            for (auto [a2, b2, w] : M.delta(y)) {
                const int ra = A.mult(a, a2);
                if (ra < 0) continue;
                const int rb = B.mult(b, b2);
                if (rb >= 0) acc.push_back({ra, rb, w});
            }
        }
        cancel_pairs(acc);
        if (!acc.empty()) {
            std::ostringstream os;
            os << M.name(x) << ": " << to_string(A.pmc(), A.gen(acc[0].a)) << "(x)"
               << to_string(B.pmc(), B.gen(acc[0].b)) << " -> " << M.name(acc[0].to) << " (+" << acc.size() - 1
               << ")";
            out.push_back(os.str());
        }
    }
    return out;
}

Propagation grade(const DStructure& M, std::uint64_t seed) {
    GradingGroup G({M.algebra().pmc().n_points()});
    std::vector<GradedArrow> arrows;
    for (int x = 0; x < M.size(); ++x)
        for (auto [a, y] : M.delta(x)) arrows.push_back({x, y, gr_prime(G, 0, M.algebra(), a)});
    return propagate(G, M.size(), arrows, seed);
}

Propagation grade(const DDStructure& M, std::uint64_t seed) {
    GradingGroup G({M.left().pmc().n_points(), M.right().pmc().n_points()});
    std::vector<GradedArrow> arrows;
    for (int x = 0; x < M.size(); ++x)
        for (auto [a, b, y] : M.delta(x)) arrows.push_back({x, y, gr_prime2(G, M.left(), a, M.right(), b)});
    return propagate(G, M.size(), arrows, seed);
}

int F2Complex::nnz() const {
    int s = 0;
    for (auto& v : d) s += static_cast<int>(v.size());
    return s;
}

bool F2Complex::d_squared_zero() const {
    for (int x = 0; x < n; ++x) {
        std::vector<int> acc;
        for (int y : d[x]) acc.insert(acc.end(), d[y].begin(), d[y].end());
        cancel_pairs(acc);
        if (!acc.empty()) return false;
    }
    return true;
}

std::vector<int> homology_basis(const F2Complex& C) {
    std::vector<std::vector<int>> out = C.d;
    std::vector<std::set<int>> in(C.n);
    for (int x = 0; x < C.n; ++x)
        for (int y : out[x]) in[y].insert(x);
    std::vector<char> alive(C.n, 1);
    for (int x = 0; x < C.n; ++x) {
        if (!alive[x] || out[x].empty()) continue;
        // pick the target with the fewest predecessors
        int y = -1;
        for (int t : out[x])
            if (y < 0 || in[t].size() < in[y].size()) y = t;
        const std::vector<int> dx = out[x];
        for (int w : std::vector<int>(in[y].begin(), in[y].end())) {
            if (w == x) continue;
            for (int t : out[w]) in[t].erase(w);
            std::vector<int> nw = out[w];
            nw.insert(nw.end(), dx.begin(), dx.end());
            cancel_pairs(nw);
            out[w].clear();
            for (int t : nw)
                if (t != x && t != y) out[w].push_back(t);
            for (int t : out[w]) in[t].insert(w);
        }
        for (int v : {x, y}) {
            for (int t : out[v]) in[t].erase(v);
            out[v].clear();
            for (int w : std::vector<int>(in[v].begin(), in[v].end())) {
                auto& o = out[w];
                o.erase(std::remove(o.begin(), o.end(), v), o.end());
            }
            in[v].clear();
            alive[v] = 0;
        }
    }
    std::vector<int> surv;
    for (int x = 0; x < C.n; ++x)
        if (alive[x]) surv.push_back(x);
    return surv;
}

int homology_rank(const F2Complex& C) { return static_cast<int>(homology_basis(C).size()); }

MorResult mor_complex(const DStructure& M, const DStructure& N, const MorOptions& opt) {
    const Algebra& A = M.algebra();
    if (!(A.pmc() == N.algebra().pmc())) throw InputError("Mor of structures over different algebras");
    MorResult R;
    std::unordered_map<std::uint64_t, int> index;
    const std::uint64_t na = A.size(), nn = N.size();
    auto key = [&](int x, int a, int y) { return (std::uint64_t(x) * na + a) * nn + y; };
    for (int x = 0; x < M.size(); ++x)
        for (int y = 0; y < N.size(); ++y)
            for (int a : A.between(M.idem(x), N.idem(y))) {
                index[key(x, a, y)] = static_cast<int>(R.basis.size());
                R.basis.push_back({x, a, y});
            }
    std::vector<std::vector<DStructure::Term>> into(M.size());  // z -> x arrows, stored at x
    for (int z = 0; z < M.size(); ++z)
        for (auto [m, x] : M.delta(z)) into[x].push_back({m, z});
    auto& C = R.complex;
    C.n = static_cast<int>(R.basis.size());
    C.d.assign(C.n, {});
    parallel_for(C.n, opt.jobs, [&](int i) {
        auto [x, a, y] = R.basis[i];
        std::vector<int> acc;
        auto push = [&](int xx, int aa, int yy) {
            auto it = index.find(key(xx, aa, yy));
            if (it == index.end()) throw InvariantError("Mor boundary left the basis");
            acc.push_back(it->second);
        };
        for (int d : A.diff(a)) push(x, d, y);
        for (auto [n, w] : N.delta(y)) {
            const int r = A.mult(a, n);
            if (r >= 0) push(x, r, w);
        }
        for (auto [m, z] : into[x]) {
            const int r = A.mult(m, a);
            if (r >= 0) push(z, r, y);
        }
        cancel_pairs(acc);
        C.d[i] = std::move(acc);
    });
    for (int i = 0; i < C.n; ++i) {
        auto [x, a, y] = R.basis[i];
        C.labels.push_back(M.name(x) + "|" + to_string(A.pmc(), A.gen(a)) + "|" + N.name(y));
    }
    if (opt.grading_m && opt.grading_n) {
        const auto &PM = *opt.grading_m, &PN = *opt.grading_n;
        const GradingGroup& G = PM.G;
        std::map<std::pair<int, int>, DoubleCosets> spaces;
        std::map<std::tuple<int, int, int>, int> orbit_id;
        C.orbit.resize(C.n);
        C.degree.resize(C.n);
        for (int i = 0; i < C.n; ++i) {
            auto [x, a, y] = R.basis[i];
            const int cx = PM.component[x], cy = PN.component[y];
            auto it = spaces.find({cx, cy});
            if (it == spaces.end()) it = spaces.emplace(std::pair{cx, cy}, DoubleCosets(PM.subgroups[cx], PN.subgroups[cy])).first;
            const GrElem g = gr_mul(G, gr_inv(PM.gr[x]), gr_mul(G, gr_prime(G, 0, A, a), PN.gr[y]));
            auto cls = it->second.classify(g);
            auto [oit, fresh] = orbit_id.emplace(std::tuple{cx, cy, cls.orbit}, static_cast<int>(C.period.size()));
            if (fresh) C.period.push_back(it->second.period(cls.orbit));
            C.orbit[i] = oit->second;
            C.degree[i] = cls.degree;
        }
    }
    return R;
}

DStructure mor_dd(const DDStructure& M, const DStructure& N, AlgebraPtr target, int jobs, std::vector<MorTriple>* basis_out) {
    const Algebra &A = M.left(), &B = M.right();
    if (!(A.pmc() == N.algebra().pmc())) throw InputError("Mor: DD left algebra differs from the module's");
    if (!(target->pmc() == reverse(B.pmc()))) throw InputError("Mor: target algebra must be over -Z_B");
    std::vector<int> opp(B.size(), -1);
    for (int b = 0; b < B.size(); ++b) opp[b] = target->id_of(opposite(B.pmc(), B.gen(b)));

    std::vector<MorTriple> basis;
    std::unordered_map<std::uint64_t, int> index;
    const std::uint64_t na = A.size(), nn = N.size();
    auto key = [&](int x, int a, int y) { return (std::uint64_t(x) * na + a) * nn + y; };
    DStructure R(target);
    for (int x = 0; x < M.size(); ++x) {
        Strands ib;
        ib.horiz = M.idem_right(x);
        const int tid = opp[B.id_of(ib)];
        if (tid < 0) throw InvariantError("Mor: idempotent missing from target algebra");
        const std::uint32_t tidem = target->left_idem(tid);
        for (int y = 0; y < N.size(); ++y)
            for (int a : A.between(M.idem_left(x), N.idem(y))) {
                index[key(x, a, y)] = static_cast<int>(basis.size());
                basis.push_back({x, a, y});
                R.add_generator(tidem, M.name(x) + "|" + to_string(A.pmc(), A.gen(a)) + "|" + N.name(y));
            }
    }
    std::vector<std::vector<DDStructure::Term>> into(M.size());
    for (int z = 0; z < M.size(); ++z)
        for (auto [ma, mb, x] : M.delta(z)) into[x].push_back({ma, mb, z});

    const int n = static_cast<int>(basis.size());
    std::vector<std::vector<DStructure::Term>> terms(n);
    parallel_for(n, jobs, [&](int i) {
        auto [x, a, y] = basis[i];
        Strands ib;
        ib.horiz = M.idem_right(x);
        const int one = opp[B.id_of(ib)];
        auto& acc = terms[i];
        auto push = [&](int coef, int xx, int aa, int yy) {
            auto it = index.find(key(xx, aa, yy));
            if (it == index.end()) throw InvariantError("Mor boundary left the basis");
            acc.push_back({coef, it->second});
        };
        for (int d : A.diff(a)) push(one, x, d, y);
        for (auto [nc, w] : N.delta(y)) {
            const int r = A.mult(a, nc);
            if (r >= 0) push(one, x, r, w);
        }
        for (auto [ma, mb, z] : into[x]) {
            const int r = A.mult(ma, a);
            if (r < 0) continue;
            if (opp[mb] < 0) throw InvariantError("Mor: coefficient missing from target algebra");
            push(opp[mb], z, r, y);
        }
        cancel_pairs(acc);
    });
    for (int i = 0; i < n; ++i)
        for (auto [c, t] : terms[i]) R.add_arrow(i, c, t);
    if (basis_out) *basis_out = std::move(basis);
    return R;
}

DStructure cancel(const DStructure& M, CancelStats* stats, CancelOrder order, std::vector<int>* survivors,
                  CancelRule rule) {
    const Algebra& A = M.algebra();
    const int n = M.size();
    using Term = DStructure::Term;
    std::vector<std::vector<Term>> out(n);
    std::vector<std::set<int>> in(n);
    for (int x = 0; x < n; ++x) {
        out[x] = M.delta(x);
        for (auto& t : out[x]) in[t.to].insert(x);
    }
    std::vector<char> alive(n, 1);
    int cancelled = 0;
    auto relink = [&](int w, std::vector<Term> nw) {
        for (auto& t : out[w]) in[t.to].erase(w);
        std::sort(nw.begin(), nw.end());
        out[w] = std::move(nw);
        for (auto& t : out[w]) in[t.to].insert(w);
    };
    // The pivot coefficient u = I + n (n in I.A.I without idempotent terms) is
    // invertible with u^-1 = I + n + n^2 + ..., n being nilpotent.
    auto pivot_coef = [&](int x, int y) {
        Elem u;
        for (auto& t : out[x])
            if (t.to == y) u.push_back(t.coef);
        return u;
    };
    while (true) {
        int bx = -1, by = -1;
        long best = -1;
        for (int x = 0; x < n && !(order == CancelOrder::first && bx >= 0); ++x) {
            if (!alive[x]) continue;
            for (std::size_t i = 0; i < out[x].size(); ++i) {
                const auto& t = out[x][i];
                if (t.to == x || !A.is_idempotent(t.coef)) continue;
                if (rule == CancelRule::exact_idempotent &&
                    ((i > 0 && out[x][i - 1].to == t.to) || (i + 1 < out[x].size() && out[x][i + 1].to == t.to)))
                    continue;
                const long cost = long(in[t.to].size() - 1) * long(out[x].size() - 1);
                if (bx < 0 || cost < best) bx = x, by = t.to, best = cost;
                if (order == CancelOrder::first) break;
            }
        }
        if (bx < 0) break;
        const int x = bx, y = by;
        Elem u = pivot_coef(x, y), nil, uinv, pw;
        int unit = -1;
        for (int c : u) {
            if (A.is_idempotent(c)) unit = c;
            else nil.push_back(c);
        }
        uinv = {unit};
        pw = {unit};
        while (true) {
            pw = A.mult(pw, nil);
            if (pw.empty()) break;
            add_into(uinv, pw);
        }
        std::vector<Term> rest;
        for (auto& t : out[x])
            if (t.to != y) rest.push_back(t);
        for (int w : std::vector<int>(in[y].begin(), in[y].end())) {
            if (w == x || w == y) continue;
            Elem c;
            std::vector<Term> nw;
            for (auto& t : out[w]) {
                if (t.to == y) c.push_back(t.coef);
                else nw.push_back(t);
            }
            const Elem cu = A.mult(c, uinv);
            for (auto& r : rest)
                for (int k : A.mult(cu, Elem{r.coef})) nw.push_back({k, r.to});
            cancel_pairs(nw);
            relink(w, std::move(nw));
        }
        for (int v : {x, y}) {
            relink(v, {});
            for (int w : std::vector<int>(in[v].begin(), in[v].end())) {
                std::vector<Term> nw;
                for (auto& t : out[w])
                    if (t.to != v) nw.push_back(t);
                relink(w, std::move(nw));
            }
            alive[v] = 0;
        }
        ++cancelled;
    }
    DStructure R(M.algebra_ptr());
    std::vector<int> newid(n, -1), surv;
    for (int x = 0; x < n; ++x)
        if (alive[x]) newid[x] = R.add_generator(M.idem(x), M.name(x)), surv.push_back(x);
    for (int x = 0; x < n; ++x)
        if (alive[x])
            for (auto& t : out[x]) {
                if (newid[t.to] < 0) throw InvariantError("cancel left a dangling arrow");
                R.add_arrow(newid[x], t.coef, newid[t.to]);
            }
    if (stats) *stats = {n, R.size(), cancelled};
    if (survivors) *survivors = std::move(surv);
    return R;
}

}  // namespace bfh
