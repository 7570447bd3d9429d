#include "bfh/ainfty.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "bfh/slides.hpp"

namespace bfh {

namespace {

using Side = AInftyModule::Side;

Elem single(int x) { return {x}; }

std::string elem_str(const Elem& v, const std::function<std::string(int)>& nm) {
    if (v.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " + " : "") + nm(v[i]);
    return s;
}

}  // namespace

// ---- dg modules -------------------------------------------------------------------

int DgModule::add_generator(std::uint32_t rho_idem, std::uint32_t lambda_idem, std::string name) {
    idem_[0].push_back(rho_idem);
    idem_[1].push_back(lambda_idem);
    d_.emplace_back();
    act_[0].emplace_back();
    act_[1].emplace_back();
    if (name.empty()) name = "g" + std::to_string(names_.size());
    names_.push_back(std::move(name));
    return size() - 1;
}

void DgModule::set_action(int x, Side s, int a, Elem out) {
    const Algebra& A = *alg_[idx(s)];
    if (A.is_idempotent(a)) throw InvariantError("dg module: idempotents act as units");
    if (A.left_idem(a) != idem(x, s)) throw InvariantError("dg module: action violates idempotents");
    if (out.empty())
        act_[idx(s)][x].erase(a);
    else
        act_[idx(s)][x][a] = std::move(out);
}

Elem DgModule::act(int x, Side s, int a) const {
    const Algebra& A = *alg_[idx(s)];
    if (A.is_idempotent(a)) return A.left_idem(a) == idem(x, s) ? single(x) : Elem{};
    auto& tab = act_[idx(s)][x];
    auto it = tab.find(a);
    return it == tab.end() ? Elem{} : it->second;
}

Elem DgModule::act(const Elem& v, Side s, int a) const {
    Elem out;
    for (int x : v) add_into(out, act(x, s, a));
    return out;
}

Elem DgModule::d(const Elem& v) const {
    Elem out;
    for (int x : v) add_into(out, d_[x]);
    return out;
}

Elem DgModule::m(int x, const std::vector<int>& lambdas, const std::vector<int>& rhos) const {
    if (!lambdas.empty() && !alg_[1]) throw InputError("lambda inputs on a one-sided module");
    const std::size_t k = lambdas.size() + rhos.size();
    if (k == 0) return d_[x];
    if (k > 1) return {};
    return lambdas.empty() ? act(x, Side::rho, rhos[0]) : act(x, Side::lambda, lambdas[0]);
}

F2Complex DgModule::complex() const {
    F2Complex C;
    C.n = size();
    C.d = d_;
    C.labels = names_;
    return C;
}

std::vector<std::string> DgModule::defects(std::size_t limit) const {
    std::vector<std::string> out;
    auto nm = [&](int x) { return names_[x]; };
    auto fail = [&](std::string s) {
        if (out.size() < limit) out.push_back(std::move(s));
    };
    for (int x = 0; x < size() && out.size() < limit; ++x) {
        if (!d(d_[x]).empty()) fail("d^2 != 0 at " + names_[x]);
        for (int si = 0; si < 2; ++si) {
            if (!alg_[si]) continue;
            const Side s = si == 0 ? Side::rho : Side::lambda;
            const Algebra& A = *alg_[si];
            for (int a : A.starting_at(idem(x, s))) {
                // d(x.a) = dx.a + x.da
                Elem lhs = d(act(x, s, a));
                Elem rhs = act(d_[x], s, a);
                for (int da : A.diff(a)) add_into(rhs, act(x, s, da));
                if (lhs != rhs) fail("Leibniz fails at " + names_[x] + " . " + to_string(A.pmc(), A.gen(a)));
                // (x.a).b = x.(ab)
                for (int b : A.starting_at(A.right_idem(a))) {
                    const int ab = A.mult(a, b);
                    Elem l2 = act(act(x, s, a), s, b);
                    Elem r2 = ab < 0 ? Elem{} : act(x, s, ab);
                    if (l2 != r2)
                        fail("associativity fails at " + names_[x] + ": " + elem_str(l2, nm) + " vs " +
                             elem_str(r2, nm));
                }
            }
        }
        if (alg_[0] && alg_[1]) {
            for (int a : alg_[0]->starting_at(idem(x, Side::rho)))
                for (int b : alg_[1]->starting_at(idem(x, Side::lambda)))
                    if (act(act(x, Side::rho, a), Side::lambda, b) != act(act(x, Side::lambda, b), Side::rho, a))
                        fail("actions do not commute at " + names_[x]);
        }
    }
    return out;
}

// ---- Hom_A(DD(Id), A) ----------------------------------------------------------------

CaaIdentity caa_identity(const Pmc& z, int weight) {
    auto A = std::make_shared<const Algebra>(z, weight);
    auto Ap = std::make_shared<const Algebra>(reverse(z), -weight);
    CaaIdentity out;
    out.dd = dd_identity(A, Ap);
    const DDStructure& dd = out.dd;

    // Generators lambda.x of DD(Id) as a left A-module.
    struct ModGen {
        int lambda, x;
    };
    std::vector<ModGen> V;
    std::map<std::pair<int, int>, int> v_of;
    for (int x = 0; x < dd.size(); ++x)
        for (int mu = 0; mu < Ap->size(); ++mu)
            if (Ap->right_idem(mu) == dd.idem_right(x)) {
                v_of[{mu, x}] = static_cast<int>(V.size());
                V.push_back({mu, x});
            }

    // boundary(v) = sum a . v', stored backwards: into[v'] = {(v, a)}.
    std::vector<std::vector<std::pair<int, int>>> into(V.size());
    for (int v = 0; v < static_cast<int>(V.size()); ++v) {
        const auto [mu, x] = V[v];
        const int ix = A->idempotent(dd.idem_left(x));
        for (int dm : Ap->diff(mu)) into[v_of.at({dm, x})].push_back({v, ix});
        for (const auto& t : dd.delta(x)) {
            const int mb = Ap->mult(mu, t.b);
            if (mb < 0) continue;
            into[v_of.at({mb, t.to})].push_back({v, t.a});
        }
    }

    auto M = std::make_shared<DgModule>(A, Ap);
    std::map<std::pair<int, int>, int> id_of;  // (v, c) -> basis
    for (int v = 0; v < static_cast<int>(V.size()); ++v) {
        const auto [mu, x] = V[v];
        for (int c : A->starting_at(dd.idem_left(x))) {
            std::string nm = to_string(Ap->pmc(), Ap->gen(mu)) + "x" + std::to_string(x) + "->" +
                             to_string(A->pmc(), A->gen(c));
            id_of[{v, c}] = M->add_generator(A->right_idem(c), Ap->left_idem(mu), std::move(nm));
            out.basis.push_back({mu, x, c});
        }
    }

    for (const auto& [key, phi] : id_of) {
        const auto [v0, c] = key;
        const auto [l0, x0] = V[v0];
        Elem dphi;
        for (int dc : A->diff(c)) add_into(dphi, single(id_of.at({v0, dc})));
        for (auto [v, a] : into[v0]) {
            const int ac = A->mult(a, c);
            if (ac >= 0) add_into(dphi, single(id_of.at({v, ac})));
        }
        M->set_d(phi, std::move(dphi));

        for (int r : A->starting_at(A->right_idem(c))) {
            if (A->is_idempotent(r)) continue;
            const int cr = A->mult(c, r);
            if (cr >= 0) M->set_action(phi, Side::rho, r, single(id_of.at({v0, cr})));
        }
        // (phi . l)(mu x0) = phi(l mu x0)
        for (int l = 0; l < Ap->size(); ++l) {
            if (Ap->is_idempotent(l) || Ap->left_idem(l) != Ap->left_idem(l0)) continue;
            Elem r;
            for (int mu = 0; mu < Ap->size(); ++mu)
                if (Ap->right_idem(mu) == dd.idem_right(x0) && Ap->mult(l, mu) == l0)
                    add_into(r, single(id_of.at({v_of.at({mu, x0}), c})));
            if (!r.empty()) M->set_action(phi, Side::lambda, l, std::move(r));
        }
    }
    out.module = std::move(M);
    return out;
}

// ---- retracts ---------------------------------------------------------------------------

namespace {

// Row echelon table over F2 with a leading term given by a rank function;
// each row remembers a combination of "tags".
struct RowTable {
    const std::vector<int>* rank;
    std::unordered_map<int, std::pair<Elem, Elem>> rows;  // lead -> (vector, tags)

    int lead(const Elem& v) const {
        return *std::min_element(v.begin(), v.end(), [&](int a, int b) { return (*rank)[a] < (*rank)[b]; });
    }
    // Reduces v in place; returns the tag combination that was added.
    Elem reduce(Elem& v) const {
        Elem tags;
        while (!v.empty()) {
            auto it = rows.find(lead(v));
            if (it == rows.end()) break;
            add_into(v, it->second.first);
            add_into(tags, it->second.second);
        }
        return tags;
    }
    void insert(Elem v, Elem tags) {
        const int l = lead(v);
        rows.emplace(l, std::make_pair(std::move(v), std::move(tags)));
    }
};

}  // namespace

PerturbationData homology_retract(const DgModule& M, PivotOrder order) {
    const int n = M.size();
    std::vector<int> ord(n), rank(n);
    for (int i = 0; i < n; ++i) ord[i] = order == PivotOrder::forward ? i : n - 1 - i;
    for (int i = 0; i < n; ++i) rank[ord[i]] = i;

    // Boundaries with their preimages: image rows tagged by a chain mapping onto them.
    RowTable img{&rank, {}};
    std::vector<Elem> cycles;
    for (int x : ord) {
        Elem v = M.d(x);
        Elem pre = single(x);
        add_into(pre, img.reduce(v));
        if (v.empty())
            cycles.push_back(std::move(pre));
        else
            img.insert(std::move(v), std::move(pre));
    }

    // Cycles modulo boundaries; rows tagged by homology indices.
    RowTable zb{&rank, {}};
    for (auto& [l, row] : img.rows) zb.insert(row.first, {});
    PerturbationData p;
    for (auto& c : cycles) {
        Elem v = c;
        Elem tags = zb.reduce(v);
        if (v.empty()) continue;
        add_into(tags, single(p.n));
        zb.insert(std::move(v), std::move(tags));
        p.f.push_back(c);
        // idempotents of a homogeneous representative
        p.idem_rho.push_back(M.idem(c[0], Side::rho));
        p.idem_lambda.push_back(M.idem(c[0], Side::lambda));
        ++p.n;
    }

    p.g.resize(n);
    p.T.resize(n);
    for (int x = 0; x < n; ++x) {
        // x = h + b + c with c in span(preimages)
        Elem dx = M.d(x);
        Elem cpart = img.reduce(dx);
        if (!dx.empty()) throw InvariantError("retract: boundary not in the image table");
        Elem cyc = single(x);
        add_into(cyc, cpart);
        Elem rest = cyc;
        Elem h = zb.reduce(rest);
        if (!rest.empty()) throw InvariantError("retract: cycle not spanned");
        Elem b = cyc;
        for (int i : h) add_into(b, p.f[i]);
        Elem bb = b;
        Elem t = img.reduce(bb);
        if (!bb.empty()) throw InvariantError("retract: boundary part not in the image");
        p.g[x] = std::move(h);
        p.T[x] = std::move(t);
    }
    return p;
}

std::vector<std::string> retract_defects(const DgModule& M, const PerturbationData& p) {
    std::vector<std::string> out;
    auto lin = [](const std::vector<Elem>& map, const Elem& v) {
        Elem r;
        for (int x : v) add_into(r, map[x]);
        return r;
    };
    for (int h = 0; h < p.n; ++h) {
        if (!M.d(p.f[h]).empty()) out.push_back("f(" + std::to_string(h) + ") is not a cycle");
        if (lin(p.g, p.f[h]) != single(h)) out.push_back("g f != 1 at " + std::to_string(h));
        if (!lin(p.T, p.f[h]).empty()) out.push_back("T f != 0 at " + std::to_string(h));
    }
    for (int x = 0; x < M.size(); ++x) {
        Elem lhs = M.d(p.T[x]);
        add_into(lhs, lin(p.T, M.d(x)));
        Elem rhs = single(x);
        add_into(rhs, lin(p.f, p.g[x]));
        if (lhs != rhs) out.push_back("dT + Td != 1 + fg at " + M.name(x));
        if (!lin(p.g, p.T[x]).empty()) out.push_back("g T != 0 at " + M.name(x));
        if (!lin(p.T, p.T[x]).empty()) out.push_back("T T != 0 at " + M.name(x));
        if (!lin(p.g, M.d(x)).empty()) out.push_back("g is not a chain map at " + M.name(x));
    }
    return out;
}

// ---- minimal model -----------------------------------------------------------------------

MinimalModel::MinimalModel(std::shared_ptr<const DgModule> M, PerturbationData p) : M_(std::move(M)), p_(std::move(p)) {
    auto bad = retract_defects(*M_, p_);
    if (!bad.empty()) throw InvariantError("minimal model: " + bad.front());
}

std::string MinimalModel::name(int x) const {
    const auto& f = p_.f[x];
    if (f.size() == 1) return M_->name(f[0]);
    return "h" + std::to_string(x);
}

Elem MinimalModel::m(int x, const std::vector<int>& lambdas, const std::vector<int>& rhos) const {
    if (!lambdas.empty() && !M_->algebra(Side::lambda)) throw InputError("lambda inputs on a one-sided module");
    if (lambdas.empty() && rhos.empty()) return {};
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find({x, lambdas, rhos});
        if (it != memo_.end()) return it->second;
    }
    const int nl = static_cast<int>(lambdas.size()), nr = static_cast<int>(rhos.size());
    // R(e, i, j): paths from basis element e with lambdas[i..], rhos[j..] left.
    std::map<std::tuple<int, int, int>, Elem> memo;
    std::function<Elem(int, int, int)> R = [&](int e, int i, int j) -> Elem {
        auto key = std::make_tuple(e, i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Elem out;
        auto step = [&](const Elem& v, int i2, int j2) {
            if (v.empty()) return;
            if (i2 == nl && j2 == nr) {
                for (int u : v) add_into(out, p_.g[u]);
                return;
            }
            Elem tv;
            for (int u : v) add_into(tv, p_.T[u]);
            for (int u : tv) add_into(out, R(u, i2, j2));
        };
        if (i < nl) step(M_->act(e, Side::lambda, lambdas[i]), i + 1, j);
        if (j < nr) step(M_->act(e, Side::rho, rhos[j]), i, j + 1);
        memo.emplace(key, out);
        return out;
    };
    Elem out;
    for (int e : p_.f[x]) add_into(out, R(e, 0, 0));
    std::lock_guard lock(mu_);
    memo_.emplace(std::make_tuple(x, lambdas, rhos), out);
    return out;
}

namespace {

using Triple = std::tuple<int, int, int>;

// Shared state for tensoring a minimal model with one or two type D
// structures: F(e, w, z) = outputs of all paths from dg basis element e.
class TensorPaths {
public:
    TensorPaths(const MinimalModel& M, const DStructure* L, const DStructure& N) : M_(M), L_(L), N_(N) {}

    std::vector<Triple> terms(int x, int w, int z) {
        std::map<Triple, int> acc;
        for (int e : M_.retract().f[x])
            for (const auto& t : F(e, w, z)) acc[t] ^= 1;
        std::vector<Triple> out;
        for (auto& [t, c] : acc)
            if (c) out.push_back(t);
        return out;
    }

private:
    const std::vector<Triple>& F(int e, int w, int z) {
        const Triple key{e, w, z};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (!on_stack_.insert(key).second)
            throw BoundednessError("box tensor: operation paths loop, the product is not bounded");
        const auto& p = M_.retract();
        const DgModule& dg = M_.dg();
        std::map<Triple, int> acc;
        auto step = [&](const Elem& v, int w2, int z2) {
            if (v.empty()) return;
            for (int u : v)
                for (int h : p.g[u]) acc[{h, w2, z2}] ^= 1;
            Elem tv;
            for (int u : v) add_into(tv, p.T[u]);
            for (int u : tv)
                for (const auto& t : F(u, w2, z2)) acc[t] ^= 1;
        };
        if (L_)
            for (const auto& t : L_->delta(w)) step(dg.act(e, Side::lambda, t.coef), t.to, z);
        for (const auto& t : N_.delta(z)) step(dg.act(e, Side::rho, t.coef), w, t.to);
        on_stack_.erase(key);
        std::vector<Triple> out;
        for (auto& [t, c] : acc)
            if (c) out.push_back(t);
        return memo_.emplace(key, std::move(out)).first->second;
    }

    const MinimalModel& M_;
    const DStructure* L_;
    const DStructure& N_;
    std::map<Triple, std::vector<Triple>> memo_;
    std::set<Triple> on_stack_;
};

void check_algebras(const AInftyModule& M, const DStructure* L, const DStructure& N) {
    auto same = [](const Algebra& a, const Algebra& b) {
        return &a == &b || (a.pmc() == b.pmc() && a.weight() == b.weight() && a.truncated() == b.truncated());
    };
    if (!same(*M.algebra(Side::rho), N.algebra())) throw InputError("box tensor: rho algebra mismatch");
    if (L) {
        if (!M.algebra(Side::lambda)) throw InputError("box tensor: module has no lambda side");
        if (!same(*M.algebra(Side::lambda), L->algebra())) throw InputError("box tensor: lambda algebra mismatch");
    } else if (M.algebra(Side::lambda)) {
        throw InputError("box tensor: a bimodule needs a type D structure on each side");
    }
}

F2Complex box_impl(const AInftyModule& M, const DStructure* L, const DStructure& N, std::optional<int> depth_cap) {
    check_algebras(M, L, N);
    if (!M.max_inputs() && !is_bounded(N) && !(L && is_bounded(*L)))
        throw BoundednessError("box tensor: neither the module nor a type D side is bounded");
    const int nl = L ? L->size() : 1;
    std::map<Triple, int> index;
    F2Complex C;
    for (int v = 0; v < M.size(); ++v)
        for (int w = 0; w < nl; ++w) {
            if (L && M.idem(v, Side::lambda) != L->idem(w)) continue;
            for (int z = 0; z < N.size(); ++z) {
                if (M.idem(v, Side::rho) != N.idem(z)) continue;
                index[{v, w, z}] = C.n++;
                std::string lab = M.name(v) + "*" + N.name(z);
                if (L) lab = L->name(w) + "*" + lab;
                C.labels.push_back(std::move(lab));
            }
        }
    C.d.assign(C.n, {});

    auto emit = [&](int from, const Triple& t) {
        auto it = index.find(t);
        if (it == index.end()) throw InvariantError("box tensor: output violates idempotents");
        add_into(C.d[from], single(it->second));
    };

    if (auto* mm = dynamic_cast<const MinimalModel*>(&M)) {
        TensorPaths paths(*mm, L, N);
        for (const auto& [t, i] : index) {
            auto [v, w, z] = t;
            for (const auto& o : paths.terms(v, w, z)) emit(i, o);
        }
    } else {
        const auto bound = M.max_inputs();
        const int cap = bound ? *bound : depth_cap.value_or(10 * (M.size() + nl + N.size()));
        for (const auto& [t, i] : index) {
            auto [v, w0, z0] = t;
            std::vector<int> lam, rho;
            std::function<void(int, int)> walk = [&](int w, int z) {
                for (int o : M.m(v, lam, rho)) emit(i, {o, w, z});
                const bool more = (L && !L->delta(w).empty()) || !N.delta(z).empty();
                if (static_cast<int>(lam.size() + rho.size()) == cap) {
                    if (more && !bound) throw BoundednessError("box tensor: depth cap exceeded");
                    return;
                }
                if (L)
                    for (const auto& d : L->delta(w)) {
                        lam.push_back(d.coef);
                        walk(d.to, z);
                        lam.pop_back();
                    }
                for (const auto& d : N.delta(z)) {
                    rho.push_back(d.coef);
                    walk(w, d.to);
                    rho.pop_back();
                }
            };
            walk(w0, z0);
        }
    }
    if (!C.d_squared_zero()) throw InvariantError("box tensor: d^2 != 0");
    return C;
}

}  // namespace

bool is_bounded(const DStructure& N) {
    // Kahn's algorithm on the arrow graph.
    std::vector<int> indeg(N.size(), 0);
    for (int x = 0; x < N.size(); ++x)
        for (const auto& t : N.delta(x)) ++indeg[t.to];
    std::vector<int> stack;
    for (int x = 0; x < N.size(); ++x)
        if (!indeg[x]) stack.push_back(x);
    int seen = 0;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        ++seen;
        for (const auto& t : N.delta(x))
            if (--indeg[t.to] == 0) stack.push_back(t.to);
    }
    return seen == N.size();
}

std::vector<std::tuple<int, int, int>> MinimalModel::box_terms(int x, const DStructure* L, int w, const DStructure& N,
                                                               int z) const {
    check_algebras(*this, L, N);
    TensorPaths paths(*this, L, N);
    return paths.terms(x, w, z);
}

F2Complex box_tensor(const AInftyModule& M, const DStructure& N, std::optional<int> depth_cap) {
    return box_impl(M, nullptr, N, depth_cap);
}

F2Complex box_tensor(const AInftyModule& M, const DStructure& L, const DStructure& N, std::optional<int> depth_cap) {
    return box_impl(M, &L, N, depth_cap);
}

// ---- A-infinity relations ---------------------------------------------------------------

RelationReport check_ainfty_relations(const AInftyModule& M, int max_total) {
    RelationReport rep;
    const Algebra* alg[2] = {M.algebra(Side::rho).get(), M.algebra(Side::lambda).get()};
    auto nonunit = [](const Algebra& A, std::uint32_t from) {
        std::vector<int> r;
        for (int a : A.starting_at(from))
            if (!A.is_idempotent(a)) r.push_back(a);
        return r;
    };
    // The relation for (x, l, r):
    //   sum m(m(x, l', r'), l'', r'') + sum over adjacent products and
    //   differentials inside l and inside r = 0.
    auto relation = [&](int x, const std::vector<int>& l, const std::vector<int>& r) {
        std::map<int, int> acc;
        auto addv = [&](const Elem& v) {
            for (int u : v) acc[u] ^= 1;
        };
        for (std::size_t i = 0; i <= l.size(); ++i)
            for (std::size_t j = 0; j <= r.size(); ++j) {
                std::vector<int> l1(l.begin(), l.begin() + i), l2(l.begin() + i, l.end());
                std::vector<int> r1(r.begin(), r.begin() + j), r2(r.begin() + j, r.end());
                for (int y : M.m(x, l1, r1)) addv(M.m(y, l2, r2));
            }
        auto inner = [&](const std::vector<int>& s, const Algebra* A, bool lam) {
            for (std::size_t k = 0; k < s.size(); ++k) {
                for (int da : A->diff(s[k])) {
                    auto s2 = s;
                    s2[k] = da;
                    addv(lam ? M.m(x, s2, r) : M.m(x, l, s2));
                }
                if (k + 1 < s.size()) {
                    const int ab = A->mult(s[k], s[k + 1]);
                    if (ab < 0) continue;
                    std::vector<int> s2(s.begin(), s.begin() + k);
                    s2.push_back(ab);
                    s2.insert(s2.end(), s.begin() + k + 2, s.end());
                    addv(lam ? M.m(x, s2, r) : M.m(x, l, s2));
                }
            }
        };
        inner(l, alg[1], true);
        inner(r, alg[0], false);
        ++rep.checked;
        for (auto& [u, c] : acc)
            if (c) {
                ++rep.failed;
                if (rep.examples.size() < 8) rep.examples.push_back("relation fails at generator " + M.name(x));
                return;
            }
    };
    // Composable sequences on each side, then all pairs with total <= max_total.
    auto sequences = [&](const Algebra* A, std::uint32_t start, int maxlen) {
        std::vector<std::vector<int>> out{{}};
        if (!A) return out;
        std::function<void(std::uint32_t, std::vector<int>&)> grow = [&](std::uint32_t idem, std::vector<int>& cur) {
            if (static_cast<int>(cur.size()) == maxlen) return;
            for (int a : nonunit(*A, idem)) {
                cur.push_back(a);
                out.push_back(cur);
                grow(A->right_idem(a), cur);
                cur.pop_back();
            }
        };
        std::vector<int> cur;
        grow(start, cur);
        return out;
    };
    for (int x = 0; x < M.size(); ++x) {
        auto ls = sequences(alg[1], alg[1] ? M.idem(x, Side::lambda) : 0, max_total);
        auto rs = sequences(alg[0], M.idem(x, Side::rho), max_total);
        for (const auto& l : ls)
            for (const auto& r : rs) {
                if (l.empty() && r.empty()) continue;
                if (static_cast<int>(l.size() + r.size()) > max_total) continue;
                relation(x, l, r);
            }
    }
    return rep;
}

// ---- closed manifolds -------------------------------------------------------------------

BoxPathResult hf_hat_box(const ClosedInput& in, const PipelineOptions& opt, bool minimal) {
    if (in.start.kind != HandlebodyKind::zero_framed || in.cap.kind != HandlebodyKind::zero_framed)
        throw InputError("box path: only 0-framed handlebodies at both ends");
    if (in.start.genus != in.word.genus || in.cap.genus != in.word.genus)
        throw InputError("box path: genus mismatch");
    DStructure N = apply_slides(cfd_of(in.start, opt), expand_word(in.word, opt.handedness), opt);
    auto caa = caa_identity(split_pmc(in.word.genus), 0);
    // The cap seen from the other side: same disks, reflected circle.
    DStructure L = cfd_handlebody(caa.module->algebra(Side::lambda), DiskPair::first);
    BoxPathResult r;
    F2Complex C;
    if (minimal && (is_bounded(N) || is_bounded(L))) {
        auto p = homology_retract(*caa.module);
        MinimalModel mm(caa.module, std::move(p));
        C = box_tensor(mm, L, N);
        r.used_minimal_model = true;
    } else {
        C = box_tensor(*caa.module, L, N);
    }
    r.complex_size = C.n;
    r.rank = homology_rank(C);
    return r;
}

// ---- the path graph ------------------------------------------------------------------------

std::vector<OperationEdge> operation_graph(const MinimalModel& M) {
    const DgModule& dg = M.dg();
    std::vector<OperationEdge> out;
    for (int x = 0; x < dg.size(); ++x) {
        for (int si = 0; si < 2; ++si) {
            const Side s = si == 0 ? Side::rho : Side::lambda;
            const auto& A = dg.algebra(s);
            if (!A) continue;
            for (int a : A->starting_at(dg.idem(x, s))) {
                if (A->is_idempotent(a)) continue;
                for (int y : dg.act(x, s, a))
                    out.push_back({x, y, si == 0 ? "rho" : "lambda", to_string(A->pmc(), A->gen(a))});
            }
        }
        for (int y : M.retract().T[x]) out.push_back({x, y, "T", ""});
    }
    return out;
}

int chord_generator(const Algebra& A, const std::string& digits) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw InputError("chord name must be digits, e.g. 23");
    const int a = digits.front() - '0' - 1, b = digits.back() - '0';
    for (std::size_t i = 1; i < digits.size(); ++i)
        if (digits[i] != digits[i - 1] + 1) throw InputError("chord digits must be consecutive");
    Strands s;
    s.moving = {{a, b}};
    const int id = a >= 0 && b < A.pmc().n_points() ? A.id_of(s) : -1;
    if (id < 0) throw InputError("no generator for chord " + digits);
    return id;
}

}  // namespace bfh
