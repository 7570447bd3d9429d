#include "bfh/algebra.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace bfh {

void normalize(Elem& a) {
    std::sort(a.begin(), a.end());
    Elem out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size();) {
        std::size_t j = i;
        while (j < a.size() && a[j] == a[i]) ++j;
        if ((j - i) & 1) out.push_back(a[i]);
        i = j;
    }
    a.swap(out);
}

Elem add(const Elem& a, const Elem& b) {
    Elem out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void add_into(Elem& a, const Elem& b) {
    if (b.empty()) return;
    if (a.empty()) {
        a = b;
        return;
    }
    a = add(a, b);
}

std::uint32_t left_pairs(const Pmc& z, const Strands& s) {
    std::uint32_t m = s.horiz;
    for (auto [a, b] : s.moving) m |= 1u << z.pair_of(a);
    return m;
}

std::uint32_t right_pairs(const Pmc& z, const Strands& s) {
    std::uint32_t m = s.horiz;
    for (auto [a, b] : s.moving) m |= 1u << z.pair_of(b);
    return m;
}

bool well_formed(const Pmc& z, const Strands& s) {
    std::uint32_t sp = 0, ep = 0;
    for (auto [a, b] : s.moving) {
        if (a < 0 || b >= z.n_points() || a >= b) return false;
        const std::uint32_t pa = 1u << z.pair_of(a), pb = 1u << z.pair_of(b);
        if ((sp & pa) || (ep & pb)) return false;
        sp |= pa, ep |= pb;
    }
    if (!std::is_sorted(s.moving.begin(), s.moving.end())) return false;
    return !(s.horiz & (sp | ep));
}

std::vector<int> support(const Pmc& z, const Strands& s) {
    std::vector<int> v(std::max(z.n_points() - 1, 0), 0);
    for (auto [a, b] : s.moving)
        for (int i = a; i < b; ++i) ++v[i];
    return v;
}

int moving_inversions(const Strands& s) {
    int c = 0;
    const auto& m = s.moving;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m[i].second > m[j].second) ++c;  // starts are sorted
    return c;
}

int iota2(const Pmc& z, const Strands& s) {
    // Horizontal strands contribute crossings and initial-point multiplicity
    // that cancel exactly, so only moving strands matter.
    auto v = support(z, s);
    const int n1 = static_cast<int>(v.size());
    int m = 0;
    for (auto [a, b] : s.moving) m += (a > 0 ? v[a - 1] : 0) + (a < n1 ? v[a] : 0);
    return 2 * moving_inversions(s) - m;
}

std::optional<Strands> multiply_strands(const Pmc& z, const Strands& a, const Strands& b) {
    if (right_pairs(z, a) != left_pairs(z, b)) return std::nullopt;
    const int n = z.n_points();
    int a_end_from[32], b_start_to[32];
    std::fill(a_end_from, a_end_from + n, -1);
    std::fill(b_start_to, b_start_to + n, -1);
    for (auto [s, e] : a.moving) a_end_from[e] = s;
    for (auto [s, e] : b.moving) b_start_to[s] = e;

    struct Path { int s, m, e; };
    Path paths[32];
    int np = 0;
    for (auto [s, e] : a.moving) {
        if (b_start_to[e] >= 0) paths[np++] = {s, e, b_start_to[e]};
        else if (b.horiz >> z.pair_of(e) & 1) paths[np++] = {s, e, e};
        else return std::nullopt;  // rule 1
    }
    for (auto [s, e] : b.moving) {
        if (a_end_from[s] >= 0) continue;
        if (a.horiz >> z.pair_of(s) & 1) paths[np++] = {s, s, e};
        else return std::nullopt;  // rule 2
    }
    for (std::uint32_t h = a.horiz; h; h &= h - 1) {
        const int pr = std::countr_zero(h);
        const auto& pq = z.points_of(pr);
        if (!(b.horiz >> pr & 1) && b_start_to[pq[0]] < 0 && b_start_to[pq[1]] < 0) return std::nullopt;  // rule 3
    }
    for (std::uint32_t h = b.horiz; h; h &= h - 1) {
        const int pr = std::countr_zero(h);
        const auto& pq = z.points_of(pr);
        if (!(a.horiz >> pr & 1) && a_end_from[pq[0]] < 0 && a_end_from[pq[1]] < 0) return std::nullopt;  // rule 4
    }
    // Rule 5: two paths cross in both halves.
    for (int i = 0; i < np; ++i)
        for (int j = i + 1; j < np; ++j) {
            const bool s = paths[i].s < paths[j].s, m = paths[i].m < paths[j].m, e = paths[i].e < paths[j].e;
            if (s == e && s != m) return std::nullopt;
        }
    Strands r;
    r.horiz = a.horiz & b.horiz;
    for (int i = 0; i < np; ++i) r.moving.emplace_back(paths[i].s, paths[i].e);
    std::sort(r.moving.begin(), r.moving.end());
    return r;
}

std::vector<Strands> differential_strands(const Pmc& z, const Strands& a) {
    std::vector<Strands> out;
    const auto& mv = a.moving;
    const int inv = moving_inversions(a);
    for (std::size_t i = 0; i < mv.size(); ++i)
        for (std::size_t j = i + 1; j < mv.size(); ++j) {
            if (mv[i].second < mv[j].second) continue;
            Strands r = a;
            std::swap(r.moving[i].second, r.moving[j].second);
            if (moving_inversions(r) == inv - 1) out.push_back(std::move(r));
        }
    for (std::uint32_t h = a.horiz; h; h &= h - 1) {
        const int pr = std::countr_zero(h);
        for (int p : z.points_of(pr)) {
            int cover = 0;
            for (auto [s, e] : mv) cover += s < p && p < e;
            for (std::size_t i = 0; i < mv.size(); ++i) {
                auto [s, e] = mv[i];
                if (!(s < p && p < e)) continue;
                Strands r = a;
                r.horiz &= ~(1u << pr);
                r.moving[i].second = p;
                r.moving.emplace_back(p, e);
                std::sort(r.moving.begin(), r.moving.end());
                if (moving_inversions(r) == inv + cover - 1) out.push_back(std::move(r));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const Pmc& z, const Strands& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.moving.size(); ++i)
        os << (i ? "," : "") << s.moving[i].first + 1 << "->" << s.moving[i].second + 1;
    os << "|";
    bool first = true;
    for (int p = 0; p < z.n_pairs(); ++p)
        if (s.horiz >> p & 1) {
            const auto& pq = z.points_of(p);
            os << (first ? "" : ",") << '{' << pq[0] + 1 << ',' << pq[1] + 1 << '}';
            first = false;
        }
    os << ']';
    return os.str();
}

std::string ascii_picture(const Pmc& z, const Strands& s) {
    // One row per point, top row = highest point; '-' horizontal, '/' moving.
    std::ostringstream os;
    const int n = z.n_points();
    for (int p = n - 1; p >= 0; --p) {
        char l = ' ', r = ' ';
        for (auto [a, b] : s.moving) {
            if (a == p) l = '*';
            if (b == p) r = '*';
        }
        if (s.horiz >> z.pair_of(p) & 1) l = r = '-';
        os << (p + 1 < 10 ? " " : "") << p + 1 << ' ' << l;
        for (auto [a, b] : s.moving) os << (a < p && p < b ? '|' : (a == p || b == p ? '+' : ' '));
        os << ' ' << r << '\n';
    }
    return os.str();
}

std::vector<Strands> enumerate_strands(const Pmc& z, std::optional<int> weight) {
    const int n = z.n_points(), k = z.genus();
    std::vector<Strands> out;
    Strands cur;
    std::uint32_t ends = 0, sp = 0, ep = 0;
    auto rec = [&](auto&& self, int p) -> void {
        if (p == n) {
            const std::uint32_t free = ((z.n_pairs() >= 32 ? 0u : (1u << z.n_pairs())) - 1) & ~(sp | ep);
            for (std::uint32_t h = free;; h = (h - 1) & free) {
                const int w = static_cast<int>(cur.moving.size()) + std::popcount(h) - k;
                if (!weight || *weight == w) {
                    Strands s = cur;
                    s.horiz = h;
                    out.push_back(std::move(s));
                }
                if (!h) break;
            }
            return;
        }
        self(self, p + 1);
        const std::uint32_t pp = 1u << z.pair_of(p);
        if (sp & pp) return;
        for (int e = p + 1; e < n; ++e) {
            const std::uint32_t pe = 1u << z.pair_of(e);
            if ((ends >> e & 1) || (ep & pe)) continue;
            cur.moving.emplace_back(p, e);
            ends |= 1u << e, sp |= pp, ep |= pe;
            self(self, p + 1);
            ends &= ~(1u << e), sp &= ~pp, ep &= ~pe;
            cur.moving.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

Algebra::Algebra(Pmc z, std::optional<int> weight, bool truncated)
    : z_(std::move(z)), weight_(weight), truncated_(truncated) {
    if (z_.n_points() > 14) throw InputError("algebra supports at most 14 points (genus 3)");
    for (auto& s : enumerate_strands(z_, weight_)) {
        auto v = support(z_, s);
        if (truncated_ && std::any_of(v.begin(), v.end(), [](int x) { return x >= 2; })) continue;
        gens_.push_back(std::move(s));
    }
    const int N = size();
    lidem_.resize(N), ridem_.resize(N), supp_.resize(N), iota2_.resize(N), diff_.resize(N);
    for (int i = 0; i < N; ++i) {
        index_[key(gens_[i])] = i;
        lidem_[i] = left_pairs(z_, gens_[i]);
        ridem_[i] = right_pairs(z_, gens_[i]);
        supp_[i] = support(z_, gens_[i]);
        iota2_[i] = bfh::iota2(z_, gens_[i]);
        if (gens_[i].moving.empty()) idems_.push_back(i);
        by_left_[lidem_[i]].push_back(i);
        by_pair_[(std::uint64_t(lidem_[i]) << 32) | ridem_[i]].push_back(i);
    }
    for (int i = 0; i < N; ++i) {
        Elem d;
        for (auto& r : differential_strands(z_, gens_[i])) {
            const int j = id_of(r);
            if (j >= 0) d.push_back(j);
        }
        normalize(d);
        diff_[i] = std::move(d);
    }
}

std::uint64_t Algebra::key(const Strands& s) const {
    std::uint64_t k = 0;
    for (auto [a, b] : s.moving) k |= std::uint64_t(b + 1) << (4 * a);
    return k | (std::uint64_t(s.horiz) << 56);
}

int Algebra::id_of(const Strands& s) const {
    auto it = index_.find(key(s));
    return it == index_.end() ? -1 : it->second;
}

int Algebra::idempotent(std::uint32_t pairs) const {
    Strands s;
    s.horiz = pairs;
    return id_of(s);
}

int Algebra::weight_of(int id) const { return std::popcount(lidem_[id]) - z_.genus(); }

int Algebra::mult(int a, int b) const {
    if (ridem_[a] != lidem_[b]) return -1;
    if (gens_[a].moving.empty()) return b;
    if (gens_[b].moving.empty()) return a;
    auto r = multiply_strands(z_, gens_[a], gens_[b]);
    return r ? id_of(*r) : -1;
}

Elem Algebra::mult(const Elem& a, const Elem& b) const {
    Elem out;
    for (int x : a)
        for (int y : b) {
            const int r = mult(x, y);
            if (r >= 0) out.push_back(r);
        }
    normalize(out);
    return out;
}

Elem Algebra::diff(const Elem& a) const {
    Elem out;
    for (int x : a) out.insert(out.end(), diff_[x].begin(), diff_[x].end());
    normalize(out);
    return out;
}

const std::vector<int>& Algebra::starting_at(std::uint32_t pairs) const {
    static const std::vector<int> empty;
    auto it = by_left_.find(pairs);
    return it == by_left_.end() ? empty : it->second;
}

const std::vector<int>& Algebra::between(std::uint32_t i, std::uint32_t j) const {
    static const std::vector<int> empty;
    auto it = by_pair_.find((std::uint64_t(i) << 32) | j);
    return it == by_pair_.end() ? empty : it->second;
}

Elem Algebra::chords_element(const std::vector<Chord>& chords) const {
    Strands base;
    std::uint32_t used = 0;
    for (auto c : chords) {
        base.moving.emplace_back(c.start, c.end);
        used |= (1u << z_.pair_of(c.start)) | (1u << z_.pair_of(c.end));
    }
    std::sort(base.moving.begin(), base.moving.end());
    Elem out;
    if (!well_formed(z_, base)) return out;
    const std::uint32_t free = ((1u << z_.n_pairs()) - 1) & ~used;
    for (std::uint32_t h = free;; h = (h - 1) & free) {
        Strands s = base;
        s.horiz = h;
        const int id = id_of(s);
        if (id >= 0) out.push_back(id);
        if (!h) break;
    }
    normalize(out);
    return out;
}

Strands opposite(const Pmc& z, const Strands& s) {
    const int n = z.n_points();
    Pmc rz = reverse(z);
    Strands r;
    for (auto [a, b] : s.moving) r.moving.emplace_back(n - 1 - b, n - 1 - a);
    std::sort(r.moving.begin(), r.moving.end());
    for (std::uint32_t h = s.horiz; h; h &= h - 1) {
        const int p = z.points_of(std::countr_zero(h))[0];
        r.horiz |= 1u << rz.pair_of(n - 1 - p);
    }
    return r;
}

std::optional<Strands> quotient_strands(const Pmc& big, const Strands& s, int offset, int n_small,
                                        std::uint32_t z0_pairs, const Pmc& small) {
    auto inside = [&](int p) { return p >= offset && p < offset + n_small; };
    std::uint32_t z0h = 0;
    Strands r;
    for (std::uint32_t h = s.horiz; h; h &= h - 1) {
        const int pr = std::countr_zero(h);
        const int p = big.points_of(pr)[0];
        if (inside(p)) r.horiz |= 1u << small.pair_of(p - offset);
        else z0h |= 1u << pr;
    }
    if (z0h != z0_pairs) return std::nullopt;
    for (auto [a, b] : s.moving) {
        if (!inside(a) || !inside(b)) return std::nullopt;
        r.moving.emplace_back(a - offset, b - offset);
    }
    return r;
}

}  // namespace bfh
