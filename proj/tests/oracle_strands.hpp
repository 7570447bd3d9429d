#pragma once
// Independent model of A(Z) inside the plain strands algebra A(n): a basic
// generator with h horizontal pairs is the sum of its 2^h completions that
// pick one horizontal strand per pair. Products and differentials are taken
// in A(n) (partial permutations, inversion counting) and collapsed back.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bfh/algebra.hpp"

namespace oracle {

// start -> end over all strands, horizontals included.
using Perm = std::map<int, int>;

inline std::vector<Perm> expand(const bfh::Pmc& z, const bfh::Strands& s) {
    Perm base;
    for (auto [a, b] : s.moving) base[a] = b;
    std::vector<Perm> out{base};
    for (int pr = 0; pr < z.n_pairs(); ++pr) {
        if (!(s.horiz >> pr & 1)) continue;
        std::vector<Perm> next;
        for (auto& p : out)
            for (int q : z.points_of(pr)) {
                Perm c = p;
                c[q] = q;
                next.push_back(c);
            }
        out.swap(next);
    }
    return out;
}

inline int inv(const Perm& f) {
    int c = 0;
    for (auto i = f.begin(); i != f.end(); ++i)
        for (auto j = std::next(i); j != f.end(); ++j)
            if (i->second > j->second) ++c;
    return c;
}

inline std::optional<Perm> mult(const Perm& f, const Perm& g) {
    std::set<int> ends, starts;
    for (auto& [a, b] : f) ends.insert(b);
    for (auto& [a, b] : g) starts.insert(a);
    if (ends != starts) return std::nullopt;
    Perm h;
    for (auto& [a, b] : f) h[a] = g.at(b);
    if (inv(h) != inv(f) + inv(g)) return std::nullopt;
    return h;
}

inline std::vector<Perm> diff(const Perm& f) {
    std::vector<Perm> out;
    const int i0 = inv(f);
    for (auto i = f.begin(); i != f.end(); ++i)
        for (auto j = std::next(i); j != f.end(); ++j) {
            if (i->second < j->second) continue;
            Perm h = f;
            std::swap(h[i->first], h[j->first]);
            if (inv(h) == i0 - 1) out.push_back(h);
        }
    return out;
}

// Collapse an F2 sum of A(n) diagrams to A(Z) generators. Returns nullopt if
// the sum is not a union of complete expansions (would be a model error).
inline std::optional<std::vector<bfh::Strands>> collapse(const bfh::Pmc& z, const std::vector<Perm>& terms) {
    std::map<Perm, int> cnt;
    for (auto& t : terms) cnt[t] ^= 1;
    std::set<Perm> live;
    for (auto& [p, c] : cnt)
        if (c) live.insert(p);
    std::vector<bfh::Strands> out;
    std::set<Perm> used;
    for (auto& p : live) {
        if (used.count(p)) continue;
        bfh::Strands s;
        for (auto& [a, b] : p) {
            if (a == b) s.horiz |= 1u << z.pair_of(a);
            else s.moving.emplace_back(a, b);
        }
        if (!bfh::well_formed(z, s)) return std::nullopt;
        for (auto& q : expand(z, s)) {
            if (!live.count(q)) return std::nullopt;
            used.insert(q);
        }
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::optional<std::vector<bfh::Strands>> product(const bfh::Pmc& z, const bfh::Strands& a, const bfh::Strands& b) {
    std::vector<Perm> terms;
    for (auto& f : expand(z, a))
        for (auto& g : expand(z, b))
            if (auto h = mult(f, g)) terms.push_back(*h);
    return collapse(z, terms);
}

inline std::optional<std::vector<bfh::Strands>> differential(const bfh::Pmc& z, const bfh::Strands& a) {
    std::vector<Perm> terms;
    for (auto& f : expand(z, a))
        for (auto& h : diff(f)) terms.push_back(h);
    return collapse(z, terms);
}

}  // namespace oracle
