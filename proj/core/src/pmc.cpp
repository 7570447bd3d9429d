#include "bfh/pmc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bfh {

Pmc::Pmc(int n, const std::vector<std::pair<int, int>>& pairs) {
    if (n < 0 || n % 4 != 0) throw InputError("point count must be a multiple of 4");
    if (static_cast<int>(pairs.size()) * 2 != n) throw InputError("matching is not two-to-one");
    std::vector<int> seen(n, 0);
    std::vector<std::array<int, 2>> ps;
    for (auto [p, q] : pairs) {
        if (p < 0 || q < 0 || p >= n || q >= n || p == q) throw InputError("matching point out of range");
        if (seen[p]++ || seen[q]++) throw InputError("matching is not two-to-one");
        ps.push_back({std::min(p, q), std::max(p, q)});
    }
    std::sort(ps.begin(), ps.end());
    pts_ = ps;
    pair_of_.assign(n, -1);
    for (int i = 0; i < static_cast<int>(ps.size()); ++i) pair_of_[ps[i][0]] = pair_of_[ps[i][1]] = i;
}

bool Pmc::valid() const {
    // Segment i runs from point i-1 to point i (segment 0 passes through z).
    // Surgery on {a,b} joins the segment ending at a with the one leaving b.
    const int n = n_points();
    if (n == 0) return true;
    std::vector<int> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    int comps = n;
    auto unite = [&](int a, int b) {
        a = find(a), b = find(b);
        if (a != b) uf[a] = b, --comps;
    };
    for (const auto& pq : pts_) {
        unite(pq[0], (pq[1] + 1) % n);
        unite(pq[1], (pq[0] + 1) % n);
    }
    return comps == 1;
}

std::vector<std::pair<int, int>> Pmc::matching() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& pq : pts_) out.emplace_back(pq[0], pq[1]);
    return out;
}

std::string Pmc::str() const {
    std::ostringstream os;
    for (const auto& pq : pts_) os << '{' << pq[0] + 1 << ',' << pq[1] + 1 << '}';
    return os.str();
}

Pmc split_pmc(int g) {
    std::vector<std::pair<int, int>> ps;
    for (int i = 0; i < g; ++i) {
        ps.emplace_back(4 * i, 4 * i + 2);
        ps.emplace_back(4 * i + 1, 4 * i + 3);
    }
    return Pmc(4 * std::max(g, 0), ps);
}

Pmc antipodal_pmc(int g) {
    std::vector<std::pair<int, int>> ps;
    for (int i = 0; i < 2 * g; ++i) ps.emplace_back(i, i + 2 * g);
    return Pmc(4 * std::max(g, 0), ps);
}

Pmc reverse(const Pmc& z) {
    const int n = z.n_points();
    std::vector<std::pair<int, int>> ps;
    for (auto [p, q] : z.matching()) ps.emplace_back(n - 1 - p, n - 1 - q);
    return Pmc(n, ps);
}

Pmc connected_sum(const Pmc& a, const Pmc& b, SumSide side) {
    const Pmc& first = side == SumSide::left ? a : b;
    const Pmc& second = side == SumSide::left ? b : a;
    auto ps = first.matching();
    const int off = first.n_points();
    for (auto [p, q] : second.matching()) ps.emplace_back(p + off, q + off);
    return Pmc(off + second.n_points(), ps);
}

std::vector<Chord> all_chords(const Pmc& z) {
    std::vector<Chord> out;
    for (int i = 0; i < z.n_points(); ++i)
        for (int j = i + 1; j < z.n_points(); ++j) out.push_back({i, j});
    return out;
}

ArcSlide apply_arcslide(const Pmc& z, int b1, int c1) {
    const int n = z.n_points();
    if (b1 < 0 || c1 < 0 || b1 >= n || c1 >= n) throw InputError("slide point out of range");
    if (std::abs(b1 - c1) != 1) throw InputError("b1 and c1 must be adjacent away from the basepoint");
    if (z.pair_of(b1) == z.pair_of(c1)) throw InputError("b1 and c1 are matched to each other");

    ArcSlide s;
    s.source = z;
    s.b1 = b1, s.c1 = c1, s.b2 = z.partner(b1), s.c2 = z.partner(c1);
    // b1' lands beside c2 on the side that reverses the direction b1 -> c1.
    const int lo = std::min(c1, s.c2), hi = std::max(c1, s.c2);
    s.over = b1 < lo || b1 > hi;

    std::vector<std::pair<int, int>> keys;  // doubled coordinate, source point
    for (int p = 0; p < n; ++p) {
        if (p == b1) keys.emplace_back(2 * s.c2 + (b1 < c1 ? 1 : -1), p);
        else keys.emplace_back(2 * p, p);
    }
    std::sort(keys.begin(), keys.end());
    s.point_map.assign(n, -1);
    for (int i = 0; i < n; ++i) s.point_map[keys[i].second] = i;
    s.b1p = s.point_map[b1];

    std::vector<std::pair<int, int>> ps;
    for (auto [p, q] : z.matching()) ps.emplace_back(s.point_map[p], s.point_map[q]);
    s.target = Pmc(n, ps);
    s.pair_map.assign(z.n_pairs(), -1);
    for (int i = 0; i < z.n_pairs(); ++i) s.pair_map[i] = s.target.pair_of(s.point_map[z.points_of(i)[0]]);
    return s;
}

ArcSlide ArcSlide::inverse() const { return apply_arcslide(target, b1p, point_map[c2]); }

std::string ArcSlide::str() const {
    return std::to_string(b1 + 1) + " over " + std::to_string(c1 + 1);
}

std::vector<Chord> restricted_chords(const ArcSlide& s) {
    std::vector<Chord> out;
    for (auto c : all_chords(s.source)) {
        if (c.start == s.b1 || c.end == s.b1) continue;
        if (s.source.pair_of(c.start) == s.source.pair_of(c.end)) continue;
        out.push_back(c);
    }
    return out;
}

}  // namespace bfh
