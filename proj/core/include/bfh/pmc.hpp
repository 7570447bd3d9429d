#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bfh {

// Thrown for malformed user input (bad matchings, illegal slides, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an internal invariant (d^2 = 0 and friends) fails.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// Pointed matched circle. Points are 0-based internally and sit on the
// circle cut open at the basepoint, so point 0 follows z and point n-1
// precedes it. Pair ids are assigned in order of their smaller endpoint.
class Pmc {
public:
    Pmc() = default;
    // pairs[i] = {p, q}; any pair order and orientation is accepted.
    Pmc(int n_points, const std::vector<std::pair<int, int>>& pairs);

    int n_points() const { return static_cast<int>(pair_of_.size()); }
    int n_pairs() const { return static_cast<int>(pts_.size()); }
    int genus() const { return n_pairs() / 2; }

    int pair_of(int p) const { return pair_of_[p]; }
    int partner(int p) const {
        const auto& q = pts_[pair_of_[p]];
        return q[0] == p ? q[1] : q[0];
    }
    const std::array<int, 2>& points_of(int pair) const { return pts_[pair]; }

    // Surgery along every matched pair leaves a connected 1-manifold.
    bool valid() const;

    std::vector<std::pair<int, int>> matching() const;
    std::string str() const;  // 1-based, e.g. "{1,3}{2,4}"

    bool operator==(const Pmc& o) const { return pair_of_ == o.pair_of_; }

private:
    std::vector<int> pair_of_;
    std::vector<std::array<int, 2>> pts_;
};

Pmc split_pmc(int genus);
Pmc antipodal_pmc(int genus);

// Orientation reversal; point i goes to n-1-i.
Pmc reverse(const Pmc& z);
inline int reverse_point(const Pmc& z, int p) { return z.n_points() - 1 - p; }

enum class SumSide { left, right };
// left: points of a, then b. right: points of b, then a.
Pmc connected_sum(const Pmc& a, const Pmc& b, SumSide side = SumSide::left);

struct Chord {
    int start = 0, end = 0;
    bool operator==(const Chord&) const = default;
    auto operator<=>(const Chord&) const = default;
};

std::vector<Chord> all_chords(const Pmc& z);

struct ArcSlide {
    Pmc source, target;
    int b1 = 0, c1 = 0, b2 = 0, c2 = 0;
    int b1p = 0;  // position of b1' in the target
    bool over = false;
    std::vector<int> point_map;  // source point -> target point (b1 -> b1')
    std::vector<int> pair_map;   // source pair -> target pair

    int pair_b() const { return source.pair_of(b1); }
    int pair_c() const { return source.pair_of(c1); }
    // Slide of b1' over phi(c2), landing back on the source circle.
    ArcSlide inverse() const;
    std::string str() const;  // "b1 over c1", 1-based
};

ArcSlide apply_arcslide(const Pmc& z, int b1, int c1);

// Restricted chords for a slide: endpoints avoid b1 and are not matched.
std::vector<Chord> restricted_chords(const ArcSlide& s);

}  // namespace bfh
