#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bfh/pmc.hpp"

namespace bfh {

// F2-linear combination of basis ids, kept sorted and duplicate-free.
using Elem = std::vector<int>;

// a += b over F2 (symmetric difference of sorted lists).
void add_into(Elem& a, const Elem& b);
Elem add(const Elem& a, const Elem& b);
// Sort a list with repeats and cancel pairs.
void normalize(Elem& a);

// Basic strands diagram: moving strands plus horizontal pairs.
struct Strands {
    std::vector<std::pair<int, int>> moving;  // (start, end), sorted by start
    std::uint32_t horiz = 0;                  // pair bitmask

    bool operator==(const Strands&) const = default;
    bool operator<(const Strands& o) const {
        return moving != o.moving ? moving < o.moving : horiz < o.horiz;
    }
};

std::uint32_t left_pairs(const Pmc& z, const Strands& s);
std::uint32_t right_pairs(const Pmc& z, const Strands& s);
bool well_formed(const Pmc& z, const Strands& s);
std::vector<int> support(const Pmc& z, const Strands& s);
// Crossings among moving strands.
int moving_inversions(const Strands& s);
// Twice the Maslov component of gr'.
int iota2(const Pmc& z, const Strands& s);

// Product/differential straight from the strand rules, without a basis.
std::optional<Strands> multiply_strands(const Pmc& z, const Strands& a, const Strands& b);
std::vector<Strands> differential_strands(const Pmc& z, const Strands& a);

std::string to_string(const Pmc& z, const Strands& s);
std::string ascii_picture(const Pmc& z, const Strands& s);

// A(Z) restricted to a set of weights, with an enumerated basis. Products
// and differentials of basis elements are computed lazily and cached.
// The truncated model drops every diagram with local multiplicity >= 2.
class Algebra {
public:
    explicit Algebra(Pmc z, std::optional<int> weight = std::nullopt, bool truncated = false);

    const Pmc& pmc() const { return z_; }
    bool truncated() const { return truncated_; }
    std::optional<int> weight() const { return weight_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const Strands& gen(int id) const { return gens_[id]; }
    int id_of(const Strands& s) const;  // -1 when absent (or truncated away)

    std::uint32_t left_idem(int id) const { return lidem_[id]; }
    std::uint32_t right_idem(int id) const { return ridem_[id]; }
    bool is_idempotent(int id) const { return gens_[id].moving.empty(); }
    int idempotent(std::uint32_t pairs) const;  // -1 if outside the weights
    const std::vector<int>& idempotents() const { return idems_; }
    int weight_of(int id) const;

    // -1 encodes zero.
    int mult(int a, int b) const;
    const Elem& diff(int a) const { return diff_[a]; }
    Elem mult(const Elem& a, const Elem& b) const;
    Elem diff(const Elem& a) const;

    const std::vector<int>& supp(int id) const { return supp_[id]; }
    int iota2(int id) const { return iota2_[id]; }

    // Basis ids with a given left idempotent.
    const std::vector<int>& starting_at(std::uint32_t pairs) const;
    // Basis ids a with left_idem = i and right_idem = j.
    const std::vector<int>& between(std::uint32_t i, std::uint32_t j) const;

    // Sum over horizontal completions of a set of disjoint chords.
    Elem chords_element(const std::vector<Chord>& chords) const;
    Elem chord_element(Chord c) const { return chords_element({c}); }

private:
    std::uint64_t key(const Strands& s) const;

    Pmc z_;
    std::optional<int> weight_;
    bool truncated_ = false;
    std::vector<Strands> gens_;
    std::vector<std::uint32_t> lidem_, ridem_;
    std::vector<int> idems_;
    std::vector<std::vector<int>> supp_;
    std::vector<int> iota2_;
    std::vector<Elem> diff_;
    std::unordered_map<std::uint64_t, int> index_;
    std::unordered_map<std::uint32_t, std::vector<int>> by_left_;
    std::unordered_map<std::uint64_t, std::vector<int>> by_pair_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// All valid diagrams of the given weight (or all weights), canonical order.
std::vector<Strands> enumerate_strands(const Pmc& z, std::optional<int> weight);

// A(Z)^op -> A(-Z) through r(i) = n-1-i.
Strands opposite(const Pmc& z, const Strands& s);

// Quotient A(Z # Z0) -> A(Z) where Z occupies points [offset, offset+n(Z))
// and Z0's pairs must carry exactly the horizontals in z0_pairs.
std::optional<Strands> quotient_strands(const Pmc& big, const Strands& s, int offset, int n_small,
                                        std::uint32_t z0_pairs, const Pmc& small);

}  // namespace bfh
