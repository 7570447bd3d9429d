#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfh/algebra.hpp"
#include "bfh/lattice.hpp"

namespace bfh {

// G'(Z_1) x ... x G'(Z_m) with the lambda factors identified: one Maslov
// component and one multiplicity vector per circle. Maslov components are
// stored doubled (J = 2j), so lambda = (2; 0).
class GradingGroup {
public:
    GradingGroup() = default;
    explicit GradingGroup(std::vector<int> point_counts);

    int components() const { return static_cast<int>(npts_.size()); }
    int width() const { return width_; }  // total number of intervals
    int offset(int c) const { return off_[c]; }
    int points(int c) const { return npts_[c]; }

    // Twice m(b, boundary a), summed over components.
    std::int64_t twisted(const IVec& a, const IVec& b) const;
    // Twice epsilon(alpha) modulo 2, used by the congruence check.
    int eps2(const IVec& a) const;

    bool operator==(const GradingGroup&) const = default;

private:
    std::vector<int> npts_, off_;
    int width_ = 0;
};

struct GrElem {
    std::int64_t J = 0;
    IVec alpha;

    bool operator==(const GrElem&) const = default;
    bool operator<(const GrElem& o) const { return J != o.J ? J < o.J : alpha < o.alpha; }
};

GrElem gr_identity(const GradingGroup& G);
GrElem gr_lambda(const GradingGroup& G, std::int64_t power = 1);
GrElem gr_mul(const GradingGroup& G, const GrElem& a, const GrElem& b);
GrElem gr_inv(const GrElem& a);
GrElem gr_pow(const GrElem& a, std::int64_t n);
bool gr_congruent(const GradingGroup& G, const GrElem& a);
std::string to_string(const GrElem& g);

// gr' of a basic generator, placed in component `comp` of G.
GrElem gr_prime(const GradingGroup& G, int comp, const Algebra& A, int id);
// gr' of a tensor a (x) b with a in component ca and b in component cb.
GrElem gr_prime2(const GradingGroup& G, const Algebra& A, int a, const Algebra& B, int b);

// Subgroup of G generated by finitely many elements.
class Subgroup {
public:
    Subgroup() = default;
    Subgroup(const GradingGroup& G, std::vector<GrElem> gens);

    const GradingGroup& group() const { return G_; }
    const std::vector<GrElem>& generators() const { return gens_; }
    // Doubled: lambda^t lies in the subgroup iff 2t is a multiple of this.
    std::int64_t central_period() const { return lam_; }
    bool lambda_free() const { return lam_ == 0; }
    const Echelon& lattice() const { return *ech_; }
    std::vector<IVec> lattice_basis() const;

    // Some element of the subgroup with the given alpha, if one exists.
    std::optional<GrElem> element_with(const IVec& alpha) const;
    bool contains(const GrElem& g) const;
    // g1 H == g2 H
    bool same_coset(const GrElem& g1, const GrElem& g2) const;

private:
    GrElem word(const IVec& exps) const;  // ordered product of basis powers

    GradingGroup G_;
    std::vector<GrElem> gens_, basis_;
    std::optional<Echelon> ech_;
    std::int64_t lam_ = 0;
};

// One arrow of a differential: delta(from) contains (coefficient) (x) to.
struct GradedArrow {
    int from = 0, to = 0;
    GrElem coef;  // gr' of the algebra coefficient
};

// Grading of a structure by propagation along a spanning forest: each
// generator gets a representative g_x with g_from = lambda . coef . g_to on
// tree arrows; every other arrow contributes (lambda coef g_to)^-1 g_from to
// its component's subgroup.
struct Propagation {
    GradingGroup G;
    std::vector<GrElem> gr;
    std::vector<int> component;
    std::vector<Subgroup> subgroups;  // one per component
    int n_components() const { return static_cast<int>(subgroups.size()); }
    // lambda^t-shift of g_x relative to lambda.coef.g_to, if in the same coset up to lambda.
    std::optional<std::int64_t> arrow_defect(const GradedArrow& a) const;
};

Propagation propagate(const GradingGroup& G, int n, const std::vector<GradedArrow>& arrows, std::uint64_t seed = 0);

// Degrees in a double coset space H_L \ G / H_R relative to lambda. Elements
// that differ by lambda^t sit in the same orbit with degree difference t
// (modulo period()).
class DoubleCosets {
public:
    DoubleCosets(Subgroup left, Subgroup right);

    struct Class {
        int orbit = 0;
        std::int64_t degree = 0;  // reduced mod period of that orbit when nonzero
    };
    // Classify; a previously unseen orbit gets g as its base (degree 0).
    Class classify(const GrElem& g);
    std::int64_t period(int orbit) const { return orbits_[orbit].period; }
    int n_orbits() const { return static_cast<int>(orbits_.size()); }

private:
    struct Orbit {
        IVec key;
        GrElem base;
        std::int64_t period = 0;  // in lambda units
    };
    std::int64_t period_for(const GrElem& base) const;

    Subgroup L_, R_;
    GradingGroup G_;
    std::optional<Echelon> sum_;  // L_L + L_R, rows [L basis; R basis]
    int nl_ = 0;
    std::vector<IVec> inter_;
    std::vector<Orbit> orbits_;
};

}  // namespace bfh
