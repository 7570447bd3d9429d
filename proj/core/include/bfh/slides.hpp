#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bfh/homalg.hpp"
#include "bfh/pmc.hpp"

namespace bfh {

// Type DD identity bimodule over A(Z, i) (x) A(-Z, -i). `left` must be over Z
// and `right` over reverse(Z).
DDStructure dd_identity(AlgebraPtr left, AlgebraPtr right);

// ---- arc-slide bimodules -------------------------------------------------

// Bookkeeping of restricted supports. The points of Z \ {b1} and of
// Z' \ {b1'} are identified in order; a "gap" is an interval between two
// consecutive such points, so there are n-2 gaps. sigma (between b1 and c1)
// and sigma' (between c2' and b1') are the regions that get dropped.
struct SlideGeometry {
    ArcSlide slide;
    int n = 0;
    std::vector<int> gap_left;   // interval of Z  -> gap, -1 for sigma
    std::vector<int> gap_right;  // interval of Z' -> gap, -1 for sigma'
    int sigma = -1, sigmap = -1;  // interval indices (in Z and Z'), -1 if absent
    Chord sigma_chord, sigmap_chord;  // in Z and in Z'
    std::vector<int> c_gaps;          // gaps strictly between c1 and c2

    explicit SlideGeometry(const ArcSlide& s);
    int n_gaps() const { return n - 2; }
    // Restricted support of a basic generator of A(Z).
    std::vector<int> restricted_left(const Pmc& z, const Strands& a) const;
    // Same for a basic generator of A(-Z'), read through Z'.
    std::vector<int> restricted_right(const Pmc& rzp, const Strands& b) const;
    int sigma_left(const Pmc& z, const Strands& a) const;     // multiplicity at sigma
    int sigma_right(const Pmc& rzp, const Strands& b) const;  // multiplicity at sigma'
    // Chord of -Z' corresponding to a chord of Z avoiding b1.
    Chord to_right(Chord xi) const;
};

enum class NearChordKind {
    U1, U2, U3, U4, U5, U6,
    O1, O2, O3, O4, O5, O6, O7, O8,
    Unknown
};
std::string to_string(NearChordKind k);

struct NearChord {
    int from = 0, to = 0;  // generators of the bimodule
    int a = 0, b = 0;      // basic coefficients in A(Z) and A(-Z')
    NearChordKind kind = NearChordKind::Unknown;
    bool indeterminate = false;
    bool operator==(const NearChord& o) const { return from == o.from && to == o.to && a == o.a && b == o.b; }
    bool operator<(const NearChord& o) const {
        return std::tie(from, to, a, b) < std::tie(o.from, o.to, o.a, o.b);
    }
};

// Basic element I (a (x) b) J of the near-diagonal subalgebra between two
// near-complementary generators.
struct NdElement {
    int from = 0, to = 0, a = 0, b = 0;
    int level = 0;      // total restricted multiplicity
    int sig_l = 0, sig_r = 0;  // multiplicities at sigma / sigma'
    int strands_l = 0, strands_r = 0;
    bool is_short = false;
    int degree = 0;                  // near-diagonal grading (short near-chords: -1)
    std::optional<int> prop_degree;  // same, by propagation from short near-chords
};

// Generators and the whole near-diagonal subalgebra between them, graded by
// propagating from the short near-chords.
struct NearDiagonal {
    ArcSlide slide;
    AlgebraPtr left, right;
    SlideGeometry geo;
    std::vector<std::uint32_t> gen_s, gen_t;
    std::vector<char> is_y;
    std::vector<NdElement> elems;
    int grading_components = 0;      // of the short near-chord graph
    std::int64_t lambda_period = 0;  // 0 = lambda-free
    int formula_mismatches = 0;      // elements where the two gradings disagree

    NearDiagonal(const ArcSlide& s, AlgebraPtr l, AlgebraPtr r);
    int generator(std::uint32_t S, std::uint32_t T) const;
    NearChord as_chord(const NdElement& e) const { return {e.from, e.to, e.a, e.b}; }
    // Restricted support = [c2,c1] with one moving strand on each side.
    bool c_interval_pair(const NdElement& e) const;

private:
    int closed_form_degree(const NdElement& e) const;
};

struct SlideBimodule {
    DDStructure dd;
    std::vector<NearChord> near_chords;  // grading -1 candidates
    std::vector<char> used;              // parallel to near_chords
    std::vector<char> is_y;              // per generator: type Y (else X)
    int solver_unknowns = 0, solver_free = 0, solver_other_free = 0;
    int stabilized_genus = 0;  // genus the differential was solved in
};

struct SlideOptions {
    // For over-slides: flip the basic choice (for gauge-independence checks).
    bool alternate_basic_choice = false;
    // Solve in the given weight without stabilizing first.
    bool no_stabilize = false;
    // Stabilize by this many more genus-1 summands than needed.
    int extra_genus = 0;
};

// `left` is A(Z, i), `right` is A(-Z', -i) (or both unrestricted).
SlideBimodule arcslide_dd(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right, const SlideOptions& opt = {});

// Every basic near-diagonal generator of grading -1.
struct NearDiagonalScan {
    std::vector<NearChord> grading_minus_one;
    int elements_scanned = 0;
    int positive = 0;       // elements of positive grading (expected none)
    int zero_non_idem = 0;  // grading 0 elements that are not idempotents
    bool consistent = true;  // everything graded, one component, lambda-free
};
NearDiagonalScan scan_near_diagonal(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right);

// Syntactic enumeration of near-chords by type.
std::vector<NearChord> enumerate_near_chords(const ArcSlide& s, AlgebraPtr left, AlgebraPtr right);

// ---- mod-2 grading of mapping classes -------------------------------------

// psi_* on H_1(F(Z)) in the basis of matched pairs, as an integer matrix
// M[target pair][source pair] (target pairs are those of the slide's target).
std::vector<IVec> slide_homology_action(const ArcSlide& s);

struct Mod2Small {
    int m = 0;
    IVec a;
    bool operator==(const Mod2Small&) const = default;
};
// xi_psi for a composable word of slides.
Mod2Small xi_psi(const std::vector<ArcSlide>& word, const Mod2Small& x);

}  // namespace bfh
