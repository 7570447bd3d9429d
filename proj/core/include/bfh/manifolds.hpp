#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfh/homalg.hpp"
#include "bfh/slides.hpp"

namespace bfh {

// Type D structures of handlebodies H live over A(-dH). All words below are
// written on dH itself, numbered 1..4g along the boundary as usual; the
// pipeline works on -dH, where a slide "b over c" reads as
// "(n+1-b) over (n+1-c)". See mirror_slide().

// Which pair of each torus block of split(g) bounds a disk, on the circle the
// module lives over: the pair {4i+1, 4i+3} (first) or {4i+2, 4i+4} (second),
// 1-based.
enum class DiskPair { first, second };

// One generator occupying the disk-bounding pairs, with delta = sum of the
// chords joining them. `A` must be over split(g), weight 0.
DStructure cfd_handlebody(AlgebraPtr A, DiskPair which = DiskPair::first);

// The 0-framed split handlebody over A(-split(g), 0): the disks are the pairs
// {4i+1, 4i+3} of split(g) on the boundary, hence DiskPair::second on -dH.
DStructure cfd_zero_framed_handlebody(int genus);

// ---- words ----------------------------------------------------------------

struct WordStep {
    enum class Kind { slide, twist } kind = Kind::slide;
    int b1 = 0, c1 = 0;  // slide: 0-based points of the current circle
    int point = 0;       // twist: any 0-based point of the pair
    int power = 1;       // twist: signed power
};

struct MappingWord {
    int genus = 1;
    std::vector<WordStep> steps;
};

enum class TwistHandedness { standard, reversed };

// Each point strictly between the two points of the pair slides over the
// pair once, in turn. Negative powers use the reversed sequence of inverse
// slides; `reversed` handedness swaps the two.
std::vector<ArcSlide> dehn_twist_expand(const Pmc& z, int point, int power,
                                        TwistHandedness hand = TwistHandedness::standard);

// Composable slide sequence on the boundary circles, starting at split(genus).
std::vector<ArcSlide> expand_word(const MappingWord& w, TwistHandedness hand = TwistHandedness::standard);

// The same slide seen on the reversed circles.
ArcSlide mirror_slide(const ArcSlide& s);

// The eight slides taking the split genus-2 handlebody to the self-gluing
// handlebody of the genus-1 circle.
std::vector<WordStep> self_gluing_steps();

// ---- pipeline ---------------------------------------------------------------

enum class Reduction {
    full,   // complete cancellation (order independent)
    partial,  // only arrows whose whole coefficient is an idempotent, first found first
};

struct PipelineOptions {
    int jobs = 0;
    Reduction reduction = Reduction::full;
    CancelOrder order = CancelOrder::min_fill;  // used by Reduction::full
    SlideOptions slide;
    TwistHandedness handedness = TwistHandedness::standard;
    bool verify = true;  // d^2 = 0 at every stage
};

struct StageCount {
    std::string label;  // slide, 1-based on the boundary circle
    int before = 0, after = 0;
};

// Mor(CFDD(slide on -dH), N) followed by cancellation, for each slide (given
// on dH).
DStructure apply_slides(DStructure N, const std::vector<ArcSlide>& slides, const PipelineOptions& opt,
                        std::vector<StageCount>* stages = nullptr);

DStructure reduce(const DStructure& M, const PipelineOptions& opt, CancelStats* stats = nullptr);

// The self-gluing handlebody of z, generated by the complementary idempotent
// pairs inside A((-Z)#Z), with the symmetric chords as differential.
DStructure cfd_self_gluing(const Pmc& z);

// Genus-raising cobordism: DD(Id_Z) with the 0-framed solid torus attached,
// as a bimodule over A(Z) (x) A(-(Z # split(1))) (side = right) or
// A(-(split(1) # Z)) (side = left). Weights: 0 on both sides.
DDStructure dd_elementary_cobordism(const Pmc& z, SumSide side = SumSide::right);

// Handlebody description used at both ends of a closed computation.
enum class HandlebodyKind { zero_framed, self_gluing };

struct HandlebodySpec {
    HandlebodyKind kind = HandlebodyKind::zero_framed;
    int genus = 1;  // self_gluing: genus of the glued surface (must be 2)
};

// CFD of a handlebody, plus the stages used to build it.
DStructure cfd_of(const HandlebodySpec& h, const PipelineOptions& opt, std::vector<StageCount>* stages = nullptr);

// Bordered computation: start handlebody, then for each block a word followed
// by `raises[i]` genus-raising cobordisms (attached on the right).
struct BorderedBlock {
    std::vector<WordStep> steps;  // on the current boundary circle
    int raises = 0;
};
DStructure cfd_bordered(const HandlebodySpec& start, const std::vector<BorderedBlock>& blocks,
                        const PipelineOptions& opt, std::vector<StageCount>* stages = nullptr);

struct SpincSummary {
    std::int64_t period = 0;  // in lambda units; 0 = Z-graded
    int rank = 0;
    std::map<std::int64_t, int> maslov;  // relative degree -> rank
};

struct ClosedInput {
    HandlebodySpec start, cap;
    MappingWord word;
};

struct ClosedResult {
    int total_rank = 0;
    int complex_size = 0;
    std::vector<SpincSummary> orbits;  // only orbits carrying homology
    std::vector<StageCount> start_stages, cap_stages, word_stages;
};

// HF-hat of cap \cup word \cup start, as Mor(CFD(cap), CFD(word . start)).
ClosedResult hf_hat_closed(const ClosedInput& in, const PipelineOptions& opt = {});

// Homology of a graded Mor complex, split by lambda-orbit.
std::vector<SpincSummary> spinc_maslov(const F2Complex& C);

// Presets: poincare, self-gluing-g1, s1xs2-g1, s1xs2-g2.
std::optional<ClosedInput> preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace bfh
