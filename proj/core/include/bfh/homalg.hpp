#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bfh/algebra.hpp"
#include "bfh/grading.hpp"

namespace bfh {

// Type D structure over A: generators with idempotents (pair masks) and
// delta^1(x) = sum a (x) y stored as basic (coefficient, target) terms.
class DStructure {
public:
    struct Term {
        int coef, to;
        bool operator==(const Term&) const = default;
        bool operator<(const Term& o) const { return to != o.to ? to < o.to : coef < o.coef; }
    };

    DStructure() = default;
    explicit DStructure(AlgebraPtr a) : alg_(std::move(a)) {}

    const Algebra& algebra() const { return *alg_; }
    const AlgebraPtr& algebra_ptr() const { return alg_; }
    int size() const { return static_cast<int>(idem_.size()); }
    std::uint32_t idem(int x) const { return idem_[x]; }
    const std::vector<Term>& delta(int x) const { return delta_[x]; }
    const std::string& name(int x) const { return names_[x]; }
    int arrow_count() const;

    int add_generator(std::uint32_t idem, std::string name = {});
    // Toggles a term (F2); throws if the idempotents do not match.
    void add_arrow(int from, int coef, int to);
    void add_arrows(int from, const Elem& coef, int to);
    void clear_arrows(int x) { delta_[x].clear(); }

private:
    AlgebraPtr alg_;
    std::vector<std::uint32_t> idem_;
    std::vector<std::vector<Term>> delta_;
    std::vector<std::string> names_;
};

// Type DD structure over A (x) B in the left-left convention.
class DDStructure {
public:
    struct Term {
        int a, b, to;
        bool operator==(const Term&) const = default;
        bool operator<(const Term& o) const {
            return to != o.to ? to < o.to : (a != o.a ? a < o.a : b < o.b);
        }
    };

    DDStructure() = default;
    DDStructure(AlgebraPtr a, AlgebraPtr b) : a_(std::move(a)), b_(std::move(b)) {}

    const Algebra& left() const { return *a_; }
    const Algebra& right() const { return *b_; }
    const AlgebraPtr& left_ptr() const { return a_; }
    const AlgebraPtr& right_ptr() const { return b_; }
    int size() const { return static_cast<int>(ia_.size()); }
    std::uint32_t idem_left(int x) const { return ia_[x]; }
    std::uint32_t idem_right(int x) const { return ib_[x]; }
    const std::vector<Term>& delta(int x) const { return delta_[x]; }
    const std::string& name(int x) const { return names_[x]; }
    int arrow_count() const;

    int add_generator(std::uint32_t ia, std::uint32_t ib, std::string name = {});
    void add_arrow(int from, int a, int b, int to);
    void remove_arrow(int from, int a, int b, int to);
    bool has_arrow(int from, int a, int b, int to) const;

private:
    AlgebraPtr a_, b_;
    std::vector<std::uint32_t> ia_, ib_;
    std::vector<std::vector<Term>> delta_;
    std::vector<std::string> names_;
};

// (mu_2 (x) 1)(1 (x) delta) delta + (mu_1 (x) 1) delta, as a list of
// nonvanishing (source, coefficient-summary) failures; empty iff d^2 = 0.
std::vector<std::string> d_squared_defects(const DStructure& M, std::size_t limit = 8);
std::vector<std::string> d_squared_defects(const DDStructure& M, std::size_t limit = 8);
inline bool verify_d_squared(const DStructure& M) { return d_squared_defects(M, 1).empty(); }
inline bool verify_d_squared(const DDStructure& M) { return d_squared_defects(M, 1).empty(); }

// Intrinsic gradings (propagation along delta arrows).
Propagation grade(const DStructure& M, std::uint64_t seed = 0);
Propagation grade(const DDStructure& M, std::uint64_t seed = 0);

// Chain complex over F2 with optional (orbit, degree) labels.
struct F2Complex {
    int n = 0;
    std::vector<std::vector<int>> d;  // d[x] = sorted targets
    std::vector<int> orbit;           // empty when ungraded
    std::vector<std::int64_t> degree;
    std::vector<std::int64_t> period;  // per orbit, 0 = Z-graded
    std::vector<std::string> labels;

    int nnz() const;
    bool d_squared_zero() const;
};

// Homology by cancellation; returns surviving basis indices.
std::vector<int> homology_basis(const F2Complex& C);
int homology_rank(const F2Complex& C);

struct MorTriple {
    int x, a, y;
};

// Mor_A(M, N) for type D structures over the same algebra.
struct MorResult {
    F2Complex complex;
    std::vector<MorTriple> basis;
};
struct MorOptions {
    int jobs = 0;  // 0 = hardware concurrency
    const Propagation* grading_m = nullptr;
    const Propagation* grading_n = nullptr;
};
MorResult mor_complex(const DStructure& M, const DStructure& N, const MorOptions& opt = {});

// Mor_A(M, N) for M a DD structure over A (x) B and N a type D structure over
// A: a type D structure over B^op, returned over `target` = A(-Z_B) via the
// orientation-reversal isomorphism.
DStructure mor_dd(const DDStructure& M, const DStructure& N, AlgebraPtr target, int jobs = 0,
                  std::vector<MorTriple>* basis = nullptr);

struct CancelStats {
    int before = 0, after = 0, cancelled = 0;
};
enum class CancelOrder { min_fill, first };
// full: an arrow x -> y may be cancelled whenever its coefficient contains the
// idempotent (the rest is nilpotent). exact_idempotent: only when the whole
// x -> y coefficient is the idempotent; stops short of a reduced model.
enum class CancelRule { full, exact_idempotent };
// Reduction by cancelling idempotent-coefficient arrows.
DStructure cancel(const DStructure& M, CancelStats* stats = nullptr, CancelOrder order = CancelOrder::min_fill,
                  std::vector<int>* survivors = nullptr, CancelRule rule = CancelRule::full);

// Shared worker pool helper: fn(i) for i in [0, n).
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace bfh
