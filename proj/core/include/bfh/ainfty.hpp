#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bfh/homalg.hpp"
#include "bfh/manifolds.hpp"

namespace bfh {

// Raised when a box tensor product would need an infinite sum.
struct BoundednessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Right A-infinity modules over one algebra (rho side) or bimodules with two
// commuting right actions (rho side over A, lambda side over A'). Operations
// are m(x, lambdas, rhos) = m_{1,|lambdas|,|rhos|}; with no lambda algebra
// only the rho inputs are used.
class AInftyModule {
public:
    enum class Side { rho, lambda };

    virtual ~AInftyModule() = default;
    virtual int size() const = 0;
    virtual const AlgebraPtr& algebra(Side s) const = 0;  // lambda side may be null
    virtual std::uint32_t idem(int x, Side s) const = 0;
    virtual std::string name(int x) const { return std::to_string(x); }
    virtual Elem m(int x, const std::vector<int>& lambdas, const std::vector<int>& rhos) const = 0;
    // Largest total number of algebra inputs with a nonzero operation, if known.
    virtual std::optional<int> max_inputs() const { return std::nullopt; }
};

// dg module: m_1 plus single-input actions on each side.
class DgModule final : public AInftyModule {
public:
    DgModule(AlgebraPtr rho, AlgebraPtr lambda) : alg_{std::move(rho), std::move(lambda)} {}

    int add_generator(std::uint32_t rho_idem, std::uint32_t lambda_idem, std::string name = {});
    void set_d(int x, Elem dx) { d_[x] = std::move(dx); }
    void set_action(int x, Side s, int a, Elem out);

    int size() const override { return static_cast<int>(names_.size()); }
    const AlgebraPtr& algebra(Side s) const override { return alg_[idx(s)]; }
    std::uint32_t idem(int x, Side s) const override { return idem_[idx(s)][x]; }
    std::string name(int x) const override { return names_[x]; }
    Elem m(int x, const std::vector<int>& lambdas, const std::vector<int>& rhos) const override;
    std::optional<int> max_inputs() const override { return 1; }

    const Elem& d(int x) const { return d_[x]; }
    // x . a, with strict unit behaviour for idempotents.
    Elem act(int x, Side s, int a) const;
    Elem act(const Elem& v, Side s, int a) const;
    Elem d(const Elem& v) const;
    F2Complex complex() const;
    // d^2 = 0, Leibniz for both actions, associativity and commutation of the
    // actions; empty iff everything holds.
    std::vector<std::string> defects(std::size_t limit = 8) const;

private:
    static int idx(Side s) { return s == Side::rho ? 0 : 1; }
    AlgebraPtr alg_[2];
    std::vector<std::uint32_t> idem_[2];
    std::vector<Elem> d_;
    std::vector<std::map<int, Elem>> act_[2];
    std::vector<std::string> names_;
};

// Hom_A(DD(Id), A): the dg model of the type AA identity bimodule, with rho
// acting through A and lambda through A' = A(-Z). Weight w on A, -w on A'.
// Basis element (lambda, x, c) sends lambda.x to c and every other module
// generator to 0.
struct CaaIdentity {
    std::shared_ptr<DgModule> module;
    DDStructure dd;
    struct Basis {
        int lambda, x, c;
    };
    std::vector<Basis> basis;
};
CaaIdentity caa_identity(const Pmc& z, int weight = 0);

// f: N -> M, g: M -> N, T: M -> M for a retract N of a dg module M with
// N's differential zero (N = homology).
struct PerturbationData {
    int n = 0;               // dimension of N
    std::vector<Elem> f;     // f[h] in M
    std::vector<Elem> g;     // g[x] in N
    std::vector<Elem> T;     // T[x] in M
    std::vector<std::uint32_t> idem_rho, idem_lambda;  // of the N generators
};

enum class PivotOrder { forward, reverse };
// Greedy elimination: generators are visited in the given order, each one
// either becomes the partner of a new boundary or lands in the kernel;
// homology representatives are chosen among kernel vectors in the same order.
PerturbationData homology_retract(const DgModule& M, PivotOrder order = PivotOrder::forward);
// g f = 1, dT + Td = 1 + fg, and the side conditions Tf = gT = TT = 0.
std::vector<std::string> retract_defects(const DgModule& M, const PerturbationData& p);

// Operations transferred to N through alternating (action, T) paths, summed
// over all interleavings of the lambda and rho inputs. Lazy and memoized.
class MinimalModel final : public AInftyModule {
public:
    // Throws InvariantError if the retract identities fail.
    MinimalModel(std::shared_ptr<const DgModule> M, PerturbationData p);

    int size() const override { return p_.n; }
    const AlgebraPtr& algebra(Side s) const override { return M_->algebra(s); }
    std::uint32_t idem(int x, Side s) const override {
        return s == Side::rho ? p_.idem_rho[x] : p_.idem_lambda[x];
    }
    std::string name(int x) const override;
    Elem m(int x, const std::vector<int>& lambdas, const std::vector<int>& rhos) const override;

    const DgModule& dg() const { return *M_; }
    const PerturbationData& retract() const { return p_; }

    // Tensor terms of x (x) w (x) z: all outputs (x', w', z') of
    // m(x, lambdas, rhos) with lambdas read along delta from w in L and rhos
    // along delta from z in N. Throws BoundednessError if a path can loop.
    std::vector<std::tuple<int, int, int>> box_terms(int x, const DStructure* L, int w, const DStructure& N,
                                                     int z) const;

private:
    std::shared_ptr<const DgModule> M_;
    PerturbationData p_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<int, std::vector<int>, std::vector<int>>, Elem> memo_;
};

// Sampled A-infinity relations, exhaustive over basic non-idempotent inputs
// with at most `max_total` algebra elements. Returns the number of failing
// (x, lambdas, rhos).
struct RelationReport {
    long checked = 0, failed = 0;
    std::vector<std::string> examples;
};
RelationReport check_ainfty_relations(const AInftyModule& M, int max_total);

// No directed cycle of delta arrows (so iterated delta is eventually zero).
bool is_bounded(const DStructure& N);

// Box tensor products into a chain complex. For a one-sided module L is
// ignored. For a bimodule L is a type D structure over the lambda algebra and
// N one over the rho algebra. Generators whose idempotents do not match are
// dropped. Unless M has bounded operations, at least one of the type D
// structures must be bounded; otherwise BoundednessError. `depth_cap` bounds
// the number of algebra inputs for a generic module (default 10 * total
// generator count).
F2Complex box_tensor(const AInftyModule& M, const DStructure& N, std::optional<int> depth_cap = std::nullopt);
F2Complex box_tensor(const AInftyModule& M, const DStructure& L, const DStructure& N,
                     std::optional<int> depth_cap = std::nullopt);

// HF-hat of a closed manifold through box tensor products instead of Mor:
// CFD(cap mirrored) (x) CFAA(Id) (x) CFD(word . start). Both ends must be
// 0-framed split handlebodies. The dg model is used unless `minimal` is set
// and one side is bounded.
struct BoxPathResult {
    int rank = 0;
    int complex_size = 0;
    bool used_minimal_model = false;
};
BoxPathResult hf_hat_box(const ClosedInput& in, const PipelineOptions& opt = {}, bool minimal = false);

// Edges of the path graph used by the minimal model: action edges (label =
// algebra element) and T edges, between basis elements of the dg module.
struct OperationEdge {
    int from = 0, to = 0;
    std::string kind;   // "rho", "lambda" or "T"
    std::string label;  // algebra element for action edges
};
std::vector<OperationEdge> operation_graph(const MinimalModel& M);

// The one-strand generator named like rho_23: digits i..j stand for the chord
// from point i-1 to point j (0-based). No horizontal strands, so this is
// meant for one-strand algebras (genus 1, weight 0). Throws if absent.
int chord_generator(const Algebra& A, const std::string& digits);

}  // namespace bfh
