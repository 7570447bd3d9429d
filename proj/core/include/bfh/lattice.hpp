#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace bfh {

using IVec = std::vector<std::int64_t>;

// Row-echelon form over Z of a list of equal-length rows, with the unimodular
// transform recorded: rows()[i] = sum_j transform()[i][j] * input[j]. Rows of
// the transform past rank() span the integer kernel of the input.
class Echelon {
public:
    Echelon(const std::vector<IVec>& rows, int width);

    int rank() const { return rank_; }
    int width() const { return width_; }
    const std::vector<IVec>& rows() const { return rows_; }
    const std::vector<IVec>& transform() const { return u_; }
    const std::vector<int>& pivots() const { return piv_; }
    std::vector<IVec> kernel() const;

    // Coefficients y with sum_i y_i rows()[i] == v, if v lies in the span.
    std::optional<IVec> solve_basis(const IVec& v) const;
    // Same, expressed over the original input rows.
    std::optional<IVec> solve(const IVec& v) const;
    // Canonical representative of v modulo the lattice (pivot entries in [0, pivot)).
    IVec reduce(IVec v) const;

private:
    int width_ = 0, rank_ = 0;
    std::vector<IVec> rows_, u_;
    std::vector<int> piv_;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);
// Mathematical modulo, result in [0, m) for m > 0; returns a when m == 0.
std::int64_t mod_floor(std::int64_t a, std::int64_t m);

// Basis of the intersection of two lattices given by generating rows.
std::vector<IVec> intersect_lattices(const std::vector<IVec>& a, const std::vector<IVec>& b, int width);

}  // namespace bfh
