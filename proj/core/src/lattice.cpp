#include "bfh/lattice.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace bfh {

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(std::llabs(a), std::llabs(b)); }

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    if (m == 0) return a;
    m = std::llabs(m);
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

namespace {

void axpy(IVec& y, std::int64_t q, const IVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += q * x[i];
}

}  // namespace

Echelon::Echelon(const std::vector<IVec>& rows, int width) : width_(width), rows_(rows) {
    const int m = static_cast<int>(rows.size());
    u_.assign(m, IVec(m, 0));
    for (int i = 0; i < m; ++i) u_[i][i] = 1;
    int r = 0;
    for (int col = 0; col < width_ && r < m; ++col) {
        // Euclid on column `col` among rows r..m-1.
        while (true) {
            int best = -1;
            for (int i = r; i < m; ++i)
                if (rows_[i][col] != 0 && (best < 0 || std::llabs(rows_[i][col]) < std::llabs(rows_[best][col]))) best = i;
            if (best < 0) break;
            std::swap(rows_[r], rows_[best]);
            std::swap(u_[r], u_[best]);
            bool done = true;
            for (int i = r + 1; i < m; ++i) {
                if (rows_[i][col] == 0) continue;
                const std::int64_t q = rows_[i][col] / rows_[r][col];
                axpy(rows_[i], -q, rows_[r]);
                axpy(u_[i], -q, u_[r]);
                if (rows_[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (r < m && rows_[r][col] != 0) {
            if (rows_[r][col] < 0) {
                for (auto& x : rows_[r]) x = -x;
                for (auto& x : u_[r]) x = -x;
            }
            // Reduce entries above the pivot into [0, pivot).
            for (int i = 0; i < r; ++i) {
                const std::int64_t q = (rows_[i][col] - mod_floor(rows_[i][col], rows_[r][col])) / rows_[r][col];
                if (q) axpy(rows_[i], -q, rows_[r]), axpy(u_[i], -q, u_[r]);
            }
            piv_.push_back(col);
            ++r;
        }
    }
    rank_ = r;
}

std::vector<IVec> Echelon::kernel() const { return {u_.begin() + rank_, u_.end()}; }

std::optional<IVec> Echelon::solve_basis(const IVec& v0) const {
    IVec v = v0, y(rank_, 0);
    for (int i = 0; i < rank_; ++i) {
        const int c = piv_[i];
        if (v[c] % rows_[i][c] != 0) return std::nullopt;
        y[i] = v[c] / rows_[i][c];
        axpy(v, -y[i], rows_[i]);
    }
    for (auto x : v)
        if (x) return std::nullopt;
    return y;
}

std::optional<IVec> Echelon::solve(const IVec& v) const {
    auto y = solve_basis(v);
    if (!y) return std::nullopt;
    IVec c(u_.size(), 0);
    for (int i = 0; i < rank_; ++i) axpy(c, (*y)[i], u_[i]);
    return c;
}

IVec Echelon::reduce(IVec v) const {
    for (int i = 0; i < rank_; ++i) {
        const int c = piv_[i];
        const std::int64_t q = (v[c] - mod_floor(v[c], rows_[i][c])) / rows_[i][c];
        if (q) axpy(v, -q, rows_[i]);
    }
    return v;
}

std::vector<IVec> intersect_lattices(const std::vector<IVec>& a, const std::vector<IVec>& b, int width) {
    // Kernel of (x, y) -> x.A - y.B; the intersection is spanned by x.A.
    std::vector<IVec> rows;
    for (auto& r : a) rows.push_back(r);
    for (auto& r : b) {
        IVec n = r;
        for (auto& x : n) x = -x;
        rows.push_back(n);
    }
    Echelon e(rows, width);
    std::vector<IVec> out;
    for (auto& k : e.kernel()) {
        IVec v(width, 0);
        for (std::size_t i = 0; i < a.size(); ++i) axpy(v, k[i], a[i]);
        bool nz = false;
        for (auto x : v) nz |= x != 0;
        if (nz) out.push_back(v);
    }
    return out;
}

}  // namespace bfh
