#include "fsi/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsi {

double SparseMatrix::coeff(int i, int j) const {
    const int begin = row_offsets[i], end = row_offsets[i + 1];
    auto it = std::lower_bound(col_indices.begin() + begin, col_indices.begin() + end, j);
    if (it != col_indices.begin() + end && *it == j)
        return values[it - col_indices.begin()];
    return 0.0;
}

void SparseMatrix::multiply(const double* x, double* y) const {
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
            s += values[k] * x[col_indices[k]];
        y[i] = s;
    }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != cols)
        throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
    std::vector<double> y(rows);
    multiply(x.data(), y.data());
    return y;
}

MatrixBuilder::MatrixBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

void MatrixBuilder::add(int i, int j, double v) { triplets_.push_back({i, j, v}); }

void MatrixBuilder::add_block(const SparseMatrix& m, double scale, int row_offset, int col_offset,
                              bool transpose) {
    for (int i = 0; i < m.rows; ++i)
        for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
            const int j = m.col_indices[k];
            if (transpose)
                add(row_offset + j, col_offset + i, scale * m.values[k]);
            else
                add(row_offset + i, col_offset + j, scale * m.values[k]);
        }
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    h ^= v;
    return h * 0x100000001b3ull;
}

}  // namespace

SparseMatrix MatrixBuilder::build() const {
    AssemblyMap scratch;
    return build(scratch);
}

SparseMatrix MatrixBuilder::build(AssemblyMap& map) const {
    std::uint64_t sig = 0xcbf29ce484222325ull;
    for (const Triplet& t : triplets_)
        sig = fnv1a(sig, (std::uint64_t(std::uint32_t(t.i)) << 32) | std::uint32_t(t.j));

    if (!map.ready || map.signature != sig || map.triplet_count != triplets_.size()) {
        // Build the pattern and the triplet -> value-slot map.
        const std::size_t n = triplets_.size();
        std::vector<int> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = static_cast<int>(k);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (triplets_[a].i != triplets_[b].i) return triplets_[a].i < triplets_[b].i;
            return triplets_[a].j < triplets_[b].j;
        });

        SparseMatrix& s = map.skeleton;
        s = SparseMatrix{};
        s.rows = rows_;
        s.cols = cols_;
        s.row_offsets.assign(rows_ + 1, 0);
        map.slot.assign(n, -1);

        int last_i = -1, last_j = -1, nnz = -1;
        for (int k : order) {
            const Triplet& t = triplets_[k];
            if (t.i != last_i || t.j != last_j) {
                ++nnz;
                s.col_indices.push_back(t.j);
                ++s.row_offsets[t.i + 1];
                last_i = t.i;
                last_j = t.j;
            }
            map.slot[k] = nnz;
        }
        for (int i = 0; i < rows_; ++i) s.row_offsets[i + 1] += s.row_offsets[i];
        s.values.assign(s.col_indices.size(), 0.0);
        map.signature = sig;
        map.triplet_count = n;
        map.ready = true;
    }

    SparseMatrix out = map.skeleton;
    for (std::size_t k = 0; k < triplets_.size(); ++k)
        out.values[map.slot[k]] += triplets_[k].v;
    return out;
}

void apply_dirichlet(SparseMatrix& a, std::vector<double>& rhs,
                     const std::vector<DirichletBC>& bcs) {
    if (a.rows != a.cols) throw std::invalid_argument("apply_dirichlet: matrix must be square");
    std::vector<char> constrained(a.cols, 0);
    std::vector<double> bc_value(a.cols, 0.0);
    for (const DirichletBC& bc : bcs) {
        constrained[bc.dof] = 1;
        bc_value[bc.dof] = bc.value;
    }
    for (int i = 0; i < a.rows; ++i) {
        const bool row_constrained = constrained[i];
        bool diagonal_found = false;
        for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
            const int j = a.col_indices[k];
            if (row_constrained) {
                diagonal_found |= j == i;
                a.values[k] = (j == i) ? 1.0 : 0.0;
            } else if (constrained[j]) {
                rhs[i] -= a.values[k] * bc_value[j];
                a.values[k] = 0.0;
            }
        }
        if (row_constrained) {
            if (!diagonal_found)
                throw std::logic_error(
                    "apply_dirichlet: constrained dof has no diagonal entry in the pattern");
            rhs[i] = bc_value[i];
        }
    }
}

}  // namespace fsi
