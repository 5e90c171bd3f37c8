#pragma once

#include <cstdint>
#include <vector>

namespace fsi {

/// Compressed sparse row matrix. Column indices are sorted and unique
/// within each row once built.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_offsets;  // size rows + 1
    std::vector<int> col_indices;
    std::vector<double> values;

    int nonzeros() const { return static_cast<int>(col_indices.size()); }
    double coeff(int i, int j) const;  // 0 if the entry is not stored

    void multiply(const double* x, double* y) const;  // y = A x
    std::vector<double> multiply(const std::vector<double>& x) const;
};

/// Caches the sparsity pattern and the triplet-to-slot scatter map of a
/// repeatedly assembled system. The triplet stream of later assemblies must
/// have the same (i, j) sequence; this is checked with a cheap hash and the
/// map is rebuilt on mismatch.
struct AssemblyMap {
    bool ready = false;
    std::uint64_t signature = 0;
    std::size_t triplet_count = 0;
    SparseMatrix skeleton;
    std::vector<int> slot;
};

class MatrixBuilder {
  public:
    MatrixBuilder(int rows, int cols);

    void add(int i, int j, double v);
    /// Adds scale*M (or scale*M^T) with the given index offsets.
    void add_block(const SparseMatrix& m, double scale, int row_offset, int col_offset,
                   bool transpose = false);

    SparseMatrix build() const;
    /// Same as build() but reuses (or fills) the cached pattern.
    SparseMatrix build(AssemblyMap& map) const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }

  private:
    struct Triplet {
        int i, j;
        double v;
    };
    int rows_, cols_;
    std::vector<Triplet> triplets_;
};

struct DirichletBC {
    int dof;
    double value;
};

/// Replaces constrained rows by identity rows and eliminates constrained
/// columns into the right-hand side. Operates on values only, so a cached
/// sparsity pattern stays valid.
void apply_dirichlet(SparseMatrix& a, std::vector<double>& rhs,
                     const std::vector<DirichletBC>& bcs);

}  // namespace fsi
