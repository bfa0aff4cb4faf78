#pragma once

#include "varfrac/cylinder_mesh.hpp"
#include "varfrac/order_field.hpp"
#include "varfrac/sparse_linalg.hpp"

#include <functional>
#include <vector>

namespace varfrac {

/// Exact moment of the degenerate weight over a y-cell:
///   \int_a^b y^{delta + k} dy,  delta = 1 - 2s,
/// in closed form. The weight is never sampled at y=0, so the first mesh
/// layer is integrated exactly no matter how strong the grading.
double y_weight_moments(double s, double a, double b, int k);

/// Discrete extension problem on the truncated cylinder, Dirichlet rows and
/// columns (Lateral and Top sets) eliminated symmetrically:
///   A            weighted stiffness  \int w grad(u).grad(v)   (free x free)
///   M_w          weighted mass       \int w u v               (free x free)
///   M_base       base mass           \int_Omega u v           (base x base)
///   M_base_tilde trace-weighted mass \int_Omega w_tilde u v   (base x base)
/// Per element, s and G are frozen at the x-cell midpoint; y-integrals use
/// the closed-form moments above.
struct ExtensionSystem {
    CylinderMesh mesh;
    WeightSpec spec;

    SparseMatrix A;
    SparseMatrix M_w;
    SparseMatrix M_base;
    SparseMatrix M_base_tilde;

    std::vector<int> free_index; ///< node id -> free index, -1 if eliminated
    std::vector<int> free_nodes; ///< free index -> node id (ascending)
    std::vector<int> base_index; ///< node id -> base index, -1 otherwise
    std::vector<int> base_nodes; ///< base index -> node id (ascending)
    std::vector<int> base_to_free; ///< base index -> free index

    int n_free() const { return static_cast<int>(free_nodes.size()); }
    int n_base() const { return static_cast<int>(base_nodes.size()); }

    /// Scatters a free vector onto all mesh nodes (Dirichlet entries zero).
    std::vector<double> to_full(const std::vector<double>& free_vec) const;
    /// Restricts a free vector to the base nodes.
    std::vector<double> restrict_to_base(const std::vector<double>& free_vec) const;
};

ExtensionSystem assemble(const CylinderMesh& mesh, const WeightSpec& spec, int threads = 1);

/// Stiffness over ALL nodes, no elimination; rows sum to zero exactly
/// (constants are in the kernel of the gradient form).
SparseMatrix assemble_full_stiffness(const CylinderMesh& mesh, const WeightSpec& spec,
                                     int threads = 1);

/// Load vector b_i = \int_Omega h(x) psi_i(x, 0) dx over free indices
/// (supported on base nodes), Gauss order 3 per x-cell axis.
std::vector<double> load_from_base_function(const ExtensionSystem& sys,
                                            const std::function<double(const Point&)>& h);

/// Used internally and by the parallel suites: runs fn(chunk, begin, end) over
/// contiguous chunks of [0, n) on `threads` std::threads. Chunks are in index
/// order so deterministic reductions can concatenate per-chunk output.
void parallel_chunks(int n, int threads, const std::function<void(int, int, int)>& fn);

} // namespace varfrac
