#pragma once

#include "varfrac/order_field.hpp"

#include <vector>

namespace varfrac {

enum class NodeSet { Base, Lateral, Top, Interior };

/// Tensor-product mesh of the truncated cylinder C^tau = (0,1)^N x (0,tau),
/// N in {1,2}. The x-grid is uniform with n_x nodes per axis; the y-grid is
/// graded toward the degenerate face y=0:
///   y_j = tau * (j / (n_y-1))^gamma.
///
/// Node ids are layer-major in y with the base layer first:
///   N=1: id = j*n_x + i,   N=2: id = j*n_x^2 + i2*n_x + i1.
///
/// Node sets partition the mesh: Base (y=0, x interior), Lateral (x on the
/// boundary of Omega, any y), Top (y=tau, x interior), Interior (the rest).
/// Lateral and Top carry homogeneous Dirichlet data in every solve.
class CylinderMesh {
  public:
    CylinderMesh(int dim, int n_x, int n_y, double tau, double gamma);

    int dim() const { return dim_; }
    int n_x() const { return n_x_; }
    int n_y() const { return n_y_; }
    double tau() const { return tau_; }
    double grading() const { return gamma_; }

    const std::vector<double>& x_coords() const { return x_; }
    const std::vector<double>& y_coords() const { return y_; }

    int nodes_per_layer() const { return layer_; }
    int num_nodes() const { return layer_ * n_y_; }
    int num_elements() const;

    int node_id(int i1, int i2, int j) const; // i2 ignored for N=1
    Point x_of(int node) const;
    double y_of(int node) const { return y_[node / layer_]; }
    int layer_of(int node) const { return node / layer_; }

    NodeSet classify(int node) const;
    bool is_dirichlet(int node) const {
        NodeSet s = classify(node);
        return s == NodeSet::Lateral || s == NodeSet::Top;
    }

    /// Element -> its 4 (N=1) or 8 (N=2) corner nodes, x-fastest then y.
    void element_nodes(int e, int out[8]) const;
    /// Element -> lower-corner cell indices (i1, i2, j).
    void element_cell(int e, int& i1, int& i2, int& j) const;

  private:
    int dim_, n_x_, n_y_;
    double tau_, gamma_;
    int layer_;
    std::vector<double> x_, y_;
};

/// min(7, max(1, 3/(2 s_min))) with s_min the field's clamp floor; strong
/// grading compensates the rough y^{1-2s} scale of the extension near y=0.
double default_gamma(const OrderField& order);

/// Truncation height -ln(decay_tol)/sqrt(lambda_1): the first-mode extension
/// has decayed to decay_tol at that height.
double default_tau(double lambda_1, double decay_tol);

} // namespace varfrac
