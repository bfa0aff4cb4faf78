#include "varfrac/cylinder_mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

CylinderMesh::CylinderMesh(int dim, int n_x, int n_y, double tau, double gamma)
    : dim_(dim), n_x_(n_x), n_y_(n_y), tau_(tau), gamma_(gamma) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("CylinderMesh: dim must be 1 or 2");
    if (n_x < 3) throw std::invalid_argument("CylinderMesh: need n_x >= 3");
    if (n_y < 2) throw std::invalid_argument("CylinderMesh: need n_y >= 2");
    if (!(tau > 0.0)) throw std::invalid_argument("CylinderMesh: tau must be positive");
    if (!(gamma >= 1.0)) throw std::invalid_argument("CylinderMesh: gamma must be >= 1");
    layer_ = (dim == 1) ? n_x : n_x * n_x;
    x_.resize(n_x);
    for (int i = 0; i < n_x; ++i) x_[i] = static_cast<double>(i) / (n_x - 1);
    x_.front() = 0.0;
    x_.back() = 1.0;
    y_.resize(n_y);
    for (int j = 0; j < n_y; ++j)
        y_[j] = tau * std::pow(static_cast<double>(j) / (n_y - 1), gamma);
    y_.front() = 0.0;
    y_.back() = tau;
}

int CylinderMesh::num_elements() const {
    int per_layer = n_x_ - 1;
    if (dim_ == 2) per_layer *= n_x_ - 1;
    return per_layer * (n_y_ - 1);
}

int CylinderMesh::node_id(int i1, int i2, int j) const {
    return dim_ == 1 ? j * layer_ + i1 : j * layer_ + i2 * n_x_ + i1;
}

Point CylinderMesh::x_of(int node) const {
    const int r = node % layer_;
    if (dim_ == 1) return {x_[r], 0.0};
    return {x_[r % n_x_], x_[r / n_x_]};
}

NodeSet CylinderMesh::classify(int node) const {
    const int j = node / layer_;
    const int r = node % layer_;
    bool lateral;
    if (dim_ == 1) {
        lateral = (r == 0 || r == n_x_ - 1);
    } else {
        const int i1 = r % n_x_, i2 = r / n_x_;
        lateral = (i1 == 0 || i1 == n_x_ - 1 || i2 == 0 || i2 == n_x_ - 1);
    }
    if (lateral) return NodeSet::Lateral;
    if (j == n_y_ - 1) return NodeSet::Top;
    if (j == 0) return NodeSet::Base;
    return NodeSet::Interior;
}

void CylinderMesh::element_cell(int e, int& i1, int& i2, int& j) const {
    const int cx = n_x_ - 1;
    if (dim_ == 1) {
        i1 = e % cx;
        i2 = 0;
        j = e / cx;
    } else {
        const int per_layer = cx * cx;
        j = e / per_layer;
        const int r = e % per_layer;
        i1 = r % cx;
        i2 = r / cx;
    }
}

void CylinderMesh::element_nodes(int e, int out[8]) const {
    int i1, i2, j;
    element_cell(e, i1, i2, j);
    if (dim_ == 1) {
        out[0] = node_id(i1, 0, j);
        out[1] = node_id(i1 + 1, 0, j);
        out[2] = node_id(i1, 0, j + 1);
        out[3] = node_id(i1 + 1, 0, j + 1);
    } else {
        int k = 0;
        for (int dy = 0; dy <= 1; ++dy)
            for (int d2 = 0; d2 <= 1; ++d2)
                for (int d1 = 0; d1 <= 1; ++d1) out[k++] = node_id(i1 + d1, i2 + d2, j + dy);
    }
}

double default_gamma(const OrderField& order) {
    const double g = 3.0 / (2.0 * order.s_min());
    return std::min(7.0, std::max(1.0, g));
}

double default_tau(double lambda_1, double decay_tol) {
    if (!(lambda_1 > 0.0)) throw std::invalid_argument("default_tau: lambda_1 must be positive");
    if (!(decay_tol > 0.0 && decay_tol < 1.0))
        throw std::invalid_argument("default_tau: decay_tol must lie in (0,1)");
    return -std::log(decay_tol) / std::sqrt(lambda_1);
}

} // namespace varfrac
