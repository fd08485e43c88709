#include "currents/transfer_current.hpp"

#include <cmath>
#include <string>

namespace currents {

CurrentMatrices transfer_current_matrices(const IncidenceSystem& sys,
                                          const Eigen::MatrixXd& green) {
    const int m = sys.edge_count();
    if (green.rows() != m || green.cols() != m) {
        throw linalg_error("green matrix dimensions do not match edge count");
    }
    const Eigen::VectorXd sqrt_c = sys.conductance.cwiseSqrt();

    CurrentMatrices cm;
    cm.k = sys.conductance.asDiagonal() * green;
    cm.pi = sqrt_c.asDiagonal() * green * sqrt_c.asDiagonal();
    cm.kbar = cm.k.cwiseAbs();
    cm.pibar = cm.pi.cwiseAbs();
    return cm;
}

double average_l1_flow(const Eigen::MatrixXd& kbar) {
    if (kbar.rows() == 0) {
        throw linalg_error("average_l1_flow on an empty matrix");
    }
    return kbar.sum() / static_cast<double>(kbar.rows());
}

double effective_resistance(const Eigen::MatrixXd& green, int e) {
    if (e < 0 || e >= green.rows()) {
        throw linalg_error("edge index " + std::to_string(e) + " out of range");
    }
    return green(e, e);
}

Eigen::VectorXd unit_injection_currents(const IncidenceSystem& sys, int source, int sink) {
    const int n = sys.vertex_count();
    if (source < 0 || source >= n || sink < 0 || sink >= n) {
        throw linalg_error("endpoint index out of range");
    }
    if (source == sink) {
        throw linalg_error("source and sink coincide");
    }
    Eigen::VectorXd injection = Eigen::VectorXd::Zero(n);
    injection(source) = 1.0;
    injection(sink) = -1.0;
    const Eigen::VectorXd phi = solve_potential(sys, injection);
    return sys.conductance.cwiseProduct(sys.incidence * phi);
}

ProjectionResiduals projection_residuals(const Eigen::MatrixXd& pi) {
    ProjectionResiduals r;
    r.idempotency = (pi * pi - pi).cwiseAbs().maxCoeff();
    r.symmetry = (pi - pi.transpose()).cwiseAbs().maxCoeff();
    r.trace = pi.trace();
    return r;
}

ElectricalSystem analyze(const WeightedMultigraph& g) {
    ElectricalSystem es{g, incidence_system(g), {}, {}, {}};
    es.dec = scaled_laplacian_eig(es.sys, Eigen::VectorXd::Ones(g.vertex_count()));
    es.green = projected_green(es.sys, es.dec);
    es.currents = transfer_current_matrices(es.sys, es.green);
    return es;
}

}  // namespace currents
