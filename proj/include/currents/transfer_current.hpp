#ifndef CURRENTS_TRANSFER_CURRENT_HPP
#define CURRENTS_TRANSFER_CURRENT_HPP

#include <Eigen/Dense>

#include "currents/graph.hpp"
#include "currents/linalg.hpp"

namespace currents {

/// Edge-space current matrices. k maps unit injections along edges to the
/// currents they induce; pi is its conductance-symmetrized form, an
/// orthogonal projection of rank n-1. kbar and pibar take entrywise absolute
/// values.
struct CurrentMatrices {
    Eigen::MatrixXd k;
    Eigen::MatrixXd pi;
    Eigen::MatrixXd kbar;
    Eigen::MatrixXd pibar;
};

/// Builds K = C B L^+ B^T and Pi = C^{1/2} B L^+ B^T C^{1/2} from the green
/// matrix B L^+ B^T.
CurrentMatrices transfer_current_matrices(const IncidenceSystem& sys, const Eigen::MatrixXd& green);

/// Mean row sum of kbar: the average l1 flow cost of routing one unit of
/// current across each edge in turn.
double average_l1_flow(const Eigen::MatrixXd& kbar);

/// Effective resistance across edge e, read off the green matrix diagonal.
double effective_resistance(const Eigen::MatrixXd& green, int e);

/// Current on every edge when one unit enters at source and leaves at sink,
/// computed through the direct potential solve rather than the spectral path.
Eigen::VectorXd unit_injection_currents(const IncidenceSystem& sys, int source, int sink);

/// Residual diagnostics for the projection structure of pi.
struct ProjectionResiduals {
    double idempotency = 0.0;
    double symmetry = 0.0;
    double trace = 0.0;
};

ProjectionResiduals projection_residuals(const Eigen::MatrixXd& pi);

/// One graph analyzed end to end with unit vertex scaling: shared spectral
/// decomposition, green matrix, and current matrices.
struct ElectricalSystem {
    WeightedMultigraph graph;
    IncidenceSystem sys;
    SpectralDecomposition dec;
    Eigen::MatrixXd green;
    CurrentMatrices currents;
};

ElectricalSystem analyze(const WeightedMultigraph& g);

}  // namespace currents

#endif
