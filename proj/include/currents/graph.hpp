#ifndef CURRENTS_GRAPH_HPP
#define CURRENTS_GRAPH_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace currents {

/// Construction-time validation failures, one type per rejection cause.
struct graph_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct self_loop_error : graph_error {
    using graph_error::graph_error;
};
struct disconnected_error : graph_error {
    using graph_error::graph_error;
};
struct conductance_error : graph_error {
    using graph_error::graph_error;
};
struct vertex_index_error : graph_error {
    using graph_error::graph_error;
};
struct empty_edge_list_error : graph_error {
    using graph_error::graph_error;
};
/// Text-format failures; carries the 1-based line number.
struct parse_error : graph_error {
    parse_error(int line, const std::string& what)
        : graph_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

struct Edge {
    int tail = 0;
    int head = 0;
    double conductance = 1.0;
};

// Conductances outside this window make the dense eigensolver tolerances
// unreliable and are rejected at construction.
inline constexpr double kMinConductance = 1e-12;
inline constexpr double kMaxConductance = 1e12;

/// Connected weighted multigraph with oriented edges (tail -> head).
/// Parallel edges are permitted; self-loops are not. Immutable once built.
class WeightedMultigraph {
public:
    WeightedMultigraph() = default;

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

    /// True when every conductance equals 1 exactly.
    bool unit_conductance() const;

    /// Same vertex set and conductances, with the orientation of edge e reversed.
    WeightedMultigraph with_flipped_edge(int e) const;
    /// Same topology with every conductance multiplied by alpha > 0.
    WeightedMultigraph with_scaled_conductance(double alpha) const;

    friend WeightedMultigraph build_graph(std::vector<Edge> edges, int n);

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

/// Validates and builds a graph: indices in range, no self-loops, conductances
/// in [kMinConductance, kMaxConductance], connected, n >= 2, m >= 1.
WeightedMultigraph build_graph(std::vector<Edge> edges, int n);

/// Traversal-based connectivity over an edge list (no validation of edges).
bool is_connected(int n, const std::vector<Edge>& edges);

/// B (m x n signed incidence, +1 at head, -1 at tail), the conductance
/// diagonal, and the Laplacian L = B^T C B.
struct IncidenceSystem {
    Eigen::MatrixXd incidence;
    Eigen::VectorXd conductance;
    Eigen::MatrixXd laplacian;

    int vertex_count() const { return static_cast<int>(incidence.cols()); }
    int edge_count() const { return static_cast<int>(incidence.rows()); }
};

IncidenceSystem incidence_system(const WeightedMultigraph& g);

/// An edge-weight vector w together with the vertex probability measure it
/// induces: mu(x) = sum of w_e^2 over edges incident to x, over 2*||w||^2.
struct EdgeWeighting {
    Eigen::VectorXd w;
    Eigen::VectorXd mu;
};

EdgeWeighting measure_from_weights(const WeightedMultigraph& g, const Eigen::VectorXd& w);

// Text format: one edge per line, "tail head [conductance]" (default 1.0),
// '#' starts a comment, optional "n=<count>" header; otherwise the vertex
// count is 1 + the largest index seen.
WeightedMultigraph read_graph_text(std::istream& in);
WeightedMultigraph load_graph_file(const std::string& path);
void write_graph_text(std::ostream& out, const WeightedMultigraph& g);
void save_graph_file(const std::string& path, const WeightedMultigraph& g);

}  // namespace currents

#endif
