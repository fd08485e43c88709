#include "currents/graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace currents {

bool WeightedMultigraph::unit_conductance() const {
    for (const Edge& e : edges_) {
        if (e.conductance != 1.0) return false;
    }
    return true;
}

WeightedMultigraph WeightedMultigraph::with_flipped_edge(int e) const {
    std::vector<Edge> edges = edges_;
    std::swap(edges.at(static_cast<std::size_t>(e)).tail, edges.at(static_cast<std::size_t>(e)).head);
    return build_graph(std::move(edges), n_);
}

WeightedMultigraph WeightedMultigraph::with_scaled_conductance(double alpha) const {
    if (!(alpha > 0.0)) throw conductance_error("conductance scale must be positive");
    std::vector<Edge> edges = edges_;
    for (Edge& e : edges) e.conductance *= alpha;
    return build_graph(std::move(edges), n_);
}

bool is_connected(int n, const std::vector<Edge>& edges) {
    if (n <= 0) return false;
    if (n == 1) return true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : edges) {
        adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
        adj[static_cast<std::size_t>(e.head)].push_back(e.tail);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == n;
}

WeightedMultigraph build_graph(std::vector<Edge> edges, int n) {
    if (edges.empty()) throw empty_edge_list_error("graph needs at least one edge");
    if (n < 2) throw vertex_index_error("graph needs at least two vertices");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
            throw vertex_index_error("edge " + std::to_string(i) + " references vertex outside [0, " +
                                     std::to_string(n - 1) + "]");
        }
        if (e.tail == e.head) {
            throw self_loop_error("edge " + std::to_string(i) + " is a self-loop at vertex " +
                                  std::to_string(e.tail));
        }
        if (!std::isfinite(e.conductance) || e.conductance <= 0.0) {
            throw conductance_error("edge " + std::to_string(i) + " has nonpositive conductance");
        }
        if (e.conductance < kMinConductance || e.conductance > kMaxConductance) {
            throw conductance_error("edge " + std::to_string(i) + " conductance outside [1e-12, 1e12]");
        }
    }
    if (!is_connected(n, edges)) throw disconnected_error("graph is not connected");
    WeightedMultigraph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    return g;
}

IncidenceSystem incidence_system(const WeightedMultigraph& g) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    IncidenceSystem sys;
    sys.incidence = Eigen::MatrixXd::Zero(m, n);
    sys.conductance = Eigen::VectorXd::Zero(m);
    sys.laplacian = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < m; ++e) {
        const Edge& ed = g.edge(e);
        sys.incidence(e, ed.head) = 1.0;
        sys.incidence(e, ed.tail) = -1.0;
        sys.conductance(e) = ed.conductance;
        const double c = ed.conductance;
        sys.laplacian(ed.tail, ed.tail) += c;
        sys.laplacian(ed.head, ed.head) += c;
        sys.laplacian(ed.tail, ed.head) -= c;
        sys.laplacian(ed.head, ed.tail) -= c;
    }
    return sys;
}

EdgeWeighting measure_from_weights(const WeightedMultigraph& g, const Eigen::VectorXd& w) {
    if (w.size() != g.edge_count()) throw graph_error("weight vector length must equal edge count");
    const double norm_sq = w.squaredNorm();
    if (norm_sq == 0.0) throw graph_error("weight vector must be nonzero");
    EdgeWeighting ew;
    ew.w = w;
    ew.mu = Eigen::VectorXd::Zero(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        const double ws = w(e) * w(e);
        ew.mu(ed.tail) += ws;
        ew.mu(ed.head) += ws;
    }
    ew.mu /= 2.0 * norm_sq;
    return ew;
}

namespace {

bool parse_vertex_index(const std::string& tok, int& out) {
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size() || v < 0 || v > 1000000000L) return false;
        out = static_cast<int>(v);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

WeightedMultigraph read_graph_text(std::istream& in) {
    std::vector<Edge> edges;
    int declared_n = -1;
    int max_index = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first.rfind("n=", 0) == 0) {
            int val = 0;
            if (!parse_vertex_index(first.substr(2), val) || val < 1) {
                throw parse_error(lineno, "bad vertex count header '" + first + "'");
            }
            declared_n = val;
            std::string extra;
            if (ls >> extra) throw parse_error(lineno, "unexpected token '" + extra + "' after header");
            continue;
        }
        Edge e;
        if (!parse_vertex_index(first, e.tail)) {
            throw parse_error(lineno, "bad tail vertex '" + first + "'");
        }
        std::string second;
        if (!(ls >> second)) throw parse_error(lineno, "missing head vertex");
        if (!parse_vertex_index(second, e.head)) {
            throw parse_error(lineno, "bad head vertex '" + second + "'");
        }
        std::string third;
        if (ls >> third) {
            try {
                std::size_t pos = 0;
                e.conductance = std::stod(third, &pos);
                if (pos != third.size()) throw std::invalid_argument(third);
            } catch (const std::exception&) {
                throw parse_error(lineno, "bad conductance '" + third + "'");
            }
            std::string extra;
            if (ls >> extra) throw parse_error(lineno, "unexpected token '" + extra + "'");
        }
        max_index = std::max(max_index, std::max(e.tail, e.head));
        edges.push_back(e);
    }
    const int n = declared_n >= 0 ? declared_n : max_index + 1;
    return build_graph(std::move(edges), n);
}

WeightedMultigraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw graph_error("cannot open graph file '" + path + "'");
    return read_graph_text(in);
}

void write_graph_text(std::ostream& out, const WeightedMultigraph& g) {
    out << "n=" << g.vertex_count() << "\n";
    std::ostringstream num;
    num.precision(17);
    for (const Edge& e : g.edges()) {
        out << e.tail << " " << e.head;
        if (e.conductance != 1.0) {
            num.str("");
            num << e.conductance;
            out << " " << num.str();
        }
        out << "\n";
    }
}

void save_graph_file(const std::string& path, const WeightedMultigraph& g) {
    std::ofstream out(path);
    if (!out) throw graph_error("cannot write graph file '" + path + "'");
    write_graph_text(out, g);
}

}  // namespace currents
