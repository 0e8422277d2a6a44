#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace palsim {

using Vertex = int;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simple undirected graph with sorted adjacency sets and a declared
// degree bound D (>= observed max degree).
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<std::vector<Vertex>> adjacency, int declared_d);

    int n() const { return static_cast<int>(adj_.size()); }
    int max_degree_bound() const { return d_; }
    void set_max_degree_bound(int d);

    int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
    bool adjacent(Vertex u, Vertex v) const;

    std::size_t edge_count() const;
    bool is_regular(int d) const;
    int observed_max_degree() const;

    // Edge list with u < v, lexicographically ascending.
    std::vector<std::pair<Vertex, Vertex>> edges() const;

private:
    std::vector<std::vector<Vertex>> adj_;
    int d_ = 0;
};

// Builds a graph from an edge list. Loops and out-of-range endpoints are
// rejected (the message names the offending edge); duplicates are merged.
// D is set to the observed max degree.
Graph build_graph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges);

// Number of unordered non-adjacent pairs inside X.
std::int64_t nonedge_count(const Graph& g, const std::vector<Vertex>& x);

// Text format: line "n m D", then m lines "u v" (0-based, u < v,
// ascending). The reader skips blank lines and '#' comments.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);
void write_graph_file(const std::string& path, const Graph& g);
Graph read_graph_file(const std::string& path);

}  // namespace palsim
