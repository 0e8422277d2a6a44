#include "palsim/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace palsim {

Graph::Graph(int n, std::vector<std::vector<Vertex>> adjacency, int declared_d)
    : adj_(std::move(adjacency)), d_(declared_d) {
    if (static_cast<int>(adj_.size()) != n)
        throw GraphError("adjacency size does not match n");
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

void Graph::set_max_degree_bound(int d) {
    if (d < observed_max_degree())
        throw GraphError("declared degree bound below observed max degree");
    d_ = d;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nb : adj_) twice += nb.size();
    return twice / 2;
}

bool Graph::is_regular(int d) const {
    for (const auto& nb : adj_)
        if (static_cast<int>(nb.size()) != d) return false;
    return true;
}

int Graph::observed_max_degree() const {
    std::size_t m = 0;
    for (const auto& nb : adj_) m = std::max(m, nb.size());
    return static_cast<int>(m);
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < n(); ++u)
        for (Vertex v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph build_graph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    if (n < 0) throw GraphError("negative vertex count");
    std::vector<std::vector<Vertex>> adj(n);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw GraphError("edge endpoint out of range: (" + std::to_string(u) +
                             "," + std::to_string(v) + ")");
        if (u == v)
            throw GraphError("loop rejected: (" + std::to_string(u) + "," +
                             std::to_string(v) + ")");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    int maxdeg = 0;
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        maxdeg = std::max(maxdeg, static_cast<int>(nb.size()));
    }
    return Graph(n, std::move(adj), maxdeg);
}

std::int64_t nonedge_count(const Graph& g, const std::vector<Vertex>& x) {
    std::int64_t pairs = static_cast<std::int64_t>(x.size()) *
                         (static_cast<std::int64_t>(x.size()) - 1) / 2;
    std::vector<char> in(g.n(), 0);
    for (Vertex v : x) in[v] = 1;
    std::int64_t internal_edges = 0;
    for (Vertex v : x)
        for (Vertex w : g.neighbors(v))
            if (in[w] && v < w) ++internal_edges;
    return pairs - internal_edges;
}

void write_graph(std::ostream& os, const Graph& g) {
    auto es = g.edges();
    os << g.n() << ' ' << es.size() << ' ' << g.max_degree_bound() << '\n';
    for (const auto& [u, v] : es) os << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& is) {
    std::string line;
    auto next_line = [&](std::string& out) -> bool {
        while (std::getline(is, line)) {
            auto pos = line.find('#');
            if (pos != std::string::npos) line.erase(pos);
            std::istringstream probe(line);
            std::string tok;
            if (probe >> tok) {
                out = line;
                return true;
            }
        }
        return false;
    };
    std::string header;
    if (!next_line(header)) throw GraphError("empty graph stream");
    std::istringstream hs(header);
    long long n = 0, m = 0, d = 0;
    if (!(hs >> n >> m >> d)) throw GraphError("bad graph header: " + header);
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        std::string el;
        if (!next_line(el)) throw GraphError("truncated edge list");
        std::istringstream es(el);
        long long u = 0, v = 0;
        if (!(es >> u >> v)) throw GraphError("bad edge line: " + el);
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    Graph g = build_graph(static_cast<int>(n), edges);
    if (d >= g.observed_max_degree()) g.set_max_degree_bound(static_cast<int>(d));
    return g;
}

void write_graph_file(const std::string& path, const Graph& g) {
    std::ofstream os(path);
    if (!os) throw GraphError("cannot open for writing: " + path);
    write_graph(os, g);
}

Graph read_graph_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw GraphError("cannot open for reading: " + path);
    return read_graph(is);
}

}  // namespace palsim
