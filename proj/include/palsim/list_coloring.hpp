#pragma once

#include <cstdint>
#include <vector>

#include "palsim/graph.hpp"
#include "palsim/palette.hpp"

namespace palsim {

// Backtracking list-coloring over a subset of vertices with per-vertex
// candidate lists. Most-constrained-vertex order with incrementally
// maintained availability counts.
class ListColoringEngine {
public:
    // candidates[i] must be sorted; targets[i] is the graph vertex it colors.
    ListColoringEngine(const Graph& g, std::vector<Vertex> targets,
                       std::vector<std::vector<Color>> candidates);

    // Value-order permutation per target (indices into the candidate list).
    void shuffle_value_order(std::uint64_t seed);

    enum class Result { Colored, Exhausted, BudgetHit };

    // Exhaustive DFS (up to node budget).
    Result solve(std::uint64_t node_budget);
    // One greedy pass, no backtracking.
    Result greedy();

    const std::vector<Color>& assignment() const { return assigned_; }
    std::uint64_t nodes() const { return nodes_; }
    // After a failed greedy(): the vertex that had no feasible color.
    Vertex failed_vertex() const { return failed_vertex_; }
    int failed_list_size(int i) const {
        return static_cast<int>(candidates_[i].size());
    }
    int target_index(Vertex v) const { return index_of_[v]; }

private:
    bool dfs(std::uint64_t budget);
    void assign(int ti, int ci);
    void unassign(int ti, int ci);
    int pick_most_constrained() const;

    const Graph& g_;
    std::vector<Vertex> targets_;
    std::vector<std::vector<Color>> candidates_;
    std::vector<std::vector<int>> order_;       // value order per target
    std::vector<std::vector<int>> block_;       // per target, per candidate
    std::vector<int> avail_;                    // unblocked candidate count
    std::vector<Color> assigned_;               // per target, -1 if none
    std::vector<int> index_of_;                 // vertex -> target index
    std::uint64_t nodes_ = 0;
    bool budget_hit_ = false;
    Vertex failed_vertex_ = -1;
};

}  // namespace palsim
