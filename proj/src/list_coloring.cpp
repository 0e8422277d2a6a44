#include "palsim/list_coloring.hpp"

#include <algorithm>
#include <numeric>

#include "palsim/rng.hpp"

namespace palsim {

ListColoringEngine::ListColoringEngine(const Graph& g, std::vector<Vertex> targets,
                                       std::vector<std::vector<Color>> candidates)
    : g_(g), targets_(std::move(targets)), candidates_(std::move(candidates)) {
    index_of_.assign(g_.n(), -1);
    for (std::size_t i = 0; i < targets_.size(); ++i)
        index_of_[targets_[i]] = static_cast<int>(i);
    order_.resize(targets_.size());
    block_.resize(targets_.size());
    avail_.resize(targets_.size());
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        order_[i].resize(candidates_[i].size());
        std::iota(order_[i].begin(), order_[i].end(), 0);
        block_[i].assign(candidates_[i].size(), 0);
        avail_[i] = static_cast<int>(candidates_[i].size());
    }
    assigned_.assign(targets_.size(), -1);
}

void ListColoringEngine::shuffle_value_order(std::uint64_t seed) {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        Rng rng(mix64(seed, 0x0de7ULL, static_cast<std::uint64_t>(i)));
        rng.shuffle(order_[i]);
    }
}

void ListColoringEngine::assign(int ti, int ci) {
    assigned_[ti] = candidates_[ti][ci];
    const Color c = assigned_[ti];
    for (Vertex w : g_.neighbors(targets_[ti])) {
        const int wi = index_of_[w];
        if (wi < 0 || assigned_[wi] != -1) continue;
        const auto& cs = candidates_[wi];
        auto it = std::lower_bound(cs.begin(), cs.end(), c);
        if (it == cs.end() || *it != c) continue;
        const int pos = static_cast<int>(it - cs.begin());
        if (block_[wi][pos]++ == 0) --avail_[wi];
    }
}

void ListColoringEngine::unassign(int ti, int ci) {
    const Color c = candidates_[ti][ci];
    assigned_[ti] = -1;
    for (Vertex w : g_.neighbors(targets_[ti])) {
        const int wi = index_of_[w];
        if (wi < 0 || assigned_[wi] != -1) continue;
        const auto& cs = candidates_[wi];
        auto it = std::lower_bound(cs.begin(), cs.end(), c);
        if (it == cs.end() || *it != c) continue;
        const int pos = static_cast<int>(it - cs.begin());
        if (--block_[wi][pos] == 0) ++avail_[wi];
    }
}

int ListColoringEngine::pick_most_constrained() const {
    int best = -1, best_avail = INT32_MAX;
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (assigned_[i] != -1) continue;
        if (avail_[i] < best_avail) {
            best_avail = avail_[i];
            best = static_cast<int>(i);
            if (best_avail == 0) break;
        }
    }
    return best;
}

bool ListColoringEngine::dfs(std::uint64_t budget) {
    if (++nodes_ > budget) {
        budget_hit_ = true;
        return false;
    }
    const int ti = pick_most_constrained();
    if (ti < 0) return true;
    if (avail_[ti] == 0) return false;
    for (int ci : order_[ti]) {
        if (block_[ti][ci] > 0) continue;
        assign(ti, ci);
        if (dfs(budget)) return true;
        unassign(ti, ci);
        if (budget_hit_) return false;
    }
    return false;
}

ListColoringEngine::Result ListColoringEngine::solve(std::uint64_t node_budget) {
    nodes_ = 0;
    budget_hit_ = false;
    if (dfs(node_budget)) return Result::Colored;
    return budget_hit_ ? Result::BudgetHit : Result::Exhausted;
}

ListColoringEngine::Result ListColoringEngine::greedy() {
    nodes_ = 0;
    for (std::size_t step = 0; step < targets_.size(); ++step) {
        ++nodes_;
        const int ti = pick_most_constrained();
        if (ti < 0) return Result::Colored;
        if (avail_[ti] == 0) {
            failed_vertex_ = targets_[ti];
            return Result::Exhausted;
        }
        for (int ci : order_[ti])
            if (block_[ti][ci] == 0) {
                assign(ti, ci);
                break;
            }
    }
    return Result::Colored;
}

}  // namespace palsim
