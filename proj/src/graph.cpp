#include "katzrank/graph.hpp"

#include "katzrank/errors.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace katzrank {

namespace {

std::string arc_name(const Arc &a) {
    return "(" + std::to_string(a.source) + "," + std::to_string(a.target) + ")";
}

bool sorted_insert(std::vector<node> &list, node value) {
    auto it = std::lower_bound(list.begin(), list.end(), value);
    if (it != list.end() && *it == value)
        return false;
    list.insert(it, value);
    return true;
}

bool sorted_erase(std::vector<node> &list, node value) {
    auto it = std::lower_bound(list.begin(), list.end(), value);
    if (it == list.end() || *it != value)
        return false;
    list.erase(it);
    return true;
}

} // namespace

EdgeBatch inverse(const EdgeBatch &batch) {
    return EdgeBatch{batch.deletions, batch.insertions};
}

Graph::Graph(std::size_t node_count)
    : out_(node_count), in_(node_count), degree_histogram_(1, node_count) {}

void Graph::check_node(node v) const {
    if (v >= out_.size())
        throw RangeError("node " + std::to_string(v) + " out of range (node_count "
                         + std::to_string(out_.size()) + ")");
}

void Graph::bump_degree(node v, bool increase) {
    std::size_t d = out_[v].size(); // already updated
    std::size_t previous = increase ? d - 1 : d + 1;
    --degree_histogram_[previous];
    if (degree_histogram_.size() <= d)
        degree_histogram_.resize(d + 1, 0);
    ++degree_histogram_[d];
    if (d > max_out_degree_)
        max_out_degree_ = d;
    while (max_out_degree_ > 0 && degree_histogram_[max_out_degree_] == 0)
        --max_out_degree_;
}

bool Graph::has_arc(node source, node target) const {
    check_node(source);
    check_node(target);
    const auto &list = out_[source];
    return std::binary_search(list.begin(), list.end(), target);
}

bool Graph::add_arc(node source, node target) {
    check_node(source);
    check_node(target);
    if (!sorted_insert(out_[source], target))
        return false;
    sorted_insert(in_[target], source);
    ++arc_count_;
    if (source == target)
        ++self_loops_;
    bump_degree(source, true);
    return true;
}

void Graph::add_edge(node u, node v) {
    add_arc(u, v);
    add_arc(v, u);
}

bool Graph::remove_arc(node source, node target) {
    check_node(source);
    check_node(target);
    if (!sorted_erase(out_[source], target))
        return false;
    sorted_erase(in_[target], source);
    --arc_count_;
    if (source == target)
        --self_loops_;
    bump_degree(source, false);
    return true;
}

std::span<const node> Graph::out_neighbors(node v) const {
    check_node(v);
    return out_[v];
}

std::span<const node> Graph::in_neighbors(node v) const {
    check_node(v);
    return in_[v];
}

std::size_t Graph::out_degree(node v) const {
    check_node(v);
    return out_[v].size();
}

std::size_t Graph::in_degree(node v) const {
    check_node(v);
    return in_[v].size();
}

bool Graph::is_symmetric() const {
    for (node u = 0; u < out_.size(); ++u) {
        // out and in lists are both sorted, so symmetry is list equality
        if (out_[u] != in_[u])
            return false;
    }
    return true;
}

void Graph::validate_batch(const EdgeBatch &batch) const {
    std::vector<Arc> ins = batch.insertions;
    std::vector<Arc> del = batch.deletions;
    for (const auto &a : ins) {
        check_node(a.source);
        check_node(a.target);
        if (has_arc(a.source, a.target))
            throw PreconditionError("insertion of existing arc " + arc_name(a));
    }
    for (const auto &a : del) {
        check_node(a.source);
        check_node(a.target);
        if (!has_arc(a.source, a.target))
            throw PreconditionError("deletion of missing arc " + arc_name(a));
    }
    std::sort(ins.begin(), ins.end());
    std::sort(del.begin(), del.end());
    if (auto it = std::adjacent_find(ins.begin(), ins.end()); it != ins.end())
        throw PreconditionError("arc " + arc_name(*it) + " inserted twice in one batch");
    if (auto it = std::adjacent_find(del.begin(), del.end()); it != del.end())
        throw PreconditionError("arc " + arc_name(*it) + " deleted twice in one batch");
    // I ∩ E = ∅ and D ⊆ E already imply I ∩ D = ∅.
}

std::size_t Graph::max_out_degree_after(const EdgeBatch &batch) const {
    std::unordered_map<node, long long> delta;
    for (const auto &a : batch.insertions)
        ++delta[a.source];
    for (const auto &a : batch.deletions)
        --delta[a.source];
    std::vector<std::size_t> histogram = degree_histogram_;
    for (const auto &[v, change] : delta) {
        std::size_t before = out_[v].size();
        std::size_t after = static_cast<std::size_t>(static_cast<long long>(before) + change);
        --histogram[before];
        if (histogram.size() <= after)
            histogram.resize(after + 1, 0);
        ++histogram[after];
    }
    std::size_t d = histogram.size() - 1;
    while (d > 0 && histogram[d] == 0)
        --d;
    return d;
}

void Graph::apply_batch(const EdgeBatch &batch) {
    validate_batch(batch);
    remove_arcs(batch.deletions);
    insert_arcs(batch.insertions);
}

void Graph::remove_arcs(std::span<const Arc> arcs) {
    for (const auto &a : arcs) {
        if (!remove_arc(a.source, a.target))
            throw PreconditionError("deletion of missing arc " + arc_name(a));
    }
}

void Graph::insert_arcs(std::span<const Arc> arcs) {
    for (const auto &a : arcs) {
        if (!add_arc(a.source, a.target))
            throw PreconditionError("insertion of existing arc " + arc_name(a));
    }
}

std::vector<Arc> Graph::arcs() const {
    std::vector<Arc> result;
    result.reserve(arc_count_);
    for (node u = 0; u < out_.size(); ++u)
        for (node v : out_[u])
            result.push_back({u, v});
    return result;
}

} // namespace katzrank
