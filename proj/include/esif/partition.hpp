#pragma once

#include <cstdint>
#include <vector>

#include "esif/errors.hpp"
#include "esif/matrix.hpp"

namespace esif {

struct PartitionNode {
    idx begin = 0;     ///< first index of the range (inclusive)
    idx end = 0;       ///< one past the last index
    int level = 0;     ///< depth, root at 0
    int parent = -1;   ///< node id, -1 at the root
    int child1 = -1;   ///< leading (larger-or-equal) child, -1 at leaves
    int child2 = -1;   ///< trailing child, -1 at leaves

    idx size() const { return end - begin; }
    bool is_leaf() const { return child1 < 0; }
};

/// Balanced recursive bisection of the index range [0, n).
///
/// Each split hands ceil(m/2) indices to the leading child and floor(m/2)
/// to the trailing child, so the leading child is never smaller.  Node ids
/// are preorder positions and are a stable function of (n, levels); per-node
/// random streams key off them.
class PartitionPlan {
  public:
    static PartitionPlan bisect(idx n, int levels) {
        if (n == 0) throw ConfigError("partition: empty index range");
        if (levels < 0) throw ConfigError("partition: negative level count");
        if (levels > 0 && (idx{1} << levels) > n)
            throw ConfigError("partition: more leaves than indices");
        PartitionPlan plan;
        plan.n_ = n;
        plan.levels_ = levels;
        plan.build(0, n, 0, -1);
        return plan;
    }

    idx n() const { return n_; }
    int levels() const { return levels_; }
    idx node_count() const { return nodes_.size(); }

    const PartitionNode& node(idx id) const { return nodes_[id]; }
    const PartitionNode& root() const { return nodes_[0]; }

    idx max_leaf_size() const {
        idx m = 0;
        for (const auto& nd : nodes_)
            if (nd.is_leaf()) m = std::max(m, nd.size());
        return m;
    }

    idx leaf_count() const {
        idx c = 0;
        for (const auto& nd : nodes_)
            if (nd.is_leaf()) ++c;
        return c;
    }

  private:
    int build(idx begin, idx end, int level, int parent) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({begin, end, level, parent, -1, -1});
        if (level < levels_) {
            const idx m = end - begin;
            const idx m1 = (m + 1) / 2; // leading child takes the ceiling
            nodes_[id].child1 = build(begin, begin + m1, level + 1, id);
            nodes_[id].child2 = build(begin + m1, end, level + 1, id);
        }
        return id;
    }

    idx n_ = 0;
    int levels_ = 0;
    std::vector<PartitionNode> nodes_;
};

/// Smallest level count whose largest leaf does not exceed `leaf_cap`.
inline int levels_for(idx n, idx leaf_cap) {
    if (n == 0) throw ConfigError("levels_for: empty index range");
    if (leaf_cap == 0) throw ConfigError("levels_for: zero leaf cap");
    int l = 0;
    idx max_leaf = n;
    while (max_leaf > leaf_cap) {
        ++l;
        // largest leaf after l bisections is ceil(n / 2^l)
        const idx denom = idx{1} << l;
        max_leaf = (n + denom - 1) / denom;
        if (l > 62) throw ConfigError("levels_for: level count overflow");
    }
    return l;
}

} // namespace esif
