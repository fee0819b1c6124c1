#include "ectshape/classifiers.hpp"
#include "ectshape/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace ectshape {

namespace {

double entropy(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    const auto n = static_cast<double>(total);
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const LabeledDataset& data, const TreeParams& params)
        : data_(data), params_(params), K_(static_cast<std::size_t>(data.num_classes)) {}

    TreeModel build() {
        std::vector<std::size_t> all(data_.rows.size());
        std::iota(all.begin(), all.end(), 0);
        model_.num_classes = data_.num_classes;
        model_.num_features = static_cast<int>(data_.dims());
        grow(all, 0);
        return std::move(model_);
    }

private:
    std::vector<std::size_t> counts_of(std::span<const std::size_t> rows) const {
        std::vector<std::size_t> counts(K_, 0);
        for (std::size_t i : rows) ++counts[static_cast<std::size_t>(*data_.rows[i].label)];
        return counts;
    }

    int make_leaf(const std::vector<std::size_t>& counts, std::size_t n) {
        TreeNode leaf;
        leaf.distribution.resize(K_);
        const double denom = static_cast<double>(n + K_);
        for (std::size_t c = 0; c < K_; ++c) {
            leaf.distribution[c] = (static_cast<double>(counts[c]) + 1.0) / denom;
        }
        model_.nodes.push_back(std::move(leaf));
        return static_cast<int>(model_.nodes.size() - 1);
    }

    SplitChoice best_split(std::span<const std::size_t> rows,
                           const std::vector<std::size_t>& counts) const {
        const std::size_t n = rows.size();
        const double parent_h = entropy(counts, n);
        const auto min_leaf = static_cast<std::size_t>(std::max(params_.min_leaf, 1));
        SplitChoice best;

        std::vector<std::size_t> order(rows.begin(), rows.end());
        std::vector<std::size_t> left(K_), right(K_);
        for (std::size_t j = 0; j < data_.dims(); ++j) {
            auto value = [&](std::size_t i) { return data_.rows[i].values[j]; };
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
            std::fill(left.begin(), left.end(), 0);
            right = counts;
            for (std::size_t pos = 0; pos + 1 < n; ++pos) {
                const auto c = static_cast<std::size_t>(*data_.rows[order[pos]].label);
                ++left[c];
                --right[c];
                const double a = value(order[pos]);
                const double b = value(order[pos + 1]);
                if (!(a < b)) continue;
                const std::size_t nl = pos + 1;
                const std::size_t nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;

                const double pl = static_cast<double>(nl) / static_cast<double>(n);
                const double pr = 1.0 - pl;
                const double gain = parent_h - pl * entropy(left, nl) - pr * entropy(right, nr);
                if (gain <= 1e-12) continue;
                double score = gain;
                if (params_.use_gain_ratio) {
                    const double split_info = -pl * std::log2(pl) - pr * std::log2(pr);
                    if (split_info >= 1e-12) score = gain / split_info;
                }
                if (score > best.score) {
                    double mid = 0.5 * (a + b);
                    if (!(mid < b)) mid = a;  // adjacent doubles
                    best = {static_cast<int>(j), mid, score, gain};
                }
            }
        }
        return best;
    }

    int grow(const std::vector<std::size_t>& rows, int depth) {
        const auto counts = counts_of(rows);
        const std::size_t n = rows.size();
        const bool pure = std::count_if(counts.begin(), counts.end(),
                                        [](std::size_t c) { return c > 0; }) <= 1;
        const auto min_leaf = static_cast<std::size_t>(std::max(params_.min_leaf, 1));
        if (pure || depth >= params_.max_depth || n < 2 * min_leaf) {
            return make_leaf(counts, n);
        }
        const SplitChoice split = best_split(rows, counts);
        if (split.feature < 0) {
            return make_leaf(counts, n);
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t i : rows) {
            const double v = data_.rows[i].values[static_cast<std::size_t>(split.feature)];
            (v <= split.threshold ? left_rows : right_rows).push_back(i);
        }

        model_.nodes.push_back(TreeNode{split.feature, split.threshold, -1, -1, {}});
        const auto self = model_.nodes.size() - 1;
        const int l = grow(left_rows, depth + 1);
        const int r = grow(right_rows, depth + 1);
        model_.nodes[self].left = l;
        model_.nodes[self].right = r;
        return static_cast<int>(self);
    }

    const LabeledDataset& data_;
    TreeParams params_;
    std::size_t K_;
    TreeModel model_;
};

}  // namespace

TreeModel train_tree(const LabeledDataset& data, const TreeParams& params) {
    if (data.rows.empty()) {
        throw Error(ErrorCode::EmptyDataset, "cannot grow a tree on zero rows");
    }
    data.validate();
    if (params.max_depth < 0 || params.min_leaf < 1) {
        throw Error(ErrorCode::InvalidArgument, "tree max_depth >= 0 and min_leaf >= 1 required");
    }
    if (data.rows.size() < static_cast<std::size_t>(params.min_leaf)) {
        throw Error(ErrorCode::EmptyDataset, "fewer rows than min_leaf");
    }
    return TreeBuilder(data, params).build();
}

int TreeModel::depth() const {
    if (nodes.empty()) return 0;
    std::function<int(int)> walk = [&](int i) -> int {
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        if (n.is_leaf()) return 0;
        return 1 + std::max(walk(n.left), walk(n.right));
    };
    return walk(0);
}

std::size_t TreeModel::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace ectshape
