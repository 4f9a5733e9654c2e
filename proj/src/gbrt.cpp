#include "dfd/gbrt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfd/errors.hpp"

namespace dfd::models {

double Tree::predict(const double* x) const {
    int node = 0;
    while (nodes[node].feature >= 0)
        node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left : nodes[node].right;
    return nodes[node].value;
}

double GbrtModel::predict(const double* x) const {
    double out = base;
    for (const auto& tree : trees) out += learning_rate * tree.predict(x);
    return out;
}

namespace {

struct Builder {
    const std::vector<double>& X;
    std::size_t d;
    const std::vector<double>& residual;
    const GbrtParams& params;
    Tree tree;

    // lists[f] holds the node's sample indices ordered by feature f.
    int build(std::vector<std::vector<int>> lists, int depth) {
        const auto& any = lists[0];
        const std::size_t n = any.size();
        double sum = 0;
        for (int i : any) sum += residual[i];

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[node_id].value = sum / n;

        if (depth == 0 || n < 2 * static_cast<std::size_t>(params.min_leaf)) return node_id;

        // Exact greedy: maximize sum_L^2/n_L + sum_R^2/n_R (total squared sum is fixed).
        int best_f = -1;
        double best_gain = sum * sum / n;
        double best_thr = 0;
        for (std::size_t f = 0; f < d; ++f) {
            const auto& order = lists[f];
            double left_sum = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_sum += residual[order[i]];
                const std::size_t nl = i + 1;
                if (nl < static_cast<std::size_t>(params.min_leaf)) continue;
                if (n - nl < static_cast<std::size_t>(params.min_leaf)) break;
                const double xl = X[order[i] * d + f];
                const double xr = X[order[i + 1] * d + f];
                if (!(xl < xr)) continue;  // cannot separate equal values
                const double right_sum = sum - left_sum;
                const double gain = left_sum * left_sum / nl + right_sum * right_sum / (n - nl);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_thr = xl + (xr - xl) / 2;
                }
            }
        }
        if (best_f < 0) return node_id;  // no split improves the fit

        std::vector<std::vector<int>> left(d), right(d);
        for (std::size_t f = 0; f < d; ++f) {
            for (int i : lists[f])
                (X[i * d + best_f] <= best_thr ? left[f] : right[f]).push_back(i);
        }
        lists.clear();

        tree.nodes[node_id].feature = best_f;
        tree.nodes[node_id].threshold = best_thr;
        const int l = build(std::move(left), depth - 1);
        tree.nodes[node_id].left = l;
        const int r = build(std::move(right), depth - 1);
        tree.nodes[node_id].right = r;
        return node_id;
    }
};

}  // namespace

GbrtModel fit_gbrt(const std::vector<double>& X, std::size_t n, std::size_t d, const std::vector<double>& y,
                   const GbrtParams& params) {
    if (n == 0 || d == 0) throw ValidationError("fit_gbrt: empty input");
    if (X.size() != n * d || y.size() != n) throw ValidationError("fit_gbrt: shape mismatch");

    GbrtModel model;
    model.learning_rate = params.learning_rate;
    model.base = std::accumulate(y.begin(), y.end(), 0.0) / n;

    std::vector<std::vector<int>> sorted(d);
    for (std::size_t f = 0; f < d; ++f) {
        sorted[f].resize(n);
        std::iota(sorted[f].begin(), sorted[f].end(), 0);
        std::stable_sort(sorted[f].begin(), sorted[f].end(),
                         [&](int a, int b) { return X[a * d + f] < X[b * d + f]; });
    }

    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - model.base;

    for (int t = 0; t < params.trees; ++t) {
        Builder builder{X, d, residual, params, {}};
        builder.build(sorted, params.depth);
        model.trees.push_back(std::move(builder.tree));

        double mse = 0;
        const Tree& tree = model.trees.back();
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] -= params.learning_rate * tree.predict(&X[i * d]);
            mse += residual[i] * residual[i];
        }
        model.staged_train_mse.push_back(mse / n);
    }
    return model;
}

}  // namespace dfd::models
