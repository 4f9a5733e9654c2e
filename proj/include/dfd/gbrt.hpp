#pragma once

#include <cstddef>
#include <vector>

namespace dfd::models {

struct GbrtParams {
    int trees = 200;
    int depth = 3;
    double learning_rate = 0.05;
    int min_leaf = 5;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double predict(const double* x) const;
};

struct GbrtModel {
    double base = 0.0;
    double learning_rate = 1.0;
    std::vector<Tree> trees;
    std::vector<double> staged_train_mse;  // training MSE after each tree
    double predict(const double* x) const;
};

// Exact greedy least-squares boosting; X is row-major n x d.
GbrtModel fit_gbrt(const std::vector<double>& X, std::size_t n, std::size_t d, const std::vector<double>& y,
                   const GbrtParams& params);

}  // namespace dfd::models
