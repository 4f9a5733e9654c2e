#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dfd::models {

// One hidden tanh layer, linear output. Parameters are packed W1 | b1 | w2 | b2
// so the loss gradient can be checked against finite differences elementwise.
struct MlpNet {
    int input = 0;
    int hidden = 0;
    std::vector<double> theta;

    static MlpNet init(int input, int hidden, std::uint64_t seed);

    std::size_t params() const { return theta.size(); }
    double forward(const double* x) const;
    // Mean squared error over the batch (X row-major n x input).
    double loss(const std::vector<double>& X, std::size_t n, const std::vector<double>& y) const;
    std::vector<double> gradient(const std::vector<double>& X, std::size_t n, const std::vector<double>& y) const;
};

struct MlpParams {
    int hidden = 64;
    int epochs = 2000;
    double learning_rate = 0.05;
};

struct MlpFit {
    MlpNet net;
    std::vector<double> epoch_mse;  // training loss per epoch (standardized target)
};

// Full-batch gradient descent, keeping the best-loss parameters seen.
MlpFit fit_mlp(const std::vector<double>& X, std::size_t n, std::size_t d, const std::vector<double>& y,
               const MlpParams& params, std::uint64_t seed);

}  // namespace dfd::models
