#include "dfd/mlp.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "dfd/errors.hpp"
#include "dfd/rng.hpp"

namespace dfd::models {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// theta layout: W1 (hidden x input, row-major) | b1 (hidden) | w2 (hidden) | b2
struct View {
    Eigen::Map<const RowMat> W1;
    Eigen::Map<const Eigen::VectorXd> b1, w2;
    double b2;
    View(const MlpNet& net)
        : W1(net.theta.data(), net.hidden, net.input),
          b1(net.theta.data() + net.hidden * net.input, net.hidden),
          w2(net.theta.data() + net.hidden * net.input + net.hidden, net.hidden),
          b2(net.theta.back()) {}
};
}  // namespace

MlpNet MlpNet::init(int input, int hidden, std::uint64_t seed) {
    if (input < 1 || hidden < 1) throw ValidationError("mlp: input and hidden sizes must be positive");
    MlpNet net;
    net.input = input;
    net.hidden = hidden;
    net.theta.assign(static_cast<std::size_t>(hidden) * input + 2 * hidden + 1, 0.0);
    Rng rng(seed);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input));
    for (int i = 0; i < hidden * input; ++i) net.theta[i] = rng.uniform(-s1, s1);
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    double* w2 = net.theta.data() + hidden * input + hidden;
    for (int i = 0; i < hidden; ++i) w2[i] = rng.uniform(-s2, s2);
    return net;
}

double MlpNet::forward(const double* x) const {
    const View v(*this);
    Eigen::Map<const Eigen::VectorXd> xv(x, input);
    const Eigen::VectorXd a = ((v.W1 * xv + v.b1).array().tanh()).matrix();
    return v.w2.dot(a) + v.b2;
}

double MlpNet::loss(const std::vector<double>& X, std::size_t n, const std::vector<double>& y) const {
    if (X.size() != n * static_cast<std::size_t>(input) || y.size() != n)
        throw ValidationError("mlp loss: shape mismatch");
    const View v(*this);
    Eigen::Map<const RowMat> Xm(X.data(), n, input);
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);
    const RowMat A = ((Xm * v.W1.transpose()).rowwise() + v.b1.transpose()).array().tanh();
    const Eigen::VectorXd out = (A * v.w2).array() + v.b2;
    return (out - ym).squaredNorm() / n;
}

std::vector<double> MlpNet::gradient(const std::vector<double>& X, std::size_t n, const std::vector<double>& y) const {
    if (X.size() != n * static_cast<std::size_t>(input) || y.size() != n)
        throw ValidationError("mlp gradient: shape mismatch");
    const View v(*this);
    Eigen::Map<const RowMat> Xm(X.data(), n, input);
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);

    const RowMat A = ((Xm * v.W1.transpose()).rowwise() + v.b1.transpose()).array().tanh();
    const Eigen::VectorXd out = (A * v.w2).array() + v.b2;
    const Eigen::VectorXd g = 2.0 / n * (out - ym);  // dL/dout

    std::vector<double> grad(theta.size(), 0.0);
    Eigen::Map<RowMat> dW1(grad.data(), hidden, input);
    Eigen::Map<Eigen::VectorXd> db1(grad.data() + hidden * input, hidden);
    Eigen::Map<Eigen::VectorXd> dw2(grad.data() + hidden * input + hidden, hidden);

    dw2 = A.transpose() * g;
    grad.back() = g.sum();
    const RowMat dZ = ((g * v.w2.transpose()).array() * (1.0 - A.array().square()));
    dW1 = dZ.transpose() * Xm;
    db1 = dZ.colwise().sum();
    return grad;
}

MlpFit fit_mlp(const std::vector<double>& X, std::size_t n, std::size_t d, const std::vector<double>& y,
               const MlpParams& params, std::uint64_t seed) {
    MlpFit fit;
    fit.net = MlpNet::init(static_cast<int>(d), params.hidden, seed);
    fit.epoch_mse.push_back(fit.net.loss(X, n, y));

    std::vector<double> best_theta = fit.net.theta;
    double best_loss = fit.epoch_mse.front();

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        const std::vector<double> grad = fit.net.gradient(X, n, y);
        for (std::size_t i = 0; i < grad.size(); ++i) fit.net.theta[i] -= params.learning_rate * grad[i];
        const double cur = fit.net.loss(X, n, y);
        if (!std::isfinite(cur)) throw ComputeError("mlp diverged; lower the learning rate");
        fit.epoch_mse.push_back(cur);
        if (cur < best_loss) {
            best_loss = cur;
            best_theta = fit.net.theta;
        }
    }
    fit.net.theta = std::move(best_theta);  // final loss never exceeds the initial loss
    return fit;
}

}  // namespace dfd::models
