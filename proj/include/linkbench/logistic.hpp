#pragma once

#include <cstdint>
#include <vector>

#include "linkbench/types.hpp"

namespace linkbench {

/// L2-regularized logistic regression trained by full-batch gradient descent
/// with step halving, so the training loss is non-increasing per epoch.
/// Features are standardized with training-set statistics.
class LogisticRegression {
public:
    struct Options {
        double learning_rate = 0.5;
        std::size_t epochs = 200;
        double l2 = 1e-4;
    };

    LogisticRegression() = default;
    explicit LogisticRegression(Options opts) : opts_(opts) {}

    void fit(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
             std::uint64_t seed);

    /// Predicted probability of the positive class.
    double predict(const std::vector<double>& features) const;

    const std::vector<double>& loss_history() const { return loss_history_; }

    /// Mean negative log-likelihood plus L2 penalty over raw (unstandardized)
    /// weights; exposed for gradient checks.
    static double loss(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, const std::vector<double>& weights,
                       double bias, double l2);
    static void gradient(const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels, const std::vector<double>& weights,
                         double bias, double l2, std::vector<double>& grad_w, double& grad_b);

private:
    Options opts_;
    std::vector<double> weights_;
    double bias_ = 0.0;
    std::vector<double> mean_, scale_;
    std::vector<double> loss_history_;
};

}  // namespace linkbench
