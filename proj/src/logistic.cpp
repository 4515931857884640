#include "linkbench/logistic.hpp"

#include <algorithm>
#include <cmath>

namespace linkbench {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double log1pexp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double LogisticRegression::loss(const std::vector<std::vector<double>>& features,
                                const std::vector<int>& labels,
                                const std::vector<double>& weights, double bias, double l2) {
    double total = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * features[i][j];
        total += labels[i] ? log1pexp(-z) : log1pexp(z);
    }
    total /= static_cast<double>(features.size());
    for (double w : weights) total += 0.5 * l2 * w * w;
    return total;
}

void LogisticRegression::gradient(const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels,
                                  const std::vector<double>& weights, double bias, double l2,
                                  std::vector<double>& grad_w, double& grad_b) {
    const std::size_t d = weights.size();
    grad_w.assign(d, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = bias;
        for (std::size_t j = 0; j < d; ++j) z += weights[j] * features[i][j];
        const double err = sigmoid(z) - static_cast<double>(labels[i]);
        for (std::size_t j = 0; j < d; ++j) grad_w[j] += err * features[i][j];
        grad_b += err;
    }
    const double inv = 1.0 / static_cast<double>(features.size());
    for (std::size_t j = 0; j < d; ++j) grad_w[j] = grad_w[j] * inv + l2 * weights[j];
    grad_b *= inv;
}

void LogisticRegression::fit(const std::vector<std::vector<double>>& features,
                             const std::vector<int>& labels, std::uint64_t) {
    if (features.empty() || features.size() != labels.size())
        throw NumericError("logistic fit: empty or mismatched training data");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) throw NumericError("logistic fit: single-class training set");

    const std::size_t d = features.front().size();
    mean_.assign(d, 0.0);
    scale_.assign(d, 0.0);
    for (const auto& row : features)
        for (std::size_t j = 0; j < d; ++j) mean_[j] += row[j];
    for (std::size_t j = 0; j < d; ++j) mean_[j] /= static_cast<double>(features.size());
    for (const auto& row : features)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - mean_[j];
            scale_[j] += c * c;
        }
    for (std::size_t j = 0; j < d; ++j) {
        scale_[j] = std::sqrt(scale_[j] / static_cast<double>(features.size()));
        if (scale_[j] < 1e-12) scale_[j] = 1.0;  // constant feature
    }

    std::vector<std::vector<double>> x(features.size(), std::vector<double>(d));
    for (std::size_t i = 0; i < features.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) x[i][j] = (features[i][j] - mean_[j]) / scale_[j];

    weights_.assign(d, 0.0);
    bias_ = 0.0;
    loss_history_.clear();
    double step = opts_.learning_rate;
    double current = loss(x, labels, weights_, bias_, opts_.l2);
    loss_history_.push_back(current);

    std::vector<double> grad_w;
    double grad_b = 0.0;
    for (std::size_t epoch = 0; epoch < opts_.epochs; ++epoch) {
        gradient(x, labels, weights_, bias_, opts_.l2, grad_w, grad_b);
        for (;;) {
            std::vector<double> w_try = weights_;
            for (std::size_t j = 0; j < d; ++j) w_try[j] -= step * grad_w[j];
            const double b_try = bias_ - step * grad_b;
            const double l_try = loss(x, labels, w_try, b_try, opts_.l2);
            if (l_try <= current + 1e-15) {
                weights_ = std::move(w_try);
                bias_ = b_try;
                current = l_try;
                break;
            }
            step *= 0.5;
            if (step < 1e-12) break;  // converged to machine precision
        }
        loss_history_.push_back(current);
        if (step < 1e-12) break;
    }
}

double LogisticRegression::predict(const std::vector<double>& features) const {
    if (weights_.empty()) throw NumericError("logistic predict: model not fitted");
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j)
        z += weights_[j] * (features[j] - mean_[j]) / scale_[j];
    return sigmoid(z);
}

}  // namespace linkbench
