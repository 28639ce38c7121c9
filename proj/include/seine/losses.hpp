// Loss functions with analytic gradients with respect to the predictions,
// plus the multi-scale and total-loss aggregators.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seine/grid.hpp"

namespace seine {

/// Per-pixel class probabilities; channels = number of classes.
using ProbField = ScalarField;

struct LossConfig {
    double lambda1 = 1.0;          ///< weight of the structure loss
    double lambda2 = 1.0;          ///< weight of the position loss
    double epsilon_ce = 1e-12;     ///< log clamp for cross-entropy
    double epsilon_dice = 1e-6;    ///< numerator/denominator smoothing for Dice
    std::set<int> scale_blocks = {2, 3, 4};
};

/// Loss value plus its analytic gradient with respect to the prediction.
struct LossResult {
    double loss = 0.0;
    ScalarField grad;
};

/**
 * @brief Pixel-mean cross-entropy of probabilities against integer classes.
 *
 * loss = -mean_i log(max(p_i[target_i], eps)); the gradient is nonzero only
 * at the target-class entries.
 */
inline LossResult cross_entropy(const ProbField& pred, const SemanticMask& target,
                                const LossConfig& cfg = {}) {
    if (pred.height != target.height() || pred.width != target.width()) {
        throw DimensionMismatch("cross_entropy: prediction/target shapes differ");
    }
    const double n = static_cast<double>(pred.height) * pred.width;
    LossResult res;
    res.grad = ScalarField(pred.height, pred.width, pred.channels, 0.0);
    double sum = 0.0;
    for (int r = 0; r < pred.height; ++r) {
        for (int c = 0; c < pred.width; ++c) {
            const int cls = target.at(r, c);
            if (cls >= pred.channels) {
                throw DimensionMismatch("cross_entropy: target class exceeds channel count");
            }
            const double p = pred.at(r, c, cls);
            sum += std::log(std::max(p, cfg.epsilon_ce));
            if (p > cfg.epsilon_ce) {
                res.grad.at(r, c, cls) = -1.0 / (n * p);
            }
        }
    }
    res.loss = -sum / n;
    return res;
}

/**
 * @brief Soft Dice loss averaged over classes (background included).
 *
 * Per class c: D_c = (2 sum(p_c g_c) + eps) / (sum p_c + sum g_c + eps);
 * loss = 1 - mean_c D_c.
 */
inline LossResult dice_loss(const ProbField& pred, const SemanticMask& target,
                            const LossConfig& cfg = {}) {
    if (pred.height != target.height() || pred.width != target.width()) {
        throw DimensionMismatch("dice_loss: prediction/target shapes differ");
    }
    const int num_classes = pred.channels;
    const double eps = cfg.epsilon_dice;

    std::vector<double> sum_p(num_classes, 0.0), sum_g(num_classes, 0.0), sum_pg(num_classes, 0.0);
    for (int r = 0; r < pred.height; ++r) {
        for (int c = 0; c < pred.width; ++c) {
            const int cls = target.at(r, c);
            if (cls >= num_classes) {
                throw DimensionMismatch("dice_loss: target class exceeds channel count");
            }
            for (int ch = 0; ch < num_classes; ++ch) {
                const double p = pred.at(r, c, ch);
                sum_p[ch] += p;
                if (ch == cls) {
                    sum_g[ch] += 1.0;
                    sum_pg[ch] += p;
                }
            }
        }
    }

    LossResult res;
    res.grad = ScalarField(pred.height, pred.width, num_classes, 0.0);
    double mean_dice = 0.0;
    std::vector<double> numer(num_classes), denom(num_classes);
    for (int ch = 0; ch < num_classes; ++ch) {
        numer[ch] = 2.0 * sum_pg[ch] + eps;
        denom[ch] = sum_p[ch] + sum_g[ch] + eps;
        mean_dice += numer[ch] / denom[ch];
    }
    mean_dice /= num_classes;
    res.loss = 1.0 - mean_dice;

    for (int r = 0; r < pred.height; ++r) {
        for (int c = 0; c < pred.width; ++c) {
            const int cls = target.at(r, c);
            for (int ch = 0; ch < num_classes; ++ch) {
                const double g = (ch == cls) ? 1.0 : 0.0;
                const double d_dice = (2.0 * g * denom[ch] - numer[ch]) / (denom[ch] * denom[ch]);
                res.grad.at(r, c, ch) = -d_dice / num_classes;
            }
        }
    }
    return res;
}

/// Mean squared error over all entries; grad = 2 (pred - target) / N.
inline LossResult mse(const ScalarField& pred, const ScalarField& target) {
    require_same_shape(pred, target, "mse");
    const double n = static_cast<double>(pred.values.size());
    LossResult res;
    res.grad = ScalarField(pred.height, pred.width, pred.channels, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const double diff = pred.values[i] - target.values[i];
        sum += diff * diff;
        res.grad.values[i] = 2.0 * diff / n;
    }
    res.loss = sum / n;
    return res;
}

/// Sum of CE + Dice over the configured scale blocks.
inline double semantic_loss(const std::map<int, ProbField>& preds,
                            const std::map<int, SemanticMask>& targets,
                            const LossConfig& cfg = {}) {
    double total = 0.0;
    for (int block : cfg.scale_blocks) {
        const auto p = preds.find(block);
        const auto t = targets.find(block);
        if (p == preds.end() || t == targets.end()) {
            throw MissingScale("semantic_loss: block " + std::to_string(block) + " missing");
        }
        total += cross_entropy(p->second, t->second, cfg).loss;
        total += dice_loss(p->second, t->second, cfg).loss;
    }
    return total;
}

/// Sum of MSE over the configured scale blocks.
inline double structure_loss(const std::map<int, ScalarField>& preds,
                             const std::map<int, ScalarField>& targets,
                             const LossConfig& cfg = {}) {
    double total = 0.0;
    for (int block : cfg.scale_blocks) {
        const auto p = preds.find(block);
        const auto t = targets.find(block);
        if (p == preds.end() || t == targets.end()) {
            throw MissingScale("structure_loss: block " + std::to_string(block) + " missing");
        }
        total += mse(p->second, t->second).loss;
    }
    return total;
}

/// MSE of both branch position predictions against the shared target.
inline double position_loss(const ScalarField& pred_sem, const ScalarField& pred_str,
                            const ScalarField& target) {
    return mse(pred_sem, target).loss + mse(pred_str, target).loss;
}

/// l_sem + lambda1 * l_str + lambda2 * l_pos.
inline double total_loss(double l_sem, double l_str, double l_pos, const LossConfig& cfg = {}) {
    return l_sem + cfg.lambda1 * l_str + cfg.lambda2 * l_pos;
}

}  // namespace seine
