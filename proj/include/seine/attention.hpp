// Reference forward passes for the semantic-feature fusion and the
// structure-guided attention, in both its full and criss-cross forms.
// Forward evaluation only; nothing here is trainable.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "seine/grid.hpp"

namespace seine {

/// H x W x C real tensor (query/key/value and branch features).
using FeatureMap = ScalarField;

/// Explicit convolution weights standing in for learned 1x1 (or 3x3) layers.
struct ConvWeights {
    int kernel = 1;  // 1 or 3
    int in_channels = 0;
    int out_channels = 0;
    std::vector<double> weights;  // [out][in][kr][kc], row-major
    std::vector<double> bias;     // [out]

    ConvWeights() = default;

    ConvWeights(int kernel_size, int in_ch, int out_ch)
        : kernel(kernel_size), in_channels(in_ch), out_channels(out_ch),
          weights(static_cast<std::size_t>(out_ch) * in_ch * kernel_size * kernel_size, 0.0),
          bias(out_ch, 0.0) {
        assert(kernel_size == 1 || kernel_size == 3);
        assert(in_ch >= 1 && out_ch >= 1);
    }

    double& at(int out, int in, int kr, int kc) {
        return weights[((static_cast<std::size_t>(out) * in_channels + in) * kernel + kr) * kernel + kc];
    }
    double at(int out, int in, int kr, int kc) const {
        return weights[((static_cast<std::size_t>(out) * in_channels + in) * kernel + kr) * kernel + kc];
    }

    /// 1x1 weights passing every channel through unchanged.
    static ConvWeights identity_1x1(int channels) {
        ConvWeights w(1, channels, channels);
        for (int ch = 0; ch < channels; ++ch) w.at(ch, ch, 0, 0) = 1.0;
        return w;
    }
};

/// Cross-correlation with zero padding preserving H x W.
inline FeatureMap conv2d(const FeatureMap& input, const ConvWeights& w) {
    if (input.channels != w.in_channels) {
        throw DimensionMismatch("conv2d: input channel count does not match weights");
    }
    if (w.kernel != 1 && w.kernel != 3) {
        throw DimensionMismatch("conv2d: kernel size must be 1 or 3");
    }
    const int h = input.height, width = input.width, half = w.kernel / 2;
    FeatureMap out(h, width, w.out_channels);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < width; ++c) {
            for (int o = 0; o < w.out_channels; ++o) {
                double sum = w.bias[o];
                for (int i = 0; i < w.in_channels; ++i) {
                    for (int kr = 0; kr < w.kernel; ++kr) {
                        for (int kc = 0; kc < w.kernel; ++kc) {
                            const int rr = r + kr - half, cc = c + kc - half;
                            if (rr < 0 || rr >= h || cc < 0 || cc >= width) continue;
                            sum += w.at(o, i, kr, kc) * input.at(rr, cc, i);
                        }
                    }
                }
                out.at(r, c, o) = sum;
            }
        }
    }
    return out;
}

/// Channel concatenation of two same-sized feature maps, a's channels first.
inline FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
    if (a.height != b.height || a.width != b.width) {
        throw DimensionMismatch("concat_channels: spatial shapes differ");
    }
    FeatureMap out(a.height, a.width, a.channels + b.channels);
    for (int r = 0; r < a.height; ++r) {
        for (int c = 0; c < a.width; ++c) {
            for (int ch = 0; ch < a.channels; ++ch) out.at(r, c, ch) = a.at(r, c, ch);
            for (int ch = 0; ch < b.channels; ++ch) out.at(r, c, a.channels + ch) = b.at(r, c, ch);
        }
    }
    return out;
}

struct SffResult {
    FeatureMap f_c2;  ///< updated semantic feature
    FeatureMap g_c2;  ///< updated structure feature (fused with the semantic branch)
};

/// Semantic feature fusion: f_c2 = conv(f_c1), g_c2 = conv(concat(f_c1, g_c1)).
inline SffResult sff_fuse(const FeatureMap& f_c1, const FeatureMap& g_c1,
                          const ConvWeights& w_f, const ConvWeights& w_g) {
    if (f_c1.height != g_c1.height || f_c1.width != g_c1.width) {
        throw DimensionMismatch("sff_fuse: branch shapes differ");
    }
    return {conv2d(f_c1, w_f), conv2d(concat_channels(f_c1, g_c1), w_g)};
}

/// Dense attention weights: `rows` queries over `cols` keys, row-stochastic.
struct AttentionMap {
    int rows = 0;
    int cols = 0;
    std::vector<double> weights;

    AttentionMap() = default;
    AttentionMap(int r, int c) : rows(r), cols(c), weights(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int q, int k) { return weights[static_cast<std::size_t>(q) * cols + k]; }
    double at(int q, int k) const { return weights[static_cast<std::size_t>(q) * cols + k]; }
};

namespace detail {

inline double dot_channels(const FeatureMap& a, std::size_t ia, const FeatureMap& b, std::size_t ib,
                           int channels) {
    double sum = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
        sum += a.values[ia + ch] * b.values[ib + ch];
    }
    return sum;
}

// Numerically stable softmax in place; summation in index order.
inline void softmax_inplace(std::vector<double>& logits) {
    double max_logit = logits[0];
    for (double v : logits) max_logit = std::max(max_logit, v);
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - max_logit);
        sum += v;
    }
    for (double& v : logits) v /= sum;
}

}  // namespace detail

struct SgaFullResult {
    AttentionMap attention;  ///< S, HW x HW
    FeatureMap g_next;       ///< S . V_str
    FeatureMap f_next;       ///< S . V_sem
};

/**
 * @brief Full structure-guided attention.
 *
 * S = softmax(Q K^T / sqrt(C)) over keys after flattening to HW x C; the one
 * attention map updates both the structure and the semantic value streams.
 */
inline SgaFullResult sga_full(const FeatureMap& q, const FeatureMap& k, const FeatureMap& v_str,
                              const FeatureMap& v_sem) {
    const int h = q.height, w = q.width;
    if (k.height != h || k.width != w || v_str.height != h || v_str.width != w ||
        v_sem.height != h || v_sem.width != w) {
        throw DimensionMismatch("sga_full: inputs must share H and W");
    }
    if (q.channels != k.channels) {
        throw DimensionMismatch("sga_full: Q and K must share channel count");
    }
    const int n = h * w;
    const int c = q.channels;
    const double scale = 1.0 / std::sqrt(static_cast<double>(c));

    SgaFullResult res;
    res.attention = AttentionMap(n, n);
    res.g_next = FeatureMap(h, w, v_str.channels);
    res.f_next = FeatureMap(h, w, v_sem.channels);

    std::vector<double> logits(n);
    for (int m = 0; m < n; ++m) {
        const std::size_t qi = static_cast<std::size_t>(m) * c;
        for (int j = 0; j < n; ++j) {
            logits[j] = detail::dot_channels(q, qi, k, static_cast<std::size_t>(j) * c, c) * scale;
        }
        detail::softmax_inplace(logits);
        for (int j = 0; j < n; ++j) res.attention.at(m, j) = logits[j];

        for (int ch = 0; ch < v_str.channels; ++ch) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) sum += logits[j] * v_str.values[static_cast<std::size_t>(j) * v_str.channels + ch];
            res.g_next.values[static_cast<std::size_t>(m) * v_str.channels + ch] = sum;
        }
        for (int ch = 0; ch < v_sem.channels; ++ch) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) sum += logits[j] * v_sem.values[static_cast<std::size_t>(j) * v_sem.channels + ch];
            res.f_next.values[static_cast<std::size_t>(m) * v_sem.channels + ch] = sum;
        }
    }
    return res;
}

/**
 * @brief Criss-cross attention weights: each query attends to the H+W-1
 *        positions sharing its row or column (itself counted once).
 *
 * Candidates are stored in ascending linear index order; on 1 x N and N x 1
 * grids this coincides with the full-attention key order, so the two forms
 * agree exactly there.
 */
struct CrissCrossAttention {
    int height = 0;
    int width = 0;
    int span = 0;                 ///< H + W - 1
    std::vector<int> candidates;  ///< [HW][span] linear key indices
    std::vector<double> weights;  ///< [HW][span]

    int candidate(int query, int slot) const {
        return candidates[static_cast<std::size_t>(query) * span + slot];
    }
    double weight(int query, int slot) const {
        return weights[static_cast<std::size_t>(query) * span + slot];
    }
};

inline CrissCrossAttention criss_cross_attention(const FeatureMap& q, const FeatureMap& k) {
    const int h = q.height, w = q.width;
    if (k.height != h || k.width != w) {
        throw DimensionMismatch("criss_cross_attention: Q and K spatial shapes differ");
    }
    if (q.channels != k.channels) {
        throw DimensionMismatch("criss_cross_attention: Q and K must share channel count");
    }
    const int c = q.channels;
    const double scale = 1.0 / std::sqrt(static_cast<double>(c));

    CrissCrossAttention att;
    att.height = h;
    att.width = w;
    att.span = h + w - 1;
    att.candidates.resize(static_cast<std::size_t>(h) * w * att.span);
    att.weights.resize(att.candidates.size());

    std::vector<double> logits(att.span);
    for (int r = 0; r < h; ++r) {
        for (int c0 = 0; c0 < w; ++c0) {
            const int m = r * w + c0;
            // Cross members in ascending linear index: column part above the
            // row, the full row, column part below the row.
            int* cand = &att.candidates[static_cast<std::size_t>(m) * att.span];
            int idx = 0;
            for (int rr = 0; rr < r; ++rr) cand[idx++] = rr * w + c0;
            for (int cc = 0; cc < w; ++cc) cand[idx++] = r * w + cc;
            for (int rr = r + 1; rr < h; ++rr) cand[idx++] = rr * w + c0;
            assert(idx == att.span);

            const std::size_t qi = static_cast<std::size_t>(m) * c;
            for (int s = 0; s < att.span; ++s) {
                logits[s] = detail::dot_channels(q, qi, k, static_cast<std::size_t>(cand[s]) * c, c) * scale;
            }
            detail::softmax_inplace(logits);
            for (int s = 0; s < att.span; ++s) {
                att.weights[static_cast<std::size_t>(m) * att.span + s] = logits[s];
            }
        }
    }
    return att;
}

/// Weighted sum of V over each query's cross candidates.
inline FeatureMap criss_cross_apply(const CrissCrossAttention& att, const FeatureMap& v) {
    if (v.height != att.height || v.width != att.width) {
        throw DimensionMismatch("criss_cross_apply: value shape does not match attention");
    }
    FeatureMap out(att.height, att.width, v.channels);
    const int n = att.height * att.width;
    for (int m = 0; m < n; ++m) {
        for (int ch = 0; ch < v.channels; ++ch) {
            double sum = 0.0;
            for (int s = 0; s < att.span; ++s) {
                sum += att.weight(m, s) *
                       v.values[static_cast<std::size_t>(att.candidate(m, s)) * v.channels + ch];
            }
            out.values[static_cast<std::size_t>(m) * v.channels + ch] = sum;
        }
    }
    return out;
}

/// One criss-cross attention pass over a single value stream.
inline FeatureMap criss_cross_pass(const FeatureMap& q, const FeatureMap& k, const FeatureMap& v) {
    return criss_cross_apply(criss_cross_attention(q, k), v);
}

struct SgaPairResult {
    FeatureMap g_next;
    FeatureMap f_next;
};

/**
 * @brief Stacked criss-cross structure-guided attention (default 2 passes).
 *
 * Q and K are taken as the already-projected tensors and are reused by every
 * pass; each pass computes one attention map and applies it to both value
 * streams. The overload below re-projects Q and K from the updated structure
 * stream between passes with shared weights.
 */
inline SgaPairResult sga_criss_cross(const FeatureMap& q, const FeatureMap& k,
                                     FeatureMap v_str, FeatureMap v_sem, int passes = 2) {
    assert(passes >= 1);
    const CrissCrossAttention att = criss_cross_attention(q, k);
    for (int p = 0; p < passes; ++p) {
        v_str = criss_cross_apply(att, v_str);
        v_sem = criss_cross_apply(att, v_sem);
    }
    return {std::move(v_str), std::move(v_sem)};
}

/// Fully re-projected variant: Q/K/V are derived from the branch features by
/// 1x1 convolutions, and Q, K are recomputed from the updated structure
/// stream between passes using the same projection weights.
inline SgaPairResult sga_criss_cross(const FeatureMap& g_c2, const FeatureMap& f_c2,
                                     const ConvWeights& w_q, const ConvWeights& w_k,
                                     const ConvWeights& w_v_str, const ConvWeights& w_v_sem,
                                     int passes = 2) {
    assert(passes >= 1);
    FeatureMap v_str = conv2d(g_c2, w_v_str);
    FeatureMap v_sem = conv2d(f_c2, w_v_sem);
    FeatureMap q = conv2d(g_c2, w_q);
    FeatureMap k = conv2d(g_c2, w_k);
    for (int p = 0; p < passes; ++p) {
        const CrissCrossAttention att = criss_cross_attention(q, k);
        v_str = criss_cross_apply(att, v_str);
        v_sem = criss_cross_apply(att, v_sem);
        if (p + 1 < passes) {
            q = conv2d(v_str, w_q);
            k = conv2d(v_str, w_k);
        }
    }
    return {std::move(v_str), std::move(v_sem)};
}

/// One query's attention weights scattered back onto the pixel grid, for
/// SEF1 export and offline visualization.
inline ScalarField attention_query_field(const AttentionMap& s, int query, int h, int w) {
    assert(s.cols == h * w && query >= 0 && query < s.rows);
    ScalarField out(h, w, 1, 0.0);
    for (int j = 0; j < s.cols; ++j) out.values[j] = s.at(query, j);
    return out;
}

inline ScalarField attention_query_field(const CrissCrossAttention& att, int query) {
    ScalarField out(att.height, att.width, 1, 0.0);
    for (int s = 0; s < att.span; ++s) {
        out.values[att.candidate(query, s)] = att.weight(query, s);
    }
    return out;
}

}  // namespace seine
