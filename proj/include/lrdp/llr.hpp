#pragma once

#include "baselines.hpp"
#include "io.hpp"

#include <string>
#include <vector>

namespace lrdp {

/// Sequence of equally sized frames with finite intensities.
struct ImageSequence {
    Index height = 0;
    Index width = 0;
    std::vector<Mat> frames;

    Index frame_count() const { return static_cast<Index>(frames.size()); }
};

inline void require_sequence(const ImageSequence& seq) {
    if (seq.frames.empty()) throw std::invalid_argument("image sequence has no frames");
    for (const Mat& f : seq.frames) {
        if (f.rows() != seq.height || f.cols() != seq.width)
            throw std::invalid_argument("image sequence frames disagree on dimensions");
        require_finite(f, "image frame");
    }
}

/// One sliding-window observation: column t holds the window of frame t,
/// vectorized row-major, so the matrix is (window^2) x T.
struct CasoratiPatch {
    Index row = 0;
    Index col = 0;
    Index window = 0;
    Mat matrix;
};

enum class Border {
    Interior,  ///< anchors restricted to fully inside windows
    Replicate  ///< one anchor per pixel; windows read edge-replicated values
};

enum class Selector { DP, SURE, HardT };

namespace detail {

inline std::vector<Index> anchor_grid(Index extent, Index window, Index stride, Border border) {
    std::vector<Index> anchors;
    const Index last = border == Border::Interior ? extent - window : extent - 1;
    for (Index a = 0; a <= last; a += stride) anchors.push_back(a);
    // every pixel must fall under at least one window
    if (anchors.back() + window < extent)
        throw std::invalid_argument("patch grid leaves pixels uncovered; adjust stride or window");
    return anchors;
}

inline double clamped(const Mat& f, Index i, Index j) {
    return f(std::min(i, f.rows() - 1), std::min(j, f.cols() - 1));
}

inline Mat casorati_at(const ImageSequence& seq, Index r, Index c, Index window) {
    const Index t_count = seq.frame_count();
    Mat m(window * window, t_count);
    for (Index t = 0; t < t_count; ++t) {
        const Mat& f = seq.frames[static_cast<size_t>(t)];
        for (Index lr = 0; lr < window; ++lr)
            for (Index lc = 0; lc < window; ++lc)
                m(lr * window + lc, t) = clamped(f, r + lr, c + lc);
    }
    return m;
}

} // namespace detail

/// All patches on the anchor grid, row-major anchor order.
inline std::vector<CasoratiPatch> extract_patches(const ImageSequence& seq, Index window, Index stride,
                                                  Border border = Border::Interior) {
    require_sequence(seq);
    if (window < 1 || window > std::min(seq.height, seq.width))
        throw std::invalid_argument("extract_patches: window must be in [1, min(height, width)]");
    if (stride < 1) throw std::invalid_argument("extract_patches: stride must be positive");
    const auto row_anchors = detail::anchor_grid(seq.height, window, stride, border);
    const auto col_anchors = detail::anchor_grid(seq.width, window, stride, border);
    std::vector<CasoratiPatch> patches;
    patches.reserve(row_anchors.size() * col_anchors.size());
    for (Index r : row_anchors)
        for (Index c : col_anchors)
            patches.push_back(CasoratiPatch{r, c, window, detail::casorati_at(seq, r, c, window)});
    return patches;
}

/// Recombines (possibly modified) patches by uniform averaging. Every pixel
/// is a convex combination of the patch estimates covering it; contributions
/// are folded in a fixed anchor order regardless of the order of `patches`,
/// so processing order cannot change the output.
inline ImageSequence aggregate_patches(const std::vector<CasoratiPatch>& patches, Index height, Index width,
                                       Index frame_count, Index stride, Border border = Border::Interior) {
    if (patches.empty()) throw std::invalid_argument("aggregate_patches: no patches");
    const Index window = patches.front().window;
    const auto row_anchors = detail::anchor_grid(height, window, stride, border);
    const auto col_anchors = detail::anchor_grid(width, window, stride, border);
    if (patches.size() != row_anchors.size() * col_anchors.size())
        throw std::invalid_argument("aggregate_patches: patch count does not match the anchor grid");

    // index patches by anchor so lookups are order-independent
    std::vector<const CasoratiPatch*> by_anchor(patches.size(), nullptr);
    auto slot = [&](Index r, Index c) -> size_t {
        return static_cast<size_t>((r / stride) * static_cast<Index>(col_anchors.size()) + c / stride);
    };
    for (const CasoratiPatch& p : patches) {
        if (p.window != window || p.matrix.rows() != window * window || p.matrix.cols() != frame_count)
            throw std::invalid_argument("aggregate_patches: inconsistent patch shape");
        by_anchor[slot(p.row, p.col)] = &p;
    }

    ImageSequence out;
    out.height = height;
    out.width = width;
    out.frames.assign(static_cast<size_t>(frame_count), Mat::Zero(height, width));
    const Index max_row_anchor = row_anchors.back();
    const Index max_col_anchor = col_anchors.back();
    for (Index i = 0; i < height; ++i) {
        for (Index j = 0; j < width; ++j) {
            for (Index t = 0; t < frame_count; ++t) {
                double mean = 0.0;
                int count = 0;
                // anchors covering (i, j), in canonical ascending order
                Index r0 = std::max<Index>(0, i - window + 1);
                r0 += (stride - r0 % stride) % stride;
                Index c0_base = std::max<Index>(0, j - window + 1);
                c0_base += (stride - c0_base % stride) % stride;
                for (Index r = r0; r <= std::min(i, max_row_anchor); r += stride) {
                    for (Index c = c0_base; c <= std::min(j, max_col_anchor); c += stride) {
                        const CasoratiPatch* p = by_anchor[slot(r, c)];
                        const double v = p->matrix((i - r) * window + (j - c), t);
                        ++count;
                        mean += (v - mean) / count; // running mean: exact for equal inputs
                    }
                }
                if (count == 0) throw std::logic_error("aggregate_patches: uncovered pixel");
                out.frames[static_cast<size_t>(t)](i, j) = mean;
            }
        }
    }
    return out;
}

namespace detail {

inline Mat denoise_patch(const Mat& m, const Regularizer& reg, Selector method, double tau, double eta) {
    if (method == Selector::DP) {
        if (frobenius_sq(m) <= eta) return Mat::Zero(m.rows(), m.cols());
        return recover_factors(lrdp::svd(m), reg, eta).x_hat;
    }
    SvdFactors f = lrdp::svd(m);
    if (method == Selector::SURE) return sure_denoise(f, tau, reg);
    return hardt_denoise(f, hardt_select(f, tau, std::max(m.rows(), m.cols())));
}

} // namespace detail

/// Patch-wise low-rank denoising: every sliding-window Casorati matrix is
/// denoised independently under the bound c * window^2 * T * tau^2 and the
/// overlapping estimates are averaged. A non-positive tau requests the
/// median-rule estimate (averaged over frames).
inline ImageSequence denoise_llr(const ImageSequence& seq, const Regularizer& reg, double tau, double c,
                                 Index window, Index stride, Selector method,
                                 Border border = Border::Interior) {
    require_sequence(seq);
    if (!(c > 0.0)) throw std::invalid_argument("denoise_llr: c must be positive");
    if (method == Selector::SURE && reg.kind == Penalty::Rank)
        throw std::invalid_argument("denoise_llr: the rank penalty pairs with the HardT selector");
    if (tau <= 0.0) {
        double acc = 0.0;
        for (const Mat& f : seq.frames) acc += estimate_noise_median(f);
        tau = acc / static_cast<double>(seq.frame_count());
        if (!(tau > 0.0)) throw std::invalid_argument("denoise_llr: noise estimate is zero; pass tau explicitly");
    }

    std::vector<CasoratiPatch> patches = extract_patches(seq, window, stride, border);
    const double eta = c * static_cast<double>(window * window) *
                       static_cast<double>(seq.frame_count()) * tau * tau;
    for (CasoratiPatch& p : patches) {
        try {
            p.matrix = detail::denoise_patch(p.matrix, reg, method, tau, eta);
        } catch (const std::exception& e) {
            throw std::runtime_error("denoise_llr: patch at (" + std::to_string(p.row) + ", " +
                                     std::to_string(p.col) + ") failed: " + e.what());
        }
    }
    return aggregate_patches(patches, seq.height, seq.width, seq.frame_count(), stride, border);
}

/// Per-pixel maximum absolute error across time.
inline Mat worst_case_error(const ImageSequence& truth, const ImageSequence& est) {
    require_sequence(truth);
    require_sequence(est);
    if (truth.height != est.height || truth.width != est.width || truth.frame_count() != est.frame_count())
        throw std::invalid_argument("worst_case_error: sequences disagree on dimensions");
    Mat err = Mat::Zero(truth.height, truth.width);
    for (size_t t = 0; t < truth.frames.size(); ++t)
        err = err.cwiseMax((truth.frames[t] - est.frames[t]).cwiseAbs());
    return err;
}

/// Binary layout: frame count, height, width as u64 LE, then the frames
/// concatenated as f64 LE row-major blocks.
inline void write_sequence_binary(std::ostream& os, const ImageSequence& seq) {
    require_sequence(seq);
    detail::write_u64(os, static_cast<std::uint64_t>(seq.frame_count()));
    detail::write_u64(os, static_cast<std::uint64_t>(seq.height));
    detail::write_u64(os, static_cast<std::uint64_t>(seq.width));
    for (const Mat& f : seq.frames) detail::write_f64_row_major(os, f);
    if (!os) throw std::runtime_error("failed to write binary image sequence");
}

inline ImageSequence read_sequence_binary(std::istream& is) {
    const auto t_count = detail::read_u64(is);
    const auto height = detail::read_u64(is);
    const auto width = detail::read_u64(is);
    if (t_count == 0 || height == 0 || width == 0 || t_count > (1u << 20) || height > (1u << 20) || width > (1u << 20))
        throw std::runtime_error("binary image sequence header has implausible dimensions");
    ImageSequence seq;
    seq.height = static_cast<Index>(height);
    seq.width = static_cast<Index>(width);
    seq.frames.assign(t_count, Mat(seq.height, seq.width));
    for (Mat& f : seq.frames) detail::read_f64_row_major(is, f);
    return seq;
}

inline void save_sequence(const std::string& path, const ImageSequence& seq) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_sequence_binary(os, seq);
}

inline ImageSequence load_sequence(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_sequence_binary(is);
}

} // namespace lrdp
