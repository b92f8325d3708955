#include "listsal/gbvs.hpp"
#include "listsal/error.hpp"
#include "listsal/imaging.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace listsal::gbvs {

void GbvsParams::validate() const {
    if (grid_width < 4) throw InvalidArgument("grid_width must be >= 4");
    if (!(sigma_frac > 0.0 && sigma_frac <= 1.0)) throw InvalidArgument("sigma_frac must lie in (0,1]");
    if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (max_side < RasterImage::kMinSide) throw InvalidArgument("max_side too small");
}

TransitionMatrix::TransitionMatrix(int n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
    if (n_ < 1) throw InvalidArgument("transition matrix needs at least one node");
    if (entries_.size() != static_cast<std::size_t>(n_) * n_) {
        throw InvalidArgument("transition matrix must have n*n entries");
    }
    for (int a = 0; a < n_; ++a) {
        double sum = 0.0;
        for (double p : row(a)) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw InvalidArgument("transition matrix row " + std::to_string(a) +
                                      " has a negative or non-finite entry");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-10) {
            throw InvalidArgument("transition matrix row " + std::to_string(a) + " sums to " +
                                  std::to_string(sum) + ", not 1");
        }
    }
}

std::pair<int, int> grid_shape(int width, int height, const GbvsParams& params) {
    const int longer = params.grid_width;
    const auto scaled = [&](int side) {
        return std::max(1, static_cast<int>(std::lround(static_cast<double>(longer) * side / std::max(width, height))));
    };
    return width >= height ? std::pair{longer, scaled(height)} : std::pair{scaled(width), longer};
}

TransitionMatrix build_chain(const FeatureChannel& feature, const GbvsParams& params, ChainMode mode) {
    params.validate();
    const int cols = feature.width;
    const int rows = feature.height;
    const int n = cols * rows;
    for (double v : feature.values) {
        if (!std::isfinite(v)) throw InvalidArgument("build_chain: non-finite feature value");
        if (v < 0.0) throw InvalidArgument("build_chain: feature values must be non-negative");
    }
    const double sigma = params.sigma_frac * params.grid_width;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    const double eps = params.epsilon;

    // Distance falloff depends only on |di|, |dj|.
    std::vector<double> falloff(static_cast<std::size_t>(rows) * cols);
    for (int di = 0; di < rows; ++di) {
        for (int dj = 0; dj < cols; ++dj) {
            falloff[static_cast<std::size_t>(di) * cols + dj] =
                std::exp(-static_cast<double>(di * di + dj * dj) * inv_two_sigma2);
        }
    }
    std::vector<double> logs;
    if (mode == ChainMode::activation) {
        logs.resize(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) logs[a] = std::log(feature.values[a] + eps);
    }

    std::vector<double> p(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        const int ai = a / cols;
        const int aj = a % cols;
        double* out = p.data() + static_cast<std::size_t>(a) * n;
        double sum = 0.0;
        for (int b = 0; b < n; ++b) {
            const int bi = b / cols;
            const int bj = b % cols;
            const double g = falloff[static_cast<std::size_t>(std::abs(ai - bi)) * cols + std::abs(aj - bj)];
            const double d = (mode == ChainMode::activation) ? std::max(std::abs(logs[a] - logs[b]), eps)
                                                              : feature.values[b] + eps;
            const double w = d * g;
            if (!std::isfinite(w)) {
                throw InvalidArgument("build_chain: non-finite edge weight (zero feature with epsilon=0?)");
            }
            out[b] = w;
            sum += w;
        }
        if (sum > 0.0) {
            for (int b = 0; b < n; ++b) out[b] /= sum;
        } else {
            std::fill(out, out + n, 1.0 / n);
        }
    }
    return TransitionMatrix(n, std::move(p));
}

std::vector<double> equilibrium(const TransitionMatrix& chain, const GbvsParams& params) {
    params.validate();
    const int n = chain.size();
    std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n));
    double step = 0.0;
    for (int it = 0; it < params.max_iters; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int a = 0; a < n; ++a) {
            const double mass = pi[a];
            if (mass == 0.0) continue;
            const auto row = chain.row(a);
            for (int b = 0; b < n; ++b) next[b] += mass * row[b];
        }
        double total = 0.0;
        for (double v : next) total += v;
        step = 0.0;
        for (int b = 0; b < n; ++b) {
            next[b] /= total;
            step = std::max(step, std::abs(next[b] - pi[b]));
        }
        pi.swap(next);
        if (step < params.tol) return pi;
    }
    throw ConvergenceError("power iteration did not converge in " + std::to_string(params.max_iters) +
                               " iterations (last step " + std::to_string(step) + ")",
                           step);
}

std::vector<double> channel_activation(const FeatureChannel& lattice_feature, const GbvsParams& params) {
    std::vector<double> act =
        equilibrium(build_chain(lattice_feature, params, ChainMode::activation), params);
    // The normalisation chain sees the activation on a unit-peak scale so that
    // epsilon keeps the same meaning regardless of lattice size.
    const double peak = *std::max_element(act.begin(), act.end());
    for (double& v : act) v /= peak;
    const FeatureChannel scaled = lattice_feature.with_values(std::move(act));
    return equilibrium(build_chain(scaled, params, ChainMode::normalization), params);
}

std::vector<FeatureChannel> gbvs_features(const RasterImage& fitted, const GbvsParams& params) {
    auto channels = imaging::extract_channels(fitted);
    std::vector<FeatureChannel> features;
    features.push_back(channels[0]);
    for (std::size_t c = 1; c < 3; ++c) {
        FeatureChannel mag = channels[c];
        for (double& v : mag.values) v = std::abs(v);
        features.push_back(std::move(mag));
    }
    for (FeatureChannel& o : imaging::gabor_bank(channels[0], params.orientations)) {
        features.push_back(std::move(o));
    }
    return features;
}

SaliencyMap gbvs_saliency(const RasterImage& image, const GbvsParams& params, int jobs) {
    params.validate();
    const RasterImage fitted = imaging::fit_longer_side(image, params.max_side);
    const auto [cols, rows] = grid_shape(fitted.width(), fitted.height(), params);

    const std::vector<FeatureChannel> features = gbvs_features(fitted, params);
    std::vector<std::vector<double>> mass(features.size());
    std::vector<std::exception_ptr> errors(features.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < features.size(); c = next++) {
            try {
                mass[c] = channel_activation(imaging::resize(features[c], cols, rows), params);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    const int threads = std::clamp(jobs, 1, static_cast<int>(features.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Fixed channel order keeps the sum independent of scheduling.
    FeatureChannel total(cols, rows, ChannelKind::intensity);
    for (const auto& m : mass) {
        for (std::size_t i = 0; i < m.size(); ++i) total.values[i] += m[i];
    }
    return SaliencyMap::from_plane(imaging::resize_bilinear(total, image.width(), image.height()));
}

} // namespace listsal::gbvs
