#pragma once

#include "listsal/image.hpp"

#include <span>
#include <utility>
#include <vector>

namespace listsal::gbvs {

struct GbvsParams {
    int grid_width = 32;        // lattice cells along the longer side
    double sigma_frac = 0.15;   // distance-kernel sigma as a fraction of grid_width
    double epsilon = 1e-4;      // dissimilarity floor
    double tol = 1e-9;          // L-infinity step size that ends power iteration
    int max_iters = 10000;
    int max_side = 768;
    std::vector<double> orientations{0.0, 45.0, 90.0, 135.0};

    void validate() const;
};

enum class ChainMode { activation, normalization };

/// Dense row-stochastic matrix over lattice nodes, row-major.
class TransitionMatrix {
public:
    /// Validates non-negativity and unit row sums (within 1e-10).
    TransitionMatrix(int n, std::vector<double> entries);

    int size() const { return n_; }
    double operator()(int from, int to) const {
        return entries_[static_cast<std::size_t>(from) * n_ + to];
    }
    std::span<const double> row(int from) const {
        return {entries_.data() + static_cast<std::size_t>(from) * n_, static_cast<std::size_t>(n_)};
    }
    const std::vector<double>& entries() const { return entries_; }

private:
    int n_;
    std::vector<double> entries_;
};

/// Lattice dimensions (columns, rows) for an image of the given size.
std::pair<int, int> grid_shape(int width, int height, const GbvsParams& params);

/// Fully connected chain over the lattice of `feature`. Activation mode
/// weights edges by |log((M(a)+eps)/(M(b)+eps))|, normalisation mode by
/// M(b)+eps; both are multiplied by a Gaussian of lattice distance with
/// sigma = sigma_frac * grid_width. Zero rows become uniform.
TransitionMatrix build_chain(const FeatureChannel& feature, const GbvsParams& params, ChainMode mode);

/// Stationary distribution by power iteration from the uniform vector.
/// Throws ConvergenceError carrying the last L-infinity step at max_iters.
std::vector<double> equilibrium(const TransitionMatrix& chain, const GbvsParams& params);

/// Activation then normalisation equilibrium for one lattice feature map.
std::vector<double> channel_activation(const FeatureChannel& lattice_feature, const GbvsParams& params);

/// Non-negative feature maps fed to the chains: intensity, |RG|, |BY| and one
/// Gabor energy map per orientation, at the fitted image resolution.
std::vector<FeatureChannel> gbvs_features(const RasterImage& fitted, const GbvsParams& params);

/// Channels may be processed on up to `jobs` threads; the result does not
/// depend on `jobs`.
SaliencyMap gbvs_saliency(const RasterImage& image, const GbvsParams& params = {}, int jobs = 1);

} // namespace listsal::gbvs
