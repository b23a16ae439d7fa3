#pragma once

#include <memory>
#include <vector>

namespace nasbo {

/// L1 (Hamming, on binary vectors) distance.
double hamming_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Gaussian-process regressor with kernel exp(-d(a, a')/lambda) over a
/// Hamming distance. lambda is the mean pairwise distance of the training
/// set (1.0 when degenerate); observations get jitter 1e-6, escalated x10 up
/// to 1e-2 before fit() reports failure. The prior mean is the sample mean.
class HammingGp {
  public:
    HammingGp();
    ~HammingGp();
    HammingGp(HammingGp&&) noexcept;
    HammingGp& operator=(HammingGp&&) noexcept;

    /// Throws std::runtime_error if the kernel matrix stays indefinite after
    /// jitter escalation.
    void fit(std::vector<std::vector<double>> x, const std::vector<double>& y);

    /// Posterior mean and variance at a point.
    std::pair<double, double> predict(const std::vector<double>& x) const;

    double length_scale() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace nasbo
