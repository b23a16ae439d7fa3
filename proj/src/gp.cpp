#include "nasbo/gp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace nasbo {

double hamming_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += std::abs(a[i] - b[i]);
    }
    return d;
}

struct HammingGp::Impl {
    std::vector<std::vector<double>> x;
    double lambda = 1.0;
    double mean_y = 0.0;
    Eigen::VectorXd alpha;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

HammingGp::HammingGp() : impl_(std::make_unique<Impl>()) {}
HammingGp::~HammingGp() = default;
HammingGp::HammingGp(HammingGp&&) noexcept = default;
HammingGp& HammingGp::operator=(HammingGp&&) noexcept = default;

void HammingGp::fit(std::vector<std::vector<double>> x, const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size()) {
        throw std::invalid_argument("HammingGp::fit: need |x| = |y| >= 1");
    }
    const std::size_t n = x.size();
    impl_->x = std::move(x);

    Eigen::MatrixXd dist(n, n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = hamming_distance(impl_->x[i], impl_->x[j]);
            dist(i, j) = d;
            dist(j, i) = d;
            sum += d;
        }
    }
    // hyperparameter-free length scale: mean pairwise distance of the data
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    impl_->lambda = (pairs > 0.0 && sum > 0.0) ? sum / pairs : 1.0;

    impl_->mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    Eigen::VectorXd centered(n);
    for (std::size_t i = 0; i < n; ++i) {
        centered(static_cast<Eigen::Index>(i)) = y[i] - impl_->mean_y;
    }

    const Eigen::MatrixXd kernel = (-dist / impl_->lambda).array().exp().matrix();
    double jitter = 1e-6;
    while (true) {
        impl_->llt.compute(kernel + jitter * Eigen::MatrixXd::Identity(n, n));
        if (impl_->llt.info() == Eigen::Success) {
            break;
        }
        jitter *= 10.0;
        if (jitter > 1e-2) {
            throw std::runtime_error(
                "HammingGp::fit: kernel not positive definite after jitter escalation to 1e-2");
        }
    }
    impl_->alpha = impl_->llt.solve(centered);
}

std::pair<double, double> HammingGp::predict(const std::vector<double>& x) const {
    const std::size_t n = impl_->x.size();
    if (n == 0) {
        throw std::logic_error("HammingGp::predict: fit() has not run");
    }
    Eigen::VectorXd kstar(n);
    for (std::size_t i = 0; i < n; ++i) {
        kstar(static_cast<Eigen::Index>(i)) =
            std::exp(-hamming_distance(x, impl_->x[i]) / impl_->lambda);
    }
    const double mean = impl_->mean_y + kstar.dot(impl_->alpha);
    const Eigen::VectorXd v = impl_->llt.matrixL().solve(kstar);
    const double var = std::max(1.0 - v.squaredNorm(), 0.0);
    return {mean, var};
}

double HammingGp::length_scale() const { return impl_->lambda; }

}  // namespace nasbo
