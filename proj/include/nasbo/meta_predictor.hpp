#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nasbo/rng.hpp"

namespace nasbo {

enum class Loss { MAE, MAPE };

struct PredictorConfig {
    int n_layers = 10;  // hidden layers
    int width = 20;
    double learning_rate = 0.01;
    int epochs = 200;
    Loss loss = Loss::MAE;
    double y_lb = 0.0;      // global lower bound for MAPE
    int ensemble_size = 5;  // M
    int batch_size = 0;     // 0: full batch up to 256 samples, else 32
};

/// Fully connected regressor: n_layers rectified hidden layers of `width`,
/// scalar linear output. Weights are row-major [out][in].
struct Network {
    std::vector<int> dims;  // input, hidden..., 1
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_dim() const { return dims.front(); }
    double predict(std::span<const double> x) const;
};

struct EnsembleModel {
    std::vector<Network> members;
    int input_dim = 0;
    PredictorConfig config;

    std::size_t size() const { return members.size(); }
};

/// Loss value and subgradient with respect to predictions. sign(0) is taken
/// as 0. MAPE throws std::domain_error if any target <= y_lb.
std::pair<double, std::vector<double>> loss_value_grad(std::span<const double> pred,
                                                       std::span<const double> truth,
                                                       const PredictorConfig& cfg);

/// Per-parameter gradients of the batch loss, same layout as the network.
struct ParamGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

/// One forward/backward pass without an update; the analytic gradients the
/// trainer consumes, exposed for finite-difference verification.
std::pair<double, ParamGradients> parameter_gradients(const Network& net,
                                                      const std::vector<std::vector<double>>& x,
                                                      const std::vector<double>& y,
                                                      const PredictorConfig& cfg);

/// Trains one member with Adam (beta1 0.9, beta2 0.999, eps 1e-8).
/// Deterministic given seed and the sample set: samples are brought to a
/// canonical order before the member applies its own seeded shuffle, so the
/// caller's input order never matters. Throws std::runtime_error on a
/// non-finite loss.
Network train_member(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                     const PredictorConfig& cfg, std::uint64_t seed);

/// Fresh network with fan-in-scaled uniform weights, as the trainer builds.
Network make_network(int input_dim, const PredictorConfig& cfg, Rng& rng);

/// Trains cfg.ensemble_size members with seeds base_seed .. base_seed+M-1.
EnsembleModel train_ensemble(const std::vector<std::vector<double>>& x,
                             const std::vector<double>& y, const PredictorConfig& cfg,
                             std::uint64_t base_seed);

/// Member mean and sample standard deviation (0 when M = 1).
std::pair<double, double> ensemble_stats(const EnsembleModel& model, std::span<const double> x);

/// Versioned text checkpoint: layer dims, then row-major weights, then biases
/// per member. Format documented in the README.
void save_ensemble(const EnsembleModel& model, std::ostream& out);
EnsembleModel load_ensemble(std::istream& in);

}  // namespace nasbo
