#include "nasbo/meta_predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nasbo {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

std::vector<int> layer_dims(int input_dim, const PredictorConfig& cfg) {
    std::vector<int> dims;
    dims.push_back(input_dim);
    for (int l = 0; l < cfg.n_layers; ++l) {
        dims.push_back(cfg.width);
    }
    dims.push_back(1);
    return dims;
}

Network init_network(int input_dim, const PredictorConfig& cfg, Rng& rng) {
    Network net;
    net.dims = layer_dims(input_dim, cfg);
    const std::size_t n_layers = net.dims.size() - 1;
    net.weights.resize(n_layers);
    net.biases.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int fan_in = net.dims[l];
        const int fan_out = net.dims[l + 1];
        const double limit = std::sqrt(6.0 / fan_in);
        net.weights[l].resize(static_cast<std::size_t>(fan_out) * fan_in);
        for (double& w : net.weights[l]) {
            w = rng.uniform(-limit, limit);
        }
        net.biases[l].assign(fan_out, 0.0);
    }
    return net;
}

// Forward pass over a batch; activations[l] holds layer-l outputs
// (activations[0] is the input batch), each row-major n x dims[l].
void forward_batch(const Network& net, const std::vector<double>& input, std::size_t n,
                   std::vector<std::vector<double>>& activations) {
    const std::size_t n_layers = net.dims.size() - 1;
    activations.resize(n_layers + 1);
    activations[0] = input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int in = net.dims[l];
        const int out = net.dims[l + 1];
        const bool hidden = l + 1 < net.dims.size() - 1;
        auto& dst = activations[l + 1];
        dst.assign(n * out, 0.0);
        const auto& src = activations[l];
        for (std::size_t s = 0; s < n; ++s) {
            const double* a = src.data() + s * in;
            double* z = dst.data() + s * out;
            for (int o = 0; o < out; ++o) {
                const double* w = net.weights[l].data() + static_cast<std::size_t>(o) * in;
                double acc = net.biases[l][o];
                for (int i = 0; i < in; ++i) {
                    acc += w[i] * a[i];
                }
                z[o] = hidden ? std::max(acc, 0.0) : acc;
            }
        }
    }
}

struct AdamState {
    std::vector<std::vector<double>> mw, vw, mb, vb;
    long long t = 0;

    explicit AdamState(const Network& net) {
        for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
            mw.emplace_back(net.weights[l].size(), 0.0);
            vw.emplace_back(net.weights[l].size(), 0.0);
            mb.emplace_back(net.biases[l].size(), 0.0);
            vb.emplace_back(net.biases[l].size(), 0.0);
        }
    }
};

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v, double lr, long long t) {
    const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t));
    for (std::size_t i = 0; i < param.size(); ++i) {
        m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * grad[i];
        v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
        param[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kAdamEps);
    }
}

// Backward pass over a batch; fills `grads` and returns the loss value.
double backward_batch(const Network& net, const std::vector<double>& input,
                      std::span<const double> targets, std::size_t n, const PredictorConfig& cfg,
                      std::vector<std::vector<double>>& activations, ParamGradients& grads) {
    forward_batch(net, input, n, activations);
    const std::size_t n_layers = net.dims.size() - 1;
    const auto& out = activations[n_layers];

    const auto [value, grad] = loss_value_grad(std::span(out.data(), n), targets, cfg);

    grads.weights.resize(n_layers);
    grads.biases.resize(n_layers);
    std::vector<double> delta = grad;  // n x 1
    std::vector<double> delta_prev;
    for (std::size_t l = n_layers; l-- > 0;) {
        const int in = net.dims[l];
        const int out_dim = net.dims[l + 1];
        auto& gw = grads.weights[l];
        auto& gb = grads.biases[l];
        gw.assign(static_cast<std::size_t>(out_dim) * in, 0.0);
        gb.assign(out_dim, 0.0);
        const auto& acts = activations[l];
        for (std::size_t s = 0; s < n; ++s) {
            const double* a = acts.data() + s * in;
            const double* d = delta.data() + s * out_dim;
            for (int o = 0; o < out_dim; ++o) {
                const double dv = d[o];
                if (dv == 0.0) {
                    continue;
                }
                gb[o] += dv;
                double* g = gw.data() + static_cast<std::size_t>(o) * in;
                for (int i = 0; i < in; ++i) {
                    g[i] += dv * a[i];
                }
            }
        }
        if (l > 0) {
            delta_prev.assign(n * in, 0.0);
            const auto& layer_act = activations[l];
            for (std::size_t s = 0; s < n; ++s) {
                const double* d = delta.data() + s * out_dim;
                double* dp = delta_prev.data() + s * in;
                for (int o = 0; o < out_dim; ++o) {
                    const double dv = d[o];
                    if (dv == 0.0) {
                        continue;
                    }
                    const double* w = net.weights[l].data() + static_cast<std::size_t>(o) * in;
                    for (int i = 0; i < in; ++i) {
                        dp[i] += dv * w[i];
                    }
                }
                // rectifier gate
                const double* act = layer_act.data() + s * in;
                for (int i = 0; i < in; ++i) {
                    if (act[i] <= 0.0) {
                        dp[i] = 0.0;
                    }
                }
            }
            delta.swap(delta_prev);
        }
    }
    return value;
}

// One Adam step on a batch. Returns the loss value.
double train_step(Network& net, AdamState& adam, const std::vector<double>& input,
                  std::span<const double> targets, std::size_t n, const PredictorConfig& cfg,
                  std::vector<std::vector<double>>& activations, ParamGradients& grads) {
    const double value =
        backward_batch(net, input, targets, n, cfg, activations, grads);
    if (!std::isfinite(value)) {
        throw std::runtime_error("train_member: loss diverged (non-finite)");
    }
    ++adam.t;  // one optimizer step; shared bias correction across layers
    for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
        adam_update(net.weights[l], grads.weights[l], adam.mw[l], adam.vw[l], cfg.learning_rate,
                    adam.t);
        adam_update(net.biases[l], grads.biases[l], adam.mb[l], adam.vb[l], cfg.learning_rate,
                    adam.t);
    }
    return value;
}

}  // namespace

Network make_network(int input_dim, const PredictorConfig& cfg, Rng& rng) {
    return init_network(input_dim, cfg, rng);
}

std::pair<double, ParamGradients> parameter_gradients(const Network& net,
                                                      const std::vector<std::vector<double>>& x,
                                                      const std::vector<double>& y,
                                                      const PredictorConfig& cfg) {
    if (x.empty() || x.size() != y.size()) {
        throw std::invalid_argument("parameter_gradients: need |x| = |y| >= 1");
    }
    const std::size_t dim = x.front().size();
    std::vector<double> input;
    input.reserve(x.size() * dim);
    for (const auto& row : x) {
        input.insert(input.end(), row.begin(), row.end());
    }
    std::vector<std::vector<double>> activations;
    ParamGradients grads;
    const double value = backward_batch(net, input, y, x.size(), cfg, activations, grads);
    return {value, std::move(grads)};
}

double Network::predict(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dims.front()) {
        throw std::invalid_argument("Network::predict: input dimension mismatch");
    }
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int in = dims[l];
        const int out = dims[l + 1];
        const bool hidden = l + 2 < dims.size();
        next.assign(out, 0.0);
        for (int o = 0; o < out; ++o) {
            const double* w = weights[l].data() + static_cast<std::size_t>(o) * in;
            double acc = biases[l][o];
            for (int i = 0; i < in; ++i) {
                acc += w[i] * cur[i];
            }
            next[o] = hidden ? std::max(acc, 0.0) : acc;
        }
        cur.swap(next);
    }
    return cur[0];
}

std::pair<double, std::vector<double>> loss_value_grad(std::span<const double> pred,
                                                       std::span<const double> truth,
                                                       const PredictorConfig& cfg) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("loss: prediction/target length mismatch");
    }
    const std::size_t n = pred.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    double value = 0.0;
    std::vector<double> grad(n, 0.0);
    auto sgn = [](double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); };
    if (cfg.loss == Loss::MAE) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = pred[i] - truth[i];
            value += std::abs(u) * inv_n;
            grad[i] = sgn(u) * inv_n;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = truth[i] - cfg.y_lb;
            if (denom <= 0.0) {
                throw std::domain_error("MAPE loss: target at or below y_lb");
            }
            const double u = (pred[i] - cfg.y_lb) / denom - 1.0;
            value += std::abs(u) * inv_n;
            grad[i] = sgn(u) * inv_n / denom;
        }
    }
    return {value, std::move(grad)};
}

Network train_member(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                     const PredictorConfig& cfg, std::uint64_t seed) {
    if (x.empty() || x.size() != y.size()) {
        throw std::invalid_argument("train_member: need |x| = |y| >= 1");
    }
    const int input_dim = static_cast<int>(x.front().size());
    for (const auto& row : x) {
        if (static_cast<int>(row.size()) != input_dim) {
            throw std::invalid_argument("train_member: inconsistent input dimensions");
        }
    }
    const std::size_t n = x.size();

    // canonical order first, so prediction is invariant to caller ordering;
    // the member's own shuffle then fixes its minibatch composition
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) {
            return x[a] < x[b];
        }
        return y[a] < y[b];
    });

    Rng rng(seed);
    Network net = init_network(input_dim, cfg, rng);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_int(i);
        std::swap(order[i - 1], order[j]);
    }

    const std::size_t batch =
        cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size) : (n <= 256 ? n : 32);

    AdamState adam(net);
    std::vector<std::vector<double>> activations;
    ParamGradients grads;
    std::vector<double> batch_x;
    std::vector<double> batch_y;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (batch < n && epoch > 0) {
            for (std::size_t i = n; i > 1; --i) {
                const std::size_t j = rng.uniform_int(i);
                std::swap(order[i - 1], order[j]);
            }
        }
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t count = std::min(batch, n - start);
            batch_x.assign(count * static_cast<std::size_t>(input_dim), 0.0);
            batch_y.assign(count, 0.0);
            for (std::size_t s = 0; s < count; ++s) {
                const auto& row = x[order[start + s]];
                std::copy(row.begin(), row.end(),
                          batch_x.begin() + s * static_cast<std::size_t>(input_dim));
                batch_y[s] = y[order[start + s]];
            }
            train_step(net, adam, batch_x, batch_y, count, cfg, activations, grads);
        }
    }
    return net;
}

EnsembleModel train_ensemble(const std::vector<std::vector<double>>& x,
                             const std::vector<double>& y, const PredictorConfig& cfg,
                             std::uint64_t base_seed) {
    if (cfg.ensemble_size < 1) {
        throw std::invalid_argument("train_ensemble: need ensemble_size >= 1");
    }
    EnsembleModel model;
    model.config = cfg;
    model.input_dim = x.empty() ? 0 : static_cast<int>(x.front().size());
    model.members.reserve(cfg.ensemble_size);
    for (int m = 0; m < cfg.ensemble_size; ++m) {
        model.members.push_back(train_member(x, y, cfg, base_seed + static_cast<std::uint64_t>(m)));
    }
    return model;
}

std::pair<double, double> ensemble_stats(const EnsembleModel& model, std::span<const double> x) {
    if (model.members.empty()) {
        throw std::invalid_argument("ensemble_stats: empty ensemble");
    }
    const std::size_t m = model.members.size();
    std::vector<double> outs(m);
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        outs[i] = model.members[i].predict(x);
        mean += outs[i];
    }
    mean /= static_cast<double>(m);
    if (m == 1) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double o : outs) {
        ss += (o - mean) * (o - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(m - 1))};
}

namespace {

void write_values(std::ostream& out, const std::vector<double>& values) {
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out << (i > 0 ? " " : "") << buf;
    }
    out << "\n";
}

std::vector<double> read_values(std::istream& in, std::size_t count) {
    std::vector<double> values(count);
    for (auto& v : values) {
        if (!(in >> v)) {
            throw std::runtime_error("ensemble checkpoint: truncated value block");
        }
    }
    return values;
}

}  // namespace

void save_ensemble(const EnsembleModel& model, std::ostream& out) {
    out << "nasbo-ensemble v1\n";
    out << "members " << model.members.size() << " input_dim " << model.input_dim << "\n";
    out << "config " << model.config.n_layers << " " << model.config.width << " "
        << model.config.learning_rate << " " << model.config.epochs << " "
        << (model.config.loss == Loss::MAE ? "mae" : "mape") << " " << model.config.y_lb << " "
        << model.config.ensemble_size << " " << model.config.batch_size << "\n";
    for (const auto& net : model.members) {
        out << "dims " << net.dims.size();
        for (int d : net.dims) {
            out << " " << d;
        }
        out << "\n";
        for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
            write_values(out, net.weights[l]);
            write_values(out, net.biases[l]);
        }
    }
}

EnsembleModel load_ensemble(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "nasbo-ensemble v1") {
        throw std::runtime_error("ensemble checkpoint: bad or unsupported header");
    }
    EnsembleModel model;
    std::size_t members = 0;
    std::string token;
    in >> token >> members >> token >> model.input_dim;
    std::string loss_name;
    in >> token >> model.config.n_layers >> model.config.width >> model.config.learning_rate >>
        model.config.epochs >> loss_name >> model.config.y_lb >> model.config.ensemble_size >>
        model.config.batch_size;
    model.config.loss = loss_name == "mape" ? Loss::MAPE : Loss::MAE;
    for (std::size_t k = 0; k < members; ++k) {
        Network net;
        std::size_t n_dims = 0;
        in >> token >> n_dims;
        if (token != "dims") {
            throw std::runtime_error("ensemble checkpoint: expected dims block");
        }
        net.dims.resize(n_dims);
        for (auto& d : net.dims) {
            in >> d;
        }
        for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
            net.weights.push_back(read_values(
                in, static_cast<std::size_t>(net.dims[l]) * static_cast<std::size_t>(net.dims[l + 1])));
            net.biases.push_back(read_values(in, static_cast<std::size_t>(net.dims[l + 1])));
        }
        model.members.push_back(std::move(net));
    }
    return model;
}

}  // namespace nasbo
