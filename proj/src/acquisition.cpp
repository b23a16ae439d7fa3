#include "nasbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nasbo {

double normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) {
    constexpr double inv_sqrt_2 = 0.7071067811865475244008444;
    return 0.5 * std::erfc(-z * inv_sqrt_2);
}

double acquisition_score(const AcqContext& ctx, double mean, double stddev,
                         const EnsembleModel* ensemble, std::span<const double> x, Rng& rng) {
    if (stddev < 0.0) {
        throw std::invalid_argument("acquisition_score: negative stddev");
    }
    switch (ctx.kind) {
        case AcqKind::ITS:
            return stddev == 0.0 ? mean : rng.normal(mean, stddev);
        case AcqKind::TS: {
            if (ensemble == nullptr || ensemble->members.empty()) {
                throw std::invalid_argument("acquisition_score: TS needs an ensemble");
            }
            const std::size_t pick = rng.uniform_int(ensemble->members.size());
            return ensemble->members[pick].predict(x);
        }
        case AcqKind::UCB:
            // lower confidence bound; we are minimizing
            return mean - ctx.beta * stddev;
        case AcqKind::EI: {
            if (stddev == 0.0) {
                return -std::max(ctx.y_min - mean, 0.0);
            }
            const double z = (ctx.y_min - mean) / stddev;
            return -((ctx.y_min - mean) * normal_cdf(z) + stddev * normal_pdf(z));
        }
        case AcqKind::PI: {
            if (stddev == 0.0) {
                return mean < ctx.y_min ? -1.0 : 0.0;
            }
            return -normal_cdf((ctx.y_min - mean) / stddev);
        }
    }
    throw std::logic_error("acquisition_score: unknown kind");
}

std::vector<std::size_t> select_batch(std::span<const double> scores, std::size_t k) {
    if (k > scores.size()) {
        throw std::invalid_argument("select_batch: k exceeds candidate count");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("select_batch: non-finite score");
        }
    }
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    idx.resize(k);
    return idx;
}

std::string acq_kind_name(AcqKind kind) {
    switch (kind) {
        case AcqKind::ITS:
            return "its";
        case AcqKind::TS:
            return "ts";
        case AcqKind::UCB:
            return "ucb";
        case AcqKind::EI:
            return "ei";
        case AcqKind::PI:
            return "pi";
    }
    throw std::logic_error("acq_kind_name: unknown kind");
}

AcqKind acq_kind_from_name(const std::string& name) {
    if (name == "its") return AcqKind::ITS;
    if (name == "ts") return AcqKind::TS;
    if (name == "ucb") return AcqKind::UCB;
    if (name == "ei") return AcqKind::EI;
    if (name == "pi") return AcqKind::PI;
    throw std::invalid_argument("unknown acquisition kind: " + name);
}

}  // namespace nasbo
