#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nasbo/meta_predictor.hpp"
#include "nasbo/rng.hpp"

namespace nasbo {

enum class AcqKind { ITS, TS, UCB, EI, PI };

/// Acquisition parameters; everything is oriented so lower is better
/// (minimization), with improvement-style functions negated.
struct AcqContext {
    AcqKind kind = AcqKind::ITS;
    double beta = 0.5;   // UCB trade-off
    double y_min = 0.0;  // incumbent best observed value (EI, PI)
};

double normal_pdf(double z);
double normal_cdf(double z);

/// Scores one candidate from ensemble statistics (mean, std). TS additionally
/// needs the ensemble and the candidate's encoding to evaluate one member.
/// ITS draws independently per call, which is what makes batches diverse.
double acquisition_score(const AcqContext& ctx, double mean, double stddev,
                         const EnsembleModel* ensemble, std::span<const double> x, Rng& rng);

/// Indices of the k smallest scores; ties break toward the earlier index.
/// Throws std::invalid_argument if k exceeds the candidate count or any
/// score is non-finite.
std::vector<std::size_t> select_batch(std::span<const double> scores, std::size_t k);

std::string acq_kind_name(AcqKind kind);
AcqKind acq_kind_from_name(const std::string& name);

}  // namespace nasbo
