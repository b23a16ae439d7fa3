#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nasbo/acquisition.hpp"
#include "nasbo/arch_space.hpp"
#include "nasbo/benchmarks.hpp"
#include "nasbo/encodings.hpp"
#include "nasbo/experiment.hpp"
#include "nasbo/meta_predictor.hpp"
#include "nasbo/search.hpp"
#include "nasbo/theory_stats.hpp"

namespace py = pybind11;
using namespace nasbo;

namespace {

py::dict record_to_dict(const TrialRecord& record) {
    py::dict d;
    d["algorithm"] = record.algorithm;
    d["seed"] = record.seed;
    py::list entries;
    for (const auto& e : record.entries) {
        py::dict ed;
        ed["index"] = e.index;
        ed["cell"] = e.cell_text;
        ed["observed"] = e.observed;
        ed["best_so_far"] = e.best_so_far;
        ed["test_error_of_best"] = e.test_error_of_best;
        entries.append(ed);
    }
    d["entries"] = entries;
    return d;
}

}  // namespace

PYBIND11_MODULE(_nasbo, m) {
    m.doc() = "DAG-cell architecture search: encodings, surrogates, search loops";

    py::class_<SpaceParams>(m, "SpaceParams")
        .def(py::init<>())
        .def_readwrite("n_nodes", &SpaceParams::n_nodes)
        .def_readwrite("n_ops", &SpaceParams::n_ops)
        .def_readwrite("max_edges", &SpaceParams::max_edges)
        .def_readwrite("op_names", &SpaceParams::op_names);

    py::class_<Cell>(m, "Cell")
        .def(py::init<>())
        .def_readwrite("ops", &Cell::ops)
        .def_readwrite("edges", &Cell::edges)
        .def("__str__", [](const Cell& c) { return cell_to_text(c); })
        .def("__eq__", [](const Cell& a, const Cell& b) { return a == b; });

    py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>());

    m.def("random_spec", &random_spec);
    m.def("mutate", &mutate);
    m.def("validate", &validate);
    m.def("canonical_form", &canonical_form);
    m.def("canonical_hash", &canonical_hash);
    m.def("cell_to_text", &cell_to_text);
    m.def("cell_from_text", &cell_from_text);

    py::class_<PathTable>(m, "PathTable")
        .def_readonly("paths", &PathTable::paths)
        .def("__len__", &PathTable::size);
    m.def("enumerate_paths", &enumerate_paths, py::arg("space"),
          py::arg("cap") = std::size_t{10'000'000});
    m.def("cell_paths", &cell_paths);
    m.def("encode_path", &encode_path, py::arg("cell"), py::arg("table"),
          py::arg("truncate_len") = std::nullopt);
    m.def("encode_adjacency", &encode_adjacency);
    m.def("encode_continuous_adjacency", &encode_continuous_adjacency);

    m.def("num_paths", &num_paths);
    m.def("expected_paths", &expected_paths);
    m.def("tail_mass", &tail_mass);
    m.def(
        "mc_path_probs",
        [](const SpaceParams& space, std::uint64_t trials, std::uint64_t seed,
           bool condition_on_connectivity) {
            Rng rng(seed);
            McOptions opt{condition_on_connectivity};
            const auto stats = mc_path_probs(space, trials, rng, opt);
            py::list rows;
            for (const auto& r : stats.rows) {
                py::dict d;
                d["length"] = r.length;
                d["probability"] = r.probability;
                d["total_paths"] = r.total_paths;
                d["expected_labeled"] = r.expected_labeled;
                d["expected_node_paths"] = r.expected_node_paths;
                rows.append(d);
            }
            return rows;
        },
        py::arg("space"), py::arg("trials"), py::arg("seed") = 0,
        py::arg("condition_on_connectivity") = true);

    py::enum_<Loss>(m, "Loss").value("MAE", Loss::MAE).value("MAPE", Loss::MAPE);
    py::class_<PredictorConfig>(m, "PredictorConfig")
        .def(py::init<>())
        .def_readwrite("n_layers", &PredictorConfig::n_layers)
        .def_readwrite("width", &PredictorConfig::width)
        .def_readwrite("learning_rate", &PredictorConfig::learning_rate)
        .def_readwrite("epochs", &PredictorConfig::epochs)
        .def_readwrite("loss", &PredictorConfig::loss)
        .def_readwrite("y_lb", &PredictorConfig::y_lb)
        .def_readwrite("ensemble_size", &PredictorConfig::ensemble_size)
        .def_readwrite("batch_size", &PredictorConfig::batch_size);
    py::class_<EnsembleModel>(m, "EnsembleModel")
        .def_readonly("input_dim", &EnsembleModel::input_dim)
        .def("__len__", &EnsembleModel::size);
    m.def("train_ensemble", &train_ensemble);
    m.def("ensemble_stats", [](const EnsembleModel& model, const std::vector<double>& x) {
        return ensemble_stats(model, x);
    });
    m.def("save_ensemble", [](const EnsembleModel& model) {
        std::ostringstream out;
        save_ensemble(model, out);
        return out.str();
    });
    m.def("load_ensemble", [](const std::string& text) {
        std::istringstream in(text);
        return load_ensemble(in);
    });

    py::enum_<AcqKind>(m, "AcqKind")
        .value("ITS", AcqKind::ITS)
        .value("TS", AcqKind::TS)
        .value("UCB", AcqKind::UCB)
        .value("EI", AcqKind::EI)
        .value("PI", AcqKind::PI);
    py::class_<AcqContext>(m, "AcqContext")
        .def(py::init<>())
        .def_readwrite("kind", &AcqContext::kind)
        .def_readwrite("beta", &AcqContext::beta)
        .def_readwrite("y_min", &AcqContext::y_min);
    m.def("acquisition_score",
          [](const AcqContext& ctx, double mean, double stddev, Rng& rng) {
              return acquisition_score(ctx, mean, stddev, nullptr, {}, rng);
          });
    m.def("select_batch", [](const std::vector<double>& scores, std::size_t k) {
        return select_batch(scores, k);
    });

    py::enum_<QueryMode>(m, "QueryMode")
        .value("MeanValidation", QueryMode::MeanValidation)
        .value("RandomValidation", QueryMode::RandomValidation);
    py::class_<ArchMetrics>(m, "ArchMetrics")
        .def_readonly("val_errors", &ArchMetrics::val_errors)
        .def_readonly("test_error", &ArchMetrics::test_error)
        .def_readonly("n_params", &ArchMetrics::n_params);
    py::class_<BenchmarkOracle>(m, "BenchmarkOracle")
        .def_static("synthetic", &BenchmarkOracle::synthetic)
        .def_static("load_tabular", &BenchmarkOracle::load_tabular)
        .def("query", &BenchmarkOracle::query)
        .def("metrics", &BenchmarkOracle::metrics)
        .def("set_mode", &BenchmarkOracle::set_mode)
        .def("set_run_seed", &BenchmarkOracle::set_run_seed)
        .def("set_budget", &BenchmarkOracle::set_budget)
        .def("query_count", &BenchmarkOracle::query_count)
        .def("version", &BenchmarkOracle::version);

    py::enum_<GpDistance>(m, "GpDistance")
        .value("AdjacencyHamming", GpDistance::AdjacencyHamming)
        .value("PathHamming", GpDistance::PathHamming);
    py::enum_<EncodingKind>(m, "EncodingKind")
        .value("Path", EncodingKind::Path)
        .value("Adjacency", EncodingKind::Adjacency)
        .value("ContinuousAdjacency", EncodingKind::ContinuousAdjacency);
    py::class_<EncodingSpec>(m, "EncodingSpec")
        .def(py::init<>())
        .def_readwrite("kind", &EncodingSpec::kind)
        .def_readwrite("truncate_len", &EncodingSpec::truncate_len);
    py::class_<DualObjectiveConfig>(m, "DualObjectiveConfig")
        .def(py::init<>())
        .def_readwrite("loss_lb", &DualObjectiveConfig::loss_lb)
        .def_readwrite("exponent", &DualObjectiveConfig::exponent);
    m.def("dual_objective", &dual_objective);

    py::class_<Objective>(m, "Objective")
        .def(py::init<>())
        .def_readwrite("dual", &Objective::dual)
        .def_property(
            "kind",
            [](const Objective& o) {
                return o.kind == Objective::Kind::Validation ? "validation" : "dual";
            },
            [](Objective& o, const std::string& kind) {
                o.kind = kind == "dual" ? Objective::Kind::Dual : Objective::Kind::Validation;
            });

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init<>())
        .def_readwrite("space", &SearchConfig::space)
        .def_readwrite("t0", &SearchConfig::t0)
        .def_readwrite("budget", &SearchConfig::budget)
        .def_readwrite("ensemble_size", &SearchConfig::ensemble_size)
        .def_readwrite("candidates_per_iter", &SearchConfig::candidates_per_iter)
        .def_readwrite("elites", &SearchConfig::elites)
        .def_readwrite("batch_k", &SearchConfig::batch_k)
        .def_readwrite("acquisition", &SearchConfig::acquisition)
        .def_readwrite("encoding", &SearchConfig::encoding)
        .def_readwrite("mutation_rate", &SearchConfig::mutation_rate)
        .def_readwrite("dedup", &SearchConfig::dedup)
        .def_readwrite("predictor", &SearchConfig::predictor);

    m.def("ensemble_bo_search",
          [](BenchmarkOracle& oracle, const Objective& objective, const SearchConfig& cfg,
             std::uint64_t seed) { return record_to_dict(ensemble_bo_search(oracle, objective, cfg, seed)); });
    m.def("random_search",
          [](BenchmarkOracle& oracle, const Objective& objective, const SpaceParams& space,
             int budget, std::uint64_t seed) {
              return record_to_dict(random_search(oracle, objective, space, budget, seed));
          });
    m.def("regularized_evolution",
          [](BenchmarkOracle& oracle, const Objective& objective, const SpaceParams& space,
             int budget, int population, int sample_size, std::uint64_t seed) {
              return record_to_dict(regularized_evolution(oracle, objective, space, budget,
                                                          population, sample_size, seed));
          });
    m.def("gp_bo_search",
          [](BenchmarkOracle& oracle, const Objective& objective, const SearchConfig& cfg,
             GpDistance distance, std::uint64_t seed) {
              return record_to_dict(gp_bo_search(oracle, objective, cfg, distance, seed));
          });
}
