#include <CLI11.hpp>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "hyperclust/errors.hpp"
#include "hyperclust/experiment.hpp"

namespace {

using hyperclust::MethodSpec;

MethodSpec make_method(const std::string& method, const std::string& init, double eps) {
  nlohmann::json j;
  j["method"] = method;
  if (!init.empty()) j["init"] = init;
  j["eps"] = eps;
  return hyperclust::parse_method(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community detection on uniform hypergraphs via tensor power iteration"};
  app.require_subcommand(1);
  std::function<int()> runner;

  // simulate: draw hypergraphs from a model config
  {
    auto* sim = app.add_subcommand("simulate", "sample hypergraphs from a block model config");
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto replicates = std::make_shared<int>(-1);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto has_seed = std::make_shared<bool>(false);
    sim->add_option("--config", *config, "model config (JSON)")->required();
    sim->add_option("--out", *out, "output path prefix")->required();
    sim->add_option("--replicates", *replicates, "number of independent draws");
    sim->add_option("--seed", *seed, "master seed")->each([has_seed](const std::string&) {
      *has_seed = true;
    });
    sim->callback([=, &runner] {
      runner = [=] {
        hyperclust::SimulateSpec spec =
            hyperclust::parse_simulate_config(hyperclust::load_json_file(*config));
        if (*replicates > 0) spec.replicates = *replicates;
        if (*has_seed) spec.seed = *seed;
        auto res = hyperclust::run_simulate(spec, *out);
        std::cout << "wrote " << res.edge_files.size() << " replicate(s), manifest "
                  << res.manifest_file << "\n";
        return 0;
      };
    });
  }

  // detect: cluster one edge file
  {
    auto* det = app.add_subcommand("detect", "cluster the nodes of one hyperedge file");
    auto o = std::make_shared<hyperclust::DetectFileOptions>();
    auto method = std::make_shared<std::string>("tensor-score");
    auto init = std::make_shared<std::string>();
    auto eps = std::make_shared<double>(0.3);
    auto labels = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto delta = std::make_shared<double>(0.0);
    auto has_delta = std::make_shared<bool>(false);
    auto cap = std::make_shared<double>(0.0);
    auto has_cap = std::make_shared<bool>(false);
    det->add_option("--edges", o->edges_path, "hyperedge list file")->required();
    det->add_option("--k", o->K, "number of communities")->required();
    det->add_option("--method", *method,
                    "tensor-score | binary-projection | weighted-projection | nhcut | hosvd-kmeans");
    det->add_option("--init", *init,
                    "tensor-score initialization: diag-removed-hosvd | hosvd | "
                    "randomized-projection | nhcut");
    det->add_option("--eps", *eps, "randomized projection halfwidth");
    det->add_option("--delta", *delta, "row-norm cap override")->each([has_delta](const std::string&) {
      *has_delta = true;
    });
    det->add_option("--cap-t", *cap, "embedding cap override")->each([has_cap](const std::string&) {
      *has_cap = true;
    });
    det->add_option("--t-max", o->t_max, "power iteration sweep limit");
    det->add_option("--restarts", o->restarts, "k-means restarts");
    det->add_option("--seed", o->seed, "seed for randomized stages");
    det->add_option("--labels", *labels, "ground-truth labels to score against");
    det->add_option("--out", *out, "write predicted labels here");
    det->callback([=, &runner] {
      runner = [=] {
        hyperclust::DetectFileOptions opts = *o;
        opts.method = make_method(*method, *init, *eps);
        if (*has_delta) opts.delta = *delta;
        if (*has_cap) opts.cap = *cap;
        if (!labels->empty()) opts.labels_path = *labels;
        if (!out->empty()) opts.out_path = *out;
        auto res = hyperclust::run_detect(opts);
        std::cout << res.summary_json;
        return 0;
      };
    });
  }

  // bench: replicated comparison across methods
  {
    auto* bench = app.add_subcommand("bench", "replicated method comparison from a config");
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto replicates = std::make_shared<int>(-1);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto has_seed = std::make_shared<bool>(false);
    bench->add_option("--config", *config, "bench config (JSON)")->required();
    bench->add_option("--out", *out, "output path prefix")->required();
    bench->add_option("--replicates", *replicates, "override replicate count");
    bench->add_option("--seed", *seed, "master seed")->each([has_seed](const std::string&) {
      *has_seed = true;
    });
    bench->callback([=, &runner] {
      runner = [=] {
        hyperclust::BenchSpec spec =
            hyperclust::parse_bench_config(hyperclust::load_json_file(*config));
        if (*replicates > 0) spec.replicates = *replicates;
        if (*has_seed) spec.seed = *seed;
        auto res = hyperclust::run_bench(spec, &std::cerr);
        const std::string runs_path = *out + "_runs.csv";
        const std::string agg_path = *out + "_aggregate.csv";
        hyperclust::write_text_file(runs_path, res.runs_csv);
        hyperclust::write_text_file(agg_path, res.aggregate_csv);
        std::cout << res.aggregate_csv;
        std::cerr << "wrote " << runs_path << " and " << agg_path << "\n";
        return 0;
      };
    });
  }

  // spectrum: population quantities or an empirical singular value sweep
  {
    auto* spec = app.add_subcommand(
        "spectrum", "population spectrum of a model, or a singular value sweep of a sample");
    auto o = std::make_shared<hyperclust::SpectrumOptions>();
    auto config = std::make_shared<std::string>();
    auto edges = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    spec->add_option("--config", *config, "model config (JSON)");
    spec->add_option("--edges", *edges, "hyperedge list file");
    spec->add_option("--k", o->rank, "sweep rank for the singular value profile");
    spec->add_option("--k-mode", o->k_mode, "count selection rule: gap | as-written");
    spec->add_option("--seed", o->seed, "seed when the config does not fix one");
    spec->add_option("--out", *out, "write the JSON report here instead of stdout");
    spec->callback([=, &runner] {
      runner = [=] {
        hyperclust::SpectrumOptions opts = *o;
        if (!config->empty()) opts.config_path = *config;
        if (!edges->empty()) opts.edges_path = *edges;
        std::string report = hyperclust::run_spectrum(opts);
        if (out->empty())
          std::cout << report;
        else
          hyperclust::write_text_file(*out, report);
        return 0;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return runner();
  } catch (const hyperclust::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
