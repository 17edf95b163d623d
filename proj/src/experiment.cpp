#include "hyperclust/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hyperclust/decomp.hpp"
#include "hyperclust/errors.hpp"
#include "hyperclust/model.hpp"
#include "hyperclust/rng.hpp"

namespace hyperclust {

namespace {

using nlohmann::json;

constexpr std::uint64_t kSampleTag = 0x73616d70;
constexpr std::uint64_t kMethodTag = 0x6d657468;
constexpr std::uint64_t kReplicateTag = 0x7265706c;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

Partition run_method(const Hypergraph& h, int K, const MethodSpec& method, const BenchSpec& spec,
                     std::uint64_t seed) {
  if (method.kind == MethodSpec::Kind::tensor_score) {
    DetectOptions opts;
    opts.K = K;
    opts.init = method.init;
    opts.eps = method.eps;
    opts.delta = spec.delta;
    opts.cap = spec.cap;
    opts.t_max = spec.t_max;
    opts.kmeans_restarts = spec.restarts;
    opts.seed = seed;
    return tensor_score(h, opts).partition;
  }
  return baseline_detect(h, K, method.baseline, seed, spec.restarts);
}

}  // namespace

int experiment_threads() {
  if (const char* env = std::getenv("HYPERCLUST_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

BenchOutput run_bench(const BenchSpec& spec, std::ostream* progress) {
  const int ns = static_cast<int>(spec.settings.size());
  const int nr = spec.replicates;
  const int nm = static_cast<int>(spec.methods.size());

  BenchOutput out;
  out.rows.resize(static_cast<std::size_t>(ns) * nr * nm);

  struct Task {
    int si, rep;
  };
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(ns) * nr);
  for (int si = 0; si < ns; ++si)
    for (int rep = 0; rep < nr; ++rep) tasks.push_back({si, rep});

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto [si, rep] = tasks[t];
      const BenchSetting& setting = spec.settings[si];
      const std::uint64_t rep_seed =
          rng::split(spec.seed, kReplicateTag + static_cast<std::uint64_t>(si),
                     static_cast<std::uint64_t>(rep));
      const std::size_t base =
          (static_cast<std::size_t>(si) * nr + static_cast<std::size_t>(rep)) * nm;

      std::string sample_note;
      std::optional<Hypergraph> h;
      std::vector<int> truth;
      try {
        HdcbmParams params = setting.model.materialize(rep_seed);
        truth = params.labels;
        h.emplace(sample_hdcbm(params, rng::split(rep_seed, kSampleTag)));
      } catch (const std::exception& e) {
        sample_note = e.what();
      }

      for (int mi = 0; mi < nm; ++mi) {
        RunRecord& row = out.rows[base + mi];
        row.setting_id = setting.id;
        row.method = spec.methods[mi].label;
        row.replicate = rep;
        row.seed = rep_seed;
        row.n = setting.model.n;
        row.m = setting.model.m;
        row.K = setting.model.K;
        if (!h) {
          row.note = sample_note;
          continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
          Partition part = run_method(*h, setting.model.K, spec.methods[mi], spec,
                                      rng::split(rep_seed, kMethodTag, mi));
          ErrorReport rep_err = clustering_error(part.labels, truth);
          row.ok = true;
          row.error_count = rep_err.misclassified;
          row.error_rate = rep_err.rate;
        } catch (const std::exception& e) {
          row.note = e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        (*progress) << "bench: " << setting.id << " replicate " << rep + 1 << "/" << nr << "\n";
      }
    }
  };

  const int threads = std::min<int>(experiment_threads(), static_cast<int>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream runs;
  runs << "setting_id,method,replicate,seed,n,m,K,error_count,error_rate,runtime_ms,note\n";
  for (const RunRecord& r : out.rows) {
    runs << csv_safe(r.setting_id) << ',' << csv_safe(r.method) << ',' << r.replicate << ','
         << r.seed << ',' << r.n << ',' << r.m << ',' << r.K << ',';
    if (r.ok)
      runs << r.error_count << ',' << fmt_double(r.error_rate);
    else
      runs << "nan,nan";
    runs << ',' << fmt_double(r.runtime_ms) << ',' << csv_safe(r.note) << "\n";
  }
  out.runs_csv = runs.str();

  std::ostringstream agg;
  agg << "setting_id,method,replicates,failures,mean_rate,std_rate\n";
  for (int si = 0; si < ns; ++si) {
    for (int mi = 0; mi < nm; ++mi) {
      std::vector<ErrorReport> ok_runs;
      int failures = 0;
      for (int rep = 0; rep < nr; ++rep) {
        const RunRecord& r =
            out.rows[(static_cast<std::size_t>(si) * nr + rep) * nm + static_cast<std::size_t>(mi)];
        if (r.ok) {
          ErrorReport e;
          e.rate = r.error_rate;
          e.misclassified = r.error_count;
          ok_runs.push_back(std::move(e));
        } else {
          ++failures;
        }
      }
      agg << csv_safe(spec.settings[si].id) << ',' << csv_safe(spec.methods[mi].label) << ','
          << ok_runs.size() << ',' << failures << ',';
      if (ok_runs.empty()) {
        agg << "nan,nan\n";
      } else {
        RunSummary s = aggregate_runs(ok_runs);
        agg << fmt_double(s.mean_rate) << ',' << fmt_double(s.std_rate) << "\n";
      }
    }
  }
  out.aggregate_csv = agg.str();
  return out;
}

SimulateOutput run_simulate(const SimulateSpec& spec, const std::string& out_prefix) {
  SimulateOutput out;
  const std::uint64_t base_seed = spec.seed.value_or(1);
  json manifest;
  manifest["n"] = spec.model.n;
  manifest["m"] = spec.model.m;
  manifest["K"] = spec.model.K;
  manifest["replicates"] = spec.replicates;
  manifest["seed"] = base_seed;
  json reps = json::array();

  for (int rep = 0; rep < spec.replicates; ++rep) {
    const std::uint64_t rep_seed = rng::split(base_seed, kReplicateTag, rep);
    HdcbmParams params = spec.model.materialize(rep_seed);
    Hypergraph h = sample_hdcbm(params, rng::split(rep_seed, kSampleTag));

    const std::string stem = out_prefix + "_r" + std::to_string(rep);
    write_edge_file(stem + ".edges", h);
    write_label_file(stem + ".labels", params.labels);
    out.edge_files.push_back(stem + ".edges");
    out.label_files.push_back(stem + ".labels");

    json r;
    r["replicate"] = rep;
    r["seed"] = rep_seed;
    r["edges"] = h.edge_count();
    r["edge_file"] = stem + ".edges";
    r["label_file"] = stem + ".labels";
    reps.push_back(std::move(r));
  }
  manifest["runs"] = std::move(reps);
  out.manifest_file = out_prefix + "_manifest.json";
  write_text_file(out.manifest_file, manifest.dump(2) + "\n");
  return out;
}

DetectFileOutput run_detect(const DetectFileOptions& opts) {
  if (opts.K < 2) throw DimensionError("detection needs K >= 2");
  LoadResult loaded = load_hypergraph(opts.edges_path);
  if (loaded.list.edges.empty()) throw Error("'" + opts.edges_path + "' has no edges");

  DetectFileOutput out;
  json summary;
  summary["edges"] = loaded.list.edges.size();
  summary["n"] = loaded.list.n;
  summary["K"] = opts.K;
  summary["method"] = opts.method.label;

  bool flagged = false;
  if (opts.method.kind == MethodSpec::Kind::tensor_score) {
    DetectOptions dopts;
    dopts.K = opts.K;
    dopts.init = opts.method.init;
    dopts.eps = opts.method.eps;
    dopts.delta = opts.delta;
    dopts.cap = opts.cap;
    dopts.t_max = opts.t_max;
    dopts.kmeans_restarts = opts.restarts;
    dopts.seed = opts.seed;
    DetectResult res = loaded.uniform() ? tensor_score(*loaded.graph, dopts)
                                        : tensor_score_nonuniform(loaded.list, dopts);
    out.labels = res.partition.labels;
    flagged = res.partition.flagged;
    summary["uniform"] = loaded.uniform();
    summary["delta"] = res.diagnostics.delta;
    summary["cap"] = res.diagnostics.cap;
    summary["iterations"] = res.diagnostics.hooi_iterations;
    summary["truncated_rows"] = res.diagnostics.truncated_count;
    summary["init"] = res.diagnostics.init;
  } else {
    if (!loaded.uniform())
      throw Error("baseline methods need a uniform hypergraph; this file mixes edge orders");
    Partition part =
        baseline_detect(*loaded.graph, opts.K, opts.method.baseline, opts.seed, opts.restarts);
    out.labels = part.labels;
    flagged = part.flagged;
  }
  summary["flagged"] = flagged;
  out.flagged = flagged;

  if (opts.labels_path) {
    std::vector<int> truth = load_label_file(*opts.labels_path);
    if (truth.size() != out.labels.size())
      throw DimensionError("truth labels count " + std::to_string(truth.size()) +
                           " does not match node count " + std::to_string(out.labels.size()));
    out.score = clustering_error(out.labels, truth);
    summary["error_count"] = out.score->misclassified;
    summary["error_rate"] = out.score->rate;
    summary["error_percent"] = format_rate_percent(out.score->rate);
  }
  if (opts.out_path) {
    write_label_file(*opts.out_path, out.labels);
    summary["label_file"] = *opts.out_path;
  }
  out.summary_json = summary.dump(2) + "\n";
  return out;
}

std::string run_spectrum(const SpectrumOptions& opts) {
  json summary;
  if (opts.config_path) {
    json cfg = load_json_file(*opts.config_path);
    ModelConfig model = parse_model_config(cfg.contains("model") ? cfg["model"] : cfg);
    const std::uint64_t seed = model.seed.value_or(opts.seed);
    HdcbmParams params = model.materialize(seed);

    OracleEigens eig = oracle_eigens(params);
    InfoLossReport loss = information_loss(params);
    summary["n"] = params.n;
    summary["m"] = params.m;
    summary["K"] = params.K;
    summary["theta_norm"] = params.theta.norm();
    summary["d"] = std::vector<double>(eig.d.data(), eig.d.data() + eig.d.size());
    summary["kappas"] =
        std::vector<double>(eig.kappas.data(), eig.kappas.data() + eig.kappas.size());
    summary["lambdas"] =
        std::vector<double>(eig.lambdas.data(), eig.lambdas.data() + eig.lambdas.size());
    summary["if_h"] = loss.if_h;
    summary["if_g"] = loss.if_g;
    summary["beta"] = beta_q(params);
    summary["lambda_min_ones"] = tilde_lambda_min(params, Eigen::VectorXd::Ones(params.K));
  } else if (opts.edges_path) {
    LoadResult loaded = load_hypergraph(*opts.edges_path);
    if (!loaded.uniform())
      throw Error("singular value sweep needs a uniform hypergraph");
    KSelectMode mode;
    if (opts.k_mode == "gap")
      mode = KSelectMode::gap;
    else if (opts.k_mode == "as-written")
      mode = KSelectMode::as_written;
    else
      throw ParseError("unknown k-mode '" + opts.k_mode + "'");
    KEstimate est = estimate_k(*loaded.graph, opts.rank, mode);
    summary["n"] = loaded.graph->node_count();
    summary["m"] = loaded.graph->order();
    summary["rank"] = opts.rank;
    summary["k_mode"] = opts.k_mode;
    summary["sigmas"] =
        std::vector<double>(est.sigmas.data(), est.sigmas.data() + est.sigmas.size());
    summary["k_hat"] = est.k_hat;
  } else {
    throw ParseError("spectrum needs --config or --edges");
  }
  return summary.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hyperclust
