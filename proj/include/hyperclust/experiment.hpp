#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyperclust/config.hpp"
#include "hyperclust/eval.hpp"

namespace hyperclust {

// How many worker threads experiment drivers may use; reads
// HYPERCLUST_THREADS and falls back to the hardware count.
int experiment_threads();

struct RunRecord {
  std::string setting_id;
  std::string method;
  int replicate = 0;
  std::uint64_t seed = 0;
  int n = 0, m = 0, K = 0;
  bool ok = false;
  std::int64_t error_count = 0;
  double error_rate = 0.0;
  double runtime_ms = 0.0;
  std::string note;  // failure reason when not ok
};

struct BenchOutput {
  std::vector<RunRecord> rows;  // settings x replicates x methods, in order
  std::string runs_csv;
  std::string aggregate_csv;
};

// Sample each setting `replicates` times (every method sees the same draw)
// and score every method against the planted labels. Rows arrive in a fixed
// order regardless of the worker count.
BenchOutput run_bench(const BenchSpec& spec, std::ostream* progress = nullptr);

struct SimulateOutput {
  std::vector<std::string> edge_files;
  std::vector<std::string> label_files;
  std::string manifest_file;
};

SimulateOutput run_simulate(const SimulateSpec& spec, const std::string& out_prefix);

struct DetectFileOptions {
  std::string edges_path;
  std::optional<std::string> labels_path;
  int K = 0;
  MethodSpec method;
  std::optional<double> delta;
  std::optional<double> cap;
  int t_max = 50;
  int restarts = 20;
  std::uint64_t seed = 1;
  std::optional<std::string> out_path;  // predicted labels
};

struct DetectFileOutput {
  std::vector<int> labels;
  bool flagged = false;
  std::optional<ErrorReport> score;  // set when truth labels were given
  std::string summary_json;
};

DetectFileOutput run_detect(const DetectFileOptions& opts);

struct SpectrumOptions {
  std::optional<std::string> config_path;  // population quantities of a model
  std::optional<std::string> edges_path;   // singular value sweep of a sample
  int rank = 8;
  std::string k_mode = "gap";
  std::uint64_t seed = 1;
};

std::string run_spectrum(const SpectrumOptions& opts);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hyperclust
