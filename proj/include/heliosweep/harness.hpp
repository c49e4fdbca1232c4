#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heliosweep/classical.hpp"
#include "heliosweep/dataset.hpp"
#include "heliosweep/maskops.hpp"
#include "heliosweep/metrics.hpp"
#include "heliosweep/sparse.hpp"

namespace heliosweep {

enum class MethodKind { Feng, Fuller, Sparse, GtResidual, GtTransmittance, Cloudy, MaskRuns };

struct MethodSpec {
  MethodKind kind = MethodKind::Cloudy;
  std::string label;                        // name used in reports
  std::filesystem::path mask_dir;           // MaskRuns only
  std::vector<std::filesystem::path> runs;  // MaskRuns only, one sub-directory per run
};

/// Accepts feng, fuller, sparse, gt-residual, gt-transmittance, cloudy and mask:DIR.
/// Throws UnknownMethod, or MissingMaskRun when DIR has no run sub-directories.
MethodSpec parse_method(const std::string& text);

struct BenchOptions {
  Split split = Split::Test;
  /// Cloud-free neighbours for feng, as {id}.solc; a missing file is a failure for that image.
  std::optional<std::filesystem::path> neighbours;
  FengOptions feng;
  FullerOptions fuller;
  SparseParams sparse;
  double epsilon = kDefaultEpsilon;
  /// Comparison panels for the first `panels` images (sorted by id).
  int panels = 4;
  int jobs = 1;
};

struct ImageResult {
  std::string image_id;
  std::string method;
  int run = 0;
  std::string status;  // "ok" or the error name
  EvalRecord record;
};

struct MethodSummary {
  std::string method;
  int runs = 0;
  int images = 0;                      // evaluated images per run
  std::vector<int> failures_per_run;
  int failures = 0;                    // summed over runs
  AggregateRecord across_runs;         // mean/std of the per-run means
  AggregateRecord across_images;       // pooled over every successful record
};

struct EvalReport {
  std::vector<ImageResult> results;  // sorted by (image_id, method, run)
  std::vector<MethodSummary> summaries;  // in method order
};

/// Cleans every image of the chosen split with each method and scores it against the clean
/// target. Writes report.csv, summary.json and panels/*.png to `out_dir`.
EvalReport run_benchmark(const Manifest& manifest, const std::vector<MethodSpec>& methods,
                         const std::filesystem::path& out_dir, const BenchOptions& options = {});

std::string report_csv(const EvalReport& report);
std::string summary_json(const EvalReport& report);

inline constexpr int kLabelStripHeight = 24;

/// Tiles equally sized images into a grid of `cols` columns, each with a label strip below.
/// Throws ShapeMismatch when the sizes differ or labels do not match the images.
Plane compose_panel(const std::vector<Plane>& images, const std::vector<std::string>& labels, int cols);
void render_panel(const std::vector<Plane>& images, const std::vector<std::string>& labels,
                  const std::filesystem::path& out_png, int cols = 3);

}  // namespace heliosweep
