#include "heliosweep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "heliosweep/container.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/parallel.hpp"

namespace fs = std::filesystem;

namespace heliosweep {
namespace {

std::string format_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.9g}", v);
}

nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json summary_to_json(const AggregateRecord& a) {
  auto one = [](const Summary& s) { return nlohmann::json{{"mean", json_number(s.mean)}, {"std", json_number(s.std)}}; };
  return {{"count", a.count}, {"psnr_db", one(a.psnr)}, {"ssim", one(a.ssim)}, {"rmse", one(a.rmse)}};
}

std::vector<fs::path> run_directories(const fs::path& dir) {
  std::vector<fs::path> runs;
  if (fs::is_directory(dir)) {
    for (const auto& de : fs::directory_iterator(dir)) {
      if (de.is_directory()) runs.push_back(de.path());
    }
  }
  std::sort(runs.begin(), runs.end());
  return runs;
}

SolarImage apply_mask(const SolarImage& cloudy, const ShadowMask& mask, double epsilon) {
  return mask.kind() == MaskKind::Residual ? apply_residual(cloudy, mask) : apply_division(cloudy, mask, epsilon);
}

struct MethodOutput {
  std::string status;
  std::optional<SolarImage> cleaned;
};

MethodOutput run_one(const MethodSpec& method, int run, const ManifestEntry& entry, const Manifest& manifest,
                     const SolarImage& cloudy, const BenchOptions& options) {
  try {
    switch (method.kind) {
      case MethodKind::Cloudy:
        return {"ok", cloudy};
      case MethodKind::GtResidual:
        return {"ok", apply_residual(cloudy, read_mask(manifest.resolve(entry.mask_residual)))};
      case MethodKind::GtTransmittance:
        return {"ok", apply_division(cloudy, read_mask(manifest.resolve(entry.mask_transmittance)), options.epsilon)};
      case MethodKind::Feng: {
        std::optional<SolarImage> neighbour;
        if (options.neighbours) {
          const fs::path p = *options.neighbours / (entry.id + ".solc");
          if (fs::is_regular_file(p)) neighbour = read_image(p);
        }
        return {"ok", feng_transmittance(cloudy, neighbour, options.feng).cleaned};
      }
      case MethodKind::Fuller:
        return {"ok", fuller_median(cloudy, options.fuller).cleaned};
      case MethodKind::Sparse:
        return {"ok", remove_shadow_sparse(cloudy, options.sparse).cleaned};
      case MethodKind::MaskRuns: {
        const fs::path p = method.runs[static_cast<std::size_t>(run)] / (entry.id + ".solc");
        if (!fs::is_regular_file(p)) throw Error(Errc::MissingFile, p.string());
        const ShadowMask mask = read_mask(p);
        mask.validate();
        return {"ok", apply_mask(cloudy, mask, options.epsilon)};
      }
    }
  } catch (const Error& e) {
    return {std::string(errc_name(e.code())), std::nullopt};
  }
  return {"UnknownMethod", std::nullopt};
}

int run_count(const MethodSpec& m) { return m.kind == MethodKind::MaskRuns ? static_cast<int>(m.runs.size()) : 1; }

}  // namespace

MethodSpec parse_method(const std::string& text) {
  static const std::map<std::string, MethodKind> kNamed = {
      {"feng", MethodKind::Feng},
      {"fuller", MethodKind::Fuller},
      {"sparse", MethodKind::Sparse},
      {"gt-residual", MethodKind::GtResidual},
      {"gt-transmittance", MethodKind::GtTransmittance},
      {"cloudy", MethodKind::Cloudy},
  };
  if (const auto it = kNamed.find(text); it != kNamed.end()) return {it->second, text, {}, {}};
  if (text.starts_with("mask:")) {
    MethodSpec spec{MethodKind::MaskRuns, "", fs::path(text.substr(5)), {}};
    if (spec.mask_dir.empty()) throw Error(Errc::MissingMaskRun, "mask method needs a directory");
    spec.runs = run_directories(spec.mask_dir);
    if (spec.runs.empty()) throw Error(Errc::MissingMaskRun, "no run sub-directories in " + spec.mask_dir.string());
    const fs::path name = spec.mask_dir.filename().empty() ? spec.mask_dir.parent_path().filename() : spec.mask_dir.filename();
    spec.label = "mask:" + name.string();
    return spec;
  }
  throw Error(Errc::UnknownMethod, "'" + text + "'");
}

EvalReport run_benchmark(const Manifest& manifest, const std::vector<MethodSpec>& methods, const fs::path& out_dir,
                         const BenchOptions& options) {
  if (methods.empty()) throw Error(Errc::UnknownMethod, "no methods given");
  for (const auto& m : methods) {
    if (m.kind == MethodKind::MaskRuns && m.runs.empty()) throw Error(Errc::MissingMaskRun, m.label);
  }
  std::vector<ManifestEntry> entries = manifest.in_split(options.split);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  // Slot (image, method, run) results in a fixed order so the schedule cannot change the report.
  std::vector<std::size_t> offsets;
  std::size_t per_image = 0;
  for (const auto& m : methods) {
    offsets.push_back(per_image);
    per_image += static_cast<std::size_t>(run_count(m));
  }
  std::vector<ImageResult> results(entries.size() * per_image);
  const std::size_t n_panels = std::min(entries.size(), static_cast<std::size_t>(std::max(0, options.panels)));
  std::vector<std::vector<Plane>> panel_images(n_panels);
  std::vector<std::vector<std::string>> panel_labels(n_panels);

  parallel_for(entries.size(), options.jobs, [&](std::size_t i) {
    const ManifestEntry& entry = entries[i];
    const SolarImage cloudy = read_image(manifest.resolve(entry.cloudy));
    const SolarImage clean = read_image(manifest.resolve(entry.clean));
    if (i < n_panels) {
      panel_images[i] = {cloudy.plane(), clean.plane()};
      panel_labels[i] = {"cloudy", "clean"};
    }
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      for (int run = 0; run < run_count(methods[mi]); ++run) {
        MethodOutput out = run_one(methods[mi], run, entry, manifest, cloudy, options);
        ImageResult& r = results[i * per_image + offsets[mi] + static_cast<std::size_t>(run)];
        r.image_id = entry.id;
        r.method = methods[mi].label;
        r.run = run;
        r.status = out.status;
        if (out.cleaned) r.record = evaluate_pair(*out.cleaned, clean);
        if (i < n_panels && run == 0) {
          panel_images[i].push_back(out.cleaned ? out.cleaned->plane() : Plane(clean.width(), clean.height()));
          panel_labels[i].push_back(out.cleaned ? methods[mi].label : methods[mi].label + " (failed)");
        }
      }
    }
  });

  EvalReport report;
  report.results = std::move(results);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodSummary s;
    s.method = methods[mi].label;
    s.runs = run_count(methods[mi]);
    s.images = static_cast<int>(entries.size());
    std::vector<EvalRecord> pooled;
    std::vector<EvalRecord> run_means;
    for (int run = 0; run < s.runs; ++run) {
      std::vector<EvalRecord> ok;
      int failed = 0;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const ImageResult& r = report.results[i * per_image + offsets[mi] + static_cast<std::size_t>(run)];
        if (r.status == "ok") {
          ok.push_back(r.record);
        } else {
          ++failed;
        }
      }
      s.failures_per_run.push_back(failed);
      s.failures += failed;
      pooled.insert(pooled.end(), ok.begin(), ok.end());
      if (!ok.empty()) {
        const AggregateRecord a = aggregate(ok);
        run_means.push_back({a.psnr.mean, a.ssim.mean, a.rmse.mean});
      }
    }
    s.across_runs = aggregate(run_means);
    s.across_images = aggregate(pooled);
    report.summaries.push_back(std::move(s));
  }

  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "report.csv", std::ios::binary);
    csv << report_csv(report);
    if (!csv) throw Error(Errc::IoFailure, "cannot write report.csv");
  }
  {
    std::ofstream js(out_dir / "summary.json", std::ios::binary);
    js << summary_json(report);
    if (!js) throw Error(Errc::IoFailure, "cannot write summary.json");
  }
  if (n_panels > 0) {
    fs::create_directories(out_dir / "panels");
    for (std::size_t i = 0; i < n_panels; ++i) {
      render_panel(panel_images[i], panel_labels[i], out_dir / "panels" / (entries[i].id + ".png"));
    }
  }
  return report;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "image_id,method,run,status,psnr_db,ssim,rmse\n";
  for (const auto& r : report.results) {
    if (r.status == "ok") {
      out += fmt::format("{},{},{},ok,{},{},{}\n", r.image_id, r.method, r.run, format_metric(r.record.psnr),
                         format_metric(r.record.ssim), format_metric(r.record.rmse));
    } else {
      out += fmt::format("{},{},{},{},,,\n", r.image_id, r.method, r.run, r.status);
    }
  }
  return out;
}

std::string summary_json(const EvalReport& report) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& s : report.summaries) {
    methods.push_back({{"method", s.method},
                       {"runs", s.runs},
                       {"images", s.images},
                       {"failures", s.failures},
                       {"failures_per_run", s.failures_per_run},
                       {"across_runs", summary_to_json(s.across_runs)},
                       {"across_images", summary_to_json(s.across_images)}});
  }
  return nlohmann::json{{"methods", methods}}.dump(2) + "\n";
}

Plane compose_panel(const std::vector<Plane>& images, const std::vector<std::string>& labels, int cols) {
  if (images.empty()) throw Error(Errc::EmptyInput, "no images for the panel");
  if (labels.size() != images.size()) throw Error(Errc::ShapeMismatch, "one label per image required");
  if (cols < 1) throw Error(Errc::InvalidArgument, "panel needs at least one column");
  const int w = images.front().width();
  const int h = images.front().height();
  for (const auto& im : images) {
    if (im.width() != w || im.height() != h) throw Error(Errc::ShapeMismatch, "panel images differ in size");
  }
  const int n = static_cast<int>(images.size());
  const int c = std::min(cols, n);
  const int rows = (n + c - 1) / c;
  const int cell_h = h + kLabelStripHeight;
  cv::Mat canvas(rows * cell_h, c * w, CV_32F, cv::Scalar(0.0));
  for (int k = 0; k < n; ++k) {
    const int x0 = (k % c) * w;
    const int y0 = (k / c) * cell_h;
    const cv::Mat src(h, w, CV_32F, const_cast<float*>(images[static_cast<std::size_t>(k)].data().data()));
    cv::Mat dst = canvas(cv::Rect(x0, y0, w, h));
    cv::min(cv::max(src, 0.0), 1.0, dst);
    cv::putText(canvas, labels[static_cast<std::size_t>(k)], cv::Point(x0 + 4, y0 + h + kLabelStripHeight - 7),
                cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(1.0), 1, cv::LINE_8);
  }
  std::vector<float> pixels(canvas.begin<float>(), canvas.end<float>());
  return Plane(canvas.cols, canvas.rows, std::move(pixels));
}

void render_panel(const std::vector<Plane>& images, const std::vector<std::string>& labels, const fs::path& out_png,
                  int cols) {
  const Plane panel = compose_panel(images, labels, cols);
  cv::Mat m(panel.height(), panel.width(), CV_32F, const_cast<float*>(panel.data().data()));
  cv::Mat out;
  m.convertTo(out, CV_8U, 255.0);
  if (!cv::imwrite(out_png.string(), out)) throw Error(Errc::IoFailure, "cannot write " + out_png.string());
}

}  // namespace heliosweep
