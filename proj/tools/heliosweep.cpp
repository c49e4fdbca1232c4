#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "heliosweep/classical.hpp"
#include "heliosweep/cloudsim.hpp"
#include "heliosweep/container.hpp"
#include "heliosweep/coverage.hpp"
#include "heliosweep/dataset.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/harness.hpp"
#include "heliosweep/maskops.hpp"
#include "heliosweep/metrics.hpp"
#include "heliosweep/png_io.hpp"
#include "heliosweep/preprocess.hpp"
#include "heliosweep/rng.hpp"
#include "heliosweep/sparse.hpp"
#include "heliosweep/synthetic_sun.hpp"

namespace fs = std::filesystem;
using namespace heliosweep;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path.string());
}

SolarImage load_any(const fs::path& path) {
  return path.extension() == ".png" ? import_png16(path) : read_image(path);
}

std::vector<fs::path> inputs_of(const fs::path& in) {
  if (!fs::is_directory(in)) return {in};
  std::vector<fs::path> out;
  for (const auto& de : fs::directory_iterator(in)) {
    const auto ext = de.path().extension();
    if (de.is_regular_file() && (ext == ".png" || ext == ".solc")) out.push_back(de.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path output_for(const fs::path& out, const fs::path& input, bool many) {
  return many ? out / (input.stem().string() + ".solc") : out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heliosweep: cloud shadow removal toolkit for full-disk solar images"};
  app.require_subcommand(1);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "Detect, center and rescale the solar disk (PNG-16 or SOLC in, SOLC out)");
  fs::path pre_in, pre_out;
  PreprocessOptions pre_opts;
  std::string pre_modality = "unspecified";
  pre->add_option("--in", pre_in, "Input file or directory")->required();
  pre->add_option("--out", pre_out, "Output file (or directory for directory input)")->required();
  pre->add_option("--size", pre_opts.out_size, "Output frame side")->capture_default_str();
  pre->add_option("--radius-frac,--radius-fraction", pre_opts.target_radius_fraction, "Disk radius as a fraction of half the frame")
      ->capture_default_str();
  pre->add_option("--threshold", pre_opts.threshold_quantile, "Disk threshold relative to the bright level")
      ->capture_default_str();
  pre->add_option("--modality", pre_modality, "caii, halpha or unspecified")->capture_default_str();

  // gensun
  auto* gen = app.add_subcommand("gensun", "Write procedural clean disks (and optional cloud-free neighbours)");
  fs::path gen_out;
  std::optional<fs::path> gen_neigh;
  int gen_count = 10;
  std::uint64_t gen_seed = 0;
  SunOptions gen_opts;
  std::string gen_modality = "caii";
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--count", gen_count, "Number of images")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Base seed")->capture_default_str();
  gen->add_option("--size", gen_opts.size, "Frame side")->capture_default_str();
  gen->add_option("--modality", gen_modality, "caii or halpha")->capture_default_str();
  gen->add_option("--neighbours", gen_neigh, "Also write a temporal neighbour per image here");

  // coverage
  auto* cov = app.add_subcommand("coverage", "Score cloud coverage and triage a directory");
  fs::path cov_in, cov_report;
  double cov_threshold = 0.05;
  cov->add_option("--in", cov_in, "Directory of SOLC images")->required();
  cov->add_option("--threshold", cov_threshold, "Cloud-free threshold")->capture_default_str();
  cov->add_option("--report", cov_report, "CSV report path")->required();

  // synth
  auto* syn = app.add_subcommand("synth", "Composite synthetic clouds onto clean images");
  fs::path syn_clean, syn_out;
  int syn_count = 0;
  std::uint64_t syn_seed = 0;
  std::string syn_texture = "fluffy";
  double syn_amax = 0.9;
  syn->add_option("--clean", syn_clean, "Clean SOLC image or directory")->required();
  syn->add_option("--count", syn_count, "Use only the first K images (0 = all)")->capture_default_str();
  syn->add_option("--out", syn_out, "Output directory")->required();
  syn->add_option("--seed", syn_seed, "Recipe seed")->capture_default_str();
  syn->add_option("--texture", syn_texture, "fluffy or streaked")->capture_default_str();
  syn->add_option("--a-max", syn_amax, "Attenuation ceiling")->capture_default_str();

  // dataset
  auto* ds = app.add_subcommand("dataset", "Build a split synthetic dataset with a manifest");
  fs::path ds_clean, ds_out;
  DatasetOptions ds_opts;
  std::string ds_splits = "0.561,0.138,0.301";
  std::string ds_texture = "fluffy";
  ds->add_option("--clean", ds_clean, "Directory of clean SOLC images")->required();
  ds->add_option("--out", ds_out, "Output directory")->required();
  ds->add_option("--seed", ds_opts.seed, "Dataset seed")->capture_default_str();
  ds->add_option("--splits", ds_splits, "train,val,test fractions")->capture_default_str();
  ds->add_option("--texture", ds_texture, "fluffy or streaked")->capture_default_str();
  ds->add_option("--repeats", ds_opts.repeats, "Cloud realizations per image")->capture_default_str();
  ds->add_option("--jobs", ds_opts.jobs, "Worker threads (0 = all cores)")->capture_default_str();

  // clean
  auto* cl = app.add_subcommand("clean", "Remove cloud shadows with a classical or sparse method");
  fs::path cl_in, cl_out;
  std::optional<fs::path> cl_neigh, cl_mask_out;
  std::string cl_method;
  FengOptions feng;
  FullerOptions fuller;
  std::string k2_text = "AUTO";
  SparseParams sparse;
  cl->add_option("--method", cl_method, "feng, fuller or sparse")->required()->check(CLI::IsMember({"feng", "fuller", "sparse"}));
  cl->add_option("--in", cl_in, "Cloudy SOLC image")->required();
  cl->add_option("--out", cl_out, "Cleaned SOLC image")->required();
  cl->add_option("--mask-out", cl_mask_out, "Write the estimated transmittance field here");
  cl->add_option("--neighbour", cl_neigh, "feng: cloud-free temporal neighbour");
  cl->add_option("--struct-radius", feng.struct_radius, "feng: structuring element radius (0 = disk radius / 16)");
  cl->add_option("--k1", fuller.k1, "fuller: first median window")->capture_default_str();
  cl->add_option("--k2", k2_text, "fuller: second median window or AUTO")->capture_default_str();
  cl->add_option("--structure-thresh", fuller.structure_thresh, "fuller: outlier threshold")->capture_default_str();
  cl->add_option("--patch", sparse.patch_size, "sparse: patch side")->capture_default_str();
  cl->add_option("--stride", sparse.stride, "sparse: patch stride")->capture_default_str();
  cl->add_option("--atoms", sparse.n_atoms, "sparse: dictionary size")->capture_default_str();
  cl->add_option("--sparsity", sparse.sparsity, "sparse: nonzeros per patch")->capture_default_str();
  cl->add_option("--iters", sparse.n_iters, "sparse: K-SVD iterations")->capture_default_str();
  cl->add_option("--seed", sparse.seed, "sparse: dictionary seed")->capture_default_str();
  cl->add_option("--f-cut", sparse.f_cut, "sparse: shadow atom frequency cut")->capture_default_str();

  // apply
  auto* ap = app.add_subcommand("apply", "Clean an image with a transmittance or residual mask");
  fs::path ap_in, ap_mask, ap_out;
  double ap_eps = kDefaultEpsilon;
  std::string ap_eq = "auto";
  ap->add_option("--in", ap_in, "Cloudy SOLC image")->required();
  ap->add_option("--mask", ap_mask, "SOLC mask")->required();
  ap->add_option("--out", ap_out, "Cleaned SOLC image")->required();
  ap->add_option("--eq", ap_eq, "ratio, division, residual or auto (by mask kind)")
      ->check(CLI::IsMember({"auto", "ratio", "division", "residual"}))
      ->capture_default_str();
  ap->add_option("--epsilon,--eps", ap_eps, "Division guard")->capture_default_str();

  // eval
  auto* ev = app.add_subcommand("eval", "Score predictions against targets (matched by file name)");
  fs::path ev_pred, ev_target, ev_report;
  std::string ev_method = "pred";
  ev->add_option("--pred", ev_pred, "Directory of cleaned SOLC images")->required();
  ev->add_option("--target", ev_target, "Directory of clean SOLC images")->required();
  ev->add_option("--report", ev_report, "CSV report path")->required();
  ev->add_option("--method", ev_method, "Method label for the report")->capture_default_str();

  // bench
  auto* bn = app.add_subcommand("bench", "Run the benchmark over a manifest split");
  fs::path bn_manifest, bn_out;
  std::string bn_methods;
  std::string bn_split = "test";
  BenchOptions bn_opts;
  bn->add_option("--manifest", bn_manifest, "manifest.jsonl")->required();
  bn->add_option("--methods", bn_methods, "Comma list: feng,fuller,sparse,gt-residual,gt-transmittance,cloudy,mask:DIR")
      ->required();
  bn->add_option("--out", bn_out, "Output directory")->required();
  bn->add_option("--split", bn_split, "train, val or test")->capture_default_str();
  bn->add_option("--neighbours", bn_opts.neighbours, "Directory of cloud-free neighbours named {id}.solc");
  bn->add_option("--panels", bn_opts.panels, "Number of comparison panels")->capture_default_str();
  bn->add_option("--jobs", bn_opts.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  bn->add_option("--atoms", bn_opts.sparse.n_atoms, "sparse: dictionary size")->capture_default_str();
  bn->add_option("--iters", bn_opts.sparse.n_iters, "sparse: K-SVD iterations")->capture_default_str();

  // export
  auto* ex = app.add_subcommand("export", "Write a SOLC image or mask as PNG");
  fs::path ex_in, ex_out;
  int ex_bits = 16;
  ex->add_option("--in", ex_in, "SOLC file")->required();
  ex->add_option("--out", ex_out, "PNG path")->required();
  ex->add_option("--bits", ex_bits, "8 or 16")->check(CLI::IsMember({8, 16}))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pre) {
      const auto files = inputs_of(pre_in);
      const bool many = fs::is_directory(pre_in);
      if (many) fs::create_directories(pre_out);
      for (const auto& f : files) {
        const SolarImage raw = load_any(f);
        const SolarImage out = preprocess(SolarImage(raw.plane(), raw.disk(), parse_modality(pre_modality)), pre_opts);
        write_container(out, output_for(pre_out, f, many));
      }
    } else if (*gen) {
      gen_opts.modality = parse_modality(gen_modality);
      fs::create_directories(gen_out);
      if (gen_neigh) fs::create_directories(*gen_neigh);
      for (int i = 0; i < gen_count; ++i) {
        const std::string name = fmt::format("sun_{:04d}.solc", i);
        const std::uint64_t seed = gen_seed * 1000003ULL + static_cast<std::uint64_t>(i);
        write_container(synthesize_sun(seed, gen_opts), gen_out / name);
        if (gen_neigh) write_container(synthesize_neighbour(seed, gen_opts), *gen_neigh / name);
      }
    } else if (*cov) {
      const TriageResult t = triage(cov_in, cov_threshold);
      std::vector<std::tuple<std::string, double, bool>> rows;
      for (const auto& e : t.cloudfree) rows.emplace_back(e.path.filename().string(), e.score, true);
      for (const auto& e : t.cloudy) rows.emplace_back(e.path.filename().string(), e.score, false);
      std::sort(rows.begin(), rows.end());
      std::string csv = "file,coverage,class\n";
      for (const auto& [name, score, clear] : rows) csv += fmt::format("{},{:.9g},{}\n", name, score, clear ? "cloudfree" : "cloudy");
      write_file(cov_report, csv);
      fmt::print("{} cloud-free, {} cloudy\n", t.cloudfree.size(), t.cloudy.size());
    } else if (*syn) {
      auto files = fs::is_directory(syn_clean) ? list_containers(syn_clean) : std::vector<fs::path>{syn_clean};
      if (syn_count > 0 && files.size() > static_cast<std::size_t>(syn_count)) files.resize(static_cast<std::size_t>(syn_count));
      const TextureKind kind = parse_texture_kind(syn_texture);
      const std::uint64_t texture_seed = derive_seed(syn_seed, 0);
      std::map<int, Plane> textures;
      fs::create_directories(syn_out);
      for (std::size_t i = 0; i < files.size(); ++i) {
        const SolarImage clean = read_image(files[i]);
        const int size = std::max(clean.width(), clean.height());
        if (!textures.contains(size)) textures.emplace(size, make_base_texture(kind, texture_size_for(size), texture_seed));
        const CloudRecipe recipe = sample_recipe(derive_seed(syn_seed, i + 1), kind);
        const CompositeResult out = composite(clean, recipe, textures.at(size), {syn_amax});
        const std::string stem = files[i].stem().string();
        write_container(out.cloudy, syn_out / (stem + "_cloudy.solc"));
        write_container(out.gt_residual, syn_out / (stem + "_residual.solc"));
        write_container(out.gt_transmittance, syn_out / (stem + "_transmittance.solc"));
        auto sidecar = recipe_to_json(recipe);
        sidecar["texture_seed"] = texture_seed;
        sidecar["texture_size"] = texture_size_for(size);
        sidecar["a_max"] = syn_amax;
        write_file(syn_out / (stem + "_recipe.json"), sidecar.dump(2) + "\n");
      }
    } else if (*ds) {
      const auto parts = split_list(ds_splits);
      if (parts.size() != 3) throw Error(Errc::InvalidArgument, "--splits needs three fractions");
      ds_opts.fractions = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
      ds_opts.texture_kind = parse_texture_kind(ds_texture);
      const Manifest m = build_dataset(ds_clean, ds_out, ds_opts);
      const auto n_of = [&](Split s) { return m.in_split(s).size(); };
      fmt::print("{} entries: {} train / {} val / {} test\n", m.entries.size(), n_of(Split::Train), n_of(Split::Val),
                 n_of(Split::Test));
    } else if (*cl) {
      const SolarImage cloudy = read_image(cl_in);
      std::optional<ShadowMask> field;
      SolarImage cleaned;
      if (cl_method == "feng") {
        std::optional<SolarImage> neighbour;
        if (cl_neigh) neighbour = read_image(*cl_neigh);
        auto r = feng_transmittance(cloudy, neighbour, feng);
        cleaned = r.cleaned;
        field = r.mask;
      } else if (cl_method == "fuller") {
        fuller.k2 = k2_text == "AUTO" || k2_text == "auto" ? 0 : std::stoi(k2_text);
        auto r = fuller_median(cloudy, fuller);
        cleaned = r.cleaned;
        field = r.mask;
      } else {
        auto r = remove_shadow_sparse(cloudy, sparse);
        cleaned = r.cleaned;
        field = r.shadow_field;
      }
      write_container(cleaned, cl_out);
      if (cl_mask_out) write_container(*field, *cl_mask_out);
    } else if (*ap) {
      const SolarImage cloudy = read_image(ap_in);
      const ShadowMask mask = read_mask(ap_mask);
      mask.validate();
      if (ap_eq == "auto") ap_eq = mask.kind() == MaskKind::Residual ? "residual" : "division";
      const SolarImage out = ap_eq == "residual" ? apply_residual(cloudy, mask)
                             : ap_eq == "ratio"  ? apply_shadow_ratio(cloudy, mask)
                                                 : apply_division(cloudy, mask, ap_eps);
      write_container(out, ap_out);
    } else if (*ev) {
      std::string csv = "image_id,method,psnr_db,ssim,rmse\n";
      const auto fmt_metric = [](double v) { return std::isinf(v) ? std::string("inf") : fmt::format("{:.9g}", v); };
      for (const auto& p : list_containers(ev_pred)) {
        const fs::path t = ev_target / p.filename();
        if (!fs::is_regular_file(t)) throw Error(Errc::MissingFile, t.string());
        const EvalRecord r = evaluate_pair(read_image(p), read_image(t));
        csv += fmt::format("{},{},{},{},{}\n", p.stem().string(), ev_method, fmt_metric(r.psnr), fmt_metric(r.ssim),
                           fmt_metric(r.rmse));
      }
      write_file(ev_report, csv);
    } else if (*bn) {
      const Manifest manifest = load_manifest(bn_manifest);
      std::vector<MethodSpec> methods;
      for (const auto& m : split_list(bn_methods)) methods.push_back(parse_method(m));
      bn_opts.split = parse_split(bn_split);
      const EvalReport report = run_benchmark(manifest, methods, bn_out, bn_opts);
      for (const auto& s : report.summaries) {
        fmt::print("{:<20} rmse {:.4g} ({:.2g})  psnr {:.4g}  ssim {:.4g}  {} failures of {}\n", s.method,
                   s.across_runs.rmse.mean, s.across_runs.rmse.std, s.across_runs.psnr.mean, s.across_runs.ssim.mean,
                   s.failures, s.images * s.runs);
      }
    } else if (*ex) {
      const ContainerObject obj = read_container(ex_in);
      const Plane& plane = std::visit([](const auto& o) -> const Plane& { return o.plane(); }, obj);
      if (ex_bits == 16) {
        export_png16(plane, ex_out);
      } else {
        export_png8(plane, ex_out);
      }
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
