#include "heliosweep/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heliosweep/error.hpp"
#include "heliosweep/filters.hpp"
#include "heliosweep/rng.hpp"

namespace heliosweep {
namespace {

std::vector<int> grid_positions(int extent, int patch, int stride) {
  std::vector<int> pos;
  for (int p = 0; p + patch <= extent; p += stride) pos.push_back(p);
  if (!pos.empty() && pos.back() != extent - patch) pos.push_back(extent - patch);
  return pos;
}

Eigen::VectorXd random_unit(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v / v.norm();
}

/// Mean over the in-support part of a (2r+1)^2 box.
Plane masked_box_mean(const Plane& in, std::span<const std::uint8_t> support, int r) {
  const int w = in.width();
  const int h = in.height();
  std::vector<double> sum(in.size(), 0.0), cnt(in.size(), 0.0);
  std::vector<double> tsum(in.size(), 0.0), tcnt(in.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0, c = 0.0;
      for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) {
        const std::size_t i = static_cast<std::size_t>(y) * w + xx;
        if (support[i]) {
          s += in.data()[i];
          c += 1.0;
        }
      }
      tsum[static_cast<std::size_t>(y) * w + x] = s;
      tcnt[static_cast<std::size_t>(y) * w + x] = c;
    }
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!support[i]) continue;
      double s = 0.0, c = 0.0;
      for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy) {
        s += tsum[static_cast<std::size_t>(yy) * w + x];
        c += tcnt[static_cast<std::size_t>(yy) * w + x];
      }
      out.data()[i] = static_cast<float>(s / c);
    }
  }
  return out;
}

double dct_basis(int k, int x, int n) {
  const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return scale * std::cos(std::numbers::pi * (2 * x + 1) * k / (2.0 * n));
}

}  // namespace

void PatchDictionary::validate() const {
  if (atoms.rows() != patch_dim()) throw Error(Errc::InvariantViolation, "atom length does not match patch size");
  for (int k = 0; k < atoms.cols(); ++k) {
    if (std::abs(atoms.col(k).norm() - 1.0) > 1e-6) {
      throw Error(Errc::InvariantViolation, "atom " + std::to_string(k) + " is not unit norm");
    }
  }
}

SparseCode omp_encode_gram(const Eigen::VectorXd& dtx, const Eigen::MatrixXd& gram, double xtx, int sparsity) {
  const int n_atoms = static_cast<int>(dtx.size());
  const int limit = std::clamp(sparsity, 0, n_atoms);
  SparseCode code;
  if (limit == 0 || xtx <= 0.0) return code;

  const double tol = 1e-12 * std::sqrt(xtx);
  std::vector<int> support;
  std::vector<char> blocked(static_cast<std::size_t>(n_atoms), 0);
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(limit, limit);
  Eigen::VectorXd alpha = dtx;
  Eigen::VectorXd gamma;

  while (static_cast<int>(support.size()) < limit) {
    int best = -1;
    double best_abs = tol;
    for (int j = 0; j < n_atoms; ++j) {
      if (!blocked[j] && std::abs(alpha[j]) > best_abs) {
        best_abs = std::abs(alpha[j]);
        best = j;
      }
    }
    if (best < 0) break;

    const int k = static_cast<int>(support.size());
    if (k == 0) {
      if (!(gram(best, best) > 0.0)) {
        blocked[best] = 1;
        continue;
      }
      chol(0, 0) = std::sqrt(gram(best, best));
    } else {
      Eigen::VectorXd g(k);
      for (int i = 0; i < k; ++i) g[i] = gram(support[i], best);
      const Eigen::VectorXd w = chol.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(g);
      const double d = gram(best, best) - w.squaredNorm();
      if (!(d > 1e-10 * gram(best, best))) {
        blocked[best] = 1;  // numerically dependent on the current support
        continue;
      }
      chol.block(k, 0, 1, k) = w.transpose();
      chol(k, k) = std::sqrt(d);
    }
    support.push_back(best);
    blocked[best] = 1;

    const int m = static_cast<int>(support.size());
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b[i] = dtx[support[i]];
    const auto lower = chol.topLeftCorner(m, m).triangularView<Eigen::Lower>();
    gamma = lower.transpose().solve(lower.solve(b));

    alpha = dtx;
    for (int i = 0; i < m; ++i) alpha -= gram.col(support[i]) * gamma[i];
    if (xtx - gamma.dot(b) <= tol * tol) break;
  }

  code.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) code.emplace_back(support[i], gamma[static_cast<Eigen::Index>(i)]);
  return code;
}

Eigen::VectorXd omp_encode(const Eigen::VectorXd& patch, const Eigen::MatrixXd& atoms, int sparsity) {
  if (patch.size() != atoms.rows()) throw Error(Errc::ShapeMismatch, "patch length does not match the dictionary");
  const Eigen::MatrixXd gram = atoms.transpose() * atoms;
  const Eigen::VectorXd dtx = atoms.transpose() * patch;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(atoms.cols());
  for (const auto& [j, c] : omp_encode_gram(dtx, gram, patch.squaredNorm(), sparsity)) coeffs[j] = c;
  return coeffs;
}

Eigen::MatrixXd PatchSet::original() const {
  Eigen::MatrixXd out = data;
  for (int j = 0; j < data.cols(); ++j) out.col(j) += support.col(j) * means[static_cast<std::size_t>(j)];
  return out;
}

PatchSet extract_patches(const SolarImage& image, int patch_size, int stride) {
  if (patch_size < 2 || stride < 1) throw Error(Errc::InvalidArgument, "patch size must be >= 2 and stride >= 1");
  if (patch_size > image.width() || patch_size > image.height()) throw Error(Errc::TooFewPatches, "patch larger than image");
  const auto inside = image.support();
  const int w = image.width();
  const int dim = patch_size * patch_size;

  std::vector<std::pair<int, int>> origins;
  for (int y0 : grid_positions(image.height(), patch_size, stride)) {
    for (int x0 : grid_positions(w, patch_size, stride)) {
      bool touches = false;
      for (int dy = 0; dy < patch_size && !touches; ++dy) {
        for (int dx = 0; dx < patch_size && !touches; ++dx) {
          touches = inside[static_cast<std::size_t>(y0 + dy) * w + x0 + dx] != 0;
        }
      }
      if (touches) origins.emplace_back(x0, y0);
    }
  }

  PatchSet set;
  set.patch_size = patch_size;
  set.stride = stride;
  set.data = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(origins.size()));
  set.support = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(origins.size()));
  set.means.resize(origins.size());
  for (std::size_t j = 0; j < origins.size(); ++j) {
    const auto [x0, y0] = origins[j];
    double sum = 0.0;
    int count = 0;
    for (int dy = 0; dy < patch_size; ++dy) {
      for (int dx = 0; dx < patch_size; ++dx) {
        if (!inside[static_cast<std::size_t>(y0 + dy) * w + x0 + dx]) continue;
        sum += image(x0 + dx, y0 + dy);
        ++count;
        set.support(dy * patch_size + dx, static_cast<Eigen::Index>(j)) = 1.0;
      }
    }
    const double mean = sum / count;
    set.means[j] = mean;
    for (int dy = 0; dy < patch_size; ++dy) {
      for (int dx = 0; dx < patch_size; ++dx) {
        if (inside[static_cast<std::size_t>(y0 + dy) * w + x0 + dx]) {
          set.data(dy * patch_size + dx, static_cast<Eigen::Index>(j)) = image(x0 + dx, y0 + dy) - mean;
        }
      }
    }
  }
  set.origins = std::move(origins);
  return set;
}

KsvdResult ksvd(const Eigen::MatrixXd& patches, const KsvdOptions& options) {
  const int dim = static_cast<int>(patches.rows());
  const int n = static_cast<int>(patches.cols());
  const int n_atoms = options.n_atoms;
  if (n_atoms < 1 || options.sparsity < 1 || options.n_iters < 0) throw Error(Errc::InvalidArgument, "bad K-SVD options");
  if (n < 1) throw Error(Errc::TooFewPatches, "no training patches");

  Rng rng(options.seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  Eigen::MatrixXd atoms(dim, n_atoms);
  std::size_t next = 0;
  for (int k = 0; k < n_atoms; ++k) {
    bool placed = false;
    while (next < order.size() && !placed) {
      const auto col = patches.col(order[next++]);
      const double norm = col.norm();
      if (norm > 1e-12) {
        atoms.col(k) = col / norm;
        placed = true;
      }
    }
    if (!placed) atoms.col(k) = random_unit(rng, dim);
  }

  KsvdResult result;
  result.codes.assign(static_cast<std::size_t>(n), {});
  Eigen::MatrixXd residual = patches;
  const double entries = static_cast<double>(n) * dim;
  result.training_rmse.push_back(std::sqrt(residual.squaredNorm() / entries));

  for (int iter = 0; iter < options.n_iters; ++iter) {
    // Sparse coding stage.
    const Eigen::MatrixXd gram = atoms.transpose() * atoms;
    const Eigen::MatrixXd dtx = atoms.transpose() * patches;
    for (int i = 0; i < n; ++i) {
      SparseCode code = omp_encode_gram(dtx.col(i), gram, patches.col(i).squaredNorm(), options.sparsity);
      Eigen::VectorXd r = patches.col(i);
      for (const auto& [j, c] : code) r -= atoms.col(j) * c;
      if (r.squaredNorm() <= residual.col(i).squaredNorm()) {
        result.codes[static_cast<std::size_t>(i)] = std::move(code);
        residual.col(i) = r;
      }
    }

    // Dictionary update stage.
    std::vector<std::vector<std::pair<int, int>>> users(static_cast<std::size_t>(n_atoms));
    for (int i = 0; i < n; ++i) {
      const auto& code = result.codes[static_cast<std::size_t>(i)];
      for (int slot = 0; slot < static_cast<int>(code.size()); ++slot) {
        users[static_cast<std::size_t>(code[static_cast<std::size_t>(slot)].first)].emplace_back(i, slot);
      }
    }
    std::vector<char> used_for_restart(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n_atoms; ++k) {
      const auto& who = users[static_cast<std::size_t>(k)];
      if (who.empty()) {
        // Restart an unused atom on the worst-represented patch; no code references it yet.
        int worst = -1;
        double worst_err = 1e-18;
        for (int i = 0; i < n; ++i) {
          const double e = residual.col(i).squaredNorm();
          if (!used_for_restart[static_cast<std::size_t>(i)] && e > worst_err) {
            worst_err = e;
            worst = i;
          }
        }
        if (worst >= 0) {
          used_for_restart[static_cast<std::size_t>(worst)] = 1;
          atoms.col(k) = residual.col(worst) / residual.col(worst).norm();
        }
        continue;
      }

      const int m = static_cast<int>(who.size());
      Eigen::MatrixXd err(dim, m);
      Eigen::VectorXd coef(m);
      for (int u = 0; u < m; ++u) {
        const auto [i, slot] = who[static_cast<std::size_t>(u)];
        coef[u] = result.codes[static_cast<std::size_t>(i)][static_cast<std::size_t>(slot)].second;
        err.col(u) = residual.col(i) + atoms.col(k) * coef[u];
      }
      Eigen::VectorXd atom = atoms.col(k);
      for (int round = 0; round < 2; ++round) {
        const Eigen::VectorXd v = err * coef;
        const double norm = v.norm();
        if (!(norm > 0.0)) break;
        atom = v / norm;
        coef = err.transpose() * atom;
      }
      atoms.col(k) = atom;
      for (int u = 0; u < m; ++u) {
        const auto [i, slot] = who[static_cast<std::size_t>(u)];
        result.codes[static_cast<std::size_t>(i)][static_cast<std::size_t>(slot)].second = coef[u];
        residual.col(i) = err.col(u) - atom * coef[u];
      }
    }
    result.training_rmse.push_back(std::sqrt(residual.squaredNorm() / entries));
  }
  result.atoms = std::move(atoms);
  return result;
}

DictionaryFit learn_dictionary(const SolarImage& image, int patch_size, int stride, const KsvdOptions& options) {
  const PatchSet set = extract_patches(image, patch_size, stride);
  if (set.count() < 10 * options.n_atoms) {
    throw Error(Errc::TooFewPatches, std::to_string(set.count()) + " patches for " + std::to_string(options.n_atoms) +
                                         " atoms (need 10 per atom)");
  }
  KsvdResult fit = ksvd(set.data, options);
  return {PatchDictionary{std::move(fit.atoms), patch_size, stride, true}, std::move(fit.training_rmse)};
}

double atom_frequency(const Eigen::VectorXd& atom, int patch_size) {
  const int p = patch_size;
  if (atom.size() != p * p) throw Error(Errc::ShapeMismatch, "atom length does not match patch size");
  double energy = 0.0;
  double weighted = 0.0;
  for (int v = 0; v < p; ++v) {
    for (int u = 0; u < p; ++u) {
      double c = 0.0;
      for (int y = 0; y < p; ++y) {
        const double by = dct_basis(v, y, p);
        for (int x = 0; x < p; ++x) c += atom[y * p + x] * dct_basis(u, x, p) * by;
      }
      const double e = c * c;
      energy += e;
      weighted += e * std::sqrt(static_cast<double>(u * u + v * v)) / (std::numbers::sqrt2 * p);
    }
  }
  return energy > 0.0 ? weighted / energy : 0.0;
}

PatchDecomposition decompose_patches(const PatchSet& patches, const Eigen::MatrixXd& atoms,
                                     const std::vector<SparseCode>& codes, double f_cut) {
  if (codes.size() != static_cast<std::size_t>(patches.count())) throw Error(Errc::ShapeMismatch, "one code per patch required");
  std::vector<char> shadow_atom(static_cast<std::size_t>(atoms.cols()));
  for (int k = 0; k < atoms.cols(); ++k) shadow_atom[static_cast<std::size_t>(k)] = atom_frequency(atoms.col(k), patches.patch_size) < f_cut;

  PatchDecomposition out;
  out.shadow = Eigen::MatrixXd::Zero(patches.data.rows(), patches.data.cols());
  out.geometry = Eigen::MatrixXd::Zero(patches.data.rows(), patches.data.cols());
  for (int j = 0; j < patches.count(); ++j) {
    out.shadow.col(j) = patches.support.col(j) * patches.means[static_cast<std::size_t>(j)];
    for (const auto& [k, c] : codes[static_cast<std::size_t>(j)]) {
      (shadow_atom[static_cast<std::size_t>(k)] ? out.shadow : out.geometry).col(j) += atoms.col(k) * c;
    }
  }
  out.residual = patches.original() - out.shadow - out.geometry;
  return out;
}

SparseCleanResult remove_shadow_sparse(const SolarImage& image, const SparseParams& params) {
  const PatchSet set = extract_patches(image, params.patch_size, params.stride);
  if (set.count() < 10 * params.n_atoms) {
    throw Error(Errc::TooFewPatches, std::to_string(set.count()) + " patches for " + std::to_string(params.n_atoms) +
                                         " atoms (need 10 per atom)");
  }
  KsvdResult fit = ksvd(set.data, {params.n_atoms, params.sparsity, params.n_iters, params.seed});
  const PatchDecomposition parts = decompose_patches(set, fit.atoms, fit.codes, params.f_cut);

  const int w = image.width();
  const int h = image.height();
  const int p = params.patch_size;
  std::vector<double> geometry(static_cast<std::size_t>(w) * h, 0.0);
  std::vector<double> shadow(geometry.size(), 0.0);
  std::vector<double> weight(geometry.size(), 0.0);
  for (int j = 0; j < set.count(); ++j) {
    const auto [x0, y0] = set.origins[static_cast<std::size_t>(j)];
    for (int dy = 0; dy < p; ++dy) {
      for (int dx = 0; dx < p; ++dx) {
        const int e = dy * p + dx;
        if (set.support(e, j) == 0.0) continue;
        const std::size_t i = static_cast<std::size_t>(y0 + dy) * w + x0 + dx;
        geometry[i] += parts.geometry(e, j);
        shadow[i] += parts.shadow(e, j);
        weight[i] += 1.0;
      }
    }
  }

  const auto inside = image.support();
  Plane shadow_plane(w, h);
  for (std::size_t i = 0; i < shadow.size(); ++i) {
    if (inside[i] && weight[i] > 0.0) shadow_plane.data()[i] = static_cast<float>(shadow[i] / weight[i]);
  }
  const Plane smooth = masked_box_mean(shadow_plane, inside, std::max(1, p / 2));
  const double reference = masked_quantile(smooth, inside, params.reference_quantile);

  Plane cleaned(w, h);
  Plane field(w, h, 1.0f);
  for (std::size_t i = 0; i < cleaned.size(); ++i) {
    if (!inside[i]) continue;
    const double g = weight[i] > 0.0 ? geometry[i] / weight[i] : 0.0;
    cleaned.data()[i] = static_cast<float>(std::clamp(reference + g, 0.0, 1.0));
    field.data()[i] = reference > 0.0 ? static_cast<float>(std::clamp(smooth.data()[i] / reference, 0.0, 1.0)) : 1.0f;
  }

  return {image.with_pixels(std::move(cleaned)), ShadowMask(std::move(field), image.disk(), MaskKind::Transmittance),
          PatchDictionary{std::move(fit.atoms), params.patch_size, params.stride, true}, std::move(fit.training_rmse)};
}

}  // namespace heliosweep
