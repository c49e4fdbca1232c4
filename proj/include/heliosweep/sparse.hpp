#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "heliosweep/image.hpp"

namespace heliosweep {

/// Learned patch basis. Columns of `atoms` are unit-norm patch_size^2 vectors (row-major patches).
struct PatchDictionary {
  Eigen::MatrixXd atoms;
  int patch_size = 8;
  int stride = 4;
  bool mean_removed = true;

  int patch_dim() const noexcept { return patch_size * patch_size; }
  int n_atoms() const noexcept { return static_cast<int>(atoms.cols()); }

  /// Throws InvariantViolation unless every column has norm 1 +- 1e-6 and the row count matches.
  void validate() const;
};

/// Sparse vector as (atom index, coefficient) pairs, in selection order.
using SparseCode = std::vector<std::pair<int, double>>;

/// Orthogonal matching pursuit with at most `sparsity` atoms; the coefficients are the
/// least-squares fit on the selected support. Returns a dense coefficient vector.
Eigen::VectorXd omp_encode(const Eigen::VectorXd& patch, const Eigen::MatrixXd& atoms, int sparsity);
inline Eigen::VectorXd omp_encode(const Eigen::VectorXd& patch, const PatchDictionary& dict, int sparsity) {
  return omp_encode(patch, dict.atoms, sparsity);
}

/// Batch form: `dtx` = D^T x, `gram` = D^T D, `xtx` = |x|^2.
SparseCode omp_encode_gram(const Eigen::VectorXd& dtx, const Eigen::MatrixXd& gram, double xtx, int sparsity);

/// Patches on a stride grid that touch the disk. Each column holds the in-disk pixels minus
/// their mean (out-of-disk entries are 0).
struct PatchSet {
  Eigen::MatrixXd data;
  Eigen::MatrixXd support;  // 1 for in-disk entries, 0 otherwise
  std::vector<double> means;
  std::vector<std::pair<int, int>> origins;  // top-left (x, y)
  int patch_size = 8;
  int stride = 4;

  int count() const noexcept { return static_cast<int>(data.cols()); }

  /// Patches with their means restored on the in-disk entries.
  Eigen::MatrixXd original() const;
};

PatchSet extract_patches(const SolarImage& image, int patch_size, int stride);

struct KsvdOptions {
  int n_atoms = 256;
  int sparsity = 8;
  int n_iters = 20;
  std::uint64_t seed = 0;
};

struct KsvdResult {
  Eigen::MatrixXd atoms;
  std::vector<SparseCode> codes;
  /// Training RMSE per patch entry; entry 0 is the all-zero code, entry i follows iteration i.
  std::vector<double> training_rmse;
};

/// K-SVD: alternate OMP coding (a patch keeps its previous code if the new one fits worse)
/// and per-atom rank-1 refits, so the training error never increases.
KsvdResult ksvd(const Eigen::MatrixXd& patches, const KsvdOptions& options);

struct DictionaryFit {
  PatchDictionary dictionary;
  std::vector<double> training_rmse;
};

/// Throws TooFewPatches when the disk yields fewer than 10 * n_atoms patches.
DictionaryFit learn_dictionary(const SolarImage& image, int patch_size, int stride, const KsvdOptions& options);

/// Energy-weighted mean radial frequency of an atom's orthonormal 2-D DCT, normalized so that
/// coefficient (u, v) sits at sqrt(u^2 + v^2) / (sqrt(2) * patch_size).
double atom_frequency(const Eigen::VectorXd& atom, int patch_size);

struct SparseParams {
  int patch_size = 8;
  int stride = 4;
  int n_atoms = 256;
  int sparsity = 8;
  int n_iters = 20;
  std::uint64_t seed = 0;
  /// Atoms whose spectral centroid falls below this are shadow atoms.
  double f_cut = 0.1;
  /// In-disk quantile of the shadow field used as the cloud-free illumination.
  double reference_quantile = 0.98;
};

/// Split of a coded patch matrix: shadow (patch means plus low-frequency atoms),
/// geometry (remaining atoms) and coding residual. They sum to the original patches.
struct PatchDecomposition {
  Eigen::MatrixXd shadow;
  Eigen::MatrixXd geometry;
  Eigen::MatrixXd residual;
};

PatchDecomposition decompose_patches(const PatchSet& patches, const Eigen::MatrixXd& atoms,
                                     const std::vector<SparseCode>& codes, double f_cut);

struct SparseCleanResult {
  SolarImage cleaned;
  ShadowMask shadow_field;  // transmittance-kind illumination relative to the reference
  PatchDictionary dictionary;
  std::vector<double> training_rmse;
};

/// Learns a dictionary on the image itself, drops the shadow component and reconstructs
/// geometry + reference illumination (overlapping patches averaged uniformly).
SparseCleanResult remove_shadow_sparse(const SolarImage& image, const SparseParams& params = {});

}  // namespace heliosweep
