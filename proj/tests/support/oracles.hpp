#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "seedscope/embedding.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct SymmetricEigen {
  /// Descending.
  std::vector<double> values;
  /// vectors[i] belongs to values[i].
  std::vector<std::vector<double>> vectors;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix.
SymmetricEigen jacobi_eigen(Matrix a);

/// Unit vector of a raw float row.
std::vector<double> unit(std::span<const float> row);

struct PcaResult {
  std::vector<double> ratios;
  std::vector<std::vector<double>> components;
};

/// Eigendecomposition of sum_i (h_i h_i^T + (-h_i)(-h_i)^T) with
/// h_i = (a_i - b_i) / 2.
PcaResult pair_pca(const Matrix& a, const Matrix& b);

/// 1-based ranks of `words` after sorting the whole vocabulary by descending
/// cosine to `direction`, ties by word.
std::vector<std::size_t> sorted_ranks(const seedscope::EmbeddingModel& model,
                                      std::span<const double> direction,
                                      std::span<const std::string> words);

double coherence(const seedscope::EmbeddingModel& model, std::span<const double> direction,
                 std::span<const std::string> a, std::span<const std::string> b);

/// Model with `n` words "w0".."w{n-1}" and Gaussian rows.
seedscope::EmbeddingModel random_model(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                       bool with_frequencies = true);

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim);

/// Distinct random indices in [0, n).
std::vector<std::size_t> distinct_indices(std::mt19937_64& rng, std::size_t n, std::size_t k);

double log_sigmoid(double x);

}  // namespace oracle
