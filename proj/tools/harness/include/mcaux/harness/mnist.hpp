#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "mcaux/types.hpp"

namespace mcaux::harness {

struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols, row-major
};

// IDX readers; gzip-compressed files are read transparently. Bad magic or
// a short file raises DataError with the byte offset.
IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

// Eigenvectors of the k largest eigenvalues of a symmetric matrix, as
// columns. PreconditionError on asymmetry beyond 1e-10 or k > p.
Eigen::MatrixXd pca_top_k(const Eigen::MatrixXd& covariance, std::size_t k);

struct MnistPair {
  RowMatrix train_x;
  Eigen::VectorXd train_y;
  RowMatrix test_x;
  Eigen::VectorXd test_y;
};

// Standard file names inside dir, plain or with a .gz suffix.
std::array<std::filesystem::path, 4> mnist_files(const std::filesystem::path& dir);

// Keeps two digits (first -> 0, second -> 1), scales pixels to [0, 1],
// centres by the training mean and projects onto the top components of the
// training covariance.
MnistPair ingest_mnist(const std::filesystem::path& dir, std::array<int, 2> digits,
                       std::size_t components);

}  // namespace mcaux::harness
