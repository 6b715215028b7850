#include "mcaux/harness/mnist.hpp"

#include <zlib.h>

#include <memory>
#include <sstream>

#include "mcaux/errors.hpp"
#include "mcaux/harness/errors.hpp"
#include "mcaux/linalg.hpp"

namespace mcaux::harness {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

class GzReader {
 public:
  explicit GzReader(const std::filesystem::path& path)
      : path_(path), file_(gzopen(path.c_str(), "rb"), &gzclose) {
    if (!file_) throw DataError("cannot open " + path.string());
  }

  void read(void* out, std::size_t bytes) {
    std::size_t done = 0;
    auto* dst = static_cast<unsigned char*>(out);
    while (done < bytes) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(bytes - done, 1u << 30));
      const int got = gzread(file_.get(), dst + done, chunk);
      if (got <= 0) {
        throw DataError(path_.string() + ": truncated at byte offset " +
                        std::to_string(offset_ + done));
      }
      done += static_cast<std::size_t>(got);
    }
    offset_ += bytes;
  }

  std::uint32_t big_endian_u32() {
    unsigned char b[4];
    read(b, 4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
  }

  std::size_t offset() const noexcept { return offset_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::unique_ptr<gzFile_s, decltype(&gzclose)> file_;
  std::size_t offset_ = 0;
};

void expect_magic(GzReader& in, std::uint32_t expected) {
  const std::uint32_t magic = in.big_endian_u32();
  if (magic != expected) {
    std::ostringstream msg;
    msg << in.path().string() << ": bad magic 0x" << std::hex << magic << " (expected 0x"
        << expected << ") at byte offset 0";
    throw DataError(msg.str());
  }
}

std::filesystem::path existing(const std::filesystem::path& dir, const std::string& stem) {
  for (const std::string& name : {stem, stem + ".gz"}) {
    if (std::filesystem::exists(dir / name)) return dir / name;
  }
  return dir / stem;
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  GzReader in(path);
  expect_magic(in, kImageMagic);
  IdxImages out;
  out.count = in.big_endian_u32();
  out.rows = in.big_endian_u32();
  out.cols = in.big_endian_u32();
  out.pixels.resize(std::size_t{out.count} * out.rows * out.cols);
  in.read(out.pixels.data(), out.pixels.size());
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  GzReader in(path);
  expect_magic(in, kLabelMagic);
  std::vector<std::uint8_t> out(in.big_endian_u32());
  in.read(out.data(), out.size());
  return out;
}

Eigen::MatrixXd pca_top_k(const Eigen::MatrixXd& covariance, std::size_t k) {
  if (covariance.rows() != covariance.cols()) throw PreconditionError("covariance must be square");
  if (k > static_cast<std::size_t>(covariance.rows())) {
    throw PreconditionError("more components requested than dimensions");
  }
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw PreconditionError("covariance is not symmetric");
  const SymmetricEigen eig = jacobi_eigen(covariance);
  return eig.vectors.leftCols(static_cast<Eigen::Index>(k));
}

std::array<std::filesystem::path, 4> mnist_files(const std::filesystem::path& dir) {
  return {existing(dir, "train-images-idx3-ubyte"), existing(dir, "train-labels-idx1-ubyte"),
          existing(dir, "t10k-images-idx3-ubyte"), existing(dir, "t10k-labels-idx1-ubyte")};
}

MnistPair ingest_mnist(const std::filesystem::path& dir, std::array<int, 2> digits,
                       std::size_t components) {
  const auto files = mnist_files(dir);
  for (const auto& f : files) {
    if (!std::filesystem::exists(f)) {
      throw DataError("missing MNIST file " + f.string() +
                      " (expected train-images-idx3-ubyte, train-labels-idx1-ubyte, "
                      "t10k-images-idx3-ubyte, t10k-labels-idx1-ubyte, optionally .gz)");
    }
  }
  const IdxImages train_img = read_idx_images(files[0]);
  const auto train_lab = read_idx_labels(files[1]);
  const IdxImages test_img = read_idx_images(files[2]);
  const auto test_lab = read_idx_labels(files[3]);
  if (train_img.count != train_lab.size() || test_img.count != test_lab.size()) {
    throw DataError("image and label counts differ");
  }
  const std::size_t p = std::size_t{train_img.rows} * train_img.cols;
  if (std::size_t{test_img.rows} * test_img.cols != p) throw DataError("image sizes differ");
  if (components > p) throw DataError("more components than pixels");

  auto select = [&](const IdxImages& img, const std::vector<std::uint8_t>& lab,
                    Eigen::MatrixXd& x, Eigen::VectorXd& y) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < lab.size(); ++i) {
      if (lab[i] == digits[0] || lab[i] == digits[1]) keep.push_back(i);
    }
    x.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(p));
    y.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
      const std::uint8_t* px = img.pixels.data() + keep[r] * p;
      for (std::size_t j = 0; j < p; ++j) {
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = px[j] / 255.0;
      }
      y[static_cast<Eigen::Index>(r)] = lab[keep[r]] == digits[1] ? 1.0 : 0.0;
    }
  };
  Eigen::MatrixXd train_raw, test_raw;
  MnistPair out;
  select(train_img, train_lab, train_raw, out.train_y);
  select(test_img, test_lab, test_raw, out.test_y);
  if (train_raw.rows() < 2) throw DataError("fewer than two training images for the digit pair");

  const Eigen::RowVectorXd mean = train_raw.colwise().mean();
  train_raw.rowwise() -= mean;
  test_raw.rowwise() -= mean;
  Eigen::MatrixXd cov = (train_raw.transpose() * train_raw) / double(train_raw.rows() - 1);
  cov = 0.5 * (cov + cov.transpose()).eval();
  const Eigen::MatrixXd basis = pca_top_k(cov, components);
  out.train_x = train_raw * basis;
  out.test_x = test_raw * basis;
  return out;
}

}  // namespace mcaux::harness
