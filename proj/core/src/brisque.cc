// Copyright 2026 The BannerForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bannerforge/brisque.h"

#include <cmath>
#include <limits>
#include <string>

#include "bannerforge/error.h"
#include "bannerforge/jsonl.h"

namespace bannerforge::brisque {
namespace {

struct ShapeTable {
  std::vector<double> shape;
  std::vector<double> ratio;  // GgdMomentRatio(shape)

  ShapeTable() {
    const int steps = static_cast<int>(std::lround((kShapeMax - kShapeMin) / kShapeStep));
    shape.reserve(steps + 1);
    ratio.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
      const double a = kShapeMin + k * kShapeStep;
      shape.push_back(a);
      ratio.push_back(GgdMomentRatio(a));
    }
  }
};

const ShapeTable& Table() {
  static const ShapeTable table;
  return table;
}

// First index minimizing |f(k) - target|.
template <typename F>
std::size_t ArgminDistance(std::size_t n, double target, F&& f) {
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::abs(f(k) - target);
    if (d < best_distance) {
      best_distance = d;
      best = k;
    }
  }
  return best;
}

int Reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

std::array<double, 2 * kWindowRadius + 1> GaussianTaps() {
  std::array<double, 2 * kWindowRadius + 1> taps{};
  double sum = 0.0;
  for (int x = -kWindowRadius; x <= kWindowRadius; ++x) {
    taps[x + kWindowRadius] = std::exp(-(x * x) / (2.0 * kWindowSigma * kWindowSigma));
    sum += taps[x + kWindowRadius];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

// Separable Gaussian smoothing; the 2-D window is the outer product of the
// normalized 1-D taps, so it has unit sum as well.
Matrix GaussianFilter(const Matrix& in) {
  static const auto taps = GaussianTaps();
  Matrix horizontal(in.rows, in.cols);
  for (int r = 0; r < in.rows; ++r) {
    for (int c = 0; c < in.cols; ++c) {
      double acc = 0.0;
      for (int k = -kWindowRadius; k <= kWindowRadius; ++k) {
        acc += taps[k + kWindowRadius] * in(r, Reflect(c + k, in.cols));
      }
      horizontal(r, c) = acc;
    }
  }
  Matrix out(in.rows, in.cols);
  for (int r = 0; r < in.rows; ++r) {
    for (int c = 0; c < in.cols; ++c) {
      double acc = 0.0;
      for (int k = -kWindowRadius; k <= kWindowRadius; ++k) {
        acc += taps[k + kWindowRadius] * horizontal(Reflect(r + k, in.rows), c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

void ValidateGrayImage(const GrayImage& image) {
  if (image.width < kMinImageSide || image.height < kMinImageSide) {
    throw Error(ErrorKind::kInvalidArgument,
                "image " + std::to_string(image.width) + "x" +
                    std::to_string(image.height) + " is smaller than 16x16");
  }
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw Error(ErrorKind::kInvalidArgument, "pixel buffer does not match dimensions");
  }
}

Matrix AsMatrix(const GrayImage& image) {
  Matrix m(image.height, image.width);
  m.data = image.pixels;
  return m;
}

GrayImage ToLuminance(const RgbImage& rgb) {
  GrayImage gray;
  gray.width = rgb.width;
  gray.height = rgb.height;
  if (rgb.width < kMinImageSide || rgb.height < kMinImageSide) {
    ValidateGrayImage(gray);
  }
  gray.pixels.resize(static_cast<std::size_t>(rgb.width) * rgb.height);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    const auto* px = rgb.pixels.data() + 3 * i;
    gray.pixels[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return gray;
}

GrayImage DecodeGray(std::span<const std::uint8_t> png_bytes) {
  return ToLuminance(DecodePng(png_bytes));
}

GrayImage LoadGray(const std::filesystem::path& png_path) {
  const auto text = ReadFileText(png_path);
  return DecodeGray(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Matrix ComputeMscn(const Matrix& input) {
  // Work relative to one pixel value: flat images become exact zeros.
  Matrix image = input;
  const double offset = input.data.empty() ? 0.0 : input.data.front();
  for (double& v : image.data) v -= offset;
  Matrix squared(image.rows, image.cols);
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    squared.data[i] = image.data[i] * image.data[i];
  }
  const Matrix mu = GaussianFilter(image);
  const Matrix mu_sq = GaussianFilter(squared);
  Matrix mscn(image.rows, image.cols);
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const double sigma = std::sqrt(std::abs(mu_sq.data[i] - mu.data[i] * mu.data[i]));
    mscn.data[i] = (image.data[i] - mu.data[i]) / (sigma + kMscnStabilizer);
  }
  return mscn;
}

Matrix ComputeMscn(const GrayImage& image) {
  ValidateGrayImage(image);
  return ComputeMscn(AsMatrix(image));
}

PairedProducts ComputePairedProducts(const Matrix& m) {
  PairedProducts p;
  const int rows = m.rows;
  const int cols = m.cols;
  p.horizontal = Matrix(rows, std::max(cols - 1, 0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) p.horizontal(r, c) = m(r, c) * m(r, c + 1);

  p.vertical = Matrix(std::max(rows - 1, 0), cols);
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c) p.vertical(r, c) = m(r, c) * m(r + 1, c);

  p.main_diagonal = Matrix(std::max(rows - 1, 0), std::max(cols - 1, 0));
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) p.main_diagonal(r, c) = m(r, c) * m(r + 1, c + 1);

  // Column c of the output pairs (r, c + 1) with (r + 1, c).
  p.secondary_diagonal = Matrix(std::max(rows - 1, 0), std::max(cols - 1, 0));
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c)
      p.secondary_diagonal(r, c) = m(r, c + 1) * m(r + 1, c);
  return p;
}

std::span<const double> ShapeGrid() { return Table().shape; }

double GgdMomentRatio(double shape) {
  return std::tgamma(1.0 / shape) * std::tgamma(3.0 / shape) /
         (std::tgamma(2.0 / shape) * std::tgamma(2.0 / shape));
}

GgdFit FitGgd(std::span<const double> samples) {
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  for (double x : samples) {
    sum_abs += std::abs(x);
    sum_sq += x * x;
  }
  if (samples.empty() || sum_sq == 0.0) {
    throw Error(ErrorKind::kDegenerate, "GGD fit needs samples that are not all zero");
  }
  const double n = static_cast<double>(samples.size());
  const double mean_abs = sum_abs / n;
  GgdFit fit;
  fit.sigma_sq = sum_sq / n;
  const double ratio = fit.sigma_sq / (mean_abs * mean_abs);
  const auto& table = Table();
  fit.alpha = table.shape[ArgminDistance(table.ratio.size(), ratio,
                                         [&](std::size_t k) { return table.ratio[k]; })];
  return fit;
}

AggdFit FitAggd(std::span<const double> samples) {
  double left_sq = 0.0, right_sq = 0.0, sum_abs = 0.0, sum_sq = 0.0;
  std::size_t left_n = 0, right_n = 0;
  for (double x : samples) {
    if (x < 0) {
      left_sq += x * x;
      ++left_n;
    } else if (x > 0) {
      right_sq += x * x;
      ++right_n;
    }
    sum_abs += std::abs(x);
    sum_sq += x * x;
  }
  if (left_n == 0 || right_n == 0) {
    throw Error(ErrorKind::kSingleSigned,
                "AGGD fit needs both negative and positive samples");
  }
  const double n = static_cast<double>(samples.size());
  AggdFit fit;
  fit.sigma_l_sq = left_sq / static_cast<double>(left_n);
  fit.sigma_r_sq = right_sq / static_cast<double>(right_n);
  const double sigma_l = std::sqrt(fit.sigma_l_sq);
  const double sigma_r = std::sqrt(fit.sigma_r_sq);
  const double gamma_hat = sigma_l / sigma_r;
  const double mean_abs = sum_abs / n;
  const double r_hat = mean_abs * mean_abs / (sum_sq / n);
  const double r_norm = r_hat * (gamma_hat * gamma_hat * gamma_hat + 1.0) *
                        (gamma_hat + 1.0) /
                        ((gamma_hat * gamma_hat + 1.0) * (gamma_hat * gamma_hat + 1.0));
  // r_norm estimates E[|x|]^2 / E[x^2], the reciprocal of the table ratio.
  const auto& table = Table();
  fit.nu = table.shape[ArgminDistance(table.ratio.size(), r_norm, [&](std::size_t k) {
    return 1.0 / table.ratio[k];
  })];
  const double g1 = std::tgamma(1.0 / fit.nu);
  const double g2 = std::tgamma(2.0 / fit.nu);
  const double g3 = std::tgamma(3.0 / fit.nu);
  const double scale = std::sqrt(g1 / g3);  // sigma -> AGGD beta
  fit.mean_feature = (sigma_r - sigma_l) * scale * g2 / g1;
  return fit;
}

Matrix Downsample(const Matrix& image) {
  Matrix out(image.rows / 2, image.cols / 2);
  for (int r = 0; r < out.rows; ++r) {
    for (int c = 0; c < out.cols; ++c) {
      out(r, c) = 0.25 * (image(2 * r, 2 * c) + image(2 * r, 2 * c + 1) +
                          image(2 * r + 1, 2 * c) + image(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

FeatureVector ComputeFeatures(const GrayImage& image) {
  ValidateGrayImage(image);
  FeatureVector features{};
  std::size_t k = 0;
  Matrix scale = AsMatrix(image);
  for (int pass = 0; pass < 2; ++pass) {
    const Matrix mscn = ComputeMscn(scale);
    const GgdFit ggd = FitGgd(mscn.data);
    features[k++] = ggd.alpha;
    features[k++] = ggd.sigma_sq;
    const PairedProducts pairs = ComputePairedProducts(mscn);
    for (const Matrix* m : {&pairs.horizontal, &pairs.vertical, &pairs.main_diagonal,
                            &pairs.secondary_diagonal}) {
      const AggdFit aggd = FitAggd(m->data);
      features[k++] = aggd.nu;
      features[k++] = aggd.mean_feature;
      features[k++] = aggd.sigma_l_sq;
      features[k++] = aggd.sigma_r_sq;
    }
    if (pass == 0) scale = Downsample(scale);
  }
  return features;
}

}  // namespace bannerforge::brisque
