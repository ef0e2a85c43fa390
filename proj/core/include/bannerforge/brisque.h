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

#ifndef BANNERFORGE_BRISQUE_H_
#define BANNERFORGE_BRISQUE_H_

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "bannerforge/png_codec.h"

namespace bannerforge::brisque {

// Dense row-major matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
};

// Luminance in [0, 255]; both sides at least 16 pixels so the half-scale
// pass still has room for the 7x7 window.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;
};

inline constexpr int kMinImageSide = 16;

void ValidateGrayImage(const GrayImage& image);
Matrix AsMatrix(const GrayImage& image);

// gray = 0.299 R + 0.587 G + 0.114 B. Throws Error(kInvalidArgument) for
// images under 16 pixels on either side.
GrayImage ToLuminance(const RgbImage& rgb);
GrayImage DecodeGray(std::span<const std::uint8_t> png_bytes);
GrayImage LoadGray(const std::filesystem::path& png_path);

// Gaussian window used for the local statistics: 7x7, sigma 7/6, unit sum.
inline constexpr int kWindowRadius = 3;
inline constexpr double kWindowSigma = 7.0 / 6.0;
inline constexpr double kMscnStabilizer = 1.0;

// (I - mu) / (sigma + 1) with mu, sigma the Gaussian-weighted local mean and
// standard deviation. Borders use half-sample symmetric reflection
// (..., b, a | a, b, ...).
Matrix ComputeMscn(const Matrix& image);
Matrix ComputeMscn(const GrayImage& image);

struct PairedProducts {
  Matrix horizontal;          // (i, j) * (i, j+1)
  Matrix vertical;            // (i, j) * (i+1, j)
  Matrix main_diagonal;       // (i, j) * (i+1, j+1)
  Matrix secondary_diagonal;  // (i, j) * (i+1, j-1)
};

PairedProducts ComputePairedProducts(const Matrix& mscn);

// Shape search grid: alpha = 0.2, 0.201, ..., 10.
inline constexpr double kShapeMin = 0.2;
inline constexpr double kShapeMax = 10.0;
inline constexpr double kShapeStep = 0.001;
std::span<const double> ShapeGrid();

// Gamma(1/a) Gamma(3/a) / Gamma(2/a)^2, i.e. E[x^2] / E[|x|]^2 of a GGD with
// shape a. Strictly decreasing in a.
double GgdMomentRatio(double shape);

struct GgdFit {
  double alpha = 0.0;
  double sigma_sq = 0.0;
};

struct AggdFit {
  double nu = 0.0;
  double mean_feature = 0.0;
  double sigma_l_sq = 0.0;
  double sigma_r_sq = 0.0;
};

// Moment matching against the shape grid. Throws Error(kDegenerate) for empty
// or all-zero input.
GgdFit FitGgd(std::span<const double> samples);

// Throws Error(kSingleSigned) unless both negative and positive samples exist.
AggdFit FitAggd(std::span<const double> samples);

inline constexpr int kFeatureCount = 36;
using FeatureVector = std::array<double, kFeatureCount>;

// 2x2 box average followed by 2x decimation; odd trailing rows/cols dropped.
Matrix Downsample(const Matrix& image);

// Per scale: [alpha, sigma_sq] of the MSCN field, then per orientation
// (horizontal, vertical, main diagonal, secondary diagonal)
// [nu, mean_feature, sigma_l_sq, sigma_r_sq]. Scale 1 first, then scale 2.
FeatureVector ComputeFeatures(const GrayImage& image);

}  // namespace bannerforge::brisque

#endif  // BANNERFORGE_BRISQUE_H_
