#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crftiw/types.hpp"

namespace crftiw::wavelet {

/// Orthonormal conjugate quadrature filter pair. The low-pass filter sums to
/// sqrt(2); the high-pass filter is its alternating-sign mirror.
struct WaveletFilter {
  std::string name;
  std::vector<double> lo;
  std::vector<double> hi;

  static WaveletFilter symmlet8();
  static WaveletFilter haar();
  static WaveletFilter by_name(std::string_view name);
};

/// Orthogonal pyramid. `details[k]` holds the detail coefficients at
/// decomposition level `levels - k`, i.e. coarsest first; with a full-depth
/// transform of length T = 2^J, details[k] has 2^k entries and `scaling` one.
struct DwtCoefficients {
  Vec scaling;
  std::vector<Vec> details;

  int levels() const { return static_cast<int>(details.size()); }
  Index total_size() const;
};

/// Translation-invariant table. Every band has the input length; details[j-1]
/// is the level-j band (level 1 = finest). The representation is a tight
/// frame: 2^-J |scaling|^2 + sum_j 2^-j |details[j-1]|^2 = |input|^2.
struct TidwtCoefficients {
  Vec scaling;
  std::vector<Vec> details;

  int levels() const { return static_cast<int>(details.size()); }
};

bool is_dyadic(Index t);

/// J = log2(T). Throws NonDyadicLength otherwise.
int dyadic_levels(Index t);

/// (S_h w)(t) = w(t + h mod T). Any integer h, including negatives.
Vec circular_shift(const Vec& curve, long h);

DwtCoefficients dwt_forward(const Vec& curve, const WaveletFilter& filter, int levels);
Vec dwt_inverse(const DwtCoefficients& coeffs, const WaveletFilter& filter);
TidwtCoefficients tidwt_forward(const Vec& curve, const WaveletFilter& filter);

/// Log band norms of the full-depth translation-invariant transform,
/// y_j = ln |theta_j|, j = 0..J (0 = scaling band, then finest to coarsest
/// detail). Throws DegenerateScale if a band norm is <= eps_norm.
Vec featurize_ti(const Vec& curve, const WaveletFilter& filter, double eps_norm = 1e-12);

/// Same layout but from the orthogonal transform; not shift invariant.
Vec featurize_dwt(const Vec& curve, const WaveletFilter& filter, double eps_norm = 1e-12);

/// Row-wise featurization of an n x T curve matrix.
Mat featurize_ti_all(const Mat& curves, const WaveletFilter& filter, double eps_norm = 1e-12);
Mat featurize_dwt_all(const Mat& curves, const WaveletFilter& filter, double eps_norm = 1e-12);

/// Relative error of the weighted tight-frame energy identity.
double parseval_check(const Vec& curve, const TidwtCoefficients& coeffs);

}  // namespace crftiw::wavelet
