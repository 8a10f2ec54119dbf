#include "crftiw/wavelet.hpp"

#include <cmath>
#include <cstddef>

#include "crftiw/errors.hpp"

namespace crftiw::wavelet {

namespace {

// Symmlet scaling filter with 8 vanishing moments (16 taps), from the
// least-asymmetric spectral factorization of the Daubechies product filter.
constexpr double kSym8Lo[16] = {
    0.0018899503327676892,   -0.00030292051472413308, -0.014952258337062199,
    0.0038087520138944895,   0.049137179673730287,    -0.027219029917103486,
    -0.051945838107881801,   0.36444189483617894,     0.77718575169962803,
    0.48135965125905339,     -0.061273359067811078,   -0.14329423835127266,
    0.0076074873249766082,   0.031695087811525991,    -0.00054213233180001069,
    -0.0033824159510050026,
};

std::vector<double> quadrature_mirror(const std::vector<double>& lo) {
  const std::size_t f = lo.size();
  std::vector<double> hi(f);
  for (std::size_t t = 0; t < f; ++t) {
    hi[t] = (t % 2 == 0 ? 1.0 : -1.0) * lo[f - 1 - t];
  }
  return hi;
}

void check_input(const Vec& curve) {
  if (!is_dyadic(curve.size())) {
    throw NonDyadicLength("curve length " + std::to_string(curve.size()) +
                          " is not a power of two >= 4");
  }
  if (!curve.allFinite()) {
    throw NonFiniteInput("curve contains non-finite values");
  }
}

// One periodized analysis step: circular convolution with both filters,
// decimated by two. `a` has even length m; approx/detail receive m/2 values.
void analyze(const double* a, std::size_t m, const WaveletFilter& f, double* approx,
             double* detail) {
  const std::size_t half = m / 2;
  const std::size_t flen = f.lo.size();
  for (std::size_t k = 0; k < half; ++k) {
    double s = 0.0;
    double d = 0.0;
    const std::size_t base = 2 * k;
    for (std::size_t t = 0; t < flen; ++t) {
      const double v = a[(base + t) % m];
      s += f.lo[t] * v;
      d += f.hi[t] * v;
    }
    approx[k] = s;
    detail[k] = d;
  }
}

// Adjoint of analyze(); exact inverse for an orthonormal pair.
void synthesize(const double* approx, const double* detail, std::size_t half,
                const WaveletFilter& f, double* out) {
  const std::size_t m = 2 * half;
  const std::size_t flen = f.lo.size();
  for (std::size_t i = 0; i < m; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t base = 2 * k;
    for (std::size_t t = 0; t < flen; ++t) {
      out[(base + t) % m] += f.lo[t] * approx[k] + f.hi[t] * detail[k];
    }
  }
}

double band_log_norm(const Vec& band, int scale, double eps_norm) {
  const double nrm = band.norm();
  if (nrm <= eps_norm) {
    throw DegenerateScale(scale, "band " + std::to_string(scale) +
                                     " has norm <= " + std::to_string(eps_norm));
  }
  return std::log(nrm);
}

}  // namespace

WaveletFilter WaveletFilter::symmlet8() {
  WaveletFilter f;
  f.name = "sym8";
  f.lo.assign(kSym8Lo, kSym8Lo + 16);
  f.hi = quadrature_mirror(f.lo);
  return f;
}

WaveletFilter WaveletFilter::haar() {
  WaveletFilter f;
  f.name = "haar";
  f.lo = {0.7071067811865475244, 0.7071067811865475244};
  f.hi = quadrature_mirror(f.lo);
  return f;
}

WaveletFilter WaveletFilter::by_name(std::string_view name) {
  if (name == "sym8" || name == "symmlet8") return symmlet8();
  if (name == "haar") return haar();
  throw Error("unknown wavelet filter '" + std::string(name) + "' (use sym8 or haar)");
}

Index DwtCoefficients::total_size() const {
  Index n = scaling.size();
  for (const auto& d : details) n += d.size();
  return n;
}

bool is_dyadic(Index t) {
  if (t < 4) return false;
  while (t % 2 == 0) t /= 2;
  return t == 1;
}

int dyadic_levels(Index t) {
  if (!is_dyadic(t)) {
    throw NonDyadicLength("length " + std::to_string(t) + " is not a power of two >= 4");
  }
  int j = 0;
  while (t > 1) {
    t /= 2;
    ++j;
  }
  return j;
}

Vec circular_shift(const Vec& curve, long h) {
  const Index t = curve.size();
  if (t == 0) return curve;
  long r = h % t;
  if (r < 0) r += t;
  Vec out(t);
  for (Index i = 0; i < t; ++i) {
    out[i] = curve[(i + r) % t];
  }
  return out;
}

DwtCoefficients dwt_forward(const Vec& curve, const WaveletFilter& filter, int levels) {
  check_input(curve);
  const int max_levels = dyadic_levels(curve.size());
  if (levels < 1 || levels > max_levels) {
    throw Error("levels must be in [1, " + std::to_string(max_levels) + "]");
  }

  DwtCoefficients out;
  out.details.resize(levels);
  Vec current = curve;
  for (int lvl = 1; lvl <= levels; ++lvl) {
    const std::size_t m = static_cast<std::size_t>(current.size());
    Vec approx(m / 2), detail(m / 2);
    analyze(current.data(), m, filter, approx.data(), detail.data());
    out.details[levels - lvl] = std::move(detail);  // coarsest first
    current = std::move(approx);
  }
  out.scaling = std::move(current);
  return out;
}

Vec dwt_inverse(const DwtCoefficients& coeffs, const WaveletFilter& filter) {
  if (coeffs.scaling.size() < 1 || coeffs.details.empty()) {
    throw InconsistentPyramid("pyramid needs a scaling block and at least one detail level");
  }
  Index expect = coeffs.scaling.size();
  for (const auto& d : coeffs.details) {
    if (d.size() != expect) {
      throw InconsistentPyramid("detail level size " + std::to_string(d.size()) +
                                ", expected " + std::to_string(expect));
    }
    expect *= 2;
  }

  Vec current = coeffs.scaling;
  for (const auto& d : coeffs.details) {
    Vec next(2 * current.size());
    synthesize(current.data(), d.data(), static_cast<std::size_t>(current.size()), filter,
               next.data());
    current = std::move(next);
  }
  return current;
}

TidwtCoefficients tidwt_forward(const Vec& curve, const WaveletFilter& filter) {
  check_input(curve);
  const int j_max = dyadic_levels(curve.size());
  const std::size_t t = static_cast<std::size_t>(curve.size());

  TidwtCoefficients out;
  out.details.assign(j_max, Vec(t));

  // Coifman-Donoho table: at level l there are 2^l nodes of length T/2^l;
  // each node spawns an even-phase and an odd-phase (shift-by-one) child.
  std::vector<std::vector<double>> nodes;
  nodes.push_back(std::vector<double>(curve.data(), curve.data() + t));

  for (int lvl = 1; lvl <= j_max; ++lvl) {
    Vec& band = out.details[lvl - 1];
    std::size_t pos = 0;
    std::vector<std::vector<double>> next;
    next.reserve(2 * nodes.size());
    for (const auto& a : nodes) {
      const std::size_t m = a.size();
      const std::size_t half = m / 2;
      std::vector<double> a0(half), a1(half);
      Vec d(half);

      analyze(a.data(), m, filter, a0.data(), d.data());
      for (std::size_t k = 0; k < half; ++k) band[pos++] = d[k];

      std::vector<double> rot(m);
      for (std::size_t i = 0; i < m; ++i) rot[i] = a[(i + 1) % m];
      analyze(rot.data(), m, filter, a1.data(), d.data());
      for (std::size_t k = 0; k < half; ++k) band[pos++] = d[k];

      next.push_back(std::move(a0));
      next.push_back(std::move(a1));
    }
    nodes = std::move(next);
  }

  out.scaling.resize(t);
  std::size_t pos = 0;
  for (const auto& a : nodes) {
    for (double v : a) out.scaling[pos++] = v;
  }
  return out;
}

Vec featurize_ti(const Vec& curve, const WaveletFilter& filter, double eps_norm) {
  const TidwtCoefficients c = tidwt_forward(curve, filter);
  Vec y(c.levels() + 1);
  y[0] = band_log_norm(c.scaling, 0, eps_norm);
  for (int j = 1; j <= c.levels(); ++j) {
    y[j] = band_log_norm(c.details[j - 1], j, eps_norm);
  }
  return y;
}

Vec featurize_dwt(const Vec& curve, const WaveletFilter& filter, double eps_norm) {
  const int j_max = dyadic_levels(curve.size());
  const DwtCoefficients c = dwt_forward(curve, filter, j_max);
  Vec y(j_max + 1);
  y[0] = band_log_norm(c.scaling, 0, eps_norm);
  for (int j = 1; j <= j_max; ++j) {
    // details are stored coarsest first; level j sits at index j_max - j
    y[j] = band_log_norm(c.details[j_max - j], j, eps_norm);
  }
  return y;
}

Mat featurize_ti_all(const Mat& curves, const WaveletFilter& filter, double eps_norm) {
  const int j_max = dyadic_levels(curves.cols());
  Mat out(curves.rows(), j_max + 1);
  for (Index i = 0; i < curves.rows(); ++i) {
    out.row(i) = featurize_ti(curves.row(i).transpose(), filter, eps_norm).transpose();
  }
  return out;
}

Mat featurize_dwt_all(const Mat& curves, const WaveletFilter& filter, double eps_norm) {
  const int j_max = dyadic_levels(curves.cols());
  Mat out(curves.rows(), j_max + 1);
  for (Index i = 0; i < curves.rows(); ++i) {
    out.row(i) = featurize_dwt(curves.row(i).transpose(), filter, eps_norm).transpose();
  }
  return out;
}

double parseval_check(const Vec& curve, const TidwtCoefficients& coeffs) {
  const double input_energy = curve.squaredNorm();
  if (input_energy == 0.0) {
    throw ZeroNormCurve("Parseval check needs a nonzero curve");
  }
  const int j_max = coeffs.levels();
  double energy = std::ldexp(coeffs.scaling.squaredNorm(), -j_max);
  for (int j = 1; j <= j_max; ++j) {
    energy += std::ldexp(coeffs.details[j - 1].squaredNorm(), -j);
  }
  return std::abs(energy - input_energy) / input_energy;
}

}  // namespace crftiw::wavelet
