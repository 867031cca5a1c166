#include "nlstokes/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace nlstokes {

Mode negate_mode(const Mode& m) { return {-m[0], -m[1], -m[2]}; }

std::int64_t mode_norm_sq(const Mode& m) {
  return static_cast<std::int64_t>(m[0]) * m[0] +
         static_cast<std::int64_t>(m[1]) * m[1] +
         static_cast<std::int64_t>(m[2]) * m[2];
}

bool mode_is_canonical(const Mode& m) {
  for (int v : m) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // zero mode
}

SpectralField::SpectralField(int dim, int components, int band)
    : dim_(dim), components_(components), band_(band) {
  if (dim != 2 && dim != 3)
    fail(ErrorCode::validation, "dimension must be 2 or 3");
  if (components != 1 && components != dim)
    fail(ErrorCode::validation, "components must be 1 (scalar) or d (vector)");
  if (band < 0) fail(ErrorCode::validation, "band limit must be >= 0");
}

void SpectralField::set_mode(const Mode& xi, const Coeff& value) {
  if (xi[0] == 0 && xi[1] == 0 && xi[2] == 0)
    fail(ErrorCode::mean_not_zero, "fields are mean-zero: no xi = 0 coefficient");
  if (dim_ == 2 && xi[2] != 0)
    fail(ErrorCode::shape_mismatch, "third frequency component must be 0 for d = 2");
  for (int a = 0; a < dim_; ++a)
    if (std::abs(xi[a]) > band_)
      fail(ErrorCode::shape_mismatch, "mode outside the band cube");
  Coeff v{};
  Coeff vc{};
  for (int c = 0; c < components_; ++c) {
    v[static_cast<std::size_t>(c)] = value[static_cast<std::size_t>(c)];
    vc[static_cast<std::size_t>(c)] = std::conj(value[static_cast<std::size_t>(c)]);
  }
  coeffs_[xi] = v;
  coeffs_[negate_mode(xi)] = vc;
}

Coeff SpectralField::coeff(const Mode& xi) const {
  auto it = coeffs_.find(xi);
  if (it == coeffs_.end()) return Coeff{};
  return it->second;
}

void SpectralField::validate() const {
  for (const auto& [xi, v] : coeffs_) {
    if (xi[0] == 0 && xi[1] == 0 && xi[2] == 0)
      fail(ErrorCode::mean_not_zero, "zero mode present");
    if (dim_ == 2 && xi[2] != 0)
      fail(ErrorCode::shape_mismatch, "2d field carries a third frequency");
    for (int a = 0; a < dim_; ++a)
      if (std::abs(xi[a]) > band_)
        fail(ErrorCode::shape_mismatch, "mode outside the band cube");
    auto it = coeffs_.find(negate_mode(xi));
    if (it == coeffs_.end())
      fail(ErrorCode::shape_mismatch, "Hermitian partner missing");
    for (int c = 0; c < components_; ++c) {
      const auto a = v[static_cast<std::size_t>(c)];
      const auto b = it->second[static_cast<std::size_t>(c)];
      if (a != std::conj(b))
        fail(ErrorCode::shape_mismatch, "Hermitian symmetry violated");
    }
  }
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& [xi, v] : coeffs_)
    for (int c = 0; c < components_; ++c)
      m = std::max(m, std::abs(v[static_cast<std::size_t>(c)]));
  return m;
}

SpectralField subtract(const SpectralField& a, const SpectralField& b) {
  if (a.dim() != b.dim() || a.components() != b.components())
    fail(ErrorCode::shape_mismatch, "subtract: dimension or component mismatch");
  SpectralField out(a.dim(), a.components(), std::max(a.band(), b.band()));
  std::set<Mode> keys;
  for (const auto& [xi, v] : a.coeffs()) keys.insert(xi);
  for (const auto& [xi, v] : b.coeffs()) keys.insert(xi);
  for (const Mode& xi : keys) {
    if (!mode_is_canonical(xi)) continue;
    const Coeff va = a.coeff(xi);
    const Coeff vb = b.coeff(xi);
    Coeff diff{};
    bool nonzero = false;
    for (int c = 0; c < a.components(); ++c) {
      const auto idx = static_cast<std::size_t>(c);
      diff[idx] = va[idx] - vb[idx];
      if (diff[idx] != std::complex<double>(0.0, 0.0)) nonzero = true;
    }
    if (nonzero) out.set_mode(xi, diff);
  }
  return out;
}

SpectralField truncate_to_band(const SpectralField& f, int band) {
  SpectralField out(f.dim(), f.components(), band);
  for (const auto& [xi, v] : f.coeffs()) {
    if (!mode_is_canonical(xi)) continue;
    bool inside = true;
    for (int a = 0; a < f.dim(); ++a)
      if (std::abs(xi[a]) > band) inside = false;
    if (inside) out.set_mode(xi, v);
  }
  return out;
}

double sobolev_norm(const SpectralField& f, double s) {
  double sum = 0.0;
  for (const auto& [xi, v] : f.coeffs()) {
    const double nsq = static_cast<double>(mode_norm_sq(xi));
    double mag = 0.0;
    for (int c = 0; c < f.components(); ++c)
      mag += std::norm(v[static_cast<std::size_t>(c)]);
    sum += std::pow(nsq, s) * mag;
  }
  return std::sqrt(sum * std::pow(2.0 * M_PI, -f.dim()));
}

std::vector<double> sample_on_grid(const SpectralField& f, int points_per_dim) {
  const int M = points_per_dim;
  if (M < 2 * f.band() + 2)
    fail(ErrorCode::aliasing_risk,
         "need at least 2N+2 points per dimension to sample band " +
             std::to_string(f.band()));
  const int d = f.dim();
  const int nc = f.components();
  const int M3 = (d == 3) ? M : 1;
  const std::size_t npts = static_cast<std::size_t>(M) * M * M3;
  std::vector<std::complex<double>> acc(npts * static_cast<std::size_t>(nc), 0.0);

  // per-axis phase table e^{i k x_j} for k in [-N, N]
  const int N = f.band();
  std::vector<std::complex<double>> phase(static_cast<std::size_t>(2 * N + 1) * M);
  for (int k = -N; k <= N; ++k)
    for (int j = 0; j < M; ++j) {
      const double x = -M_PI + 2.0 * M_PI * j / M;
      phase[static_cast<std::size_t>(k + N) * M + j] =
          std::polar(1.0, k * x);
    }
  auto ph = [&](int k, int j) -> const std::complex<double>& {
    return phase[static_cast<std::size_t>(k + N) * M + j];
  };

  for (const auto& [xi, v] : f.coeffs()) {
    for (int j1 = 0; j1 < M; ++j1) {
      const std::complex<double> p1 = ph(xi[0], j1);
      for (int j2 = 0; j2 < M; ++j2) {
        const std::complex<double> p12 = p1 * ph(xi[1], j2);
        for (int j3 = 0; j3 < M3; ++j3) {
          const std::complex<double> p = (d == 3) ? p12 * ph(xi[2], j3) : p12;
          const std::size_t base =
              ((static_cast<std::size_t>(j1) * M + j2) * M3 + j3) *
              static_cast<std::size_t>(nc);
          for (int c = 0; c < nc; ++c)
            acc[base + static_cast<std::size_t>(c)] +=
                v[static_cast<std::size_t>(c)] * p;
        }
      }
    }
  }

  const double scale = std::pow(2.0 * M_PI, -d);
  double max_abs = 0.0, max_imag = 0.0;
  for (auto& z : acc) {
    z *= scale;
    max_abs = std::max(max_abs, std::abs(z));
    max_imag = std::max(max_imag, std::abs(z.imag()));
  }
  if (max_imag > 1e-9 * std::max(1.0, max_abs))
    fail(ErrorCode::non_real_result,
         "imaginary residue exceeds tolerance; field is not Hermitian");

  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].real();
  return out;
}

SpectralField grid_to_coeffs(const std::vector<double>& samples, int dim,
                             int components, int band, int points_per_dim) {
  const int M = points_per_dim;
  const int N = band;
  if (M < 2 * N + 2)
    fail(ErrorCode::aliasing_risk,
         "need at least 2N+2 points per dimension for band " + std::to_string(N));
  const int M3 = (dim == 3) ? M : 1;
  const std::size_t npts = static_cast<std::size_t>(M) * M * M3;
  if (samples.size() != npts * static_cast<std::size_t>(components))
    fail(ErrorCode::shape_mismatch, "sample array size does not match the grid");

  double max_samp = 0.0;
  for (double v : samples) max_samp = std::max(max_samp, std::abs(v));

  // conjugate phase table e^{-i k x_j}, k in [-N, N]
  std::vector<std::complex<double>> phase(static_cast<std::size_t>(2 * N + 1) * M);
  for (int k = -N; k <= N; ++k)
    for (int j = 0; j < M; ++j) {
      const double x = -M_PI + 2.0 * M_PI * j / M;
      phase[static_cast<std::size_t>(k + N) * M + j] = std::polar(1.0, -k * x);
    }
  auto ph = [&](int k, int j) -> const std::complex<double>& {
    return phase[static_cast<std::size_t>(k + N) * M + j];
  };

  const int K = 2 * N + 1;
  const int nc = components;
  // transform axis 1: samples[j1][j2][j3][c] -> t1[k1][j2][j3][c]
  std::vector<std::complex<double>> t1(
      static_cast<std::size_t>(K) * M * M3 * nc, 0.0);
  for (int k1 = -N; k1 <= N; ++k1)
    for (int j1 = 0; j1 < M; ++j1) {
      const std::complex<double> p = ph(k1, j1);
      const std::size_t src0 = static_cast<std::size_t>(j1) * M * M3 * nc;
      const std::size_t dst0 = static_cast<std::size_t>(k1 + N) * M * M3 * nc;
      for (std::size_t r = 0; r < static_cast<std::size_t>(M) * M3 * nc; ++r)
        t1[dst0 + r] += samples[src0 + r] * p;
    }
  // axis 2: t1[k1][j2][j3][c] -> t2[k1][k2][j3][c]
  std::vector<std::complex<double>> t2(
      static_cast<std::size_t>(K) * K * M3 * nc, 0.0);
  for (int k1 = 0; k1 < K; ++k1)
    for (int k2 = -N; k2 <= N; ++k2)
      for (int j2 = 0; j2 < M; ++j2) {
        const std::complex<double> p = ph(k2, j2);
        const std::size_t src0 =
            (static_cast<std::size_t>(k1) * M + static_cast<std::size_t>(j2)) *
            M3 * nc;
        const std::size_t dst0 =
            (static_cast<std::size_t>(k1) * K +
             static_cast<std::size_t>(k2 + N)) *
            M3 * nc;
        for (std::size_t r = 0; r < static_cast<std::size_t>(M3) * nc; ++r)
          t2[dst0 + r] += t1[src0 + r] * p;
      }
  // axis 3 (d = 3 only)
  std::vector<std::complex<double>> t3;
  const int K3 = (dim == 3) ? K : 1;
  if (dim == 3) {
    t3.assign(static_cast<std::size_t>(K) * K * K * nc, 0.0);
    for (int k1 = 0; k1 < K; ++k1)
      for (int k2 = 0; k2 < K; ++k2)
        for (int k3 = -N; k3 <= N; ++k3)
          for (int j3 = 0; j3 < M; ++j3) {
            const std::complex<double> p = ph(k3, j3);
            const std::size_t src0 =
                ((static_cast<std::size_t>(k1) * K + k2) * M +
                 static_cast<std::size_t>(j3)) *
                nc;
            const std::size_t dst0 =
                ((static_cast<std::size_t>(k1) * K + k2) * K +
                 static_cast<std::size_t>(k3 + N)) *
                nc;
            for (int c = 0; c < nc; ++c)
              t3[dst0 + static_cast<std::size_t>(c)] +=
                  t2[src0 + static_cast<std::size_t>(c)] * p;
          }
  } else {
    t3 = std::move(t2);
  }

  const double scale = std::pow(2.0 * M_PI / M, dim);
  auto coeff_at = [&](const Mode& xi) {
    const std::size_t i1 = static_cast<std::size_t>(xi[0] + N);
    const std::size_t i2 = static_cast<std::size_t>(xi[1] + N);
    const std::size_t i3 = (dim == 3) ? static_cast<std::size_t>(xi[2] + N) : 0;
    const std::size_t base = ((i1 * K + i2) * K3 + i3) * nc;
    Coeff v{};
    for (int c = 0; c < nc; ++c)
      v[static_cast<std::size_t>(c)] = t3[base + static_cast<std::size_t>(c)] * scale;
    return v;
  };

  // mean must vanish
  {
    const Coeff mean = coeff_at({0, 0, 0});
    const double thr = 1e-9 * std::pow(2.0 * M_PI, dim) * std::max(1.0, max_samp);
    for (int c = 0; c < nc; ++c)
      if (std::abs(mean[static_cast<std::size_t>(c)]) > thr)
        fail(ErrorCode::mean_not_zero,
             "grid data has a nonzero mean; fields are mean-zero");
  }

  SpectralField out(dim, components, N);
  Mode xi{0, 0, 0};
  const int lo3 = (dim == 3) ? -N : 0;
  const int hi3 = (dim == 3) ? N : 0;
  for (xi[0] = -N; xi[0] <= N; ++xi[0])
    for (xi[1] = -N; xi[1] <= N; ++xi[1])
      for (xi[2] = lo3; xi[2] <= hi3; ++xi[2]) {
        if (!mode_is_canonical(xi)) continue;
        out.set_mode(xi, coeff_at(xi));
      }
  return out;
}

SpectralField random_field(std::uint64_t seed, int band, double decay_exponent,
                           int dim, int components) {
  if (band < 1) fail(ErrorCode::validation, "band must be >= 1");
  SpectralField out(dim, components, band);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  Mode xi{0, 0, 0};
  const int lo3 = (dim == 3) ? -band : 0;
  const int hi3 = (dim == 3) ? band : 0;
  for (xi[0] = -band; xi[0] <= band; ++xi[0])
    for (xi[1] = -band; xi[1] <= band; ++xi[1])
      for (xi[2] = lo3; xi[2] <= hi3; ++xi[2]) {
        if (!mode_is_canonical(xi)) continue;
        const double mag =
            std::pow(static_cast<double>(mode_norm_sq(xi)), -0.5 * decay_exponent);
        Coeff v{};
        for (int c = 0; c < components; ++c)
          v[static_cast<std::size_t>(c)] = std::polar(mag, unif(rng));
        out.set_mode(xi, v);
      }
  return out;
}

}  // namespace nlstokes
