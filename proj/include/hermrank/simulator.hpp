#pragma once

// Exact simulation of stationary Gaussian sequences by circulant embedding
// (Davies-Harte / Wood-Chan), with a dense Cholesky generator as an
// independent small-N oracle.
//
// The N x N Toeplitz covariance is embedded in the circulant matrix of size
// M = 2(N-1) with first row (gamma(0), ..., gamma(N-1), gamma(N-2), ..., gamma(1)).
// Its eigenvalues lambda_k are the DFT of that row. With xi_k i.i.d. standard
// complex Gaussian, the real part of DFT(sqrt(lambda/M) * xi) restricted to
// its first N entries has covariance exactly gamma(i - j).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>
#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "hermrank/covariance.hpp"
#include "hermrank/hermite_algebra.hpp"
#include "hermrank/numerics.hpp"
#include "hermrank/parallel.hpp"
#include "hermrank/philox.hpp"

namespace hermrank {

/// The covariance cannot be realized by the requested generator.
class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationConfig {
  CovarianceModel model = CovarianceModel::fgn(0.75);
  std::size_t length = 2;        // N
  std::size_t replications = 1;  // R
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0: default_thread_count()

  void validate() const {
    if (length < 2) throw DomainError("simulation length N must be at least 2");
    if (replications < 1) throw DomainError("replication count R must be at least 1");
  }
};

/// R paths of length N, stored row-major. `x` is filled by subordinate().
struct PathBatch {
  SimulationConfig config;
  std::vector<std::uint64_t> seeds;  // per replication
  std::vector<double> z;
  std::vector<double> x;

  std::size_t length() const noexcept { return config.length; }
  std::size_t replications() const noexcept { return config.replications; }
  bool subordinated() const noexcept { return !x.empty(); }
  std::span<const double> path(std::size_t rep) const { return {z.data() + rep * length(), length()}; }
  std::span<const double> transformed(std::size_t rep) const { return {x.data() + rep * length(), length()}; }
};

namespace detail {

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

inline FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer(p);
}

/// Forward complex DFT plans by size, created once. FFTW's planner is not
/// thread-safe but executing a finished plan on fresh buffers is.
inline fftw_plan forward_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  auto in = fftw_buffer(n);
  auto out = fftw_buffer(n);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("FFTW could not plan a transform of size " + std::to_string(n));
  plans.emplace(n, plan);
  return plan;
}

}  // namespace detail

struct EmbeddingSpectrum {
  std::vector<double> eigenvalues;  // length M = 2(N-1)
  double min = 0;
  double max = 0;
  double negative_mass = 0;  // sum of |lambda_k| over negative lambda_k

  /// Clipping tolerance: 1e-10 of the largest eigenvalue.
  double tolerance() const noexcept { return 1e-10 * max; }
  bool usable() const noexcept { return min >= -tolerance() && negative_mass < tolerance(); }
};

inline EmbeddingSpectrum embedding_spectrum(const CovarianceModel& model, std::size_t N) {
  if (N < 2) throw DomainError("circulant embedding needs N >= 2");
  const std::size_t M = 2 * (N - 1);
  auto in = detail::fftw_buffer(M);
  auto out = detail::fftw_buffer(M);
  for (std::size_t j = 0; j < M; ++j) {
    const std::size_t lag = j < N ? j : M - j;
    in[j][0] = static_cast<double>(model(static_cast<std::int64_t>(lag)));
    in[j][1] = 0.0;
  }
  fftw_execute_dft(detail::forward_plan(M), in.get(), out.get());
  EmbeddingSpectrum s;
  s.eigenvalues.resize(M);
  for (std::size_t k = 0; k < M; ++k) s.eigenvalues[k] = out[k][0];
  s.min = *std::min_element(s.eigenvalues.begin(), s.eigenvalues.end());
  s.max = *std::max_element(s.eigenvalues.begin(), s.eigenvalues.end());
  for (double l : s.eigenvalues)
    if (l < 0) s.negative_mass -= l;
  return s;
}

/// Generates the paths of `config` one at a time and hands each to
/// consume(rep, path). Replications run in parallel; consume must only touch
/// state owned by its replication. Path r depends only on (model, N,
/// master_seed, r).
template <typename Consumer>
void generate_paths(const SimulationConfig& config, Consumer&& consume) {
  config.validate();
  const std::size_t N = config.length;
  const std::size_t M = 2 * (N - 1);
  const EmbeddingSpectrum spectrum = embedding_spectrum(config.model, N);
  if (!spectrum.usable())
    throw EmbeddingError("circulant embedding is not nonnegative definite (min eigenvalue " +
                         std::to_string(spectrum.min) + ", negative mass " + std::to_string(spectrum.negative_mass) +
                         "); use the fgn family or direct factorization");
  std::vector<double> scale(M);
  for (std::size_t k = 0; k < M; ++k) scale[k] = std::sqrt(std::max(spectrum.eigenvalues[k], 0.0) / M);
  const fftw_plan plan = detail::forward_plan(M);

  unsigned threads = config.threads ? config.threads : default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.replications));
  struct Workspace {
    detail::FftwBuffer in, out;
    std::vector<double> path;
  };
  std::vector<Workspace> work(threads);
  for (auto& w : work) {
    w.in = detail::fftw_buffer(M);
    w.out = detail::fftw_buffer(M);
    w.path.resize(N);
  }
  parallel_for(config.replications, threads, [&](unsigned worker, std::size_t rep) {
    Workspace& w = work[worker];
    const GaussianStream normals(replication_seed(config.master_seed, rep));
    for (std::size_t k = 0; k < M; ++k) {
      const auto xi = normals.pair(k);
      w.in[k][0] = scale[k] * xi[0];
      w.in[k][1] = scale[k] * xi[1];
    }
    fftw_execute_dft(plan, w.in.get(), w.out.get());
    for (std::size_t j = 0; j < N; ++j) w.path[j] = w.out[j][0];
    consume(rep, std::span<const double>(w.path));
  });
}

/// Materializes all paths of `config`.
inline PathBatch sample_paths(const SimulationConfig& config) {
  config.validate();
  PathBatch batch{config, {}, std::vector<double>(config.length * config.replications), {}};
  batch.seeds.resize(config.replications);
  for (std::size_t r = 0; r < config.replications; ++r) batch.seeds[r] = replication_seed(config.master_seed, r);
  generate_paths(config, [&](std::size_t rep, std::span<const double> path) {
    std::copy(path.begin(), path.end(), batch.z.begin() + static_cast<std::ptrdiff_t>(rep * config.length));
  });
  return batch;
}

inline constexpr std::size_t kDirectFactorMaxLength = 512;

/// Dense Cholesky sampler for N <= 512. Throws EmbeddingError when the
/// covariance matrix is not positive definite.
inline PathBatch direct_factor_sample(const CovarianceModel& model, std::size_t N, std::size_t R,
                                      std::uint64_t seed) {
  if (N < 1 || N > kDirectFactorMaxLength) throw DomainError("direct factorization supports 1 <= N <= 512");
  if (R < 1) throw DomainError("replication count R must be at least 1");
  Eigen::MatrixXd cov(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      cov(i, j) = static_cast<double>(model(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j)));
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw EmbeddingError("covariance matrix of size " + std::to_string(N) + " is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();

  PathBatch batch;
  batch.config.model = model;
  batch.config.length = N;
  batch.config.replications = R;
  batch.config.master_seed = seed;
  batch.seeds.resize(R);
  batch.z.resize(N * R);
  Eigen::VectorXd xi(N);
  for (std::size_t r = 0; r < R; ++r) {
    batch.seeds[r] = replication_seed(seed, r);
    GaussianStream(batch.seeds[r]).fill(xi.data(), N);
    const Eigen::VectorXd path = L.triangularView<Eigen::Lower>() * xi;
    std::copy(path.data(), path.data() + N, batch.z.begin() + static_cast<std::ptrdiff_t>(r * N));
  }
  return batch;
}

/// Pointwise transform of every path, x = p(z), evaluated from the power
/// basis with compensated Horner.
inline PathBatch subordinate(PathBatch batch, const HermitePoly& p) {
  const auto coeffs = coefficients_as<double>(hermite_to_monomial(p));
  batch.x.resize(batch.z.size());
  std::transform(batch.z.begin(), batch.z.end(), batch.x.begin(),
                 [&](double z) { return compensated_horner(coeffs, z); });
  return batch;
}

// ---------------------------------------------------------------------------
// Export

/// CSV with header `rep,i,z` or `rep,i,z,x`; i counts from 1.
inline void write_paths_csv(std::ostream& os, const PathBatch& batch) {
  os << (batch.subordinated() ? "rep,i,z,x\n" : "rep,i,z\n");
  char buf[64];
  for (std::size_t r = 0; r < batch.replications(); ++r) {
    for (std::size_t i = 0; i < batch.length(); ++i) {
      const std::size_t at = r * batch.length() + i;
      os << r << ',' << i + 1 << ',';
      std::snprintf(buf, sizeof buf, "%.17g", batch.z[at]);
      os << buf;
      if (batch.subordinated()) {
        std::snprintf(buf, sizeof buf, "%.17g", batch.x[at]);
        os << ',' << buf;
      }
      os << '\n';
    }
  }
}

// Binary layout, all little-endian:
//   0  char[8] magic "HRKPATHS"
//   8  u32     format version (1)
//  12  u32     flags (bit 0: x block present)
//  16  u64     N
//  24  u64     R
//  32  f64[R*N] z, row-major by replication, then f64[R*N] x if flagged.
inline constexpr char kPathMagic[8] = {'H', 'R', 'K', 'P', 'A', 'T', 'H', 'S'};
inline constexpr std::uint32_t kPathFormatVersion = 1;

namespace detail {

template <typename U>
void put_le(std::ostream& os, U v) {
  unsigned char b[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), sizeof b);
}

template <typename U>
U get_le(std::istream& is) {
  unsigned char b[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof b)) throw std::runtime_error("truncated path file");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void write_paths_binary(std::ostream& os, const PathBatch& batch) {
  os.write(kPathMagic, sizeof kPathMagic);
  detail::put_le<std::uint32_t>(os, kPathFormatVersion);
  detail::put_le<std::uint32_t>(os, batch.subordinated() ? 1u : 0u);
  detail::put_le<std::uint64_t>(os, batch.length());
  detail::put_le<std::uint64_t>(os, batch.replications());
  auto put_block = [&](const std::vector<double>& v) {
    for (double d : v) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof bits);
      detail::put_le<std::uint64_t>(os, bits);
    }
  };
  put_block(batch.z);
  if (batch.subordinated()) put_block(batch.x);
}

/// Reads back the path values (the model is not stored in the file).
inline PathBatch read_paths_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kPathMagic, sizeof magic) != 0)
    throw std::runtime_error("not a path file");
  if (detail::get_le<std::uint32_t>(is) != kPathFormatVersion) throw std::runtime_error("unsupported path file version");
  const auto flags = detail::get_le<std::uint32_t>(is);
  PathBatch batch;
  batch.config.length = detail::get_le<std::uint64_t>(is);
  batch.config.replications = detail::get_le<std::uint64_t>(is);
  auto get_block = [&](std::vector<double>& v) {
    v.resize(batch.config.length * batch.config.replications);
    for (double& d : v) {
      const auto bits = detail::get_le<std::uint64_t>(is);
      std::memcpy(&d, &bits, sizeof d);
    }
  };
  get_block(batch.z);
  if (flags & 1u) get_block(batch.x);
  return batch;
}

}  // namespace hermrank
