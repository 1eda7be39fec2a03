#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pcnn {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are not supported");

using ArgumentError = std::invalid_argument;

/// Thrown when an operation is not defined for the given basis/configuration.
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Vec3

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

// ---------------------------------------------------------------------------
// Dense row-major matrix (features, activations)

template <typename T>
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<T> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, T fill = T(0)) : rows(r), cols(c), v(r * c, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  T* row(std::size_t i) { return v.data() + i * cols; }
  const T* row(std::size_t i) const { return v.data() + i * cols; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  template <typename U>
  Matrix<U> cast() const {
    Matrix<U> out(rows, cols);
    for (std::size_t n = 0; n < v.size(); ++n) out.v[n] = static_cast<U>(v[n]);
    return out;
  }
};

/// Rank-3 tensor, row-major over (d0, d1, d2); used for kernels (L x J x M)
/// and per-query gradients (Q x J x 3).
template <typename T>
struct Tensor3 {
  std::size_t d0 = 0, d1 = 0, d2 = 0;
  std::vector<T> v;

  Tensor3() = default;
  Tensor3(std::size_t a, std::size_t b, std::size_t c, T fill = T(0))
      : d0(a), d1(b), d2(c), v(a * b * c, fill) {}

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return v[(i * d1 + j) * d2 + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return v[(i * d1 + j) * d2 + k];
  }
  T* slice(std::size_t i) { return v.data() + i * d1 * d2; }
  const T* slice(std::size_t i) const { return v.data() + i * d1 * d2; }

  template <typename U>
  Tensor3<U> cast() const {
    Tensor3<U> out(d0, d1, d2);
    for (std::size_t n = 0; n < v.size(); ++n) out.v[n] = static_cast<U>(v[n]);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Seeded RNG. mt19937_64 plus hand-rolled variate mappings so that streams
// are identical across standard library implementations.

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // multiply-shift; bias is negligible for n << 2^64 and keeps the stream portable
    if (n == 0) throw ArgumentError("uniform_index: n must be positive");
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform01(); } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::swap(xs[i - 1], xs[uniform_index(i)]);
    }
  }

  /// Uniform unit quaternion -> rotation matrix rows.
  std::array<Vec3, 3> rotation() {
    double q[4];
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (double& c : q) { c = normal(); n2 += c * c; }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
    return {Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            Vec3{2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            Vec3{2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Deterministic parallel-for: static partition, each index handled by exactly
// one worker. Results must be written to disjoint slots so that the outcome
// is identical for any worker count.

inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

inline int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace pcnn
