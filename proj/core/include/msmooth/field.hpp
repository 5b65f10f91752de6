#pragma once

#include <array>
#include <cassert>
#include <vector>

#include "msmooth/errors.hpp"

namespace msmooth {

/// Rectilinear scalar field in one to three dimensions with uniform
/// spacing h. Samples are stored row-major with x fastest, i.e. for 2D
/// the linear index of (i,j) is j*nx + i, and for 3D (k*ny + j)*nx + i.
///
/// Boundary handling is by mirroring without repetition of the edge
/// sample's neighbour: index -1 maps to 0, -2 to 1, nx to nx-1, nx+1 to
/// nx-2. Stencils rely on two mirror layers; every extent must be >= 2
/// for those to resolve.
class Field {
 public:
  Field() = default;

  Field(int nx, double h = 1.0) : rank_(1), dims_{nx, 1, 1}, h_(h) {
    validate();
    values_.assign(static_cast<size_t>(nx), 0.0);
  }
  Field(int nx, int ny, double h = 1.0) : rank_(2), dims_{nx, ny, 1}, h_(h) {
    validate();
    values_.assign(static_cast<size_t>(nx) * ny, 0.0);
  }
  Field(int nx, int ny, int nz, double h = 1.0)
      : rank_(3), dims_{nx, ny, nz}, h_(h) {
    validate();
    values_.assign(static_cast<size_t>(nx) * ny * nz, 0.0);
  }

  int rank() const { return rank_; }
  int extent(int axis) const { return dims_[static_cast<size_t>(axis)]; }
  double spacing() const { return h_; }
  size_t size() const { return values_.size(); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& operator()(int i) { return values_[linear(i, 0, 0)]; }
  double operator()(int i) const { return values_[linear(i, 0, 0)]; }
  double& operator()(int i, int j) { return values_[linear(i, j, 0)]; }
  double operator()(int i, int j) const { return values_[linear(i, j, 0)]; }
  double& operator()(int i, int j, int k) { return values_[linear(i, j, k)]; }
  double operator()(int i, int j, int k) const {
    return values_[linear(i, j, k)];
  }

  /// Reflects an index into [0, n) to mirror depth 2 (-1 -> 0, -2 -> 1,
  /// n -> n-1, n+1 -> n-2). Indices outside [-2, n+1] are an error.
  static int mirror_index(int i, int n) {
    if (i < -2 || i > n + 1)
      throw ConfigError("mirror access outside the two boundary layers");
    if (i < 0) return -1 - i;
    if (i >= n) return 2 * n - 1 - i;
    return i;
  }

  /// Unbounded reflection: folds any index into [0, n) by repeated
  /// mirroring. Used by windowed filters whose radius exceeds the two
  /// stencil layers.
  static int fold_index(int i, int n) {
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
  }

  double mirror(int i) const {
    return values_[linear(mirror_index(i, dims_[0]), 0, 0)];
  }
  double mirror(int i, int j) const {
    return values_[linear(mirror_index(i, dims_[0]),
                          mirror_index(j, dims_[1]), 0)];
  }
  double mirror(int i, int j, int k) const {
    return values_[linear(mirror_index(i, dims_[0]), mirror_index(j, dims_[1]),
                          mirror_index(k, dims_[2]))];
  }

  double folded(int i, int j = 0, int k = 0) const {
    return values_[linear(fold_index(i, dims_[0]), fold_index(j, dims_[1]),
                          fold_index(k, dims_[2]))];
  }

  double min() const;
  double max() const;
  double sum() const;
  bool all_finite() const;

 private:
  void validate() const {
    if (h_ <= 0.0) throw ConfigError("grid spacing must be positive");
    for (int a = 0; a < rank_; ++a)
      if (dims_[static_cast<size_t>(a)] < 2)
        throw ConfigError("each field extent must be at least 2");
  }

  size_t linear(int i, int j, int k) const {
    assert(i >= 0 && i < dims_[0]);
    assert(j >= 0 && j < dims_[1]);
    assert(k >= 0 && k < dims_[2]);
    return (static_cast<size_t>(k) * dims_[1] + j) * dims_[0] + i;
  }

  int rank_ = 0;
  std::array<int, 3> dims_{0, 0, 0};
  double h_ = 1.0;
  std::vector<double> values_;
};

/// Depth-2 mirrored read access to a field; the view every stencil in the
/// PDE solvers goes through, so there is a single code path for interior
/// and boundary pixels.
class MirrorView {
 public:
  explicit MirrorView(const Field& f) : f_(&f) {}
  double operator()(int i) const { return f_->mirror(i); }
  double operator()(int i, int j) const { return f_->mirror(i, j); }
  double operator()(int i, int j, int k) const { return f_->mirror(i, j, k); }
  const Field& field() const { return *f_; }
  static constexpr int layers = 2;

 private:
  const Field* f_;
};

/// Single mirrored sample; index components must lie in [-2, extent+1].
double mirror_get(const Field& f, std::array<int, 3> index);

enum class DiffDirection { X, Y, D, E };  // D = (1,1), E = (1,-1)

/// Forward differences u^x, u^y, u^d, u^e of a 2D field. The diagonal
/// variants divide by sqrt(2)*h.
Field forward_diff(const Field& f, DiffDirection dir);

struct CentralDerivs {
  double ux, uy, uxx, uxy, uyy;
};

/// Second-order central differences at (i,j) using mirrored access.
CentralDerivs central_derivs(const Field& f, int i, int j);

}  // namespace msmooth
