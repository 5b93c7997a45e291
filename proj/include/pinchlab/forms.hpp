#pragma once

// Symmetric bilinear forms on a Euclidean space V with values in R, in a
// Euclidean space W, or in a Lorentzian space W + R^2, together with the
// Kulkarni-Nomizu product and the nullity space.
//
// All forms are stored in a fixed orthonormal basis of V (and of W), so a
// W-valued form is a list of k symmetric n x n matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pinchlab {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dimensions of V (n) and W (k).
struct Dims {
  int n = 0;
  int k = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

/// Symmetric n x n form. The stored matrix is exactly symmetric.
template <typename Scalar>
class ScalarForm {
 public:
  ScalarForm() = default;
  explicit ScalarForm(const Mat<Scalar>& m) : m_(symmetrize(m)) {}

  static ScalarForm identity(int n) { return ScalarForm(Mat<Scalar>::Identity(n, n)); }
  static ScalarForm zero(int n) { return ScalarForm(Mat<Scalar>::Zero(n, n)); }

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat<Scalar>& matrix() const { return m_; }
  Scalar operator()(int i, int j) const { return m_(i, j); }
  Scalar trace() const { return m_.trace(); }
  Scalar norm2() const { return m_.squaredNorm(); }

  friend ScalarForm operator+(const ScalarForm& a, const ScalarForm& b) {
    require(a.n() == b.n(), "ScalarForm: dimension mismatch");
    return ScalarForm(a.m_ + b.m_);
  }
  friend ScalarForm operator-(const ScalarForm& a, const ScalarForm& b) {
    require(a.n() == b.n(), "ScalarForm: dimension mismatch");
    return ScalarForm(a.m_ - b.m_);
  }
  friend ScalarForm operator*(Scalar c, const ScalarForm& a) { return ScalarForm(c * a.m_); }

 private:
  static Mat<Scalar> symmetrize(const Mat<Scalar>& m) {
    require(m.rows() == m.cols(), "ScalarForm: matrix must be square");
    // (a + a) / 2 == a exactly, so already-symmetric input is kept bit-for-bit.
    return (m + m.transpose()) / Scalar(2);
  }

  Mat<Scalar> m_;
};

/// Symmetric form V x V -> W, one matrix per orthonormal basis vector of W.
template <typename Scalar>
class VectorForm {
 public:
  VectorForm() = default;
  explicit VectorForm(const std::vector<Mat<Scalar>>& components) {
    require(!components.empty(), "VectorForm: need at least one component");
    const auto n = components.front().rows();
    comps_.reserve(components.size());
    for (const auto& c : components) {
      require(c.rows() == n && c.cols() == n, "VectorForm: component dimension mismatch");
      comps_.push_back(ScalarForm<Scalar>(c).matrix());
    }
  }

  static VectorForm zero(Dims d) {
    return VectorForm(std::vector<Mat<Scalar>>(d.k, Mat<Scalar>::Zero(d.n, d.n)));
  }

  /// beta(x, y) = s <x, y> w.
  static VectorForm umbilic(int n, const Vec<Scalar>& w, Scalar s = Scalar(1)) {
    std::vector<Mat<Scalar>> c;
    for (int a = 0; a < w.size(); ++a) c.push_back(s * w(a) * Mat<Scalar>::Identity(n, n));
    return VectorForm(c);
  }

  /// beta(x, y) = <A x, y> w.
  static VectorForm rank_one(const Mat<Scalar>& A, const Vec<Scalar>& w) {
    std::vector<Mat<Scalar>> c;
    for (int a = 0; a < w.size(); ++a) c.push_back(w(a) * A);
    return VectorForm(c);
  }

  int n() const { return comps_.empty() ? 0 : static_cast<int>(comps_.front().rows()); }
  int k() const { return static_cast<int>(comps_.size()); }
  Dims dims() const { return {n(), k()}; }

  const Mat<Scalar>& component(int a) const { return comps_.at(a); }
  const std::vector<Mat<Scalar>>& components() const { return comps_; }

  Scalar norm2() const {
    Scalar s(0);
    for (const auto& c : comps_) s += c.squaredNorm();
    return s;
  }
  Scalar norm() const { return std::sqrt(norm2()); }

  /// Trace as a W-vector.
  Vec<Scalar> trace() const {
    Vec<Scalar> t(k());
    for (int a = 0; a < k(); ++a) t(a) = comps_[a].trace();
    return t;
  }

  Vec<Scalar> operator()(const Vec<Scalar>& x, const Vec<Scalar>& y) const {
    Vec<Scalar> r(k());
    for (int a = 0; a < k(); ++a) r(a) = x.dot(comps_[a] * y);
    return r;
  }

  friend VectorForm operator+(const VectorForm& a, const VectorForm& b) {
    require(a.dims() == b.dims(), "VectorForm: dimension mismatch");
    std::vector<Mat<Scalar>> c;
    for (int i = 0; i < a.k(); ++i) c.push_back(a.comps_[i] + b.comps_[i]);
    return VectorForm(c);
  }
  friend VectorForm operator-(const VectorForm& a, const VectorForm& b) {
    require(a.dims() == b.dims(), "VectorForm: dimension mismatch");
    std::vector<Mat<Scalar>> c;
    for (int i = 0; i < a.k(); ++i) c.push_back(a.comps_[i] - b.comps_[i]);
    return VectorForm(c);
  }
  friend VectorForm operator*(Scalar s, const VectorForm& a) {
    std::vector<Mat<Scalar>> c;
    for (const auto& m : a.comps_) c.push_back(s * m);
    return VectorForm(c);
  }

 private:
  std::vector<Mat<Scalar>> comps_;
};

/// Dense (0,4)-tensor on V, indexed T(i, j, k, l).
template <typename Scalar>
class QuadTensor {
 public:
  QuadTensor() = default;
  explicit QuadTensor(int n) : n_(n), data_(Vec<Scalar>::Zero(static_cast<Eigen::Index>(n) * n * n * n)) {}

  int n() const { return n_; }
  Scalar& operator()(int i, int j, int k, int l) { return data_(index(i, j, k, l)); }
  Scalar operator()(int i, int j, int k, int l) const { return data_(index(i, j, k, l)); }
  const Vec<Scalar>& data() const { return data_; }

  /// Plain Frobenius norm over all n^4 entries.
  Scalar norm2() const { return data_.squaredNorm(); }
  Scalar norm() const { return data_.norm(); }
  Scalar max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : Scalar(0); }

  /// Largest violation of T(1234) = -T(2134) = -T(1243) = T(3412).
  Scalar symmetry_defect() const {
    Scalar worst(0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) {
            const Scalar t = (*this)(i, j, k, l);
            worst = std::max({worst, std::abs(t + (*this)(j, i, k, l)),
                              std::abs(t + (*this)(i, j, l, k)),
                              std::abs(t - (*this)(k, l, i, j))});
          }
    return worst;
  }

  QuadTensor& operator+=(const QuadTensor& o) {
    require(n_ == o.n_, "QuadTensor: dimension mismatch");
    data_ += o.data_;
    return *this;
  }
  QuadTensor& operator-=(const QuadTensor& o) {
    require(n_ == o.n_, "QuadTensor: dimension mismatch");
    data_ -= o.data_;
    return *this;
  }
  QuadTensor& operator*=(Scalar s) {
    data_ *= s;
    return *this;
  }
  friend QuadTensor operator+(QuadTensor a, const QuadTensor& b) { return a += b; }
  friend QuadTensor operator-(QuadTensor a, const QuadTensor& b) { return a -= b; }
  friend QuadTensor operator*(Scalar s, QuadTensor a) { return a *= s; }

 private:
  Eigen::Index index(int i, int j, int k, int l) const {
    return ((static_cast<Eigen::Index>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_ = 0;
  Vec<Scalar> data_;
};

namespace detail {

// Adds s * (phi KN psi) into t. Terms are grouped so that swapping phi and
// psi gives bitwise the same result.
template <typename Scalar>
void add_kn(QuadTensor<Scalar>& t, const Mat<Scalar>& phi, const Mat<Scalar>& psi, Scalar s) {
  const int n = t.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t(i, j, k, l) += s * ((phi(i, k) * psi(j, l) + phi(j, l) * psi(i, k)) -
                                (phi(i, l) * psi(j, k) + phi(j, k) * psi(i, l)));
}

}  // namespace detail

/// Kulkarni-Nomizu product of two scalar forms.
template <typename Scalar>
QuadTensor<Scalar> kn_scalar(const ScalarForm<Scalar>& phi, const ScalarForm<Scalar>& psi) {
  require(phi.n() == psi.n(), "kn_scalar: dimension mismatch");
  QuadTensor<Scalar> t(phi.n());
  detail::add_kn(t, phi.matrix(), psi.matrix(), Scalar(1));
  return t;
}

/// Kulkarni-Nomizu product of two W-valued forms, using the Euclidean inner product of W.
template <typename Scalar>
QuadTensor<Scalar> kn_vector(const VectorForm<Scalar>& beta, const VectorForm<Scalar>& gamma) {
  require(beta.dims() == gamma.dims(), "kn_vector: dimension mismatch");
  QuadTensor<Scalar> t(beta.n());
  for (int a = 0; a < beta.k(); ++a) detail::add_kn(t, beta.component(a), gamma.component(a), Scalar(1));
  return t;
}

/// W + R^2 with an indefinite metric of signature (k+1, 1).
template <typename Scalar>
class LorentzSpace {
 public:
  explicit LorentzSpace(const Mat<Scalar>& metric) : metric_(metric) {
    require(metric.rows() == metric.cols() && metric.rows() >= 2, "LorentzSpace: metric must be square");
    require((metric - metric.transpose()).cwiseAbs().maxCoeff() == Scalar(0),
            "LorentzSpace: metric must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(metric, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const Scalar scale = ev.cwiseAbs().maxCoeff();
    int neg = 0, zero = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) <= Scalar(1e-12) * scale) ++zero;
      else if (ev(i) < 0) ++neg;
    }
    require(neg == 1 && zero == 0, "LorentzSpace: metric must have exactly one negative eigenvalue");
  }

  /// <<(xi, s), (eta, t)>> = <xi, eta> + s1 t2 + s2 t1 on W + R^2.
  static LorentzSpace standard(int k) {
    Mat<Scalar> g = Mat<Scalar>::Identity(k + 2, k + 2);
    g(k, k) = g(k + 1, k + 1) = Scalar(0);
    g(k, k + 1) = g(k + 1, k) = Scalar(1);
    return LorentzSpace(g);
  }

  int dim() const { return static_cast<int>(metric_.rows()); }
  const Mat<Scalar>& metric() const { return metric_; }

 private:
  Mat<Scalar> metric_;
};

/// Symmetric form into a Lorentzian space.
template <typename Scalar>
class LorentzForm {
 public:
  LorentzForm(const std::vector<Mat<Scalar>>& components, LorentzSpace<Scalar> space)
      : form_(components), space_(std::move(space)) {
    require(form_.k() == space_.dim(), "LorentzForm: component count must match the space");
  }

  int n() const { return form_.n(); }
  int dim() const { return form_.k(); }
  const Mat<Scalar>& component(int a) const { return form_.component(a); }
  const LorentzSpace<Scalar>& space() const { return space_; }

  /// beta KN beta computed with the Lorentzian metric on the target.
  QuadTensor<Scalar> kn_square() const {
    QuadTensor<Scalar> t(n());
    const auto& g = space_.metric();
    for (int a = 0; a < dim(); ++a)
      for (int b = 0; b < dim(); ++b)
        if (g(a, b) != Scalar(0)) detail::add_kn(t, component(a), component(b), g(a, b));
    return t;
  }

 private:
  VectorForm<Scalar> form_;
  LorentzSpace<Scalar> space_;
};

template <typename Scalar>
struct FlatnessResult {
  bool flat = false;
  Scalar residual = Scalar(0);
};

template <typename Scalar>
FlatnessResult<Scalar> is_flat(const VectorForm<Scalar>& beta, Scalar tol) {
  const Scalar r = kn_vector(beta, beta).max_abs();
  return {r <= tol, r};
}

template <typename Scalar>
FlatnessResult<Scalar> is_flat(const LorentzForm<Scalar>& beta, Scalar tol) {
  const Scalar r = beta.kn_square().max_abs();
  return {r <= tol, r};
}

/// Subspace of V held as orthonormal columns.
template <typename Scalar>
struct Subspace {
  Mat<Scalar> basis;  // n x dim
  Scalar tol = Scalar(0);

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient() const { return static_cast<int>(basis.rows()); }
  Mat<Scalar> projector() const { return basis * basis.transpose(); }
};

namespace detail {

template <typename Scalar>
Eigen::JacobiSVD<Mat<Scalar>> stacked_svd(const VectorForm<Scalar>& beta) {
  const int n = beta.n(), k = beta.k();
  Mat<Scalar> stacked(static_cast<Eigen::Index>(k) * n, n);
  for (int a = 0; a < k; ++a) stacked.block(static_cast<Eigen::Index>(a) * n, 0, n, n) = beta.component(a);
  return Eigen::JacobiSVD<Mat<Scalar>>(stacked, Eigen::ComputeFullV);
}

template <typename Scalar>
Subspace<Scalar> below(const Eigen::JacobiSVD<Mat<Scalar>>& svd, Scalar threshold, Scalar tol) {
  const auto& sv = svd.singularValues();
  const auto n = svd.matrixV().rows();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (sv(i) < threshold) keep.push_back(i);
  Subspace<Scalar> s{Mat<Scalar>(n, static_cast<Eigen::Index>(keep.size())), tol};
  for (std::size_t c = 0; c < keep.size(); ++c) s.basis.col(c) = svd.matrixV().col(keep[c]);
  return s;
}

}  // namespace detail

/// Right-singular directions of the stacked matrix [beta_1; ...; beta_k] with
/// singular values below an absolute threshold.
template <typename Scalar>
Subspace<Scalar> small_singular_space(const VectorForm<Scalar>& beta, Scalar threshold, Scalar tol) {
  return detail::below(detail::stacked_svd(beta), threshold, tol);
}

/// Nullity space N(beta) = {x : beta(x, y) = 0 for all y}, decided relative
/// to the largest singular value (or 1 when beta = 0).
template <typename Scalar>
Subspace<Scalar> nullity_space(const VectorForm<Scalar>& beta, Scalar tol = Scalar(1e-9)) {
  require(tol > Scalar(0), "nullity_space: tol must be positive");
  const auto svd = detail::stacked_svd(beta);
  const Scalar top = svd.singularValues()(0);
  return detail::below(svd, tol * (top > Scalar(0) ? top : Scalar(1)), tol);
}

/// beta~(x, y) = (beta(x, y), <x, y>, -l(x, y)) into W + R^2 with the standard
/// Lorentzian pairing. With l = L(beta) the lift is flat iff W(beta) = 0.
template <typename Scalar>
LorentzForm<Scalar> lift_lorentz(const VectorForm<Scalar>& beta, const ScalarForm<Scalar>& l) {
  require(beta.n() == l.n(), "lift_lorentz: dimension mismatch");
  std::vector<Mat<Scalar>> c = beta.components();
  c.push_back(Mat<Scalar>::Identity(beta.n(), beta.n()));
  c.push_back(-l.matrix());
  return LorentzForm<Scalar>(c, LorentzSpace<Scalar>::standard(beta.k()));
}

using ScalarFormd = ScalarForm<double>;
using VectorFormd = VectorForm<double>;
using QuadTensord = QuadTensor<double>;
using Subspaced = Subspace<double>;
using MatXd = Mat<double>;
using VecXd = Vec<double>;

}  // namespace pinchlab
