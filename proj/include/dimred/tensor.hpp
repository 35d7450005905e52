#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace dimred::tensor {

// Dense rank-3 / rank-4 arrays over an n-dimensional index space.
template <typename Scalar>
class Rank3 {
 public:
  explicit Rank3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), Scalar(0)) {}
  Scalar& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  Scalar operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
  int dim() const { return n_; }

 private:
  std::size_t index(int a, int b, int c) const { return static_cast<std::size_t>((a * n_ + b) * n_ + c); }
  int n_;
  std::vector<Scalar> data_;
};

template <typename Scalar>
class Rank4 {
 public:
  explicit Rank4(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), Scalar(0)) {}
  Scalar& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  Scalar operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  int dim() const { return n_; }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }
  int n_;
  std::vector<Scalar> data_;
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Diagonal metric g = diag(g_0..g_{n-1}) whose components depend on a single
// coordinate x^k. Holds g, dg/dx^k, d2g/(dx^k)^2.
template <typename Scalar>
struct DiagonalMetricJet {
  Vector<Scalar> g, dg, d2g;
  int k = 0;
};

template <typename Scalar>
struct Curvature {
  Rank3<Scalar> christoffel;  // Gamma^a_{bc}
  Rank4<Scalar> riemann;      // R_{abcd}, all indices down
  Matrix<Scalar> ricci;       // R_{bd} = R^a_{bad}
  Scalar scalar{};
};

// Standard conventions: R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//                                   + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}.
template <typename Scalar>
Curvature<Scalar> curvature(const DiagonalMetricJet<Scalar>& m) {
  const int n = static_cast<int>(m.g.size());
  const int k = m.k;
  Rank3<Scalar> gamma(n), dgamma(n);  // dgamma = d/dx^k Gamma
  for (int a = 0; a < n; ++a) {
    const Scalar inv = Scalar(1) / m.g(a);
    const Scalar dinv = -m.dg(a) * inv * inv;
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        // Gamma^a_{bc} = 1/2 g^{aa} (d_b g_{ac} + d_c g_{ab} - d_a g_{bc})
        Scalar s{}, ds{};
        if (b == k && a == c) { s += m.dg(a); ds += m.d2g(a); }
        if (c == k && a == b) { s += m.dg(a); ds += m.d2g(a); }
        if (a == k && b == c) { s -= m.dg(b); ds -= m.d2g(b); }
        gamma(a, b, c) = Scalar(0.5) * inv * s;
        dgamma(a, b, c) = Scalar(0.5) * (dinv * s + inv * ds);
      }
    }
  }
  Curvature<Scalar> out{gamma, Rank4<Scalar>(n), Matrix<Scalar>::Zero(n, n), Scalar(0)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          Scalar r{};
          if (c == k) r += dgamma(a, d, b);
          if (d == k) r -= dgamma(a, c, b);
          for (int e = 0; e < n; ++e) r += gamma(a, c, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, c, b);
          out.riemann(a, b, c, d) = m.g(a) * r;
          out.ricci(b, d) += r * Scalar(a == c);
        }
      }
    }
  }
  for (int b = 0; b < n; ++b) out.scalar += out.ricci(b, b) / m.g(b);
  return out;
}

// Weyl tensor C_{abcd} of a diagonal metric; zero tensor for n < 3.
template <typename Scalar>
Rank4<Scalar> weyl(const Vector<Scalar>& g, const Curvature<Scalar>& c) {
  const int n = static_cast<int>(g.size());
  Rank4<Scalar> w(n);
  if (n < 3) return w;
  const Scalar s1 = Scalar(1) / Scalar(n - 2);
  const Scalar s2 = c.scalar / Scalar((n - 1) * (n - 2));
  const auto G = [&](int i, int j) { return i == j ? g(i) : Scalar(0); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          const auto& R = c.ricci;
          w(a, b, cc, d) = c.riemann(a, b, cc, d) -
                           s1 * (G(a, cc) * R(b, d) - G(a, d) * R(b, cc) - G(b, cc) * R(a, d) + G(b, d) * R(a, cc)) +
                           s2 * (G(a, cc) * G(b, d) - G(a, d) * G(b, cc));
        }
  return w;
}

// Frobenius norm of an all-covariant rank-4 tensor in the orthonormal frame.
template <typename Scalar>
Scalar frame_norm(const Vector<Scalar>& g, const Rank4<Scalar>& t) {
  using std::abs;
  using std::sqrt;
  const int n = t.dim();
  Scalar sum{};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Scalar v = t(a, b, c, d);
          sum += v * v / abs(g(a) * g(b) * g(c) * g(d));
        }
  return sqrt(sum);
}

template <typename Scalar>
Scalar frame_norm(const Vector<Scalar>& g, const Rank3<Scalar>& t) {
  using std::abs;
  using std::sqrt;
  const int n = t.dim();
  Scalar sum{};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Scalar v = t(a, b, c);
        sum += v * v / abs(g(a) * g(b) * g(c));
      }
  return sqrt(sum);
}

// Schouten tensor P = (Ric - R g / (2(n-1))) / (n-2); for n = 3, Ric - R g / 4.
template <typename Scalar>
Matrix<Scalar> schouten(const Vector<Scalar>& g, const Curvature<Scalar>& c) {
  const int n = static_cast<int>(g.size());
  Matrix<Scalar> p = c.ricci;
  for (int i = 0; i < n; ++i) p(i, i) -= c.scalar * g(i) / Scalar(2 * (n - 1));
  return p / Scalar(n - 2);
}

// T_{abc} = nabla_a P_{bc} - nabla_b P_{ac}, given P and dP/dx^k at the point.
template <typename Scalar>
Rank3<Scalar> taub(const Rank3<Scalar>& gamma, const Matrix<Scalar>& p, const Matrix<Scalar>& dp, int k) {
  const int n = static_cast<int>(p.rows());
  const auto nabla = [&](int a, int b, int c) {
    Scalar v = a == k ? dp(b, c) : Scalar(0);
    for (int l = 0; l < n; ++l) v -= gamma(l, a, b) * p(l, c) + gamma(l, a, c) * p(b, l);
    return v;
  };
  Rank3<Scalar> t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) t(a, b, c) = nabla(a, b, c) - nabla(b, a, c);
  return t;
}

// Five-point central stencils.
template <typename Scalar, typename F>
auto central_d1(const F& f, Scalar x, Scalar h) {
  using Value = std::decay_t<decltype(f(x))>;
  const Value out = (f(x - 2 * h) - Scalar(8) * f(x - h) + Scalar(8) * f(x + h) - f(x + 2 * h)) / (Scalar(12) * h);
  return out;
}

template <typename Scalar, typename F>
auto central_d2(const F& f, Scalar x, Scalar h) {
  using Value = std::decay_t<decltype(f(x))>;
  const Value out =
      (-f(x - 2 * h) + Scalar(16) * f(x - h) - Scalar(30) * f(x) + Scalar(16) * f(x + h) - f(x + 2 * h)) /
      (Scalar(12) * h * h);
  return out;
}

}  // namespace dimred::tensor
