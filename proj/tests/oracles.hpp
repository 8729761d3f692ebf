#pragma once

// Reference computations for the test suites. These deliberately avoid the
// library (and Eigen): plain arrays, explicit index loops, literal formulas.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline const double s2 = std::sqrt(2.0);
inline const double r = std::sqrt(2.0) - 1.0;

/// Row-major square matrix.
struct Mat {
  int n = 0;
  std::vector<cd> a;
  explicit Mat(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim * dim)) {}
  cd& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  cd operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

inline Mat mat2(cd a00, cd a01, cd a10, cd a11) {
  Mat m(2);
  m(0, 0) = a00;
  m(0, 1) = a01;
  m(1, 0) = a10;
  m(1, 1) = a11;
  return m;
}

inline Mat eye(int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat sx() { return mat2(0, 1, 1, 0); }
inline Mat sy() { return mat2(0, cd(0, -1), cd(0, 1), 0); }
inline Mat sz() { return mat2(1, 0, 0, -1); }

inline Mat add(const Mat& x, const Mat& y, double cy = 1.0) {
  Mat m(x.n);
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] + cy * y.a[i];
  return m;
}

inline Mat scale(const Mat& x, cd c) {
  Mat m(x.n);
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = c * x.a[i];
  return m;
}

inline Mat mul(const Mat& x, const Mat& y) {
  Mat m(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      cd s = 0;
      for (int k = 0; k < x.n; ++k) s += x(i, k) * y(k, j);
      m(i, j) = s;
    }
  return m;
}

inline Mat kron(const Mat& x, const Mat& y) {
  Mat m(x.n * y.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      for (int k = 0; k < y.n; ++k)
        for (int l = 0; l < y.n; ++l) m(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
  return m;
}

inline cd trace(const Mat& x) {
  cd t = 0;
  for (int i = 0; i < x.n; ++i) t += x(i, i);
  return t;
}

/// Tr[x y] as sum_ij x_ij y_ji.
inline cd entrywise_inner(const Mat& x, const Mat& y) {
  cd t = 0;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) t += x(i, j) * y(j, i);
  return t;
}

/// (1 + rx X + ry Y + rz Z)/2 written out entry by entry.
inline Mat bloch(double rx, double ry, double rz) {
  return mat2(0.5 * (1 + rz), cd(0.5 * rx, -0.5 * ry), cd(0.5 * rx, 0.5 * ry), 0.5 * (1 - rz));
}

/// Tr_2 of a 4x4 operator on C^2 (x) C^2, by index contraction.
inline Mat partial_trace_second(const Mat& m) {
  Mat out(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += m(2 * i + k, 2 * j + k);
  return out;
}

inline Mat partial_trace_first(const Mat& m) {
  Mat out(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += m(2 * k + i, 2 * k + j);
  return out;
}

/// Coefficients c_1..c_n of det(t I - m) = t^n + c_1 t^{n-1} + ... + c_n
/// (Faddeev-LeVerrier).
inline std::vector<double> char_poly(const Mat& m) {
  const int n = m.n;
  std::vector<double> c(static_cast<std::size_t>(n + 1));
  c[0] = 1.0;
  Mat mk = eye(n);
  for (int k = 1; k <= n; ++k) {
    const Mat am = mul(m, mk);
    c[static_cast<std::size_t>(k)] = -trace(am).real() / k;
    mk = add(am, scale(eye(n), c[static_cast<std::size_t>(k)]));
  }
  return c;
}

/// Same coefficients from a list of roots (elementary symmetric polynomials).
inline std::vector<double> poly_from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double x : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= x * c[i];
    }
    c = next;
  }
  return c;
}

inline Mat projector(const std::vector<cd>& v) {
  Mat m(static_cast<int>(v.size()));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m(i, j) = v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
  return m;
}

inline Mat phi_plus() { return projector({1 / s2, 0, 0, 1 / s2}); }
inline Mat phi_minus() { return projector({1 / s2, 0, 0, -1 / s2}); }
inline Mat phi_pr() { return add(scale(phi_plus(), (1 + s2) / 2), scale(phi_minus(), (1 - s2) / 2)); }

inline Mat random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = g(rng);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = cd(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

// ---- Hex / Square polytopes -------------------------------------------------

/// The ten non-trivial hex inner products in closed form, each of
/// which must lie in [0, 1].
inline std::array<double, 10> hex_inner_products(double rx, double ry, double rz) {
  return {(s2 * rx + s2 * rz + 2) / 4,  (-s2 * rx - s2 * rz + 2) / 4, (-s2 * rx + s2 * rz + 2) / 4,
          (s2 * rx - s2 * rz + 2) / 4,  (rz + 1) / 2,                 (s2 * rx + s2 * ry + 2) / 4,
          (-s2 * rx - s2 * ry + 2) / 4, (s2 * rx - s2 * ry + 2) / 4,  (-s2 * rx + s2 * ry + 2) / 4,
          (1 - rz) / 2};
}

/// The fourteen vertex matrices of the hex state space, entry by entry.
inline std::vector<Mat> hex_vertex_matrices() {
  const cd i(0, 1);
  std::vector<Mat> v;
  v.push_back(mat2(0.5, -1 / s2, -1 / s2, 0.5));
  v.push_back(mat2(0.5, 1 / s2, 1 / s2, 0.5));
  v.push_back(mat2(1, 0.5 * (r - i), 0.5 * (r + i), 0));
  v.push_back(mat2(0, 0.5 * (r - i), 0.5 * (r + i), 1));
  v.push_back(mat2(1, 0.5 * (r + i), 0.5 * (r - i), 0));
  v.push_back(mat2(0, 0.5 * (r + i), 0.5 * (r - i), 1));
  v.push_back(mat2(1, 0.5 * (-r - i), 0.5 * (-r + i), 0));
  v.push_back(mat2(0, 0.5 * (-r - i), 0.5 * (-r + i), 1));
  v.push_back(mat2(1, 0.5 * (-r + i), 0.5 * (-r - i), 0));
  v.push_back(mat2(0, 0.5 * (-r + i), 0.5 * (-r - i), 1));
  v.push_back(mat2(0, i / s2, -i / s2, 1));
  v.push_back(mat2(1, i / s2, -i / s2, 0));
  v.push_back(mat2(0, -i / s2, i / s2, 1));
  v.push_back(mat2(1, -i / s2, i / s2, 0));
  return v;
}

/// Bloch coordinates read off a 2x2 unit-trace matrix entrywise.
inline std::array<double, 3> read_bloch(const Mat& m) {
  return {2 * m(1, 0).real(), 2 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

struct P2 {
  double x, z;
};

/// Hex cross-section at r_y = ry, found independently: all pairwise line
/// intersections of the inner-product bounds, filtered, then hulled
/// with Andrew's monotone chain. Counterclockwise, starting at the lowest-x point.
inline std::vector<P2> hex_slice(double ry) {
  // Each bound a x + b z + c in [0, 1], from hex_inner_products with r_y fixed.
  struct L {
    double a, b, c;
  };
  std::vector<L> rows;
  for (int k = 0; k < 10; ++k) {
    const double c = hex_inner_products(0, ry, 0)[static_cast<std::size_t>(k)];
    const double a = hex_inner_products(1, ry, 0)[static_cast<std::size_t>(k)] - c;
    const double b = hex_inner_products(0, ry, 1)[static_cast<std::size_t>(k)] - c;
    rows.push_back({a, b, c});
  }
  std::vector<std::array<double, 3>> lines;  // a x + b z = d
  for (const auto& l : rows) {
    if (std::abs(l.a) + std::abs(l.b) < 1e-14) continue;
    lines.push_back({l.a, l.b, -l.c});
    lines.push_back({l.a, l.b, 1 - l.c});
  }
  auto ok = [&](double x, double z) {
    for (int k = 0; k < 10; ++k) {
      const double v = hex_inner_products(x, ry, z)[static_cast<std::size_t>(k)];
      if (v < -1e-9 || v > 1 + 1e-9) return false;
    }
    return true;
  };
  std::vector<P2> pts;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& p = lines[i];
      const auto& q = lines[j];
      const double det = p[0] * q[1] - p[1] * q[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (p[2] * q[1] - p[1] * q[2]) / det;
      const double z = (p[0] * q[2] - p[2] * q[0]) / det;
      if (ok(x, z)) pts.push_back({x, z});
    }
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.z < b.z); });
  auto cross = [](const P2& o, const P2& a, const P2& b) { return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x); };
  std::vector<P2> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t start = hull.size();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const P2& p = pass == 0 ? pts[k] : pts[pts.size() - 1 - k];
      while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 1e-12) hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
  }
  return hull;
}

// ---- quantum switch -----------------------------------------------------------

using Ket = std::array<cd, 2>;

inline cd bra_ket(const Ket& a, const Ket& b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

struct SwitchSetup {
  std::array<Ket, 2> control;      // |pi_0>, |pi_1>
  Mat shared;                      // 4x4 on C (x) B
  Ket target;
  std::array<Ket, 2> m1, p1, m2, p2;  // lab A kets indexed by outcome / input
  std::array<std::array<Ket, 2>, 2> c;  // [z][c]
  std::array<std::array<Ket, 2>, 2> b;  // [y][b]
};

/// p(a1,a2,b,c|x1,x2,y,z) by building K as an explicit 2 x 8 array:
/// K[t'][(c_in, b_in, t)] = sum_k <psi|pi_k> conj(pi_k[c_in]) conj(phi[b_in]) T_k[t'][t].
inline double switch_probability(const SwitchSetup& s, int a1, int a2, int b, int c, int x1, int x2, int y, int z) {
  const Ket& psi = s.c[z][c];
  const Ket& phi = s.b[y][b];
  cd k[2][8] = {};
  for (int order = 0; order < 2; ++order) {
    const Ket& pi = s.control[order];
    const cd w = bra_ket(psi, pi);
    // T_0 = |p2><m2|p1><m1|, T_1 = |p1><m1|p2><m2|
    const Ket& out = order == 0 ? s.p2[x2] : s.p1[x1];
    const Ket& in = order == 0 ? s.m1[a1] : s.m2[a2];
    const cd mid = order == 0 ? bra_ket(s.m2[a2], s.p1[x1]) : bra_ket(s.m1[a1], s.p2[x2]);
    for (int tp = 0; tp < 2; ++tp)
      for (int ci = 0; ci < 2; ++ci)
        for (int bi = 0; bi < 2; ++bi)
          for (int t = 0; t < 2; ++t)
            k[tp][ci * 4 + bi * 2 + t] += w * std::conj(pi[ci]) * std::conj(phi[bi]) * out[tp] * mid * std::conj(in[t]);
  }
  // rho = shared (x) |t><t|
  cd p = 0;
  for (int tp = 0; tp < 2; ++tp)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const cd rho = s.shared(i / 2, j / 2) * s.target[i % 2] * std::conj(s.target[j % 2]);
        p += k[tp][i] * rho * std::conj(k[tp][j]);
      }
  return p.real();
}

inline Ket ket(cd a, cd b) { return {a, b}; }

/// Eigenbasis of n.sigma for unit real n: (+1 vector, -1 vector), closed form.
inline std::array<Ket, 2> eigenbasis(double nx, double ny, double nz) {
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  nx /= len;
  ny /= len;
  nz /= len;
  const double theta = std::acos(std::clamp(nz, -1.0, 1.0));
  const double phase = std::atan2(ny, nx);
  const cd e = std::polar(1.0, phase);
  return {ket(std::cos(theta / 2), e * std::sin(theta / 2)), ket(-std::sin(theta / 2), e * std::cos(theta / 2))};
}

inline SwitchSetup quantum_setup(const Mat& shared) {
  SwitchSetup s;
  const Ket k0 = ket(1, 0), k1 = ket(0, 1);
  s.control = {k0, k1};
  s.shared = shared;
  s.target = k0;
  s.m1 = s.p1 = s.m2 = s.p2 = {k0, k1};
  s.c = {eigenbasis(1, 0, 1), eigenbasis(-1, 0, 1)};
  s.b = {eigenbasis(0, 0, 1), eigenbasis(1, 0, 0)};
  return s;
}

}  // namespace oracle
