#include "bellnoise/chsh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace bellnoise {

double chsh(const CorrelationModel& m, const Settings4& s) {
  return m.correlation_at(s.a, s.b) - m.correlation_at(s.a, s.b_prime) +
         m.correlation_at(s.a_prime, s.b) +
         m.correlation_at(s.a_prime, s.b_prime);
}

namespace {

constexpr int kGridInvariant = 180;  // 2 degree step over [0, 2 pi)
constexpr int kGridState = 60;       // 6 degree step, refined locally

// Nelder-Mead on |S|, maximizing. Returns the best point found.
std::array<double, 4> nelder_mead(
    const std::function<double(const std::array<double, 4>&)>& f,
    std::array<double, 4> start, double step, double tol, int max_iter) {
  constexpr int n = 4;
  std::vector<std::array<double, 4>> pts(n + 1, start);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) fv[i] = -f(pts[i]);

  auto order = [&] {
    for (int i = 1; i <= n; ++i) {
      auto p = pts[i];
      double v = fv[i];
      int j = i - 1;
      while (j >= 0 && fv[j] > v) {
        pts[j + 1] = pts[j];
        fv[j + 1] = fv[j];
        --j;
      }
      pts[j + 1] = p;
      fv[j + 1] = v;
    }
  };
  order();

  for (int it = 0; it < max_iter && fv[n] - fv[0] > tol; ++it) {
    std::array<double, 4> centroid{};
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 4; ++d) centroid[d] += pts[i][d] / n;

    auto blend = [&](double c) {
      std::array<double, 4> p;
      for (int d = 0; d < 4; ++d)
        p[d] = centroid[d] + c * (pts[n][d] - centroid[d]);
      return p;
    };

    const auto refl = blend(-1.0);
    const double fr = -f(refl);
    if (fr < fv[0]) {
      const auto exp_ = blend(-2.0);
      const double fe = -f(exp_);
      if (fe < fr) {
        pts[n] = exp_;
        fv[n] = fe;
      } else {
        pts[n] = refl;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      pts[n] = refl;
      fv[n] = fr;
    } else {
      const auto con = blend(fr < fv[n] ? -0.5 : 0.5);
      const double fc = -f(con);
      if (fc < std::min(fr, fv[n])) {
        pts[n] = con;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int d = 0; d < 4; ++d)
            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
          fv[i] = -f(pts[i]);
        }
      }
    }
    order();
  }
  return pts[0];
}

// |S| of a translation-invariant model from a table of E over multiples
// of the grid step.
ChshMaximum maximize_invariant(const CorrelationModel& m) {
  const int n = kGridInvariant;
  const double h = 2.0 * pi / n;
  std::vector<double> e(n);
  for (int i = 0; i < n; ++i) e[i] = m.correlation_at(0.0, i * h);

  double best = -1.0;
  int bi = 0, bj = 0, bk = 0;
  for (int i = 0; i < n; ++i) {        // a' (a fixed at 0)
    for (int j = 0; j < n; ++j) {      // b
      const double e0j = e[j];
      const double eij = e[(j - i + n) % n];
      for (int k = 0; k < n; ++k) {    // b'
        const double s =
            e0j - e[k] + eij + e[(k - i + n) % n];
        if (std::abs(s) > best) {
          best = std::abs(s);
          bi = i;
          bj = j;
          bk = k;
        }
      }
    }
  }
  Settings4 start{0.0, bi * h, bj * h, bk * h};
  auto f = [&](const std::array<double, 4>& x) {
    return std::abs(chsh(m, {x[0], x[1], x[2], x[3]}));
  };
  auto p = nelder_mead(f, {start.a, start.a_prime, start.b, start.b_prime}, h,
                       1e-10, 2000);
  p = nelder_mead(f, p, h / 50.0, 1e-12, 2000);
  Settings4 s{p[0], p[1], p[2], p[3]};
  return {s, std::abs(chsh(m, s))};
}

ChshMaximum maximize_state(const CorrelationModel& m) {
  // E(a,b) = s * u(a)^T T u(b); precompute the pairwise table once.
  const Eigen::Matrix2d t = correlation_tensor_xz(*m.rho());
  const double scale = m.distortion() ? m.distortion()->scale() : 1.0;

  const int n = kGridState;
  const double h = 2.0 * pi / n;
  Eigen::MatrixXd u(2, n);
  for (int i = 0; i < n; ++i) u.col(i) << std::sin(i * h), std::cos(i * h);
  const Eigen::MatrixXd e = scale * (u.transpose() * t * u);  // n x n

  double best = -1.0;
  int ba = 0, bap = 0, bb = 0, bbp = 0;
  for (int i = 0; i < n; ++i)
    for (int ii = 0; ii < n; ++ii)
      for (int j = 0; j < n; ++j) {
        const double partial = e(i, j) + e(ii, j);
        for (int jj = 0; jj < n; ++jj) {
          const double s = partial - e(i, jj) + e(ii, jj);
          if (std::abs(s) > best) {
            best = std::abs(s);
            ba = i;
            bap = ii;
            bb = j;
            bbp = jj;
          }
        }
      }
  auto f = [&](const std::array<double, 4>& x) {
    return std::abs(chsh(m, {x[0], x[1], x[2], x[3]}));
  };
  std::array<double, 4> start{ba * h, bap * h, bb * h, bbp * h};
  auto p = nelder_mead(f, start, h, 1e-10, 2000);
  p = nelder_mead(f, p, h / 50.0, 1e-12, 2000);
  Settings4 s{p[0], p[1], p[2], p[3]};
  return {s, std::abs(chsh(m, s))};
}

}  // namespace

ChshMaximum maximize_chsh(const CorrelationModel& m) {
  return m.translation_invariant() ? maximize_invariant(m)
                                   : maximize_state(m);
}

double critical_visibility_chsh(double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  const auto max_at = [](double v) {
    return maximize_chsh(
               CorrelationModel::quantum(SpinConvention::half).with_visibility(
                   v))
        .value;
  };
  if (max_at(1.0) <= 2.0) return 1.0;
  double lo = 0.0, hi = 1.0;  // lo within the classical bound, hi beyond
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (max_at(mid) <= 2.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bellnoise
