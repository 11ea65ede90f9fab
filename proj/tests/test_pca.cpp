#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "spbwe/errors.hpp"
#include "spbwe/pca.hpp"

using namespace spbwe;

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("points on a 2-plane embedded in high dimension keep their distances") {
  // Orthonormal plane basis in R^8 built by Gram-Schmidt from fixed seeds.
  std::mt19937_64 rng(100);
  const int d = 8;
  std::array<std::vector<double>, 2> basis;
  for (int b = 0; b < 2; ++b) {
    basis[b].resize(d);
    for (double& x : basis[b]) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  double n0 = std::sqrt(std::inner_product(basis[0].begin(), basis[0].end(),
                                           basis[0].begin(), 0.0));
  for (double& x : basis[0]) x /= n0;
  double proj = std::inner_product(basis[0].begin(), basis[0].end(), basis[1].begin(), 0.0);
  for (int j = 0; j < d; ++j) basis[1][j] -= proj * basis[0][j];
  double n1 = std::sqrt(std::inner_product(basis[1].begin(), basis[1].end(),
                                           basis[1].begin(), 0.0));
  for (double& x : basis[1]) x /= n1;

  std::vector<std::vector<double>> plane_coords, vectors;
  for (int k = 0; k < 12; ++k) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4 - 2;
    double v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4 - 2;
    plane_coords.push_back({u, v});
    std::vector<double> p(d, 0.25);  // constant offset removed by centering
    for (int j = 0; j < d; ++j) p[j] += u * basis[0][j] + v * basis[1][j];
    vectors.push_back(p);
  }
  auto coords = pca_project(vectors, 2);
  for (std::size_t a = 0; a < coords.size(); ++a)
    for (std::size_t b = a + 1; b < coords.size(); ++b)
      CHECK(std::fabs(dist(coords[a], coords[b]) - dist(plane_coords[a], plane_coords[b])) <
            1e-6);
}

TEST_CASE("three points in five dimensions match the Gram-matrix eigensolver oracle") {
  std::vector<std::vector<double>> pts = {{1.0, 2.0, 0.5, -1.0, 3.0},
                                          {-2.0, 0.5, 1.5, 2.0, -1.0},
                                          {0.5, -1.0, 2.5, 0.0, 1.0}};
  const int n = 3, d = 5;

  // Oracle: eigendecompose the 3x3 centered Gram matrix. Centered data
  // of 3 points has rank <= 2 and (1,1,1) in the null space, so the
  // spectrum reduces to a closed-form 2x2 problem in the complement.
  std::vector<std::vector<double>> X(pts);
  for (int j = 0; j < d; ++j) {
    double m = (X[0][j] + X[1][j] + X[2][j]) / 3.0;
    for (int i = 0; i < n; ++i) X[i][j] -= m;
  }
  double G[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      G[a][b] = 0.0;
      for (int j = 0; j < d; ++j) G[a][b] += X[a][j] * X[b][j];
    }
  const double q1[3] = {1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0};
  const double q2[3] = {1 / std::sqrt(6.0), 1 / std::sqrt(6.0), -2 / std::sqrt(6.0)};
  auto quad = [&](const double* u, const double* v) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s += u[a] * G[a][b] * v[b];
    return s;
  };
  double m11 = quad(q1, q1), m12 = quad(q1, q2), m22 = quad(q2, q2);
  double tr = m11 + m22, det = m11 * m22 - m12 * m12;
  double disc = std::sqrt(tr * tr / 4.0 - det);
  double mu[2] = {tr / 2.0 + disc, tr / 2.0 - disc};
  // Oracle coordinates: sqrt(mu_k) * (unit eigenvector of the 2x2 in q-basis).
  std::array<std::array<double, 3>, 2> oracle_cols;
  for (int k = 0; k < 2; ++k) {
    double ex, ey;
    if (std::fabs(m12) > 1e-14) {
      ex = mu[k] - m22;
      ey = m12;
    } else {
      ex = k == 0 ? 1 : 0;
      ey = k == 0 ? 0 : 1;
    }
    double nn = std::sqrt(ex * ex + ey * ey);
    ex /= nn;
    ey /= nn;
    for (int a = 0; a < 3; ++a)
      oracle_cols[k][a] = std::sqrt(mu[k]) * (ex * q1[a] + ey * q2[a]);
  }

  auto coords = pca_project(pts, 2);
  for (int k = 0; k < 2; ++k) {
    double same = 0.0, flip = 0.0;
    for (int a = 0; a < 3; ++a) {
      same += std::fabs(coords[a][k] - oracle_cols[k][a]);
      flip += std::fabs(coords[a][k] + oracle_cols[k][a]);
    }
    CHECK(std::min(same, flip) < 1e-7);  // equal up to the sign convention
  }
}

TEST_CASE("identical vectors raise a rank error naming the achievable rank") {
  std::vector<std::vector<double>> same(5, std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THROWS_WITH_AS(pca_project(same, 2), doctest::Contains("rank 0"), RankError);
}

TEST_CASE("collinear data cannot produce two components") {
  std::vector<std::vector<double>> line;
  for (int k = 0; k < 6; ++k) line.push_back({1.0 * k, 2.0 * k, -1.0 * k});
  CHECK_THROWS_WITH_AS(pca_project(line, 2), doctest::Contains("rank 1"), RankError);
}

TEST_CASE("argument validation") {
  std::vector<std::vector<double>> two = {{1, 0}, {0, 1}};
  CHECK_THROWS_AS(pca_project(two, 2), ConfigError);  // needs k+1 vectors
  CHECK_THROWS_AS(pca_project(two, 0), ConfigError);
  std::vector<std::vector<double>> ragged = {{1, 0}, {0, 1}, {1}};
  CHECK_THROWS_AS(pca_project(ragged, 1), ValidationError);
}

TEST_CASE("sign canonicalization makes projections reproducible") {
  std::mt19937_64 rng(55);
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 9; ++k) {
    std::vector<double> p(6);
    for (double& x : p) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    pts.push_back(p);
  }
  auto a = pca_project(pts, 2);
  auto b = pca_project(pts, 2);
  CHECK(a == b);
}
