#include "spbwe/pca.hpp"

#include <cmath>
#include <random>

#include "spbwe/errors.hpp"

namespace spbwe {

namespace {

constexpr double kTol = 1e-9;
constexpr int kMaxIter = 10000;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& vectors,
                                             int k) {
  if (k < 1) throw ConfigError("k must be positive");
  const int n = static_cast<int>(vectors.size());
  if (n < k + 1)
    throw ConfigError("need at least k+1 vectors for a rank-k projection");
  const int d = static_cast<int>(vectors[0].size());
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != d)
      throw ValidationError("vectors must share one dimension");

  // Mean-centered data; deflated in place after each recovered component.
  std::vector<std::vector<double>> X(vectors);
  std::vector<double> mean(d, 0.0);
  for (const auto& v : X)
    for (int j = 0; j < d; ++j) mean[j] += v[j];
  for (int j = 0; j < d; ++j) mean[j] /= n;
  for (auto& v : X)
    for (int j = 0; j < d; ++j) v[j] -= mean[j];

  double top_eigenvalue = 0.0;
  std::vector<std::vector<double>> coords(n, std::vector<double>(k, 0.0));
  std::mt19937_64 rng(0x5eedULL);

  for (int comp = 0; comp < k; ++comp) {
    std::vector<double> v(d);
    for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    double nv = norm(v);
    for (double& x : v) x /= nv;

    // Power iteration on the scatter matrix X^T X applied as X^T (X v).
    std::vector<double> scores(n), next(d);
    double eigen = 0.0;
    for (int iter = 0; iter < kMaxIter; ++iter) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += X[i][j] * v[j];
        scores[i] = s;
      }
      std::fill(next.begin(), next.end(), 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) next[j] += scores[i] * X[i][j];
      eigen = norm(next);
      double ref = comp == 0 ? eigen : top_eigenvalue;
      if (eigen <= 1e-12 * std::max(ref, 1e-300)) {
        throw RankError("data has rank " + std::to_string(comp) + ", cannot extract " +
                        std::to_string(k) + " components");
      }
      double delta = 0.0;
      for (int j = 0; j < d; ++j) {
        next[j] /= eigen;
        delta += (next[j] - v[j]) * (next[j] - v[j]);
      }
      v = next;
      if (std::sqrt(delta) < kTol) break;
    }
    if (comp == 0) top_eigenvalue = eigen;
    if (eigen <= 1e-9 * top_eigenvalue)
      throw RankError("data has rank " + std::to_string(comp) + ", cannot extract " +
                      std::to_string(k) + " components");

    // Largest-magnitude coordinate of the direction made positive.
    int arg = 0;
    for (int j = 1; j < d; ++j)
      if (std::fabs(v[j]) > std::fabs(v[arg])) arg = j;
    if (v[arg] < 0)
      for (double& x : v) x = -x;

    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += X[i][j] * v[j];
      coords[i][comp] = s;
      for (int j = 0; j < d; ++j) X[i][j] -= s * v[j];  // deflate
    }
  }
  return coords;
}

}  // namespace spbwe
