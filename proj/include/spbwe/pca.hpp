#pragma once

#include <vector>

namespace spbwe {

// Projects mean-centered vectors onto the top-k principal directions,
// computed by power iteration with deflation (tolerance 1e-9, at most
// 10k iterations per component). Each direction's sign is canonicalized
// so its largest-magnitude coordinate is positive. Throws RankError
// naming the achievable rank when the data spans fewer than k
// dimensions.
std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& vectors,
                                             int k = 2);

}  // namespace spbwe
