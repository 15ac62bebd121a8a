#pragma once

#include <functional>
#include <vector>

namespace ldpnet {

// Exact transportation cost between discrete measures with supplies `a` and
// demands `b` (equal totals) under nonnegative costs, solved by successive
// shortest paths on the bipartite flow network. At most |a|+|b| augmentations
// occur since each saturates a source or a sink.
double transport_cost(const std::vector<double>& a, const std::vector<double>& b,
                      const std::function<double(int, int)>& cost);

inline constexpr int kExactOtSupportCap = 512;

}  // namespace ldpnet
