#pragma once

#include <span>
#include <string>

namespace dirwave {

// Fixed-order pairwise summation; identical results regardless of threading.
double pairwise_sum(std::span<const double> v);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

} // namespace dirwave
