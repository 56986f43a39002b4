#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "unmix/types.hpp"

namespace unmix {

struct StatSummary {
  double median = 0;
  double mean = 0;
  double std_dev = 0;
  double minimum = 0;
  double maximum = 0;
};

enum class StdMode { Population, Sample };

/// Median / mean / standard deviation / min / max of the finite entries.
/// Non-finite entries are dropped; their count is reported through
/// `excluded_count` when given. Throws EmptyInputError if nothing remains.
inline StatSummary summarize(const std::vector<double>& values,
                             StdMode mode = StdMode::Population,
                             std::size_t* excluded_count = nullptr) {
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (excluded_count) *excluded_count = values.size() - finite.size();
  if (finite.empty()) throw EmptyInputError("summarize: no finite values");

  std::sort(finite.begin(), finite.end());
  const std::size_t n = finite.size();
  StatSummary out;
  out.minimum = finite.front();
  out.maximum = finite.back();
  out.median = (n % 2 == 1) ? finite[n / 2] : 0.5 * (finite[n / 2 - 1] + finite[n / 2]);

  double sum = 0;
  for (double v : finite) sum += v;
  out.mean = sum / static_cast<double>(n);

  double sq = 0;
  for (double v : finite) sq += (v - out.mean) * (v - out.mean);
  const double denom =
      (mode == StdMode::Population) ? static_cast<double>(n)
                                    : static_cast<double>(n > 1 ? n - 1 : 1);
  out.std_dev = std::sqrt(sq / denom);
  return out;
}

}  // namespace unmix
