#pragma once

#include <cmath>
#include <set>
#include <span>
#include <string>

#include "zonerec/error.hpp"
#include "zonerec/features.hpp"
#include "zonerec/geo.hpp"

namespace zonerec {

// Non-owning view of a labelled training set.
struct LabeledData {
  std::span<const SparseVector> x;
  std::span<const ZoneId> y;
  std::size_t n_classes = 0;
  std::size_t dimension = 0;

  std::size_t size() const { return x.size(); }

  void validate(bool require_two_classes = true) const {
    if (x.size() != y.size()) throw ValidationError("feature and label counts differ");
    if (x.empty()) throw ValidationError("training set is empty");
    std::set<ZoneId> present;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (y[i] >= n_classes) throw ValidationError("label " + std::to_string(y[i]) + " out of range");
      present.insert(y[i]);
      if (x[i].dimension != dimension) {
        throw DimensionMismatch("sample " + std::to_string(i) + " has dimension " +
                                std::to_string(x[i].dimension) + ", expected " +
                                std::to_string(dimension));
      }
      for (std::size_t k = 0; k < x[i].nnz(); ++k) {
        if (!std::isfinite(x[i].values[k])) {
          throw ValidationError("non-finite feature value in sample " + std::to_string(i));
        }
        if (x[i].indices[k] >= dimension) throw DimensionMismatch("feature index out of range");
      }
    }
    if (require_two_classes && present.size() < 2) {
      throw ValidationError("training labels contain a single class");
    }
  }
};

inline void check_dimension(const SparseVector& x, std::size_t dimension) {
  if (x.dimension != dimension) {
    throw DimensionMismatch("input has dimension " + std::to_string(x.dimension) +
                            ", model expects " + std::to_string(dimension));
  }
}

}  // namespace zonerec
