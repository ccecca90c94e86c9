#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mafrfs/dataset.hpp"
#include "mafrfs/matrix.hpp"

namespace mafrfs {

enum class MarginStrategy { Global, Local };
std::string_view to_string(MarginStrategy strategy);
MarginStrategy parse_strategy(std::string_view name);

// Value WBMR takes on the empty subset when forming the first margin delta.
enum class EmptyWbmrPolicy {
  Zero,       // WBMR(∅) = 0, so the first delta is WBMR of the singleton
  SkipFirst,  // no margin stage while F' is empty; the fitness-best pool entry wins
};
std::string_view to_string(EmptyWbmrPolicy policy);
EmptyWbmrPolicy parse_empty_wbmr(std::string_view name);

struct ClassCenters {
  Matrix per_class;             // p x d
  std::vector<double> overall;  // d
  std::vector<std::size_t> counts;
};

struct MarginReport {
  double theta = 0.0;     // summed class-size-normalized within-class scatter
  double lambda_g = 0.0;  // sum of class-center distances to the overall center
  double delta_l = 0.0;   // sum of pairwise class-center distances
  double wbmr_g = 0.0;
  double wbmr_l = 0.0;
  // A between-class margin is zero: every class center coincides. The
  // corresponding ratio is then reported as the largest finite double.
  bool degenerate = false;

  double wbmr(MarginStrategy strategy) const {
    return strategy == MarginStrategy::Global ? wbmr_g : wbmr_l;
  }
};

// Throws DataError if some class in [0, num_classes) has no rows.
ClassCenters class_centers(const Matrix& projected, std::span<const int> labels,
                           std::size_t num_classes);

double within_margin(const Matrix& projected, std::span<const int> labels,
                     const ClassCenters& centers);
double between_margin_global(const ClassCenters& centers);
double between_margin_local(const ClassCenters& centers);

MarginReport wbmr(const Matrix& projected, std::span<const int> labels, std::size_t num_classes);

// Margin delta for adding `candidate` to `subset`:
// WBMR(subset ∪ {candidate}) - WBMR(subset) under `strategy`, with
// WBMR(∅) = 0. A degenerate WBMR(subset ∪ {candidate}) yields the largest
// finite double; a degenerate WBMR(subset) is treated like the empty subset.
double margin_delta(const Matrix& values, std::span<const int> labels, std::size_t num_classes,
                    const FeatureSubset& subset, std::size_t candidate, MarginStrategy strategy);

// Incremental margins for a growing subset. Squared distances to class
// centers, to the overall center and between centers are additive over
// features, so scoring one more feature costs O(n + p^2).
class MarginState {
public:
  MarginState(std::span<const int> labels, std::size_t num_classes);

  std::size_t num_features() const { return features_; }

  // Report for the current subset extended by `column`.
  MarginReport evaluate_with(std::span<const double> column) const;
  // Report for the current subset (all zeros and degenerate when empty).
  MarginReport current() const;

  void add(std::span<const double> column);

private:
  struct Terms {
    std::vector<double> sample_sq;  // n
    std::vector<double> global_sq;  // p
    std::vector<double> pair_sq;    // p*(p-1)/2, row-major upper triangle
  };
  Terms terms_for(std::span<const double> column) const;
  MarginReport report(const Terms& extra, bool with_extra) const;

  std::vector<int> labels_;
  std::size_t p_;
  std::vector<std::size_t> counts_;
  std::size_t features_ = 0;
  Terms acc_;
};

}  // namespace mafrfs
