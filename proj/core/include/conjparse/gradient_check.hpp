#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conjparse/model.hpp"

namespace conjparse {

struct GradCheckOptions {
  double step = 1e-4;
  double tolerance = 1e-4;
  /// Denominator floor of the relative error, so entries whose analytic and
  /// numeric gradients are both ~0 compare by absolute difference.
  double denominator_floor = 1e-6;
  /// Negative control: adds this to the analytic gradient of one entry.
  std::optional<std::pair<std::string, std::size_t>> corrupt_entry;
  double corrupt_amount = 1e-2;
};

struct GroupCheck {
  std::size_t checked = 0;
  /// Entries where the one-sided differences disagree (a hinge kink lies
  /// within one step); there the analytic value must lie between them.
  std::size_t kinks = 0;
  std::size_t kink_violations = 0;
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
};

struct GradCheckReport {
  std::map<std::string, GroupCheck> groups;  // keyed by ParamGroup name
  double max_rel_error = 0.0;
  std::size_t kinks = 0;
  bool passed = true;
};

/// Compares the analytic gradient of joint_loss against central finite
/// differences for every parameter entry. Word dropout is not applied.
GradCheckReport gradient_check(Model& model, const FeatureResources& res,
                               std::span<const Sentence> batch, const GradCheckOptions& opts = {});

}  // namespace conjparse
