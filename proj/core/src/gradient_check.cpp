#include "conjparse/gradient_check.hpp"

#include <algorithm>
#include <cmath>

#include "conjparse/trainer.hpp"

namespace conjparse {

GradCheckReport gradient_check(Model& model, const FeatureResources& res,
                               std::span<const Sentence> batch, const GradCheckOptions& opts) {
  Gradients g(model);
  const double base = joint_loss(model, res, batch, &g);
  Parameters analytic = g.to_dense(model);
  const auto grads = analytic.tensors();
  auto params = model.params().tensors();

  if (opts.corrupt_entry) {
    for (const auto& t : grads) {
      if (t.name == opts.corrupt_entry->first && opts.corrupt_entry->second < t.size()) {
        const_cast<double*>(t.data)[opts.corrupt_entry->second] += opts.corrupt_amount;
      }
    }
  }

  GradCheckReport report;
  const double h = opts.step;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& t = params[i];
    auto& group = report.groups[to_string(t.group)];
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double saved = t.data[k];
      t.data[k] = saved + h;
      const double plus = joint_loss(model, res, batch);
      t.data[k] = saved - h;
      const double minus = joint_loss(model, res, batch);
      t.data[k] = saved;

      const double a = grads[i].data[k];
      const double central = (plus - minus) / (2.0 * h);
      const double right = (plus - base) / h;
      const double left = (base - minus) / h;
      ++group.checked;

      const double jump = std::abs(right - left);
      if (jump > 1e-2 * std::max({1.0, std::abs(right), std::abs(left)})) {
        // Non-differentiable along this coordinate: accept any subgradient.
        ++group.kinks;
        ++report.kinks;
        const double slack = opts.tolerance * std::max(1.0, std::abs(a));
        if (a < std::min(left, right) - slack || a > std::max(left, right) + slack) {
          ++group.kink_violations;
          report.passed = false;
        }
        continue;
      }
      const double denom = std::max({std::abs(a), std::abs(central), opts.denominator_floor});
      const double rel = std::abs(a - central) / denom;
      if (rel > group.max_rel_error) {
        group.max_rel_error = rel;
        group.worst_tensor = t.name;
        group.worst_index = k;
      }
      report.max_rel_error = std::max(report.max_rel_error, rel);
    }
  }
  if (report.max_rel_error >= opts.tolerance) report.passed = false;
  return report;
}

}  // namespace conjparse
