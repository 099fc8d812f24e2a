#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "noma/channel_model.hpp"

namespace noma {

/// One closed-form-vs-defining-integral comparison.
struct FormulaCheck {
  double closed = 0.0;
  double integral = 0.0;
  double rel_err = 0.0;  // |closed - integral| / max(|integral|, 1e-300)
};

/// Evaluates the registered (closed form, defining integral) pair named by
/// formula_id at the given scenario. Throws std::invalid_argument for an
/// unknown id. Every probability and average-rate expression in the
/// project is registered here; this is the reconciliation oracle that
/// settles any transcription question about the closed forms.
FormulaCheck quad_verify(const Scenario& s, std::string_view formula_id);

/// All registered ids, in a fixed order.
std::vector<std::string> registered_formulas();

}  // namespace noma
