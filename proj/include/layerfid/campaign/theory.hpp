#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace layerfid {

/// Closed-form and dense-channel checks that need no circuit simulation.
struct TheoryCheck {
  std::string name;
  bool passed = false;
  nlohmann::json details;
};

/// eplg_anchors, crosstalk_oracle, gamma_bounds, lemma, gamma_depolarizing.
std::vector<std::string> theory_check_names();
TheoryCheck run_theory_check(std::string_view name, std::uint64_t seed = 0);

void to_json(nlohmann::json& j, const TheoryCheck& c);

}  // namespace layerfid
