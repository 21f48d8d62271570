#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace twelect {

// The ten parties of the 2021 Mexican legislative election.
enum class Party : uint8_t { MORENA, PT, PVEM, PAN, PRI, PRD, MC, PES, FXM, RSP };

inline constexpr int kNumParties = 10;

// Bipartisan labels: y = 0 ruling coalition, y = 1 opposition.
enum class Coalition : uint8_t { Ruling = 0, Opposition = 1 };

// Total, fixed mapping: ruling = {MORENA, PT, PVEM}, opposition = the rest.
constexpr Coalition coalition_of(Party p) {
  switch (p) {
    case Party::MORENA:
    case Party::PT:
    case Party::PVEM:
      return Coalition::Ruling;
    default:
      return Coalition::Opposition;
  }
}

std::string_view party_code(Party p);  // "MORENA", "FxM", ...
std::optional<Party> parse_party(std::string_view code);

// Classifier training groups: one model per group, MORENA+PT joint and the
// three small parties PES+FxM+RSP joint.
enum class TrainingGroup : uint8_t { MorenaPt, Pvem, Pan, Pri, Prd, Mc, PesFxmRsp };

inline constexpr int kNumGroups = 7;

TrainingGroup training_group(Party p);
std::string_view group_label(TrainingGroup g);      // "MORENA+PT"
std::string_view group_file_stem(TrainingGroup g);  // "morena_pt"
std::optional<TrainingGroup> parse_group(std::string_view label_or_stem);

}  // namespace twelect
