#include "twelect/party.hpp"

#include <string>

namespace twelect {

std::string_view party_code(Party p) {
  switch (p) {
    case Party::MORENA: return "MORENA";
    case Party::PT: return "PT";
    case Party::PVEM: return "PVEM";
    case Party::PAN: return "PAN";
    case Party::PRI: return "PRI";
    case Party::PRD: return "PRD";
    case Party::MC: return "MC";
    case Party::PES: return "PES";
    case Party::FXM: return "FxM";
    case Party::RSP: return "RSP";
  }
  return "?";
}

std::optional<Party> parse_party(std::string_view code) {
  std::string upper(code);
  for (char& c : upper) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
  }
  if (upper == "MORENA") return Party::MORENA;
  if (upper == "PT") return Party::PT;
  if (upper == "PVEM") return Party::PVEM;
  if (upper == "PAN") return Party::PAN;
  if (upper == "PRI") return Party::PRI;
  if (upper == "PRD") return Party::PRD;
  if (upper == "MC") return Party::MC;
  if (upper == "PES") return Party::PES;
  if (upper == "FXM") return Party::FXM;
  if (upper == "RSP") return Party::RSP;
  return std::nullopt;
}

TrainingGroup training_group(Party p) {
  switch (p) {
    case Party::MORENA:
    case Party::PT:
      return TrainingGroup::MorenaPt;
    case Party::PVEM: return TrainingGroup::Pvem;
    case Party::PAN: return TrainingGroup::Pan;
    case Party::PRI: return TrainingGroup::Pri;
    case Party::PRD: return TrainingGroup::Prd;
    case Party::MC: return TrainingGroup::Mc;
    case Party::PES:
    case Party::FXM:
    case Party::RSP:
      return TrainingGroup::PesFxmRsp;
  }
  return TrainingGroup::MorenaPt;
}

std::string_view group_label(TrainingGroup g) {
  switch (g) {
    case TrainingGroup::MorenaPt: return "MORENA+PT";
    case TrainingGroup::Pvem: return "PVEM";
    case TrainingGroup::Pan: return "PAN";
    case TrainingGroup::Pri: return "PRI";
    case TrainingGroup::Prd: return "PRD";
    case TrainingGroup::Mc: return "MC";
    case TrainingGroup::PesFxmRsp: return "PES+FxM+RSP";
  }
  return "?";
}

std::string_view group_file_stem(TrainingGroup g) {
  switch (g) {
    case TrainingGroup::MorenaPt: return "morena_pt";
    case TrainingGroup::Pvem: return "pvem";
    case TrainingGroup::Pan: return "pan";
    case TrainingGroup::Pri: return "pri";
    case TrainingGroup::Prd: return "prd";
    case TrainingGroup::Mc: return "mc";
    case TrainingGroup::PesFxmRsp: return "pes_fxm_rsp";
  }
  return "?";
}

std::optional<TrainingGroup> parse_group(std::string_view s) {
  for (int i = 0; i < kNumGroups; ++i) {
    const auto g = static_cast<TrainingGroup>(i);
    if (s == group_label(g) || s == group_file_stem(g)) return g;
  }
  return std::nullopt;
}

}  // namespace twelect
