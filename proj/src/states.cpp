#include "twelect/states.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "twelect/csv.hpp"
#include "twelect/errors.hpp"
#include "twelect/text.hpp"

namespace twelect {
namespace {

struct StateInfo {
  std::string_view code;
  std::string_view name;
  std::string_view iso;  // ISO 3166-2:MX suffix
};

// Enum order (alphabetical by code). MX is Mexico City, MC the State of
// Mexico.
constexpr std::array<StateInfo, kNumStates> kStates{{
    {"AS", "Aguascalientes", "AGU"},
    {"BC", "Baja California", "BCN"},
    {"BS", "Baja California Sur", "BCS"},
    {"CC", "Campeche", "CAM"},
    {"CH", "Chihuahua", "CHH"},
    {"CL", "Coahuila", "COA"},
    {"CM", "Colima", "COL"},
    {"CS", "Chiapas", "CHP"},
    {"DG", "Durango", "DUR"},
    {"GR", "Guerrero", "GRO"},
    {"GT", "Guanajuato", "GUA"},
    {"HG", "Hidalgo", "HID"},
    {"JC", "Jalisco", "JAL"},
    {"MC", "México", "MEX"},
    {"MN", "Michoacán", "MIC"},
    {"MS", "Morelos", "MOR"},
    {"MX", "Ciudad de México", "CMX"},
    {"NL", "Nuevo León", "NLE"},
    {"NT", "Nayarit", "NAY"},
    {"OC", "Oaxaca", "OAX"},
    {"PL", "Puebla", "PUE"},
    {"QR", "Quintana Roo", "ROO"},
    {"QT", "Querétaro", "QUE"},
    {"SL", "Sinaloa", "SIN"},
    {"SP", "San Luis Potosí", "SLP"},
    {"SR", "Sonora", "SON"},
    {"TC", "Tabasco", "TAB"},
    {"TL", "Tlaxcala", "TLA"},
    {"TS", "Tamaulipas", "TAM"},
    {"VZ", "Veracruz", "VER"},
    {"YN", "Yucatán", "YUC"},
    {"ZS", "Zacatecas", "ZAC"},
}};

// Lowercase and fold Spanish diacritics so "Yucatán" and "yucatan" collide.
std::string normalize_place(std::string_view s) {
  const std::string lowered = lower_utf8(s);
  std::string out;
  out.reserve(lowered.size());
  size_t i = 0;
  while (i < lowered.size()) {
    const auto b = static_cast<unsigned char>(lowered[i]);
    if (b < 0x80) {
      out.push_back(lowered[i]);
      ++i;
      continue;
    }
    if (b == 0xC3 && i + 1 < lowered.size()) {
      switch (static_cast<unsigned char>(lowered[i + 1])) {
        case 0xA1: out.push_back('a'); i += 2; continue;  // á
        case 0xA9: out.push_back('e'); i += 2; continue;  // é
        case 0xAD: out.push_back('i'); i += 2; continue;  // í
        case 0xB3: out.push_back('o'); i += 2; continue;  // ó
        case 0xBA: out.push_back('u'); i += 2; continue;  // ú
        case 0xBC: out.push_back('u'); i += 2; continue;  // ü
        case 0xB1: out.push_back('n'); i += 2; continue;  // ñ
      }
    }
    out.push_back(lowered[i]);
    ++i;
  }
  // collapse runs of whitespace, trim ends
  std::string trimmed;
  bool pending_space = false;
  for (char c : out) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !trimmed.empty();
    } else {
      if (pending_space) trimmed.push_back(' ');
      pending_space = false;
      trimmed.push_back(c);
    }
  }
  return trimmed;
}

const std::unordered_map<std::string, StateCode>& alias_table() {
  static const auto* table = [] {
    auto* t = new std::unordered_map<std::string, StateCode>;
    const auto put = [&](std::string_view key, StateCode s) {
      (*t)[normalize_place(key)] = s;
    };
    for (int i = 0; i < kNumStates; ++i) {
      const auto s = static_cast<StateCode>(i);
      put(kStates[i].code, s);
      put(kStates[i].name, s);
      put(kStates[i].iso, s);
      put(std::string("MX-") + std::string(kStates[i].iso), s);
    }
    // Long official names and common variants.
    put("Estado de México", StateCode::MC);
    put("State of Mexico", StateCode::MC);
    put("Edomex", StateCode::MC);
    put("Mexico City", StateCode::MX);
    put("CDMX", StateCode::MX);
    put("Distrito Federal", StateCode::MX);
    put("DF", StateCode::MX);
    put("Coahuila de Zaragoza", StateCode::CL);
    put("Michoacán de Ocampo", StateCode::MN);
    put("Veracruz de Ignacio de la Llave", StateCode::VZ);
    put("Querétaro de Arteaga", StateCode::QT);
    return t;
  }();
  return *table;
}

std::optional<StateCode> lookup(std::string_view raw) {
  if (raw.empty()) return std::nullopt;
  const auto& table = alias_table();
  const auto it = table.find(normalize_place(raw));
  if (it != table.end()) return it->second;
  return std::nullopt;
}

bool country_is_mexico(std::string_view country) {
  const std::string c = normalize_place(country);
  return c == "mx" || c == "mex" || c == "mexico";
}

int64_t parse_count(const std::string& field, long line, const char* what) {
  int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || v < 0) {
    throw InputError(std::string("census: bad ") + what + " at line " + std::to_string(line));
  }
  return v;
}

}  // namespace

std::string_view state_code_str(StateCode s) { return kStates[static_cast<int>(s)].code; }

std::string_view state_name(StateCode s) { return kStates[static_cast<int>(s)].name; }

std::optional<StateCode> parse_state_code(std::string_view code) {
  for (int i = 0; i < kNumStates; ++i) {
    const auto& info = kStates[i];
    if (code.size() == 2 &&
        (code[0] == info.code[0] || code[0] == info.code[0] + 32) &&
        (code[1] == info.code[1] || code[1] == info.code[1] + 32)) {
      return static_cast<StateCode>(i);
    }
  }
  return std::nullopt;
}

std::optional<StateCode> resolve_state(std::string_view region, std::string_view country,
                                       std::string_view place_name) {
  if (!country.empty() && !country_is_mexico(country)) return std::nullopt;
  if (auto s = lookup(region)) return s;
  if (auto s = lookup(place_name)) return s;
  // "City, State" place names: try the part after the last comma.
  const auto comma = place_name.rfind(',');
  if (comma != std::string_view::npos) {
    if (auto s = lookup(place_name.substr(comma + 1))) return s;
  }
  return std::nullopt;
}

std::vector<CensusRow> load_census_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open census file: " + path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 3 || fields[0] != "state_code" ||
      fields[1] != "population" || fields[2] != "internet_users") {
    throw InputError("census: expected header state_code,population,internet_users");
  }
  std::vector<CensusRow> rows;
  std::array<bool, kNumStates> seen{};
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (fields.size() != 3) {
      throw InputError("census: expected 3 fields at line " + std::to_string(reader.line()));
    }
    const auto state = parse_state_code(fields[0]);
    if (!state) throw InputError("census: unknown state code '" + fields[0] + "'");
    if (seen[static_cast<int>(*state)]) {
      throw InputError("census: duplicate state " + fields[0]);
    }
    seen[static_cast<int>(*state)] = true;
    CensusRow row;
    row.state = *state;
    row.population = parse_count(fields[1], reader.line(), "population");
    row.internet_users = parse_count(fields[2], reader.line(), "internet_users");
    if (row.internet_users > row.population) {
      throw InputError("census: internet_users exceeds population for " + fields[0]);
    }
    rows.push_back(row);
  }
  for (int i = 0; i < kNumStates; ++i) {
    if (!seen[i]) {
      throw InputError(std::string("census: missing state ") +
                       std::string(kStates[i].code));
    }
  }
  return rows;
}

RegionDistribution RegionDistribution::from_counts(const std::vector<double>& counts_by_state) {
  if (counts_by_state.size() != static_cast<size_t>(kNumStates)) {
    throw ConfigError("from_counts expects one count per federal entity");
  }
  double total = 0.0;
  for (double c : counts_by_state) {
    if (c < 0.0) throw InputError("negative region count");
    total += c;
  }
  if (total <= 0.0) throw UndefinedEstimateError("no regional mass to normalize");
  RegionDistribution d;
  d.labels.reserve(kNumStates);
  d.pct.reserve(kNumStates);
  for (int i = 0; i < kNumStates; ++i) {
    d.labels.emplace_back(kStates[i].code);
    d.pct.push_back(100.0 * counts_by_state[i] / total);
  }
  return d;
}

double RegionDistribution::total() const {
  double t = 0.0;
  for (double p : pct) t += p;
  return t;
}

void RegionDistribution::validate() const {
  if (labels.size() != pct.size() || labels.empty()) {
    throw InputError("region distribution: label/percentage size mismatch");
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw InputError("region distribution: empty label");
    if (pct[i] < 0.0) throw InputError("region distribution: negative percentage");
    for (size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) {
        throw InputError("region distribution: duplicate label " + labels[i]);
      }
    }
  }
  const double t = total();
  if (t < 100.0 - 1e-9 || t > 100.0 + 1e-9) {
    throw InputError("region distribution: percentages sum to " + std::to_string(t));
  }
}

}  // namespace twelect
