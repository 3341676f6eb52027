#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "eas/colony.hpp"

namespace eas {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  const std::string text(value);
  std::size_t used = 0;
  T parsed{};
  try {
    if constexpr (std::is_floating_point_v<T>) {
      parsed = static_cast<T>(std::stod(text, &used));
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
      parsed = static_cast<T>(std::stoull(text, &used));
    } else {
      parsed = static_cast<T>(std::stoll(text, &used));
    }
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument(fmt::format("parameter '{}': cannot parse '{}'", key, value));
  }
  return parsed;
}

}  // namespace

void apply_param(ColonyParams& params, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "alpha") params.alpha = parse_number<double>(key, value);
  else if (key == "rho") params.rho = parse_number<double>(key, value);
  else if (key == "q") params.q = parse_number<double>(key, value);
  else if (key == "elitist_weight") params.elitist_weight = parse_number<double>(key, value);
  else if (key == "cycles") params.cycles = parse_number<int>(key, value);
  else if (key == "ants") params.ants = parse_number<int>(key, value);
  else if (key == "tau0") params.tau0 = parse_number<double>(key, value);
  else if (key == "delay_limit") params.delay_limit = parse_number<Time>(key, value);
  else if (key == "delay_penalty_per_unit") params.delay_penalty_per_unit = parse_number<double>(key, value);
  else if (key == "seed") params.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "elitist_target") {
    if (value == "cycle") params.elitist_target = ElitistTarget::CycleBest;
    else if (value == "global") params.elitist_target = ElitistTarget::GlobalBest;
    else throw std::invalid_argument(fmt::format("parameter 'elitist_target': expected cycle or global, got '{}'", value));
  } else if (key == "beta") {
    throw std::invalid_argument("parameter 'beta' is derived as 1 - alpha and cannot be set");
  } else {
    throw std::invalid_argument(fmt::format("unknown parameter '{}'", key));
  }
}

void apply_params_text(std::string_view text, ColonyParams& params) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    try {
      apply_param(params, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
}

void load_params_file(const std::filesystem::path& path, ColonyParams& params) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_params_text(buffer.str(), params);
}

}  // namespace eas
