#include "eas/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#ifndef EAS_DEFAULT_DATA_DIR
#define EAS_DEFAULT_DATA_DIR "data"
#endif

namespace eas {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : fmt::format("line {}: {}", line, what)), line_(line) {}

JobShopInstance::JobShopInstance(std::string name, IndexMatrix machine_of, TimeMatrix duration_of)
    : name_(std::move(name)), machine_of_(std::move(machine_of)), duration_of_(std::move(duration_of)) {
  if (machine_of_.rows() < 1 || machine_of_.cols() < 1) {
    throw std::invalid_argument("instance needs at least one job and one machine");
  }
  if (machine_of_.rows() != duration_of_.rows() || machine_of_.cols() != duration_of_.cols()) {
    throw std::invalid_argument("machine and duration matrices differ in shape");
  }
  const int m = machines();
  for (int j = 0; j < jobs(); ++j) {
    std::vector<bool> seen(m, false);
    for (int s = 0; s < m; ++s) {
      const int k = machine_of_(j, s);
      if (k < 0 || k >= m) {
        throw std::invalid_argument(fmt::format("job {} step {}: machine {} out of range [0, {})", j, s, k, m));
      }
      if (seen[k]) {
        throw std::invalid_argument(fmt::format("job {} visits machine {} twice", j, k));
      }
      seen[k] = true;
      if (duration_of_(j, s) < 1) {
        throw std::invalid_argument(fmt::format("job {} step {}: duration must be >= 1", j, s));
      }
    }
  }
}

Time JobShopInstance::machine_load(int machine) const {
  return (machine_of_.array() == machine).select(duration_of_, Time{0}).sum();
}

Time JobShopInstance::trivial_lower_bound() const {
  Time bound = duration_of_.rowwise().sum().maxCoeff();
  for (int k = 0; k < machines(); ++k) bound = std::max(bound, machine_load(k));
  return bound;
}

namespace {

bool is_blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::vector<long long> read_integers(const std::string& line, std::size_t line_no) {
  std::vector<long long> values;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0') {
      throw ParseError(line_no, fmt::format("expected an integer, found '{}'", token));
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

JobShopInstance parse_instance(std::string_view source, std::string name) {
  std::istringstream in{std::string(source)};
  std::string line;
  std::size_t line_no = 0;

  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!is_blank_or_comment(line)) return true;
    }
    return false;
  };

  if (!next_content_line()) throw ParseError(0, "missing header line \"jobs machines\"");
  const auto header = read_integers(line, line_no);
  if (header.size() != 2 || header[0] < 1 || header[1] < 1) {
    throw ParseError(line_no, "malformed header, expected two positive integers \"jobs machines\"");
  }
  const int n = static_cast<int>(header[0]);
  const int m = static_cast<int>(header[1]);

  IndexMatrix machine_of(n, m);
  TimeMatrix duration_of(n, m);
  for (int j = 0; j < n; ++j) {
    if (!next_content_line()) {
      throw ParseError(line_no, fmt::format("expected {} job rows, found {}", n, j));
    }
    const auto row = read_integers(line, line_no);
    if (row.size() != static_cast<std::size_t>(2 * m)) {
      throw ParseError(line_no, fmt::format("job {} row has {} values, expected {} machine/duration pairs",
                                            j, row.size(), m));
    }
    std::vector<bool> seen(m, false);
    for (int s = 0; s < m; ++s) {
      const long long k = row[2 * s];
      const long long d = row[2 * s + 1];
      if (k < 0 || k >= m) {
        throw ParseError(line_no, fmt::format("job {} step {}: machine index {} out of range [0, {})", j, s, k, m));
      }
      if (seen[k]) throw ParseError(line_no, fmt::format("job {} visits machine {} more than once", j, k));
      seen[k] = true;
      if (d < 1) throw ParseError(line_no, fmt::format("job {} step {}: duration {} < 1", j, s, d));
      machine_of(j, s) = static_cast<int>(k);
      duration_of(j, s) = d;
    }
  }
  if (next_content_line()) throw ParseError(line_no, "unexpected content after the last job row");
  return JobShopInstance(std::move(name), std::move(machine_of), std::move(duration_of));
}

std::string serialize_instance(const JobShopInstance& instance) {
  std::string out = fmt::format("# {}\n{} {}\n", instance.name(), instance.jobs(), instance.machines());
  for (int j = 0; j < instance.jobs(); ++j) {
    for (int s = 0; s < instance.machines(); ++s) {
      if (s) out += ' ';
      out += fmt::format("{} {}", instance.machine(j, s), instance.duration(j, s));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

JobShopInstance load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open instance file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_instance(buffer.str(), upper(path.stem().string()));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::filesystem::path fixture_directory() {
  if (const char* env = std::getenv("EAS_JSSP_DATA_DIR"); env && *env) return env;
  return EAS_DEFAULT_DATA_DIR;
}

JobShopInstance resolve_instance(const std::string& path_or_name) {
  const std::filesystem::path as_path(path_or_name);
  if (std::filesystem::is_regular_file(as_path)) return load_instance_file(as_path);
  const auto fixture = fixture_directory() / (lower(path_or_name) + ".txt");
  if (std::filesystem::is_regular_file(fixture)) return load_instance_file(fixture);
  throw LookupError(fmt::format("cannot resolve instance '{}' (not a file, not in {})", path_or_name,
                                fixture_directory().string()));
}

double search_space_log10(const JobShopInstance& instance) {
  return instance.machines() * std::lgamma(instance.jobs() + 1.0) / std::log(10.0);
}

}  // namespace eas
