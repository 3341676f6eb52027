#include <algorithm>
#include <array>
#include <cctype>

#include <fmt/format.h>

#include "eas/instance.hpp"

namespace eas {

namespace {

// LA29 is kept at 1157, the value these results were compared against (1152 is known since).
constexpr std::array<BksRecord, 40> kLawrence{{
    {"LA01", 10, 5, 666},   {"LA02", 10, 5, 655},   {"LA03", 10, 5, 597},   {"LA04", 10, 5, 590},
    {"LA05", 10, 5, 593},   {"LA06", 15, 5, 926},   {"LA07", 15, 5, 890},   {"LA08", 15, 5, 863},
    {"LA09", 15, 5, 951},   {"LA10", 15, 5, 958},   {"LA11", 20, 5, 1222},  {"LA12", 20, 5, 1039},
    {"LA13", 20, 5, 1150},  {"LA14", 20, 5, 1292},  {"LA15", 20, 5, 1207},  {"LA16", 10, 10, 945},
    {"LA17", 10, 10, 784},  {"LA18", 10, 10, 848},  {"LA19", 10, 10, 842},  {"LA20", 10, 10, 902},
    {"LA21", 15, 10, 1046}, {"LA22", 15, 10, 927},  {"LA23", 15, 10, 1032}, {"LA24", 15, 10, 935},
    {"LA25", 15, 10, 977},  {"LA26", 20, 10, 1218}, {"LA27", 20, 10, 1235}, {"LA28", 20, 10, 1216},
    {"LA29", 20, 10, 1157}, {"LA30", 20, 10, 1355}, {"LA31", 30, 10, 1784}, {"LA32", 30, 10, 1850},
    {"LA33", 30, 10, 1719}, {"LA34", 30, 10, 1721}, {"LA35", 30, 10, 1888}, {"LA36", 15, 15, 1268},
    {"LA37", 15, 15, 1397}, {"LA38", 15, 15, 1196}, {"LA39", 15, 15, 1233}, {"LA40", 15, 15, 1222},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::span<const BksRecord> bks_table() noexcept { return kLawrence; }

std::optional<Time> find_bks(std::string_view name) noexcept {
  const auto it = std::find_if(kLawrence.begin(), kLawrence.end(),
                               [&](const BksRecord& r) { return iequals(r.name, name); });
  if (it == kLawrence.end()) return std::nullopt;
  return it->bks;
}

Time lookup_bks(std::string_view name) {
  if (auto bks = find_bks(name)) return *bks;
  throw LookupError(fmt::format("no best-known solution recorded for instance '{}'", name));
}

}  // namespace eas
