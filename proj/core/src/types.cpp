#include "sact/types.hpp"

namespace sact {

namespace {

constexpr std::array<std::string_view, kNumSaClasses> kNames = {
    "Ques", "Req", "Dir", "Thrt", "Quot", "Declar", "Narrv",
};

constexpr std::array<std::string_view, kNumSaClasses> kColumns = {
    "SA-Ques", "SA-Req", "SA-Dir", "SA-Thre", "SA-Quot", "SA-Dec", "SA-Narrtv",
};

}  // namespace

std::string_view to_string(SaClass c) { return kNames[index_of(c)]; }

std::string_view significance_column(SaClass c) { return kColumns[index_of(c)]; }

std::optional<SaClass> parse_sa_class(std::string_view name) {
  for (SaClass c : kAllSaClasses) {
    if (kNames[index_of(c)] == name) return c;
  }
  return std::nullopt;
}

}  // namespace sact
