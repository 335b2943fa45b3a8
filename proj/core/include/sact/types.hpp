#ifndef SACT_TYPES_HPP_
#define SACT_TYPES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace sact {

// The seven speech-act classes, in canonical order. The order is used for
// feature naming, profile layout and report columns.
enum class SaClass {
  kQues = 0,
  kReq,
  kDir,
  kThrt,
  kQuot,
  kDeclar,
  kNarrv,
};

inline constexpr std::size_t kNumSaClasses = 7;

inline constexpr std::array<SaClass, kNumSaClasses> kAllSaClasses = {
    SaClass::kQues,  SaClass::kReq,    SaClass::kDir,   SaClass::kThrt,
    SaClass::kQuot,  SaClass::kDeclar, SaClass::kNarrv,
};

constexpr std::size_t index_of(SaClass c) { return static_cast<std::size_t>(c); }

// Abbreviation used in corpora and feature names: "Ques", "Req", ...
std::string_view to_string(SaClass c);

// Column heading used in significance tables: "SA-Ques", ..., "SA-Narrtv".
std::string_view significance_column(SaClass c);

std::optional<SaClass> parse_sa_class(std::string_view name);

// Label strings of the rumor task.
inline constexpr std::string_view kRumorLabel = "Rumor";
inline constexpr std::string_view kNonRumorLabel = "NonRumor";

}  // namespace sact

#endif  // SACT_TYPES_HPP_
