#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "deptype/error.hpp"

namespace deptype {

enum class DepressionClass : int {
  Bipolar = 0,
  Major = 1,
  Psychotic = 2,
  Atypical = 3,
  Postpartum = 4,
  NoDepression = 5,
};

inline constexpr int kNumClasses = 6;

inline constexpr std::array<DepressionClass, kNumClasses> kAllClasses = {
    DepressionClass::Bipolar,  DepressionClass::Major,
    DepressionClass::Psychotic, DepressionClass::Atypical,
    DepressionClass::Postpartum, DepressionClass::NoDepression};

inline constexpr std::array<DepressionClass, 5> kDepressionClasses = {
    DepressionClass::Bipolar, DepressionClass::Major,
    DepressionClass::Psychotic, DepressionClass::Atypical,
    DepressionClass::Postpartum};

// Serialized names are part of every file format; do not change them.
inline constexpr std::string_view class_name(DepressionClass c) {
  switch (c) {
    case DepressionClass::Bipolar: return "Bipolar";
    case DepressionClass::Major: return "Major";
    case DepressionClass::Psychotic: return "Psychotic";
    case DepressionClass::Atypical: return "Atypical";
    case DepressionClass::Postpartum: return "Postpartum";
    case DepressionClass::NoDepression: return "NoDepression";
  }
  return "?";
}

inline constexpr int class_index(DepressionClass c) { return static_cast<int>(c); }

inline DepressionClass class_from_index(int i) {
  if (i < 0 || i >= kNumClasses) throw DataError("class index out of range: " + std::to_string(i));
  return static_cast<DepressionClass>(i);
}

inline std::optional<DepressionClass> try_parse_class(std::string_view name) {
  for (auto c : kAllClasses)
    if (class_name(c) == name) return c;
  return std::nullopt;
}

inline DepressionClass parse_class(std::string_view name) {
  if (auto c = try_parse_class(name)) return *c;
  throw DataError("unknown class name: '" + std::string(name) + "'");
}

}  // namespace deptype
