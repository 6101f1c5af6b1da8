#ifndef NEOBURST_HIE_GRADE_HPP_
#define NEOBURST_HIE_GRADE_HPP_

#include <compare>
#include <string>

#include "neoburst/error.hpp"

namespace neoburst {

// EEG grade of hypoxic-ischemic encephalopathy: 1 normal/mild, 2 moderate,
// 3 major, 4 inactive/severe.
class HieGrade {
 public:
  static constexpr int kCount = 4;

  constexpr HieGrade() = default;
  explicit HieGrade(int value) : value_(value) {
    if (value < 1 || value > kCount) {
      throw Error("HIE grade must be 1-4, got " + std::to_string(value));
    }
  }

  constexpr int value() const { return value_; }
  constexpr int index() const { return value_ - 1; }

  friend constexpr auto operator<=>(HieGrade, HieGrade) = default;

 private:
  int value_ = 1;
};

}  // namespace neoburst

#endif  // NEOBURST_HIE_GRADE_HPP_
