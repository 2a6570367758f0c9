#pragma once

#include <compare>
#include <string>
#include <variant>
#include <vector>

#include "bigsos/term.hpp"

namespace bigsos {

/// A transition label: a natural number or a symbol. Naturals order before
/// symbols.
class Label {
 public:
  Label() : v_(Nat{0}) {}
  Label(Nat n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Label(std::string sym) : v_(std::move(sym)) {}

  bool is_nat() const { return std::holds_alternative<Nat>(v_); }
  Nat nat() const { return std::get<Nat>(v_); }
  const std::string& symbol() const { return std::get<std::string>(v_); }

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;

 private:
  std::variant<Nat, std::string> v_;
};

std::string to_string(const Label& l);

/// `nat` (every natural is a label) or a finite list of labels.
struct LabelSet {
  bool naturals = false;
  std::vector<Label> finite;

  bool contains(const Label& l) const;
  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

}  // namespace bigsos
