#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace expq {

struct VariableInfo {
  std::uint32_t id;
  std::string name;
  std::size_t nameHash;
};

// Interned identifier. Ordering follows interning order; hashing follows the
// name so that hashes are stable across processes.
class Variable {
 public:
  Variable() = default;

  static Variable intern(std::string_view name);
  // A new variable whose name starts with `prefix` and has never been interned.
  static Variable fresh(std::string_view prefix);
  // Looks up an existing name without interning it.
  static bool exists(std::string_view name);

  std::uint32_t id() const { return info_->id; }
  const std::string& name() const { return info_->name; }
  std::size_t hash() const { return info_->nameHash; }
  bool valid() const { return info_ != nullptr; }

  friend bool operator==(Variable a, Variable b) { return a.info_ == b.info_; }
  friend std::strong_ordering operator<=>(Variable a, Variable b) {
    return a.info_->id <=> b.info_->id;
  }

 private:
  explicit Variable(const VariableInfo* info) : info_(info) {}
  const VariableInfo* info_ = nullptr;
};

}  // namespace expq

template <>
struct std::hash<expq::Variable> {
  std::size_t operator()(expq::Variable v) const noexcept { return v.hash(); }
};
