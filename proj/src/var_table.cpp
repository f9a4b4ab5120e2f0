#include "quadnet/var_table.hpp"

#include <unordered_set>

#include "quadnet/error.hpp"

namespace quadnet {

VarTable::VarTable(std::vector<std::string> mu_vars, std::vector<std::string> x_vars)
    : mu_count_(mu_vars.size()) {
  names_ = std::move(mu_vars);
  names_.insert(names_.end(), std::make_move_iterator(x_vars.begin()),
                std::make_move_iterator(x_vars.end()));
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw DomainError("empty variable name");
    if (!seen.insert(n).second) throw DomainError("duplicate variable name '" + n + "'");
  }
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t VarTable::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw DomainError("unknown variable '" + std::string(name) + "'");
}

}  // namespace quadnet
