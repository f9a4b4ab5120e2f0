#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quadnet {

/// Ordered variable names split into a mu-block (net parameters) and an
/// x-block (projective coordinates). Global index i < mu_count() is a
/// mu-variable; the rest follow in x-block order.
class VarTable {
 public:
  VarTable(std::vector<std::string> mu_vars, std::vector<std::string> x_vars);

  std::size_t size() const { return names_.size(); }
  std::size_t mu_count() const { return mu_count_; }
  std::size_t x_count() const { return names_.size() - mu_count_; }
  bool is_mu(std::size_t index) const { return index < mu_count_; }

  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws DomainError for unknown names.
  std::size_t index(std::string_view name) const;

  bool operator==(const VarTable& other) const {
    return mu_count_ == other.mu_count_ && names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::size_t mu_count_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline VarTablePtr make_var_table(std::vector<std::string> mu, std::vector<std::string> x) {
  return std::make_shared<const VarTable>(std::move(mu), std::move(x));
}

/// True when both pointers denote the same table (by identity or by content).
inline bool same_table(const VarTablePtr& a, const VarTablePtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace quadnet
