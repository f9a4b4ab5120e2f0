#include "quadnet/net.hpp"

#include "quadnet/error.hpp"

namespace quadnet {

QuadricNet::QuadricNet(std::array<Polynomial, 3> quadrics, std::string name)
    : q_(std::move(quadrics)), name_(std::move(name)), f_(q_[0].vars(), q_[0].field()) {
  const VarTablePtr& vars = q_[0].vars();
  if (vars->mu_count() != 3) throw DomainError("a quadric net needs exactly three mu-variables");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!same_table(q_[i].vars(), vars) || q_[i].field() != q_[0].field())
      throw MismatchError("quadrics of a net must share one ring");
    if (!q_[i].bidegree_of().is(Bidegree{0, 2}))
      throw DomainError("Q" + std::to_string(i) + " is not a quadratic form in the x-block");
    f_ += Polynomial::variable(vars, q_[i].field(), i) * q_[i];
  }
}

QuadricNet QuadricNet::reduce_mod(std::uint64_t p) const {
  return QuadricNet({q_[0].reduce_mod(p), q_[1].reduce_mod(p), q_[2].reduce_mod(p)}, name_);
}

}  // namespace quadnet
