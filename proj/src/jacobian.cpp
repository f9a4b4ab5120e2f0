#include "quadnet/jacobian.hpp"

#include <algorithm>
#include <map>

#include "quadnet/error.hpp"

namespace quadnet {

JacobianIdeal jacobian_generators(const QuadricNet& net) {
  JacobianIdeal ideal;
  const auto& vars = net.vars();
  for (std::size_t i = 0; i < vars->size(); ++i) {
    ideal.generators.push_back(net.F().partial(i));
    ideal.bidegrees.push_back(vars->is_mu(i) ? Bidegree{0, 2} : Bidegree{1, 1});
  }
  return ideal;
}

namespace {

Field piece_field(std::uint64_t prime) { return prime == 0 ? Field::rationals() : Field::prime(prime); }

void check_bidegree(const Polynomial& f, Bidegree d, const char* what) {
  if (!f.bidegree_of().is(d))
    throw DomainError(std::string(what) + " must have bidegree (" + std::to_string(d.a) + "," + std::to_string(d.b) + ")");
}

}  // namespace

GradedPiece::GradedPiece(const QuadricNet& net, int a, int b, PieceOptions options)
    : degree_{a, b}, options_(options), vars_(net.vars()) {
  if (a < 0 || b < 0) throw DomainError("graded piece needs nonnegative bidegree");
  const Field field = piece_field(options.prime);
  ambient_ = monomial_basis(a, b, *vars_);
  if (options.order == ColumnOrder::AscendingDegrevlex) std::reverse(ambient_.begin(), ambient_.end());
  for (std::size_t c = 0; c < ambient_.size(); ++c) column_[ambient_[c]] = static_cast<std::uint32_t>(c);

  if (options.prime == 0)
    echelon_ = std::make_shared<Echelon>(std::in_place_type<RationalEchelon>, ambient_.size());
  else
    echelon_ = std::make_shared<Echelon>(std::in_place_type<ModularEchelon>, options.prime, ambient_.size());

  const JacobianIdeal ideal = jacobian_generators(net);
  for (std::size_t gi = 0; gi < ideal.generators.size(); ++gi) {
    const Bidegree gd = ideal.bidegrees[gi];
    if (gd.a > a || gd.b > b) continue;
    const Polynomial& g = ideal.generators[gi];
    for (const Monomial& m : monomial_basis(a - gd.a, b - gd.b, *vars_)) {
      ++span_rows_;
      if (auto* e = std::get_if<ModularEchelon>(echelon_.get())) {
        ModularEchelon::SparseRow row;
        for (const auto& [gm, c] : g.terms())
          row.emplace_back(column_.at(monomial_product(m, gm)), field.residue(c));
        e->add_row(row);
      } else {
        RationalEchelon::SparseRow row;
        for (const auto& [gm, c] : g.terms()) row.emplace_back(column_.at(monomial_product(m, gm)), c);
        std::get<RationalEchelon>(*echelon_).add_row(row);
      }
    }
  }

  quotient_columns_ = std::visit([](const auto& e) { return e.free_columns(); }, *echelon_);
  for (std::uint32_t c : quotient_columns_) quotient_basis_.push_back(ambient_[c]);
}

std::size_t GradedPiece::rank() const {
  return std::visit([](const auto& e) { return e.rank(); }, *echelon_);
}

std::vector<mpq_class> GradedPiece::reduce(const Polynomial& f) const {
  if (!same_table(f.vars(), vars_)) throw MismatchError("polynomial over a different variable table");
  check_bidegree(f, degree_, "reduced polynomial");
  const Field field = piece_field(options_.prime);
  std::vector<mpq_class> out;
  out.reserve(quotient_columns_.size());
  if (const auto* e = std::get_if<ModularEchelon>(echelon_.get())) {
    ModularEchelon::SparseRow row;
    for (const auto& [m, c] : f.terms()) row.emplace_back(column_.at(m), field.residue(c));
    const auto r = e->reduce(row);
    for (std::uint32_t c : quotient_columns_) out.emplace_back(mpz_class(std::to_string(r[c])));
  } else {
    RationalEchelon::SparseRow row;
    for (const auto& [m, c] : f.terms()) row.emplace_back(column_.at(m), c);
    const auto r = std::get<RationalEchelon>(*echelon_).reduce(row);
    for (std::uint32_t c : quotient_columns_) out.push_back(r[c]);
  }
  return out;
}

bool verify_basis(const QuadricNet& net, const std::vector<Polynomial>& candidates, int a, int b,
                  PieceOptions options) {
  for (const auto& c : candidates) check_bidegree(c, Bidegree{a, b}, "basis candidate");
  return verify_basis(GradedPiece(net, a, b, options), candidates);
}

bool verify_basis(const GradedPiece& piece, const std::vector<Polynomial>& candidates) {
  for (const auto& c : candidates) check_bidegree(c, piece.degree(), "basis candidate");
  if (candidates.size() != piece.dimension()) return false;
  if (candidates.empty()) return true;
  ExactMatrix m = ExactMatrix::over(piece_field(piece.prime()), candidates.size(), piece.dimension());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto coords = piece.reduce(candidates[i]);
    for (std::size_t j = 0; j < coords.size(); ++j)
      if (coords[j] != 0) m.set(i, j, coords[j]);
  }
  return rank(m, RankOptions{true}).rank == candidates.size();
}

ExactMatrix multiplication_map(const GradedPiece& source, const GradedPiece& target, const Polynomial& gamma) {
  check_bidegree(gamma, Bidegree{target.degree().a - source.degree().a, target.degree().b - source.degree().b},
                 "gamma");
  if (source.prime() != target.prime()) throw MismatchError("pieces computed over different fields");
  const Field field = piece_field(target.prime());
  const Field qq = Field::rationals();
  ExactMatrix m = ExactMatrix::over(field, target.dimension(), source.dimension());
  for (std::size_t j = 0; j < source.quotient_basis().size(); ++j) {
    Polynomial v = Polynomial::term(gamma.vars(), qq, source.quotient_basis()[j], 1);
    const auto coords = target.reduce(gamma * v);
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0) m.set(i, j, coords[i]);
  }
  return m;
}

ExactMatrix multiplication_map(const QuadricNet& net, const Polynomial& gamma, PieceOptions options) {
  check_bidegree(gamma, Bidegree{2, 2}, "gamma");
  GradedPiece source(net, 1, 2, options);
  GradedPiece target(net, 3, 4, options);
  return multiplication_map(source, target, gamma);
}

PeriodResult period_surjective(const QuadricNet& net, const Polynomial& gamma, PieceOptions options) {
  check_bidegree(gamma, Bidegree{2, 2}, "gamma");
  GradedPiece source(net, 1, 2, options);
  GradedPiece target(net, 3, 4, options);
  ExactMatrix m = multiplication_map(source, target, gamma);
  PeriodResult r;
  r.prime = options.prime;
  r.source_dimension = source.dimension();
  r.target_dimension = target.dimension();
  r.rank = m.rows() == 0 || m.cols() == 0 ? 0 : rank(m, RankOptions{true}).rank;
  r.surjective = r.rank == r.target_dimension;
  return r;
}

HodgeReport hodge_check(const QuadricNet& net, PieceOptions options) {
  HodgeReport r;
  r.prime = options.prime;
  r.dims[0] = 0;  // R_(0,-2): negative x-degree
  r.dims[1] = GradedPiece(net, 1, 0, options).dimension();
  r.dims[2] = GradedPiece(net, 2, 2, options).dimension();
  r.dims[3] = GradedPiece(net, 3, 4, options).dimension();
  r.pass = r.dims == r.expected;
  return r;
}

namespace {

std::vector<std::uint64_t> lifting_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 65521; out.size() < count && q > 3; q -= 2) {
    bool prime = true;
    for (std::uint64_t f = 3; f * f <= q && prime; f += 2) prime = q % f != 0;
    if (prime) out.push_back(q);
  }
  return out;
}

}  // namespace

DimensionCertificate certify_dimension(const QuadricNet& net, int a, int b, std::size_t max_primes) {
  if (!net.field().is_rational()) throw DomainError("certify_dimension needs a net over Q");
  if (a < 0 || b < 0) throw DomainError("graded piece needs nonnegative bidegree");
  const auto& vars = net.vars();
  const JacobianIdeal ideal = jacobian_generators(net);
  const std::vector<Monomial> ambient = monomial_basis(a, b, *vars);
  std::map<Monomial, std::uint32_t> column;
  for (std::size_t c = 0; c < ambient.size(); ++c) column[ambient[c]] = static_cast<std::uint32_t>(c);

  std::vector<IntegerRow> rows;
  for (std::size_t gi = 0; gi < ideal.generators.size(); ++gi) {
    const Bidegree gd = ideal.bidegrees[gi];
    if (gd.a > a || gd.b > b) continue;
    for (const Monomial& m : monomial_basis(a - gd.a, b - gd.b, *vars)) {
      IntegerRow row;
      for (const auto& [gm, c] : ideal.generators[gi].terms()) {
        if (c.get_den() != 1 || !c.get_num().fits_slong_p())
          throw DomainError("certify_dimension needs integral coefficients of machine size");
        row.emplace_back(column.at(monomial_product(m, gm)), c.get_num().get_si());
      }
      rows.push_back(std::move(row));
    }
  }

  DimensionCertificate cert;
  bool have = false;
  for (std::uint64_t p : lifting_primes(max_primes)) {
    const LiftedKernel k = lifted_kernel(rows, ambient.size(), p);
    cert.primes.push_back(p);
    if (have && k.free_columns.size() > cert.dimension) continue;  // unlucky prime
    have = true;
    cert.dimension = k.free_columns.size();
    cert.basis.clear();
    for (std::uint32_t c : k.free_columns) cert.basis.push_back(ambient[c]);
    if (k.verified) {
      cert.exact = true;
      return cert;
    }
  }
  return cert;
}

}  // namespace quadnet
